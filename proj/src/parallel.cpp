#include "fracspec/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace fracspec {

int thread_limit() {
    if (const char* env = std::getenv("FRACSPEC_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n >= 1) {
                return n;
            }
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

void matvec(const DenseMatrix& A, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec) {
    const Eigen::Index n = A.rows();
    y.resize(n);
    if (exec == Exec::Serial) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = A.data() + i * A.cols();
            for (Eigen::Index j = 0; j < A.cols(); ++j) {
                acc += row[j] * x[j];
            }
            y[i] = acc;
        }
        return;
    }
#pragma omp parallel for schedule(static) num_threads(thread_limit())
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = A.row(i).dot(x.transpose());
    }
}

}  // namespace fracspec
