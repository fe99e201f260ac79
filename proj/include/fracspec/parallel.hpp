#pragma once

#include <Eigen/Dense>

namespace fracspec {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Serial keeps the reference loop; Parallel splits rows across OpenMP threads.
enum class Exec { Serial, Parallel };

// Thread cap: FRACSPEC_THREADS if set to an integer >= 1, else the OpenMP default.
int thread_limit();

// y = A x for a square row-major A.
void matvec(const DenseMatrix& A, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec = Exec::Parallel);

}  // namespace fracspec
