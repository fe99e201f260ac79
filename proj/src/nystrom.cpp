#include "fracspec/nystrom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fracspec/asymptotics.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/kernels.hpp"
#include "fracspec/specfun.hpp"

namespace fracspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

double structural_c(double hurst) { return std::sin(kPi * hurst) * std::tgamma(2.0 * hurst + 1.0); }

Eigen::VectorXd random_unit(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = normal(rng);
    }
    return v / v.norm();
}

void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& V, Eigen::Index m) {
    for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd h = V.leftCols(m).transpose() * w;
        w.noalias() -= V.leftCols(m) * h;
    }
}

}  // namespace

NystromGrid::NystromGrid(int L_) : L(L_) {
    if (L < 8) {
        throw DomainError("NystromGrid needs L >= 8");
    }
}

DenseMatrix build_matrix(const ProcessSpec& spec, const NystromGrid& grid, Exec exec) {
    KernelTable table(spec, grid.L);
    const int n = grid.size();
    const double w = 1.0 / grid.L;
    DenseMatrix A(n, n);
    if (exec == Exec::Serial) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                A(i, j) = table(i, j) * w;
            }
        }
        return A;
    }
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_limit())
    for (int i = 0; i < n; ++i) {
        double* row = A.data() + static_cast<Eigen::Index>(i) * n;
        for (int j = 0; j < n; ++j) {
            row[j] = table(i, j) * w;
        }
    }
    return A;
}

std::vector<EigenPair> top_k_eigenpairs(const DenseMatrix& A, int k, double tol, Exec exec) {
    const Eigen::Index N = A.rows();
    if (A.cols() != N || N == 0) {
        throw DomainError("top_k_eigenpairs: matrix must be square and nonempty");
    }
    if (k < 1 || k > N) {
        throw DomainError("top_k_eigenpairs: need 1 <= k <= dim(A)");
    }
    if (!(tol > 0.0)) {
        throw DomainError("top_k_eigenpairs: tol must be positive");
    }

    const Eigen::Index m_cap = std::min<Eigen::Index>(N, 20 * static_cast<Eigen::Index>(k) + 200);
    Eigen::MatrixXd V(N, m_cap);
    std::vector<double> alpha;
    std::vector<double> beta;
    std::mt19937_64 rng(20240611);
    Eigen::VectorXd q = random_unit(N, rng);
    Eigen::VectorXd w(N);
    double scale = 0.0;
    int stalled = 0;

    for (Eigen::Index j = 0; j < m_cap; ++j) {
        V.col(j) = q;
        matvec(A, q, w, exec);
        double a = q.dot(w);
        alpha.push_back(a);
        w -= a * q;
        if (j > 0) {
            w -= beta.back() * V.col(j - 1);
        }
        orthogonalize(w, V, j + 1);
        double b = w.norm();
        const Eigen::Index m = j + 1;
        scale = std::max({scale, std::abs(a), b});
        const bool breakdown = b <= 1e-13 * scale;
        const bool last = m == m_cap;

        if (m >= k && (m % 5 == 0 || breakdown || last)) {
            Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                        : Eigen::VectorXd(0);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            const Eigen::VectorXd& theta = tri.eigenvalues();  // ascending
            const Eigen::MatrixXd& S = tri.eigenvectors();
            const double top = std::max(std::abs(theta[m - 1]), std::numeric_limits<double>::min());
            const double coupling = (breakdown && m == N) ? 0.0 : b;

            bool estimates_ok = true;
            for (int i = 0; i < k; ++i) {
                Eigen::Index idx = m - 1 - i;
                if (std::abs(coupling * S(m - 1, idx)) > 0.5 * tol * top) {
                    estimates_ok = false;
                    stalled = i + 1;
                    break;
                }
            }
            if (estimates_ok) {
                std::vector<EigenPair> out;
                out.reserve(k);
                bool verified = true;
                Eigen::VectorXd Av(N);
                for (int i = 0; i < k && verified; ++i) {
                    Eigen::Index idx = m - 1 - i;
                    Eigen::VectorXd v = V.leftCols(m) * S.col(idx);
                    v /= v.norm();
                    matvec(A, v, Av, exec);
                    double lam = v.dot(Av);
                    if ((Av - lam * v).norm() > tol * top) {
                        verified = false;
                        stalled = i + 1;
                        break;
                    }
                    out.push_back({lam, std::move(v)});
                }
                if (verified) {
                    std::stable_sort(out.begin(), out.end(),
                                     [](const EigenPair& x, const EigenPair& y) { return x.value > y.value; });
                    return out;
                }
            }
        }

        if (last) {
            break;
        }
        if (breakdown) {
            // Invariant subspace found; continue in its orthogonal complement.
            q = random_unit(N, rng);
            orthogonalize(q, V, m);
            q /= q.norm();
            beta.push_back(0.0);
        } else {
            q = w / b;
            beta.push_back(b);
        }
    }
    std::ostringstream msg;
    msg << "top_k_eigenpairs: eigenpair " << stalled << " did not reach tol " << tol << " within " << m_cap
        << " Lanczos steps";
    throw ConvergenceError(msg.str(), 0.0, tol);
}

Eigen::VectorXd vector_to_function(const Eigen::VectorXd& v, const NystromGrid& grid) {
    return std::sqrt(static_cast<double>(grid.L)) * v;
}

void normalize_sign(Eigen::VectorXd& v, int n, const NystromGrid& grid) {
    const double end = v[v.size() - 1] * std::sqrt(static_cast<double>(grid.L));
    double want = (n % 2 == 0) ? 1.0 : -1.0;
    if (std::abs(end) >= 1e-6) {
        if (end * want < 0.0) {
            v = -v;
        }
        return;
    }
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) {
        v = -v;
    }
}

double extract_nu_hat(double lambda_hat, double hurst, double beta, std::optional<double> nu_seed) {
    if (!(lambda_hat > 0.0)) {
        throw DomainError("extract_nu_hat: lambda_hat must be positive");
    }
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("extract_nu_hat: H must lie in (0,1)");
    }
    const double c = structural_c(hurst);
    if (beta == 0.0) {
        return std::pow(c / lambda_hat, 1.0 / (2.0 * hurst + 1.0));
    }
    const double b2 = beta * beta;
    auto g = [c, hurst, b2](double nu) { return c * std::pow(nu, 1.0 - 2.0 * hurst) / (nu * nu + b2); };
    auto f = [&](double nu) { return g(nu) - lambda_hat; };

    double lo;
    if (hurst < 0.5) {
        lo = std::abs(beta) * std::sqrt((1.0 - 2.0 * hurst) / (1.0 + 2.0 * hurst));
        if (lambda_hat > g(lo)) {
            throw DomainError("extract_nu_hat: lambda_hat exceeds the maximum of the structural function");
        }
    } else {
        lo = 1.0;
        while (lambda_hat > g(lo)) {
            lo *= 0.5;
            if (lo < 1e-12) {
                throw DomainError("extract_nu_hat: lambda_hat exceeds the maximum of the structural function");
            }
        }
    }

    if (nu_seed && *nu_seed > 0.0) {
        double a = std::max({lo, 1.0, 0.5 * *nu_seed});
        double b = 2.0 * *nu_seed;
        if (a < b && f(a) * f(b) < 0.0) {
            return find_root(f, {a, b, 1e-15 * b});
        }
    }
    double hi = std::max(2.0 * lo, 2.0);
    while (f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            throw DomainError("extract_nu_hat: no root found");
        }
    }
    if (f(lo) == 0.0) {
        return lo;
    }
    return find_root(f, {lo, hi, 1e-15 * hi});
}

double extract_nu_hat(const ProcessSpec& spec, double lambda_hat, std::optional<double> nu_seed) {
    spec.validate();
    if (spec.kind == Kind::IFBM) {
        if (!(lambda_hat > 0.0)) {
            throw DomainError("extract_nu_hat: lambda_hat must be positive");
        }
        return std::pow(structural_c(spec.hurst) / lambda_hat, 1.0 / (2.0 * spec.hurst + 3.0));
    }
    return extract_nu_hat(lambda_hat, spec.hurst, spec.drift, nu_seed);
}

std::vector<SpectralEstimate> solve(const ProcessSpec& spec, const NystromGrid& grid, int k, double tol, Exec exec) {
    spec.validate();
    DenseMatrix A = build_matrix(spec, grid, exec);
    std::vector<EigenPair> pairs = top_k_eigenpairs(A, k, tol, exec);
    std::vector<SpectralEstimate> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        int n = static_cast<int>(i) + 1;
        SpectralEstimate est{n, pairs[i].value, std::nullopt, std::move(pairs[i].vector)};
        normalize_sign(est.vector, n, grid);
        if (est.lambda_hat > 0.0) {
            try {
                est.nu_hat = extract_nu_hat(spec, est.lambda_hat, nu_asym(spec, n));
            } catch (const DomainError&) {
            }
        }
        out.push_back(std::move(est));
    }
    return out;
}

std::vector<ComparisonRow> compare(const ProcessSpec& spec, const std::vector<SpectralEstimate>& estimates) {
    std::vector<ComparisonRow> rows;
    rows.reserve(estimates.size());
    for (const SpectralEstimate& e : estimates) {
        if (!e.nu_hat) {
            std::ostringstream msg;
            msg << "compare: nu_hat unavailable for n=" << e.n << " (lambda_hat=" << e.lambda_hat << ")";
            throw DomainError(msg.str());
        }
        double nu_t = nu_asym(spec, e.n);
        double lam_t = lambda_asym(spec, e.n);
        rows.push_back({e.n, e.lambda_hat, *e.nu_hat, lam_t, nu_t, std::abs(e.lambda_hat / lam_t - 1.0),
                        std::abs(*e.nu_hat / nu_t - 1.0)});
    }
    return rows;
}

std::vector<ComparisonRow> compare(const ProcessSpec& spec, int L, int n_max) {
    return compare(spec, solve(spec, NystromGrid(L), n_max));
}

}  // namespace fracspec
