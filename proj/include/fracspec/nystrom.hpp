#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fracspec/parallel.hpp"
#include "fracspec/process.hpp"

namespace fracspec {

// L subintervals, nodes i/L for i = 0..L.
struct NystromGrid {
    int L;

    explicit NystromGrid(int L);
    int size() const { return L + 1; }
    double node(int i) const { return static_cast<double>(i) / L; }
};

struct EigenPair {
    double value;
    Eigen::VectorXd vector;
};

struct SpectralEstimate {
    int n;
    double lambda_hat;
    std::optional<double> nu_hat;
    Eigen::VectorXd vector;  // unit Euclidean norm, sign per endpoint convention
};

struct ComparisonRow {
    int n;
    double lambda_hat;
    double nu_hat;
    double lambda_tilde;
    double nu_tilde;
    double rel_err_lambda;  // |lambda_hat / lambda_tilde - 1|
    double rel_err_nu;      // |nu_hat / nu_tilde - 1|
};

// A[i][j] = K(i/L, j/L) / L.
DenseMatrix build_matrix(const ProcessSpec& spec, const NystromGrid& grid, Exec exec = Exec::Parallel);

// Top-k eigenpairs by Lanczos with full reorthogonalization. Each pair satisfies
// ||A v - lambda v|| <= tol * lambda_1. Values are returned in descending order.
std::vector<EigenPair> top_k_eigenpairs(const DenseMatrix& A, int k, double tol = 1e-10,
                                        Exec exec = Exec::Parallel);

// Scale a unit vector to samples of a unit L^2(0,1) function: sqrt(L) * v.
Eigen::VectorXd vector_to_function(const Eigen::VectorXd& v, const NystromGrid& grid);

// Flip v so that v(1) has sign (-1)^n; if |sqrt(L) v(1)| < 1e-6, make the
// largest-magnitude entry positive instead.
void normalize_sign(Eigen::VectorXd& v, int n, const NystromGrid& grid);

// Invert lambda = sin(pi H) Gamma(2H+1) nu^{1-2H} / (nu^2 + beta^2) on its decreasing branch.
// A seed nu_tilde brackets the root in [max(1, nu_tilde/2), 2 nu_tilde] when possible.
double extract_nu_hat(double lambda_hat, double hurst, double beta, std::optional<double> nu_seed = std::nullopt);

// Dispatch on kind: iFBm inverts lambda = sin(pi H) Gamma(2H+1) nu^{-2H-3}.
double extract_nu_hat(const ProcessSpec& spec, double lambda_hat, std::optional<double> nu_seed = std::nullopt);

std::vector<SpectralEstimate> solve(const ProcessSpec& spec, const NystromGrid& grid, int k, double tol = 1e-10,
                                    Exec exec = Exec::Parallel);

std::vector<ComparisonRow> compare(const ProcessSpec& spec, const std::vector<SpectralEstimate>& estimates);
std::vector<ComparisonRow> compare(const ProcessSpec& spec, int L, int n_max);

}  // namespace fracspec
