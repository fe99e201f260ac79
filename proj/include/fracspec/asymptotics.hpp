#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "fracspec/process.hpp"

namespace fracspec {

struct AsymEigenpair {
    int n;
    double nu;
    double lambda;
};

// Every H-dependent constant of the asymptotic formulas. Fields that do not apply
// to the current branch are 0 (A/B auxiliaries: has_aux == false).
struct ProcessConstants {
    Kind kind;
    double hurst;
    double beta;
    double alpha;              // 2 - 2H
    double lambda_prefactor;   // sin(pi H) Gamma(2H+1)
    double ell_H;
    double b_alpha;            // closed form of (1/pi) int theta_0 for fBm/fOU
    double d0, d2;             // H-parameterized b_0, b_2 entering Delta(H)
    double b0, b1, b2;         // branch constants: d0/0.5/d2 for H <= 1/2, negative family for H > 1/2
    double delta;              // Delta(H)
    double sigma1, sigma2;     // b0^2/2 + b1, b0^3/6 + b0 b1 + b2
    double phase_angle;        // (pi/2)(1 - alpha)/(5 - alpha)
    double c_exp, s_exp;       // cos/sin of phase_angle for iFBm H > 1/2; 1 and 0 otherwise
    bool has_aux;
    double A1, A2, B1, B2, A3, B3;
    double C_mean;             // iFBm only: int phi_n = nu_n^{-1} sqrt(2H+3) C_mean
    double C_tilde_printed;    // -(B2/A2) 2c/sqrt(A3^2+B3^2) as printed, H > 1/2 only
};

ProcessConstants constants_for(const ProcessSpec& spec);

double nu_asym(const ProcessSpec& spec, int n);
double lambda_asym(const ProcessSpec& spec, int n);
AsymEigenpair asym_pair(const ProcessSpec& spec, int n);

double theta0(const ProcessSpec& spec, double u);
// X_0(-u) = exp((1/pi) int_0^inf theta_0(s) / (s + u) ds).
double x0_at(const ProcessSpec& spec, double u);
// X_0(i), for checks against closed-form modulus and argument.
std::complex<double> x0_at_i(const ProcessSpec& spec);
double gamma0(const ProcessSpec& spec, double u);
double rho0(const ProcessSpec& spec, double u);

// Q0 normalization for iFBm H > 1/2: the printed factor 2c/sqrt(A3^2+B3^2),
// or the factor c A2/B2 that makes the mean constant equal -c.
enum class QNorm { Printed, Consistent };

struct QPolynomials {
    std::vector<double> q0;  // ascending coefficients
    std::vector<double> q1;
};

QPolynomials q_polynomials(double hurst, QNorm norm = QNorm::Consistent);

double eval_poly(const std::vector<double>& coeffs, double u);

// Exponential boundary layer of iFBm, H > 1/2, fitted per n:
// e^{-c nu x}(a0 cos(s nu x) + b0 sin(s nu x)) + e^{-c nu (1-x)}(a1 cos(s nu (1-x)) + b1 sin(s nu (1-x))).
struct ExpLayerFit {
    double a0 = 0.0, b0 = 0.0, a1 = 0.0, b1 = 0.0;

    double C0() const;
    double kappa0() const;
    double C1() const;
    double kappa1() const;
};

// rho_0 tabulated on fixed panels so that layer integrals are dot products.
class BoundaryLayerDensity {
public:
    explicit BoundaryLayerDensity(const ProcessSpec& spec);

    const ProcessSpec& spec() const { return spec_; }
    bool vanishes() const { return vanishes_; }

    // int_0^inf rho_0(u) poly(u) e^{-rate u} du
    double integral(const std::vector<double>& poly, double rate) const;

    const std::vector<double>& nodes() const { return u_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& values() const { return rho_; }

private:
    ProcessSpec spec_;
    bool vanishes_;
    std::vector<double> u_;
    std::vector<double> w_;
    std::vector<double> rho_;
};

// Eigenfunction approximation for one process; reuse across n and x.
class EigenfunctionApprox {
public:
    explicit EigenfunctionApprox(const ProcessSpec& spec);

    const ProcessConstants& constants() const { return k_; }
    double oscillatory(int n, double x) const;
    double polynomial_layer(int n, double x) const;
    double exponential_layer(int n, double x, const ExpLayerFit& fit) const;
    double value(int n, double x, const ExpLayerFit* fit = nullptr) const;

    // Least-squares fit of the exponential layer to samples phi(x_i) of the
    // n-th eigenfunction. Zero fit unless iFBm with H > 1/2.
    ExpLayerFit fit_exp_layer(int n, const std::vector<double>& x, const std::vector<double>& phi) const;

private:
    ProcessSpec spec_;
    ProcessConstants k_;
    BoundaryLayerDensity density_;
    QPolynomials q_;
    std::vector<double> left_poly_;
    std::vector<double> right_poly_;
};

double eigfun_asym(const ProcessSpec& spec, int n, double x);
double endpoint_value(const ProcessSpec& spec, int n);
double mean_functional(const ProcessSpec& spec, int n);

// Delta via the H-parameterized b constants and via the A/B auxiliaries.
std::pair<double, double> delta_two_forms(double alpha);

}  // namespace fracspec
