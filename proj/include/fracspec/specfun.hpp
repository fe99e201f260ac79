#pragma once

#include <functional>

namespace fracspec {

struct QuadratureSpec {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_subdivisions = 400;

    void validate() const;
};

struct RootBracket {
    double lo;
    double hi;
    double tol;
};

struct TailDecay {
    enum class Type { Power, Exponential };
    Type type = Type::Exponential;
    double p = 2.0;  // exponent of the u^{-p} decay, Power only

    static TailDecay power(double p) { return {Type::Power, p}; }
    static TailDecay exponential() { return {Type::Exponential, 0.0}; }
};

using RealFn = std::function<double(double)>;

double gamma_fn(double x);

// Phi(t, alpha, beta) = int_0^t e^{-beta x} x^{-alpha} dx for alpha in (0,1).
double phi_incgamma(double t, double alpha, double beta);

// int_0^t e^{-beta x} x^{p} dx for any p > -1. phi_incgamma is the case p = -alpha.
double power_exp_integral(double t, double p, double beta);

double integrate_finite(const RealFn& f, double a, double b, const QuadratureSpec& spec = {});

// int_0^inf f. Splits at knot, maps the tail to a finite interval according to decay.
double integrate_semiinf(const RealFn& f, const QuadratureSpec& spec, TailDecay decay, double knot = 1.0);

double find_root(const RealFn& f, const RootBracket& bracket);

}  // namespace fracspec
