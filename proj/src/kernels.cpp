#include "fracspec/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "fracspec/errors.hpp"
#include "fracspec/specfun.hpp"

namespace fracspec {

namespace {

void check_unit_square(double s, double t) {
    if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0)) {
        throw DomainError("kernel arguments must lie in [0,1]^2");
    }
}

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("Hurst index H must lie in (0,1)");
    }
}

double ou_classical(double lo, double hi, double beta) {
    return std::exp(beta * (lo + hi)) * (-std::expm1(-2.0 * beta * lo)) / (2.0 * beta);
}

double fou_closed_point(double lo, double hi, double hurst, double beta) {
    double alpha = 2.0 - 2.0 * hurst;
    double c = (1.0 - alpha / 2.0) * (1.0 - alpha) / (2.0 * beta);
    double d = hi - lo;
    auto pp = [&](double x) { return phi_incgamma(x, alpha, beta); };
    auto pm = [&](double x) { return phi_incgamma(x, alpha, -beta); };
    return detail::fou_closed(c, std::exp(beta * (lo + hi)), std::exp(-beta * d), std::exp(beta * d), pp(lo), pp(hi),
                              pp(d), pm(lo), pm(hi), pm(d));
}

double fou_reduced_point(double lo, double hi, double hurst, double beta) {
    double p = 2.0 * hurst;
    double d = hi - lo;
    auto big_p = [&](double x) { return power_exp_integral(x, p, beta); };
    auto big_q = [&](double x) { return power_exp_integral(x, p, -beta); };
    detail::FouReducedArgs a{beta,
                             cov_fbm(lo, hi, hurst),
                             std::pow(lo, p), std::pow(hi, p),
                             std::expm1(beta * lo) / beta, std::expm1(beta * hi) / beta,
                             std::exp(beta * lo), std::exp(beta * hi), std::exp(beta * (lo + hi)),
                             std::exp(beta * d), std::exp(-beta * d),
                             std::exp(-2.0 * beta * lo), std::exp(-2.0 * beta * hi),
                             big_p(lo), big_p(hi), big_p(d),
                             big_q(lo), big_q(hi), big_q(d)};
    return detail::fou_reduced(a);
}

}  // namespace

double cov_fbm(double s, double t, double hurst) {
    check_unit_square(s, t);
    check_hurst(hurst);
    double p = 2.0 * hurst;
    return 0.5 * (std::pow(s, p) + std::pow(t, p) - std::pow(std::abs(s - t), p));
}

double cov_ifbm(double s, double t, double hurst) {
    check_unit_square(s, t);
    check_hurst(hurst);
    double p = 2.0 * hurst;
    double a = (t * std::pow(s, p + 1.0) + s * std::pow(t, p + 1.0)) / (2.0 * (p + 1.0));
    double b = (std::pow(s, p + 2.0) + std::pow(t, p + 2.0) - std::pow(std::abs(t - s), p + 2.0)) /
               (2.0 * (p + 1.0) * (p + 2.0));
    return a - b;
}

double cov_fou(double s, double t, double hurst, double beta) {
    check_unit_square(s, t);
    check_hurst(hurst);
    if (!std::isfinite(beta)) {
        throw DomainError("drift beta must be finite");
    }
    if (beta == 0.0) {
        return cov_fbm(s, t, hurst);
    }
    double lo = std::min(s, t);
    double hi = std::max(s, t);
    if (hurst == 0.5) {
        return ou_classical(lo, hi, beta);
    }
    if (hurst > 0.5) {
        return fou_closed_point(lo, hi, hurst, beta);
    }
    return fou_reduced_point(lo, hi, hurst, beta);
}

double cov_fou_ibp_quadrature(double s, double t, double hurst, double beta) {
    check_unit_square(s, t);
    check_hurst(hurst);
    QuadratureSpec inner{1e-14, 1e-12, 400};
    QuadratureSpec outer{1e-13, 1e-11, 400};
    auto r = [hurst](double u, double v) {
        double p = 2.0 * hurst;
        return 0.5 * (std::pow(u, p) + std::pow(v, p) - std::pow(std::abs(u - v), p));
    };
    // int_0^upper f with a split at the kink location when it lies inside.
    auto split = [](const RealFn& f, double upper, double kink, const QuadratureSpec& q) {
        if (kink > 0.0 && kink < upper) {
            return integrate_finite(f, 0.0, kink, q) + integrate_finite(f, kink, upper, q);
        }
        return integrate_finite(f, 0.0, upper, q);
    };
    double i1 = split([&](double v) { return std::exp(beta * (t - v)) * r(s, v); }, t, s, inner);
    double i2 = split([&](double u) { return std::exp(beta * (s - u)) * r(u, t); }, s, t, inner);
    auto row = [&](double v) {
        double in = split([&](double u) { return std::exp(beta * (s - u)) * r(u, v); }, s, v, inner);
        return std::exp(beta * (t - v)) * in;
    };
    double i3 = split(row, t, s, outer);
    return r(s, t) + beta * i1 + beta * i2 + beta * beta * i3;
}

double kernel(const ProcessSpec& spec, double s, double t) {
    switch (spec.kind) {
    case Kind::FBM:
        return cov_fbm(s, t, spec.hurst);
    case Kind::FOU:
        return cov_fou(s, t, spec.hurst, spec.drift);
    case Kind::IFBM:
        return cov_ifbm(s, t, spec.hurst);
    }
    return 0.0;
}

double check_scaling(const ProcessSpec& spec, double T, int grid_size) {
    spec.validate();
    if (spec.kind == Kind::FBM) {
        throw DomainError("check_scaling applies to fou and ifbm");
    }
    if (!(T > 0.0) || grid_size < 2) {
        throw DomainError("check_scaling needs T > 0 and grid_size >= 2");
    }
    double h = std::min(1.0, 1.0 / T);
    double worst = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        for (int j = 0; j < grid_size; ++j) {
            double s = h * i / (grid_size - 1);
            double t = h * j / (grid_size - 1);
            double sT = std::min(1.0, s * T);
            double tT = std::min(1.0, t * T);
            double v;
            if (spec.kind == Kind::FOU) {
                v = cov_fou(sT, tT, spec.hurst, spec.drift) -
                    std::pow(T, 2.0 * spec.hurst) * cov_fou(s, t, spec.hurst, spec.drift * T);
            } else {
                v = cov_ifbm(sT, tT, spec.hurst) - std::pow(T, 2.0 * spec.hurst + 2.0) * cov_ifbm(s, t, spec.hurst);
            }
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

KernelTable::KernelTable(const ProcessSpec& spec, int L) : spec_(spec), L_(L) {
    spec.validate();
    if (L < 1) {
        throw DomainError("KernelTable needs L >= 1");
    }
    const double H = spec.hurst;
    const double p = 2.0 * H;
    const double beta = spec.drift;
    beta_ = beta;
    x_.resize(L + 1);
    for (int k = 0; k <= L; ++k) {
        x_[k] = static_cast<double>(k) / L;
    }
    x_[L] = 1.0;

    auto fill = [&](std::vector<double>& v, auto&& f) {
        v.resize(L + 1);
        for (int k = 0; k <= L; ++k) {
            v[k] = f(x_[k]);
        }
    };

    if (spec.kind == Kind::IFBM) {
        mode_ = Mode::Ifbm;
        fill(pow1_, [&](double x) { return std::pow(x, p + 1.0); });
        fill(pow2_, [&](double x) { return std::pow(x, p + 2.0); });
        c1_ = 1.0 / (2.0 * (p + 1.0));
        c2_ = 1.0 / (2.0 * (p + 1.0) * (p + 2.0));
        return;
    }
    if (spec.kind == Kind::FBM || beta == 0.0) {
        mode_ = Mode::Fbm;
        fill(pow_, [&](double x) { return std::pow(x, p); });
        return;
    }

    exp_.resize(4 * L + 1);
    for (int k = -2 * L; k <= 2 * L; ++k) {
        exp_[k + 2 * L] = std::exp(beta * static_cast<double>(k) / L);
    }
    if (H == 0.5) {
        mode_ = Mode::OuClassical;
        fill(em_, [&](double x) { return -std::expm1(-2.0 * beta * x) / (2.0 * beta); });
        return;
    }
    if (H > 0.5) {
        mode_ = Mode::FouClosed;
        double alpha = spec.alpha();
        c_ = (1.0 - alpha / 2.0) * (1.0 - alpha) / (2.0 * beta);
        fill(pp_, [&](double x) { return phi_incgamma(x, alpha, beta); });
        fill(pm_, [&](double x) { return phi_incgamma(x, alpha, -beta); });
        return;
    }
    mode_ = Mode::FouReduced;
    fill(pow_, [&](double x) { return std::pow(x, p); });
    fill(e0_, [&](double x) { return std::expm1(beta * x) / beta; });
    fill(pp_, [&](double x) { return power_exp_integral(x, p, beta); });
    fill(pm_, [&](double x) { return power_exp_integral(x, p, -beta); });
}

}  // namespace fracspec
