#pragma once

#include <vector>

#include "fracspec/process.hpp"

namespace fracspec {

double cov_fbm(double s, double t, double hurst);
double cov_ifbm(double s, double t, double hurst);

// Closed form in Phi for H > 1/2, classical form at H = 1/2, reduced
// integration-by-parts form for H < 1/2. beta = 0 returns cov_fbm.
double cov_fou(double s, double t, double hurst, double beta);

// Integration-by-parts representation evaluated by nested adaptive quadrature.
// Slow; used as an independent oracle.
double cov_fou_ibp_quadrature(double s, double t, double hurst, double beta);

double kernel(const ProcessSpec& spec, double s, double t);

// Max |K(sT,tT) - T^{2H} K_{beta T}(s,t)| (FOU) or |K(sT,tT) - T^{2H+2} K(s,t)| (IFBM)
// over a grid_size x grid_size grid on [0, min(1, 1/T)]^2.
double check_scaling(const ProcessSpec& spec, double T, int grid_size);

namespace detail {

// fOU, H > 1/2, lo <= hi, d = hi - lo. c = c_alpha / (2 beta).
// pp_* = Phi(., alpha, beta), pm_* = Phi(., alpha, -beta).
inline double fou_closed(double c, double e_sum, double e_neg, double e_pos, double pp_lo, double pp_hi,
                         double pp_d, double pm_lo, double pm_hi, double pm_d) {
    return c * (e_sum * (pp_hi + pp_lo) - e_neg * (pm_hi - pm_d) - e_pos * (pp_d + pm_lo));
}

// Values needed by the reduced H < 1/2 form at one (lo, hi) pair.
struct FouReducedArgs {
    double beta;
    double r;                      // cov_fbm(lo, hi)
    double pow_lo, pow_hi;         // x^{2H}
    double e0_lo, e0_hi;           // expm1(beta x) / beta
    double e_lo, e_hi, e_sum;      // e^{beta lo}, e^{beta hi}, e^{beta (lo + hi)}
    double e_d, e_md;              // e^{beta d}, e^{-beta d}
    double e_m2lo, e_m2hi;         // e^{-2 beta lo}, e^{-2 beta hi}
    double p_lo, p_hi, p_d;        // int_0^x w^{2H} e^{-beta w} dw
    double q_lo, q_hi, q_d;        // int_0^x w^{2H} e^{+beta w} dw
};

inline double fou_reduced(const FouReducedArgs& a) {
    double g_lo = a.e_lo * a.p_lo;
    double g_hi = a.e_hi * a.p_hi;
    double i1_lo_hi = 0.5 * (a.pow_lo * a.e0_hi + g_hi - a.e_d * (a.q_lo + a.p_d));
    double i1_hi_lo = 0.5 * (a.pow_hi * a.e0_lo + g_lo - a.e_md * (a.q_hi - a.q_d));
    double m = (a.p_lo + a.p_hi - a.e_m2lo * (a.q_lo + a.p_d) - a.e_m2hi * (a.q_hi - a.q_d)) / (2.0 * a.beta);
    double i3 = 0.5 * (a.e0_hi * g_lo + g_hi * a.e0_lo - a.e_sum * m);
    return a.r + a.beta * (i1_lo_hi + i1_hi_lo) + a.beta * a.beta * i3;
}

}  // namespace detail

// Kernel values on the nodes i/L, i = 0..L, from 1-D tables built once.
// Lookups are O(1) arithmetic and symmetric bit-for-bit.
class KernelTable {
public:
    KernelTable(const ProcessSpec& spec, int L);

    int L() const { return L_; }
    const ProcessSpec& spec() const { return spec_; }

    double operator()(int i, int j) const {
        int lo = i < j ? i : j;
        int hi = i < j ? j : i;
        int d = hi - lo;
        switch (mode_) {
        case Mode::Fbm:
            return 0.5 * (pow_[lo] + pow_[hi] - pow_[d]);
        case Mode::Ifbm: {
            double s = x_[lo];
            double t = x_[hi];
            return (t * pow1_[lo] + s * pow1_[hi]) * c1_ - (pow2_[lo] + pow2_[hi] - pow2_[d]) * c2_;
        }
        case Mode::OuClassical:
            return ex(lo + hi) * em_[lo];
        case Mode::FouClosed:
            return detail::fou_closed(c_, ex(lo + hi), ex(-d), ex(d), pp_[lo], pp_[hi], pp_[d], pm_[lo], pm_[hi],
                                      pm_[d]);
        case Mode::FouReduced: {
            detail::FouReducedArgs a{beta_,
                                     0.5 * (pow_[lo] + pow_[hi] - pow_[d]),
                                     pow_[lo], pow_[hi],
                                     e0_[lo], e0_[hi],
                                     ex(lo), ex(hi), ex(lo + hi),
                                     ex(d), ex(-d),
                                     ex(-2 * lo), ex(-2 * hi),
                                     pp_[lo], pp_[hi], pp_[d],
                                     pm_[lo], pm_[hi], pm_[d]};
            return detail::fou_reduced(a);
        }
        }
        return 0.0;
    }

private:
    enum class Mode { Fbm, Ifbm, OuClassical, FouClosed, FouReduced };

    double ex(int k) const { return exp_[k + 2 * L_]; }

    ProcessSpec spec_;
    int L_;
    Mode mode_;
    double beta_ = 0.0;
    double c_ = 0.0;
    double c1_ = 0.0;
    double c2_ = 0.0;
    std::vector<double> x_;
    std::vector<double> pow_;   // x^{2H}
    std::vector<double> pow1_;  // x^{2H+1}
    std::vector<double> pow2_;  // x^{2H+2}
    std::vector<double> exp_;   // e^{beta k / L}, k = -2L..2L
    std::vector<double> em_;    // -expm1(-2 beta x) / (2 beta)
    std::vector<double> e0_;    // expm1(beta x) / beta
    std::vector<double> pp_;    // Phi(x, alpha, beta) or P(x)
    std::vector<double> pm_;    // Phi(x, alpha, -beta) or Q(x)
};

}  // namespace fracspec
