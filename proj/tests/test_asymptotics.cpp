#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracspec/asymptotics.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/nystrom.hpp"

using namespace fracspec;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

// int_0^inf f by tanh-sinh, split at 1.
template <class F>
double oracle_semiinf(F f) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, 0.0, 1.0, 1e-13) + ts.integrate(f, 1.0, kInf, 1e-13);
}

struct NumericFn {
    std::vector<double> x;
    std::vector<double> phi;
};

NumericFn nystrom_fn(const ProcessSpec& sp, int L, int n) {
    NystromGrid grid(L);
    auto est = solve(sp, grid, n);
    Eigen::VectorXd f = vector_to_function(est[n - 1].vector, grid);
    NumericFn out;
    for (int i = 0; i < grid.size(); ++i) {
        out.x.push_back(grid.node(i));
        out.phi.push_back(f[i]);
    }
    return out;
}

double sup_error(const EigenfunctionApprox& ap, int n, const NumericFn& f, const ExpLayerFit* fit = nullptr) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.x.size(); i += 5) {
        worst = std::max(worst, std::abs(f.phi[i] - ap.value(n, f.x[i], fit)));
    }
    return worst;
}

double mean_of(const NumericFn& f) {
    double s = 0.0;
    for (double v : f.phi) {
        s += v;
    }
    return s / static_cast<double>(f.x.size() - 1);
}

}  // namespace

TEST_CASE("constants at H = 1/2") {
    for (const ProcessSpec& sp : {fbm(0.5), fou(0.5, -1.0)}) {
        ProcessConstants k = constants_for(sp);
        CHECK(k.ell_H == 0.0);
        CHECK(k.b_alpha == 0.0);
    }
    ProcessConstants k = constants_for(ifbm(0.5));
    CHECK(k.b0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k.b1 == 0.5);
    CHECK(k.b2 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(k.delta == 0.0);
    CHECK(k.C_mean == -1.0);
}

TEST_CASE("ell_H and the arcsin/arctan identity") {
    ProcessConstants k = constants_for(fou(0.75, -1.0));
    CHECK(k.ell_H == doctest::Approx(std::sin(kPi / 2 * 0.25 / 1.25) / std::sin(kPi / 2 / 1.25)).epsilon(1e-15));
    for (double H = 0.05; H < 1.0; H += 0.05) {
        double l = constants_for(fbm(H)).ell_H;
        CHECK(std::abs(std::asin(l / std::sqrt(1 + l * l)) - std::atan(l)) <= 1e-12);
    }
}

TEST_CASE("b_alpha closed form equals the theta_0 integral") {
    for (double H : {0.25, 0.6, 0.75, 0.9}) {
        ProcessSpec sp = fou(H, -1.0);
        double q = oracle_semiinf([&](double u) { return theta0(sp, u); }) / kPi;
        CHECK(std::abs(q - constants_for(sp).b_alpha) <= 1e-8);
    }
}

TEST_CASE("iFBm b constants equal the moments of theta_0") {
    for (double H : {0.25, 0.4, 0.6, 0.75}) {
        ProcessSpec sp = ifbm(H);
        ProcessConstants k = constants_for(sp);
        const double b[3] = {k.b0, k.b1, k.b2};
        for (int j = 0; j < 3; ++j) {
            double q = oracle_semiinf([&](double u) { return std::pow(u, j) * theta0(sp, u); }) / kPi;
            CHECK(std::abs(q - b[j]) <= 1e-7);
        }
        if (H < 0.5) {
            CHECK(k.b1 == 0.5);
        }
    }
}

TEST_CASE("constant ranges across H") {
    for (double H = 0.02; H < 1.0; H += 0.02) {
        for (const ProcessSpec& sp : {fbm(H), fou(H, 2.0), ifbm(H)}) {
            ProcessConstants k = constants_for(sp);
            CHECK(k.c_exp > 0.0);
            CHECK(k.c_exp <= 1.0);
            CHECK(k.s_exp >= 0.0);
            for (double v : {k.ell_H, k.b_alpha, k.b0, k.b1, k.b2, k.delta, k.sigma1, k.sigma2, k.C_mean}) {
                CHECK(std::isfinite(v));
            }
            CHECK(k.has_aux == (sp.kind == Kind::IFBM && H > 0.5));
        }
    }
}

TEST_CASE("nu and lambda: examples and monotonicity") {
    CHECK(nu_asym(fbm(0.5), 3) == doctest::Approx(2.5 * kPi).epsilon(1e-15));
    CHECK(nu_asym(ifbm(0.5), 2) == doctest::Approx(1.5 * kPi).epsilon(1e-15));
    CHECK(lambda_asym(fbm(0.5), 1) == doctest::Approx(0.405284735).epsilon(1e-9));
    CHECK(lambda_asym(fou(0.5, -1.0), 1) == doctest::Approx(1.0 / (kPi * kPi / 4 + 1)).epsilon(1e-14));
    for (const ProcessSpec& sp : {fbm(0.2), fou(0.75, -1.0), fou(0.3, 3.0), ifbm(0.3), ifbm(0.8)}) {
        for (int n = 1; n < 40; ++n) {
            CHECK(nu_asym(sp, n + 1) > nu_asym(sp, n));
            CHECK(lambda_asym(sp, n + 1) < lambda_asym(sp, n));
        }
        AsymEigenpair p = asym_pair(sp, 4);
        CHECK(p.nu == nu_asym(sp, 4));
        CHECK(p.lambda == lambda_asym(sp, 4));
    }
    CHECK_THROWS_AS(nu_asym(fbm(0.5), 0), DomainError);
    CHECK_THROWS_AS(lambda_asym(fbm(0.5), -1), DomainError);
}

TEST_CASE("branch consistency around H = 1/2") {
    for (int n = 1; n <= 5; ++n) {
        for (auto make : {+[](double H) { return fbm(H); }, +[](double H) { return fou(H, -1.0); },
                          +[](double H) { return ifbm(H); }}) {
            double nu0 = nu_asym(make(0.5), n);
            double lam0 = lambda_asym(make(0.5), n);
            for (double H : {0.499, 0.501}) {
                CHECK(std::abs(nu_asym(make(H), n) / nu0 - 1.0) < 0.01);
                CHECK(std::abs(lambda_asym(make(H), n) / lam0 - 1.0) < 0.01);
            }
            double prev = nu_asym(make(0.45), n);
            for (double H = 0.46; H <= 0.551; H += 0.01) {
                double v = nu_asym(make(H), n);
                CHECK(std::abs(v - prev) < 0.05);
                prev = v;
            }
        }
    }
}

TEST_CASE("theta_0 limits and branches") {
    CHECK(theta0(fou(0.75, -1.0), 1.0) == doctest::Approx(kPi / 8).epsilon(1e-14));
    CHECK(std::abs(theta0(fou(0.75, -1.0), 1e6)) < 1e-12);
    for (double H : {0.2, 0.4, 0.5}) {
        double a = 2 - 2 * H;
        CHECK(theta0(ifbm(H), 1e-8) == doctest::Approx((3 - a) * kPi / 2).epsilon(1e-10));
        double prev = theta0(ifbm(H), 1e-3);
        for (double u = 2e-3; u < 20.0; u *= 1.1) {
            double v = theta0(ifbm(H), u);
            CHECK(v <= prev);
            CHECK(prev - v <= kPi + 1e-12);
            prev = v;
        }
        CHECK(std::abs(theta0(ifbm(H), 1e6)) < 1e-6);
    }
    for (double H : {0.6, 0.9}) {
        double a = 2 - 2 * H;
        CHECK(theta0(ifbm(H), 1e-8) == doctest::Approx(-(1 + a) * kPi / 2).epsilon(1e-10));
        double prev = theta0(ifbm(H), 1e-3);
        for (double u = 2e-3; u < 20.0; u *= 1.1) {
            double v = theta0(ifbm(H), u);
            CHECK(v >= prev);
            CHECK(v < 0.0);
            prev = v;
        }
    }
    CHECK_THROWS_AS(theta0(fbm(0.3), 0.0), DomainError);
}

TEST_CASE("X_0 at i against the closed forms") {
    for (double H : {0.25, 0.4}) {
        double a = 2 - 2 * H;
        std::complex<double> x = x0_at_i(ifbm(H));
        CHECK(std::abs(std::arg(x) - (3 - a) * kPi / 8) <= 1e-6);
        CHECK(std::abs(std::abs(x) - std::sqrt((5 - a) / 2)) <= 1e-6);
    }
    for (double H : {0.6, 0.75, 0.9}) {
        double a = 2 - 2 * H;
        std::complex<double> x = x0_at_i(ifbm(H));
        CHECK(std::abs(std::arg(x) + (1 + a) * kPi / 8) <= 1e-6);
        double mod = std::sqrt((5 - a) / 8) / std::cos(kPi / 2 * (1 - a) / (5 - a));
        CHECK(std::abs(std::abs(x) - mod) <= 1e-6);
    }
    for (double H : {0.3, 0.75}) {
        double a = 2 - 2 * H;
        CHECK(std::abs(std::arg(x0_at_i(fou(H, -1.0))) - (1 - a) * kPi / 8) <= 1e-6);
    }
}

TEST_CASE("X_0(-u) against an independent quadrature and its limit") {
    for (const ProcessSpec& sp : {fou(0.75, -1.0), fbm(0.3), ifbm(0.25), ifbm(0.75)}) {
        for (double u : {1e-3, 0.5, 3.0}) {
            double ref = std::exp(oracle_semiinf([&](double s) { return theta0(sp, s) / (s + u); }) / kPi);
            CHECK(x0_at(sp, u) == doctest::Approx(ref).epsilon(1e-9));
        }
        CHECK(std::abs(x0_at(sp, 1e8) - 1.0) <= 1e-6);
    }
    CHECK(x0_at(fbm(0.5), 2.0) == 1.0);
}

TEST_CASE("gamma_0 and rho_0") {
    CHECK(gamma0(fou(0.75, -1.0), 1.0) == doctest::Approx(std::sqrt(2 + std::sqrt(2.0))).epsilon(1e-14));
    CHECK(rho0(fou(0.75, -1.0), 1.0) ==
          doctest::Approx(std::sin(kPi / 8) / std::sqrt(2 + std::sqrt(2.0)) * x0_at(fou(0.75, -1.0), 1.0)));
    for (double u : {0.01, 1.0, 10.0}) {
        CHECK(rho0(fou(0.5, -1.0), u) == 0.0);
        CHECK(rho0(ifbm(0.5), u) == 0.0);
    }
    // iFBm H > 1/2: sin theta_0 ~ u^{-(5-alpha)}, gamma_0 ~ u^2, times 1/u.
    double a = 0.5;
    double r1 = rho0(ifbm(0.75), 200.0) * std::pow(200.0, 8 - a);
    double r2 = rho0(ifbm(0.75), 2000.0) * std::pow(2000.0, 8 - a);
    CHECK(r1 == doctest::Approx(r2).epsilon(0.02));
    for (const ProcessSpec& sp : {fou(0.75, -1.0), fbm(0.2), ifbm(0.3), ifbm(0.8)}) {
        for (double u = 1e-4; u < 1e4; u *= 3.0) {
            CHECK(std::isfinite(rho0(sp, u)));
        }
    }
}

TEST_CASE("boundary-layer density integral against direct quadrature") {
    ProcessSpec sp = fou(0.75, -1.0);
    BoundaryLayerDensity d(sp);
    for (double rate : {0.0, 2.0, 30.0}) {
        double ref = oracle_semiinf([&](double u) { return rho0(sp, u) * (u - 0.5) * std::exp(-rate * u); });
        CHECK(d.integral({-0.5, 1.0}, rate) == doctest::Approx(ref).epsilon(1e-6));
    }
    CHECK(BoundaryLayerDensity(fbm(0.5)).vanishes());
    CHECK(BoundaryLayerDensity(fbm(0.5)).integral({1.0}, 1.0) == 0.0);
}

TEST_CASE("Q polynomials") {
    CHECK(q_polynomials(0.3).q1 == std::vector<double>{1.0});
    CHECK(q_polynomials(0.3).q0.size() == 3);
    for (double H : {0.6, 0.75, 0.9}) {
        ProcessConstants k = constants_for(ifbm(H));
        double c1 = std::cos(k.phase_angle);
        QPolynomials printed = q_polynomials(H, QNorm::Printed);
        CHECK(printed.q0.size() == 5);
        CHECK(printed.q1.size() == 3);
        CHECK(printed.q0[4] == doctest::Approx(2 * c1 / std::hypot(k.A3, k.B3)).epsilon(1e-14));
        CHECK(k.C_tilde_printed == doctest::Approx(-(k.B2 / k.A2) * printed.q0[4]).epsilon(1e-14));
        QPolynomials cons = q_polynomials(H, QNorm::Consistent);
        CHECK(-(k.B2 / k.A2) * cons.q0[4] == doctest::Approx(-c1).epsilon(1e-14));
    }
    CHECK_THROWS_AS(q_polynomials(0.5), DomainError);
    CHECK(eval_poly({1.0, 2.0, 3.0}, 2.0) == 17.0);
}

TEST_CASE("iFBm mean constant equals -cos(phase) below 1/2") {
    for (int i = 1; i <= 10; ++i) {
        ProcessConstants k = constants_for(ifbm(i < 10 ? 0.05 * i : 0.5 - 1e-12));
        CHECK(k.C_mean == doctest::Approx(-std::cos(k.phase_angle)).epsilon(1e-10));
    }
}

TEST_CASE("eigenfunction approximation: Brownian case, norm and interior decay") {
    for (const ProcessSpec& sp : {fbm(0.5), fou(0.5, -2.0)}) {
        for (int n : {1, 4}) {
            for (double x : {0.0, 0.3, 1.0}) {
                CHECK(eigfun_asym(sp, n, x) ==
                      doctest::Approx(-std::sqrt(2.0) * std::sin(nu_asym(sp, n) * x)).epsilon(1e-14));
            }
        }
    }
    auto norm_gap = [](const EigenfunctionApprox& ap, int n) {
        double s = 0.0;
        for (int i = 0; i < 2048; ++i) {
            double v = ap.value(n, (i + 0.5) / 2048.0);
            s += v * v;
        }
        return std::abs(s / 2048.0 - 1.0);
    };
    // Without the fitted exponential layer the iFBm H > 1/2 norm converges more slowly.
    EigenfunctionApprox high(ifbm(0.75));
    CHECK(norm_gap(high, 12) < norm_gap(high, 5));
    CHECK(norm_gap(high, 12) <= 0.03);
    for (const ProcessSpec& sp : {fou(0.75, -1.0), fbm(0.3), ifbm(0.3), ifbm(0.5), ifbm(0.75)}) {
        EigenfunctionApprox ap(sp);
        if (!ap.constants().has_aux) {
            CHECK(norm_gap(ap, 5) <= 0.03);
            CHECK(norm_gap(ap, 12) <= 0.03);
        }
        CHECK(std::abs(ap.value(60, 0.5) - ap.oscillatory(60, 0.5)) <= 1e-3);
    }
}

TEST_CASE("eigenfunction approximation against Nystrom for iFBm") {
    NumericFn lo = nystrom_fn(ifbm(0.25), 2000, 5);
    CHECK(sup_error(EigenfunctionApprox(ifbm(0.25)), 5, lo) <= 0.03);
    NumericFn half = nystrom_fn(ifbm(0.5), 2000, 5);
    CHECK(sup_error(EigenfunctionApprox(ifbm(0.5)), 5, half) <= 0.02);

    EigenfunctionApprox ap(ifbm(0.75));
    NumericFn f5 = nystrom_fn(ifbm(0.75), 2000, 5);
    NumericFn f8 = nystrom_fn(ifbm(0.75), 2000, 8);
    ExpLayerFit fit5 = ap.fit_exp_layer(5, f5.x, f5.phi);
    ExpLayerFit fit8 = ap.fit_exp_layer(8, f8.x, f8.phi);
    CHECK(sup_error(ap, 5, f5, &fit5) <= 0.03);
    CHECK(sup_error(ap, 8, f8, &fit8) <= 0.03);
    CHECK(sup_error(ap, 5, f5, &fit5) < sup_error(ap, 5, f5));
    // The layer amplitudes do not depend on n.
    CHECK(std::abs(fit5.C0() - fit8.C0()) <= 0.1 * fit5.C0());
    CHECK(std::abs(fit5.kappa0() - fit8.kappa0()) <= 0.1);
    ExpLayerFit none = EigenfunctionApprox(ifbm(0.25)).fit_exp_layer(5, lo.x, lo.phi);
    CHECK(none.C0() == 0.0);
}

TEST_CASE("endpoint values") {
    CHECK(endpoint_value(fou(0.75, -1.0), 4) == doctest::Approx(std::sqrt(2.5)));
    CHECK(endpoint_value(ifbm(0.25), 3) == doctest::Approx(-std::sqrt(3.5)));
    for (int n = 1; n < 5; ++n) {
        CHECK(endpoint_value(fbm(0.5), n) ==
              doctest::Approx(-std::sqrt(2.0) * std::sin(nu_asym(fbm(0.5), n))).epsilon(1e-14));
    }
}

TEST_CASE("mean functional") {
    CHECK(mean_functional(fbm(0.5), 1) == doctest::Approx(-std::sqrt(2.0) / (kPi / 2)).epsilon(1e-14));
    NumericFn f = nystrom_fn(fou(0.75, -1.0), 2000, 5);
    CHECK(mean_of(f) == doctest::Approx(mean_functional(fou(0.75, -1.0), 5)).epsilon(0.1));
    for (double H : {0.3, 0.5, 0.75}) {
        NumericFn g = nystrom_fn(ifbm(H), 2000, 6);
        CHECK(mean_of(g) == doctest::Approx(mean_functional(ifbm(H), 6)).epsilon(0.1));
    }
    CHECK(mean_functional(ifbm(0.5), 3) == doctest::Approx(-2.0 / nu_asym(ifbm(0.5), 3)).epsilon(1e-12));
}

TEST_CASE("delta two forms") {
    for (double a : {1.0 - 1e-3, 1.0 + 1e-3}) {
        auto [h, al] = delta_two_forms(a);
        CHECK(std::abs(h - al) <= 1e-8);
    }
    for (double a : {0.5, 1.5}) {
        auto [h, al] = delta_two_forms(a);
        CHECK(std::abs(h - al) <= 1e-10);
    }
    CHECK(delta_two_forms(0.5).first == doctest::Approx(constants_for(ifbm(0.75)).delta).epsilon(1e-14));
    CHECK_THROWS_AS(delta_two_forms(1.0), DomainError);
    CHECK_THROWS_AS(delta_two_forms(2.0), DomainError);
}
