#include "fracspec/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "fracspec/errors.hpp"
#include "fracspec/specfun.hpp"

namespace fracspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_n(int n) {
    if (n < 1) {
        throw DomainError("eigen index n must be >= 1");
    }
}

double sign_n(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

bool is_ifbm(const ProcessSpec& spec) { return spec.kind == Kind::IFBM; }

// Power decay class of theta_0 at infinity.
double theta_decay(const ProcessSpec& spec) { return is_ifbm(spec) ? 5.0 - spec.alpha() : 3.0 - spec.alpha(); }

QuadratureSpec x0_quadrature() { return {1e-13, 1e-11, 2000}; }

double theta0_at_zero(const ProcessSpec& spec) {
    const double a = spec.alpha();
    if (!is_ifbm(spec)) {
        return (1.0 - a) * kPi / 2.0;
    }
    return spec.hurst <= 0.5 ? (3.0 - a) * kPi / 2.0 : -(1.0 + a) * kPi / 2.0;
}

}  // namespace

ProcessConstants constants_for(const ProcessSpec& spec) {
    spec.validate();
    const double H = spec.hurst;
    const double a = spec.alpha();
    ProcessConstants k{};
    k.kind = spec.kind;
    k.hurst = H;
    k.beta = spec.drift;
    k.alpha = a;
    k.lambda_prefactor = std::sin(kPi * H) * std::tgamma(2.0 * H + 1.0);
    k.ell_H = std::sin(kPi / 2.0 * (H - 0.5) / (H + 0.5)) / std::sin(kPi / 2.0 / (H + 0.5));
    k.b_alpha = std::sin(kPi / (3.0 - a) * (1.0 - a) / 2.0) / std::sin(kPi / (3.0 - a));

    k.d0 = std::sin(kPi / 2.0 * (H + 0.5) / (H + 1.5)) / std::sin(kPi / 2.0 / (H + 1.5));
    k.d2 = std::sin(1.5 * kPi * (H + 0.5) / (H + 1.5)) / std::sin(1.5 * kPi / (H + 1.5)) / 3.0;
    const double b1h = 0.5;
    k.delta = (k.d0 * k.d0 * k.d0 / 3.0 - k.d2) /
              (b1h - b1h * b1h + 0.5 * k.d0 * k.d0 + k.d2 * k.d0 - std::pow(k.d0, 4) / 12.0);

    if (H <= 0.5) {
        k.b0 = k.d0;
        k.b1 = 0.5;
        k.b2 = k.d2;
    } else {
        double b[3];
        for (int j = 0; j < 3; ++j) {
            b[j] = -1.0 / (j + 1) * std::sin((j + 1) * (1.0 + a) * kPi / (2.0 * (5.0 - a))) /
                   std::sin((j + 1) * kPi / (5.0 - a));
        }
        k.b0 = b[0];
        k.b1 = b[1];
        k.b2 = b[2];
    }
    k.sigma1 = k.b0 * k.b0 / 2.0 + k.b1;
    k.sigma2 = k.b0 * k.b0 * k.b0 / 6.0 + k.b0 * k.b1 + k.b2;

    k.phase_angle = kPi / 2.0 * (1.0 - a) / (5.0 - a);
    k.has_aux = is_ifbm(spec) && H > 0.5;
    k.c_exp = 1.0;
    k.s_exp = 0.0;
    if (k.has_aux) {
        double c[5], s[5];
        for (int j = 0; j < 5; ++j) {
            c[j] = std::cos(j * k.phase_angle);
            s[j] = std::sin(j * k.phase_angle);
        }
        k.c_exp = c[1];
        k.s_exp = s[1];
        k.A1 = k.sigma1 * c[1] + k.b0 * c[2] + c[3];
        k.B1 = k.sigma2 * c[1] + k.sigma1 * c[2] + k.b0 * c[3] + c[4];
        k.A2 = k.sigma1 * s[1] + k.b0 * s[2] + s[3];
        k.B2 = k.sigma2 * s[1] + k.sigma1 * s[2] + k.b0 * s[3] + s[4];
        k.A3 = k.A1 * k.B2 - k.A2 * k.B1 - k.A2 * (k.sigma1 - 1.0) + k.B2 * k.b0;
        k.B3 = k.A2 * (k.sigma2 - k.b0) - k.B2 * (k.sigma1 - 1.0);
        k.C_tilde_printed = -(k.B2 / k.A2) * 2.0 * c[1] / std::hypot(k.A3, k.B3);
        k.C_mean = -c[1];
    } else if (is_ifbm(spec)) {
        // The ratio below is 0/0 at H = 1/2; its limit is -1.
        if (std::abs(H - 0.5) < 1e-8) {
            k.C_mean = -1.0;
        } else {
            double t = k.delta / std::sqrt(k.delta * k.delta + 1.0);
            k.C_mean = t * k.sigma2 / (k.sigma2 - k.b0 * k.sigma1);
        }
    }
    return k;
}

double nu_asym(const ProcessSpec& spec, int n) {
    check_n(n);
    ProcessConstants k = constants_for(spec);
    const double base = kPi * (n - 0.5) + (1.0 - 2.0 * k.hurst) * kPi / 4.0;
    if (is_ifbm(spec)) {
        return base + std::atan(k.delta);
    }
    return base + std::asin(k.ell_H / std::sqrt(1.0 + k.ell_H * k.ell_H));
}

double lambda_asym(const ProcessSpec& spec, int n) {
    const double nu = nu_asym(spec, n);
    const double H = spec.hurst;
    const double c = std::sin(kPi * H) * std::tgamma(2.0 * H + 1.0);
    switch (spec.kind) {
    case Kind::FBM:
        return c * std::pow(nu, -2.0 * H - 1.0);
    case Kind::FOU:
        return c * std::pow(nu, 1.0 - 2.0 * H) / (nu * nu + spec.drift * spec.drift);
    case Kind::IFBM:
        return c * std::pow(nu, -2.0 * H - 3.0);
    }
    return 0.0;
}

AsymEigenpair asym_pair(const ProcessSpec& spec, int n) { return {n, nu_asym(spec, n), lambda_asym(spec, n)}; }

double theta0(const ProcessSpec& spec, double u) {
    spec.validate();
    if (!(u > 0.0)) {
        throw DomainError("theta0: u must be positive");
    }
    const double a = spec.alpha();
    const double w = (1.0 - a) * kPi / 2.0;
    if (!is_ifbm(spec)) {
        return std::atan2(std::sin(w), std::pow(u, 3.0 - a) + std::cos(w));
    }
    double num = -std::sin(w);
    if (num == 0.0) {
        num = 0.0;  // drop the sign of zero so H = 1/2 follows the H < 1/2 branch
    }
    double th = std::atan2(num, std::pow(u, 5.0 - a) - std::cos(w));
    // Ranges: (0, (3-alpha)pi/2] for H <= 1/2, [-(1+alpha)pi/2, 0) for H > 1/2.
    if (spec.hurst <= 0.5 && th < 0.0) {
        th += kPi;
    } else if (spec.hurst > 0.5 && th > 0.0) {
        th -= kPi;
    }
    return th;
}

double x0_at(const ProcessSpec& spec, double u) {
    if (!(u > 0.0)) {
        throw DomainError("x0_at: u must be positive");
    }
    spec.validate();
    if (!is_ifbm(spec) && spec.hurst == 0.5) {
        return 1.0;
    }
    // theta_0(0) / (s + u) on [0, 1] in closed form, the smooth remainder and the tail by quadrature.
    const double t0 = theta0_at_zero(spec);
    double near = t0 * std::log1p(1.0 / u);
    near += integrate_finite([&](double s) { return s > 0.0 ? (theta0(spec, s) - t0) / (s + u) : 0.0; }, 0.0, 1.0,
                             x0_quadrature());
    double far = integrate_semiinf([&](double t) { return theta0(spec, 1.0 + t) / (1.0 + t + u); }, x0_quadrature(),
                                   TailDecay::power(theta_decay(spec) + 1.0), std::max(1.0, u));
    return std::exp((near + far) / kPi);
}

std::complex<double> x0_at_i(const ProcessSpec& spec) {
    spec.validate();
    if (!is_ifbm(spec) && spec.hurst == 0.5) {
        return {1.0, 0.0};
    }
    const double p = theta_decay(spec) + 1.0;
    double arg = integrate_semiinf([&](double s) { return theta0(spec, s) / (s * s + 1.0); }, x0_quadrature(),
                                   TailDecay::power(p + 1.0)) /
                 kPi;
    double log_mod = integrate_semiinf([&](double s) { return s * theta0(spec, s) / (s * s + 1.0); },
                                       x0_quadrature(), TailDecay::power(p)) /
                     kPi;
    return std::polar(std::exp(log_mod), arg);
}

double gamma0(const ProcessSpec& spec, double u) {
    spec.validate();
    if (!(u > 0.0)) {
        throw DomainError("gamma0: u must be positive");
    }
    const double a = spec.alpha();
    const std::complex<double> rot = std::polar(1.0, (1.0 - a) * kPi / 2.0);
    if (!is_ifbm(spec)) {
        return std::abs(u + std::pow(u, a - 2.0) * rot);
    }
    return std::abs(u * u - std::pow(u, a - 3.0) * rot);
}

double rho0(const ProcessSpec& spec, double u) {
    spec.validate();
    if (!(u > 0.0)) {
        throw DomainError("rho0: u must be positive");
    }
    if (spec.hurst == 0.5) {
        return 0.0;
    }
    double base = std::sin(theta0(spec, u)) / gamma0(spec, u) * x0_at(spec, u);
    if (!is_ifbm(spec)) {
        return base;
    }
    return spec.hurst < 0.5 ? base * u : base / u;
}

QPolynomials q_polynomials(double hurst, QNorm norm) {
    if (hurst == 0.5) {
        throw DomainError("q_polynomials: no polynomial layer at H = 1/2");
    }
    ProcessConstants k = constants_for(ifbm(hurst));
    QPolynomials q;
    if (hurst < 0.5) {
        double pre = k.delta / std::sqrt(k.delta * k.delta + 1.0) * k.sigma1 / (k.sigma2 - k.b0 * k.sigma1);
        double r = k.sigma2 / k.sigma1;
        q.q0 = {pre * (r * k.b0 - k.sigma1), pre * (k.b0 - r), -pre};
        q.q1 = {1.0};
        return q;
    }
    const double c1 = std::cos(k.phase_angle);
    const double c2 = std::cos(2.0 * k.phase_angle);
    const double s1 = std::sin(k.phase_angle);
    const double s2 = std::sin(2.0 * k.phase_angle);
    const double r = k.B2 / k.A2;
    const double pre = (norm == QNorm::Printed) ? 2.0 * c1 / std::hypot(k.A3, k.B3) : c1 / r;
    q.q0 = {pre * (k.A1 * r - k.B1), pre * (r * k.sigma1 - k.sigma2), pre * (k.sigma1 - r * k.b0), pre * (r - k.b0),
            pre};
    q.q1 = {s2 / s1 * c1 - c2, s2 / s1, 1.0};
    return q;
}

double eval_poly(const std::vector<double>& coeffs, double u) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * u + *it;
    }
    return acc;
}

double ExpLayerFit::C0() const { return std::hypot(a0, b0); }
double ExpLayerFit::kappa0() const { return std::atan2(-b0, a0); }
double ExpLayerFit::C1() const { return std::hypot(a1, b1); }
double ExpLayerFit::kappa1() const { return std::atan2(-b1, a1); }

BoundaryLayerDensity::BoundaryLayerDensity(const ProcessSpec& spec) : spec_(spec) {
    spec.validate();
    vanishes_ = spec.hurst == 0.5;
    if (vanishes_) {
        return;
    }
    using Rule = boost::math::quadrature::gauss<double, 12>;
    const auto& xs = Rule::abscissa();
    const auto& ws = Rule::weights();
    auto add_panel = [&](double lo, double hi, auto&& map) {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (double sgn : {-1.0, 1.0}) {
                double y = mid + sgn * half * xs[i];
                auto [u, jac] = map(y);
                u_.push_back(u);
                w_.push_back(ws[i] * half * jac);
            }
        }
    };
    auto identity = [](double y) { return std::pair<double, double>{y, 1.0}; };
    const int jmin = -40;
    const int jmax = 10;
    for (int j = jmin; j < jmax; ++j) {
        add_panel(std::ldexp(1.0, j), std::ldexp(1.0, j + 1), identity);
    }
    // Tail [U, inf): u = U y^{-q}, q = 1/(p-1) for the slowest weighted decay.
    const double U = std::ldexp(1.0, jmax);
    const double a = spec.alpha();
    const double p = is_ifbm(spec) ? 4.0 - a : 3.0 - a;
    const double q = 1.0 / (p - 1.0);
    auto tail = [U, q](double y) {
        double u = U * std::pow(y, -q);
        return std::pair<double, double>{u, q * u / y};
    };
    add_panel(0.0, 1.0 / 16.0, tail);
    add_panel(1.0 / 16.0, 0.25, tail);
    add_panel(0.25, 1.0, tail);

    rho_.resize(u_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) {
        rho_[i] = std::isfinite(u_[i]) ? rho0(spec, u_[i]) : 0.0;
        if (!std::isfinite(rho_[i])) {
            rho_[i] = 0.0;
        }
    }
}

double BoundaryLayerDensity::integral(const std::vector<double>& poly, double rate) const {
    if (vanishes_) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) {
        double e = std::exp(-rate * u_[i]);
        if (e == 0.0) {
            continue;
        }
        acc += w_[i] * rho_[i] * eval_poly(poly, u_[i]) * e;
    }
    return acc;
}

EigenfunctionApprox::EigenfunctionApprox(const ProcessSpec& spec)
    : spec_(spec), k_(constants_for(spec)), density_(spec) {
    if (is_ifbm(spec)) {
        if (spec.hurst != 0.5) {
            q_ = q_polynomials(spec.hurst, QNorm::Consistent);
            left_poly_ = q_.q0;
            right_poly_ = q_.q1;
        }
    } else {
        const double norm = std::sqrt(1.0 + k_.ell_H * k_.ell_H);
        left_poly_ = {-k_.ell_H / norm, 1.0 / norm};
        right_poly_ = {1.0};
    }
}

double EigenfunctionApprox::oscillatory(int n, double x) const {
    check_n(n);
    const double nu = nu_asym(spec_, n);
    const double H = k_.hurst;
    if (is_ifbm(spec_)) {
        return std::sqrt(2.0) * std::cos(nu * x + (2.0 * H + 1.0) * kPi / 8.0 - std::atan(k_.delta));
    }
    const double phase = (2.0 * H - 1.0) * kPi / 8.0 - std::asin(k_.ell_H / std::sqrt(1.0 + k_.ell_H * k_.ell_H));
    return -std::sqrt(2.0) * std::sin(nu * x + phase);
}

double EigenfunctionApprox::polynomial_layer(int n, double x) const {
    check_n(n);
    const double nu = nu_asym(spec_, n);
    const double sg = sign_n(n);
    if (is_ifbm(spec_)) {
        if (k_.hurst == 0.5) {
            return -std::exp(-nu * x) + sg * std::exp(-nu * (1.0 - x));
        }
        const double kf = std::sqrt(2.0 * k_.hurst + 3.0) / kPi;
        return -kf * (density_.integral(left_poly_, nu * x) - sg * density_.integral(right_poly_, nu * (1.0 - x)));
    }
    if (density_.vanishes()) {
        return 0.0;
    }
    const double kf = std::sqrt(2.0 * k_.hurst + 1.0) / kPi;
    return -kf * density_.integral(left_poly_, nu * x) + kf * sg * density_.integral(right_poly_, nu * (1.0 - x));
}

double EigenfunctionApprox::exponential_layer(int n, double x, const ExpLayerFit& fit) const {
    if (!(is_ifbm(spec_) && k_.hurst > 0.5)) {
        return 0.0;
    }
    const double nu = nu_asym(spec_, n);
    const double c = k_.c_exp * nu;
    const double s = k_.s_exp * nu;
    const double y = 1.0 - x;
    return std::exp(-c * x) * (fit.a0 * std::cos(s * x) + fit.b0 * std::sin(s * x)) +
           std::exp(-c * y) * (fit.a1 * std::cos(s * y) + fit.b1 * std::sin(s * y));
}

double EigenfunctionApprox::value(int n, double x, const ExpLayerFit* fit) const {
    double v = oscillatory(n, x) + polynomial_layer(n, x);
    if (fit) {
        v += exponential_layer(n, x, *fit);
    }
    return v;
}

ExpLayerFit EigenfunctionApprox::fit_exp_layer(int n, const std::vector<double>& x,
                                               const std::vector<double>& phi) const {
    ExpLayerFit fit;
    if (!(is_ifbm(spec_) && k_.hurst > 0.5)) {
        return fit;
    }
    if (x.size() != phi.size()) {
        throw DomainError("fit_exp_layer: x and phi sizes differ");
    }
    const double nu = nu_asym(spec_, n);
    const double c = k_.c_exp * nu;
    const double s = k_.s_exp * nu;
    for (int side = 0; side < 2; ++side) {
        std::vector<Eigen::Index> rows;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if ((side == 0) == (x[i] < 0.5)) {
                rows.push_back(static_cast<Eigen::Index>(i));
            }
        }
        if (rows.size() < 2) {
            continue;
        }
        Eigen::MatrixXd M(rows.size(), 2);
        Eigen::VectorXd r(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const double xi = x[rows[k]];
            const double y = side == 0 ? xi : 1.0 - xi;
            M(k, 0) = std::exp(-c * y) * std::cos(s * y);
            M(k, 1) = std::exp(-c * y) * std::sin(s * y);
            r[k] = phi[rows[k]] - oscillatory(n, xi) - polynomial_layer(n, xi);
        }
        Eigen::Vector2d coef = M.colPivHouseholderQr().solve(r);
        if (side == 0) {
            fit.a0 = coef[0];
            fit.b0 = coef[1];
        } else {
            fit.a1 = coef[0];
            fit.b1 = coef[1];
        }
    }
    return fit;
}

double eigfun_asym(const ProcessSpec& spec, int n, double x) { return EigenfunctionApprox(spec).value(n, x); }

double endpoint_value(const ProcessSpec& spec, int n) {
    check_n(n);
    spec.validate();
    const double H = spec.hurst;
    return sign_n(n) * std::sqrt(is_ifbm(spec) ? 2.0 * H + 3.0 : 2.0 * H + 1.0);
}

double mean_functional(const ProcessSpec& spec, int n) {
    const double nu = nu_asym(spec, n);
    ProcessConstants k = constants_for(spec);
    if (is_ifbm(spec)) {
        return std::sqrt(2.0 * k.hurst + 3.0) * k.C_mean / nu;
    }
    return -std::sqrt((2.0 * k.hurst + 1.0) / (1.0 + k.ell_H * k.ell_H)) / nu;
}

std::pair<double, double> delta_two_forms(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
        throw DomainError("delta_two_forms: alpha must lie in (0,2) excluding 1");
    }
    const double a = alpha;
    const double d0 = std::sin(kPi / 2.0 * (3.0 - a) / (5.0 - a)) / std::sin(kPi / (5.0 - a));
    const double d2 = std::sin(1.5 * kPi * (3.0 - a) / (5.0 - a)) / std::sin(3.0 * kPi / (5.0 - a)) / 3.0;
    const double h_form = (d0 * d0 * d0 / 3.0 - d2) / (0.25 + 0.5 * d0 * d0 + d2 * d0 - std::pow(d0, 4) / 12.0);

    double b[3];
    for (int j = 0; j < 3; ++j) {
        b[j] = -1.0 / (j + 1) * std::sin((j + 1) * (1.0 + a) * kPi / (2.0 * (5.0 - a))) /
               std::sin((j + 1) * kPi / (5.0 - a));
    }
    const double s1 = b[0] * b[0] / 2.0 + b[1];
    const double s2 = b[0] * b[0] * b[0] / 6.0 + b[0] * b[1] + b[2];
    const double phi = kPi / 2.0 * (1.0 - a) / (5.0 - a);
    double c[5], s[5];
    for (int j = 0; j < 5; ++j) {
        c[j] = std::cos(j * phi);
        s[j] = std::sin(j * phi);
    }
    const double A1 = s1 * c[1] + b[0] * c[2] + c[3];
    const double B1 = s2 * c[1] + s1 * c[2] + b[0] * c[3] + c[4];
    const double A2 = s1 * s[1] + b[0] * s[2] + s[3];
    const double B2 = s2 * s[1] + s1 * s[2] + b[0] * s[3] + s[4];
    const double A3 = A1 * B2 - A2 * B1 - A2 * (s1 - 1.0) + B2 * b[0];
    const double B3 = A2 * (s2 - b[0]) - B2 * (s1 - 1.0);
    return {h_form, A3 / B3};
}

}  // namespace fracspec
