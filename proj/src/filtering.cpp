#include "fracspec/filtering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "fracspec/asymptotics.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/nystrom.hpp"
#include "fracspec/specfun.hpp"

namespace fracspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long kMaxTerms = 50000000;

double structural_c(double hurst) { return std::sin(kPi * hurst) * std::tgamma(2.0 * hurst + 1.0); }

// Asymptotic eigenvalues of the kernel with drift beta T on [0, 1].
struct ScaledPairs {
    double H;
    double C;
    double b2;
    double shift;  // nu_n = (n - 1/2) pi + shift
    double phase;  // phi_n(x) = -sqrt(2) sin(nu_n x + phase)

    explicit ScaledPairs(const ChannelModel& m) : H(m.signal.hurst), C(structural_c(H)) {
        const double beta = m.signal.drift * m.horizon;
        b2 = beta * beta;
        ProcessConstants k = constants_for(fou(H, beta));
        const double tilt = std::asin(k.ell_H / std::sqrt(1.0 + k.ell_H * k.ell_H));
        shift = (1.0 - 2.0 * H) * kPi / 4.0 + tilt;
        phase = (2.0 * H - 1.0) * kPi / 8.0 - tilt;
    }

    double nu(double n) const { return (n - 0.5) * kPi + shift; }
    double lambda_of(double v) const { return C * std::pow(v, 1.0 - 2.0 * H) / (v * v + b2); }
    double phi_sq(MmseMode mode, double v, double x) const {
        if (mode == MmseMode::Endpoint) {
            return 2.0 * H + 1.0;
        }
        double s = std::sin(v * x + phase);
        return 2.0 * s * s;
    }
};

}  // namespace

void ChannelModel::validate() const {
    if (!(mu != 0.0 && std::isfinite(mu))) {
        throw DomainError("channel gain mu must be finite and nonzero");
    }
    if (!(eps > 0.0 && std::isfinite(eps))) {
        throw DomainError("noise intensity eps must be positive");
    }
    if (!(horizon > 0.0 && std::isfinite(horizon))) {
        throw DomainError("horizon T must be positive");
    }
    signal.validate();
    if (signal.kind != Kind::FOU) {
        throw DomainError("filtering signal must be fou");
    }
}

MmseResult mmse_asym(const ChannelModel& model, MmseMode mode) {
    model.validate();
    const double H = model.signal.hurst;
    const double r = 2.0 * H / (1.0 + 2.0 * H);
    double v = std::pow(model.eps / (model.mu * model.mu), r) * std::pow(structural_c(H), 1.0 / (1.0 + 2.0 * H)) /
               std::sin(kPi / (2.0 * H + 1.0));
    if (mode == MmseMode::Interior) {
        v /= 2.0 * H + 1.0;
    }
    return {mode, v, std::nullopt, 0.0};
}

MmseResult mmse_series(const ChannelModel& model, MmseMode mode, double x, std::optional<int> n_terms,
                       const SeriesSplice* splice) {
    model.validate();
    if (mode == MmseMode::Endpoint) {
        x = 1.0;
    }
    if (!(x > 0.0 && x <= 1.0)) {
        throw DomainError("mmse_series: x must lie in (0,1]");
    }
    if (n_terms && *n_terms < 10) {
        throw DomainError("mmse_series: n_terms must be >= 10");
    }
    if (splice && splice->lambda.size() != splice->phi_at_x.size()) {
        throw DomainError("mmse_series: splice sizes differ");
    }
    const ScaledPairs sp(model);
    const double H = model.signal.hurst;
    const double eps = model.eps;
    const double num = eps * std::pow(model.horizon, 2.0 * H);
    const double M = model.mu * model.mu * std::pow(model.horizon, 2.0 * H + 1.0);

    double sum = 0.0;
    long n = 1;
    for (;; ++n) {
        double lam;
        double f2;
        const std::size_t idx = static_cast<std::size_t>(n - 1);
        if (splice && idx < splice->lambda.size()) {
            lam = splice->lambda[idx];
            f2 = splice->phi_at_x[idx] * splice->phi_at_x[idx];
        } else {
            const double v = sp.nu(static_cast<double>(n));
            lam = sp.lambda_of(v);
            f2 = sp.phi_sq(mode, v, x);
        }
        sum += num / (eps / lam + M) * f2;
        if (n_terms ? n >= *n_terms : eps / lam >= 100.0 * M) {
            break;
        }
        if (n >= kMaxTerms) {
            throw ConvergenceError("mmse_series: cutoff not reached", sum, 0.0);
        }
    }

    const double a = sp.nu(static_cast<double>(n) + 0.5);
    const double avg = mode == MmseMode::Endpoint ? 2.0 * H + 1.0 : 1.0;
    auto g = [&](double t) {
        const double v = a + t;
        return num / (eps / sp.lambda_of(v) + M) * avg / kPi;
    };
    QuadratureSpec q{1e-300, 1e-11, 400};
    const double tail = integrate_semiinf(g, q, TailDecay::power(1.0 + 2.0 * H), a);
    return {mode, sum + tail, static_cast<int>(n), tail};
}

SeriesSplice nystrom_splice(const ChannelModel& model, MmseMode mode, double x, int count, int L) {
    model.validate();
    if (mode == MmseMode::Endpoint) {
        x = 1.0;
    }
    if (!(x > 0.0 && x <= 1.0)) {
        throw DomainError("nystrom_splice: x must lie in (0,1]");
    }
    NystromGrid grid(L);
    ProcessSpec scaled = fou(model.signal.hurst, model.signal.drift * model.horizon);
    std::vector<SpectralEstimate> est = solve(scaled, grid, count);
    SeriesSplice out;
    const double pos = x * L;
    const int i0 = std::min(static_cast<int>(std::floor(pos)), L - 1);
    const double w = pos - i0;
    for (const SpectralEstimate& e : est) {
        Eigen::VectorXd f = vector_to_function(e.vector, grid);
        out.lambda.push_back(e.lambda_hat);
        out.phi_at_x.push_back((1.0 - w) * f[i0] + w * f[i0 + 1]);
    }
    return out;
}

double rate_exponent(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("Hurst index H must lie in (0,1)");
    }
    return 2.0 * hurst / (1.0 + 2.0 * hurst);
}

double loglog_slope(const std::vector<double>& eps, const std::vector<double>& value) {
    if (eps.size() != value.size() || eps.size() < 2) {
        throw DomainError("loglog_slope: need at least two matching points");
    }
    const double m = static_cast<double>(eps.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && value[i] > 0.0)) {
            throw DomainError("loglog_slope: values must be positive");
        }
        const double lx = std::log(eps[i]);
        const double ly = std::log(value[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = m * sxx - sx * sx;
    if (den == 0.0) {
        throw DomainError("loglog_slope: eps values must differ");
    }
    return (m * sxy - sx * sy) / den;
}

std::string mode_name(MmseMode mode) { return mode == MmseMode::Endpoint ? "endpoint" : "interior"; }

MmseMode parse_mode(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "endpoint") {
        return MmseMode::Endpoint;
    }
    if (s == "interior") {
        return MmseMode::Interior;
    }
    throw DomainError("unknown mode '" + name + "' (expected interior or endpoint)");
}

}  // namespace fracspec
