#include "fracspec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "fracspec/errors.hpp"

namespace fracspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk21(const RealFn& f, double a, double b) {
    double error = 0.0;
    double l1 = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &error, &l1);
    // Boost 1.74 reports the non-adaptive error on the reference interval [-1, 1].
    return {a, b, value, error * 0.5 * (b - a), l1};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
        throw DomainError("QuadratureSpec requires abs_tol > 0, rel_tol > 0, max_subdivisions >= 1");
    }
}

double gamma_fn(double x) {
    if (!(x > 0.0)) {
        throw DomainError("gamma_fn: argument must be positive");
    }
    return std::tgamma(x);
}

double integrate_finite(const RealFn& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate_finite(f, b, a, spec);
    }

    std::priority_queue<Panel> heap;
    Panel first = gk21(f, a, b);
    double total = first.value;
    double total_err = first.error;
    double total_l1 = first.l1;
    heap.push(first);

    int subdivisions = 0;
    for (;;) {
        double target = std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 8.0 * kEps * total_l1});
        if (total_err <= target) {
            return total;
        }
        if (subdivisions >= spec.max_subdivisions) {
            break;
        }
        Panel worst = heap.top();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            break;
        }
        heap.pop();
        Panel left = gk21(f, worst.a, mid);
        Panel right = gk21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Re-sum to drop accumulated cancellation in the running totals.
    double sum = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    std::ostringstream msg;
    msg << "integrate_finite: no convergence on [" << a << ", " << b << "] after " << subdivisions
        << " subdivisions; estimate " << sum << " +/- " << err;
    throw ConvergenceError(msg.str(), sum, err);
}

double integrate_semiinf(const RealFn& f, const QuadratureSpec& spec, TailDecay decay, double knot) {
    spec.validate();
    if (!(knot > 0.0)) {
        throw DomainError("integrate_semiinf: knot must be positive");
    }
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;

    double head = integrate_finite(f, 0.0, knot, half);

    RealFn mapped;
    if (decay.type == TailDecay::Type::Power) {
        if (!(decay.p > 1.0)) {
            throw DomainError("integrate_semiinf: power tail needs p > 1");
        }
        double q = 1.0 / (decay.p - 1.0);
        mapped = [&f, knot, q](double y) {
            double u = knot * std::pow(y, -q);
            if (!std::isfinite(u)) {
                return 0.0;
            }
            return f(u) * q * u / y;
        };
    } else {
        mapped = [&f, knot](double y) {
            double u = knot / y;
            if (!std::isfinite(u)) {
                return 0.0;
            }
            return f(u) * u / y;
        };
    }
    double tail = integrate_finite(mapped, 0.0, 1.0, half);
    return head + tail;
}

double power_exp_integral(double t, double p, double beta) {
    if (!(t >= 0.0)) {
        throw DomainError("power_exp_integral: t must be nonnegative");
    }
    if (!(p > -1.0)) {
        throw DomainError("power_exp_integral: exponent must exceed -1");
    }
    if (!std::isfinite(beta)) {
        throw DomainError("power_exp_integral: beta must be finite");
    }
    if (t == 0.0) {
        return 0.0;
    }
    if (beta == 0.0) {
        return std::pow(t, p + 1.0) / (p + 1.0);
    }

    double t0 = std::min(t, 1.0 / std::abs(beta));
    double z = -beta * t0;
    double term = 1.0;  // z^k / k!
    double sum = 1.0 / (p + 1.0);
    for (int k = 1; k < 60; ++k) {
        term *= z / k;
        double contrib = term / (k + 1.0 + p);
        sum += contrib;
        if (std::abs(contrib) <= 1e-17 * std::abs(sum)) {
            break;
        }
    }
    double value = std::pow(t0, p + 1.0) * sum;
    if (t > t0) {
        QuadratureSpec spec{1e-300, 1e-14, 200};
        value += integrate_finite([p, beta](double x) { return std::exp(-beta * x) * std::pow(x, p); }, t0, t, spec);
    }
    return value;
}

double phi_incgamma(double t, double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("phi_incgamma: alpha must lie in (0,1)");
    }
    if (!(t >= 0.0)) {
        throw DomainError("phi_incgamma: t must be nonnegative");
    }
    return power_exp_integral(t, -alpha, beta);
}

double find_root(const RealFn& f, const RootBracket& bracket) {
    if (!(bracket.lo < bracket.hi) || !(bracket.tol > 0.0)) {
        throw DomainError("find_root: bracket needs lo < hi and tol > 0");
    }
    double flo = f(bracket.lo);
    double fhi = f(bracket.hi);
    if (flo == 0.0) {
        return bracket.lo;
    }
    if (fhi == 0.0) {
        return bracket.hi;
    }
    if (!(flo * fhi < 0.0)) {
        std::ostringstream msg;
        msg << "find_root: no sign change on [" << bracket.lo << ", " << bracket.hi << "]";
        throw DomainError(msg.str());
    }
    double tol = bracket.tol;
    auto done = [tol](double a, double b) {
        return std::abs(b - a) <= std::max(tol, 4.0 * kEps * std::max(std::abs(a), std::abs(b)));
    };
    std::uintmax_t max_iter = 200;
    const std::uintmax_t cap = max_iter;
    auto r = boost::math::tools::toms748_solve([&f](double x) { return f(x); }, bracket.lo, bracket.hi, flo, fhi,
                                               done, max_iter);
    double root = 0.5 * (r.first + r.second);
    if (max_iter >= cap && !done(r.first, r.second)) {
        throw ConvergenceError("find_root: iteration cap reached", root, std::abs(r.second - r.first));
    }
    return root;
}

}  // namespace fracspec
