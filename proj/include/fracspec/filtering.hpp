#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracspec/process.hpp"

namespace fracspec {

// Y_t = mu int_0^t X_s ds + sqrt(eps) B_t with X an fOU signal on [0, T].
struct ChannelModel {
    double mu = 1.0;
    double eps = 1e-8;
    double horizon = 1.0;
    ProcessSpec signal = fou(0.75, -1.0);

    // Throws DomainError unless mu != 0, eps > 0, T > 0 and signal is FOU.
    void validate() const;
};

enum class MmseMode { Interior, Endpoint };

struct MmseResult {
    MmseMode mode;
    double value;              // includes the tail
    std::optional<int> n_terms;
    double tail = 0.0;         // integral estimate of the terms n > n_terms
};

// Eigenpairs to use for the first terms of the series in place of the
// asymptotic ones: eigenvalues of the kernel with drift beta T on [0, 1] and
// the matching eigenfunction values at the evaluation point.
struct SeriesSplice {
    std::vector<double> lambda;
    std::vector<double> phi_at_x;
};

MmseResult mmse_asym(const ChannelModel& model, MmseMode mode);

// Eigen-expansion of the error at x in (0, 1] (endpoint mode uses x = 1).
// Without n_terms the sum stops at the first N with eps / lambda_N >= 100 mu^2 T^{2H+1}.
MmseResult mmse_series(const ChannelModel& model, MmseMode mode, double x = 0.5,
                       std::optional<int> n_terms = std::nullopt, const SeriesSplice* splice = nullptr);

// Nystrom eigenpairs of the rescaled kernel, ready for mmse_series.
SeriesSplice nystrom_splice(const ChannelModel& model, MmseMode mode, double x, int count, int L);

double rate_exponent(double hurst);

// Least-squares slope of log value against log eps.
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& value);

std::string mode_name(MmseMode mode);
MmseMode parse_mode(const std::string& name);

}  // namespace fracspec
