#pragma once

#include <string>

namespace fracspec {

enum class Kind { FBM, FOU, IFBM };

// Which covariance operator to study. alpha = 2 - 2H is always derived.
struct ProcessSpec {
    Kind kind = Kind::FBM;
    double hurst = 0.5;
    double drift = 0.0;

    double alpha() const { return 2.0 - 2.0 * hurst; }

    // Throws DomainError unless 0 < H < 1, drift finite, and drift == 0 for FBM/IFBM.
    void validate() const;
};

ProcessSpec fbm(double hurst);
ProcessSpec fou(double hurst, double drift);
ProcessSpec ifbm(double hurst);

std::string kind_name(Kind kind);
// Accepts "fbm", "fou", "ifbm" (case-insensitive). Throws DomainError otherwise.
Kind parse_kind(const std::string& name);

}  // namespace fracspec
