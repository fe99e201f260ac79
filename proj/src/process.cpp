#include "fracspec/process.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "fracspec/errors.hpp"

namespace fracspec {

void ProcessSpec::validate() const {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("Hurst index H must lie in (0,1)");
    }
    if (!std::isfinite(drift)) {
        throw DomainError("drift beta must be finite");
    }
    if (kind != Kind::FOU && drift != 0.0) {
        throw DomainError("drift beta is only meaningful for fou and must be 0 otherwise");
    }
}

ProcessSpec fbm(double hurst) { return {Kind::FBM, hurst, 0.0}; }
ProcessSpec fou(double hurst, double drift) { return {Kind::FOU, hurst, drift}; }
ProcessSpec ifbm(double hurst) { return {Kind::IFBM, hurst, 0.0}; }

std::string kind_name(Kind kind) {
    switch (kind) {
    case Kind::FBM:
        return "fbm";
    case Kind::FOU:
        return "fou";
    case Kind::IFBM:
        return "ifbm";
    }
    return "unknown";
}

Kind parse_kind(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "fbm") return Kind::FBM;
    if (lower == "fou") return Kind::FOU;
    if (lower == "ifbm") return Kind::IFBM;
    throw DomainError("unknown process '" + name + "' (expected fbm, fou or ifbm)");
}

}  // namespace fracspec
