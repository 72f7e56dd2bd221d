#pragma once

#include <octaframe/octa_variety.hpp>

#include <cstdint>
#include <limits>
#include <string>

namespace octaframe {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SolveConfig
{
    double p = 2.0;        ///< energy exponent, >= 1 or kInfinity
    double epsilon = 0.0;  ///< soft alignment radius, in [0, sqrt(7/12))

    double tol_primal = 1e-6;
    double tol_dual = 1e-6;
    double tol_direct = 1e-8;  ///< relative KKT residual accepted from the direct path
    int max_iter = 20000;

    double degeneracy_threshold = kDegeneracyThreshold;
    int resolve_rounds = 1;
    std::uint64_t seed = 0;

    bool record_trace = false;
    int trace_stride = 10;
};

/// Throws ConfigError when a field is out of range.
void validate(const SolveConfig& config);

/// "inf"/"infinity" or a number >= 1.
double parse_exponent(const std::string& text);

/// Inverse of parse_exponent.
std::string format_exponent(double p);

} // namespace octaframe
