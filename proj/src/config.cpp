#include <octaframe/config.hpp>
#include <octaframe/error.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace octaframe {

void validate(const SolveConfig& c)
{
    if (!(c.p >= 1.0)) throw ConfigError("p must be >= 1 or inf");
    if (!(c.epsilon >= 0.0 && c.epsilon < normal_weight())) {
        throw ConfigError("epsilon must lie in [0, sqrt(7/12)) = [0, 0.7638...)");
    }
    if (!(c.tol_primal > 0 && c.tol_dual > 0 && c.tol_direct > 0)) throw ConfigError("tolerances must be > 0");
    if (c.max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (!(c.degeneracy_threshold > 0)) throw ConfigError("degeneracy threshold must be > 0");
    if (c.resolve_rounds < 0) throw ConfigError("resolve_rounds must be >= 0");
    if (c.trace_stride < 1) throw ConfigError("trace stride must be >= 1");
}

double parse_exponent(const std::string& text)
{
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "inf" || lower == "infinity") return kInfinity;
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError("cannot parse exponent '" + text + "'");
    }
    if (value < 1.0) throw ConfigError("p must be >= 1 or inf");
    return value;
}

std::string format_exponent(double p)
{
    if (std::isinf(p)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

} // namespace octaframe
