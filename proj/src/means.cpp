#include "hhv/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hhv/errors.hpp"
#include "hhv/format.hpp"

namespace hhv::means {

PositivePair::PositivePair(double p, double q) : p_(p), q_(q) {
    if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
        throw UsageError("means need positive finite arguments, got (" + format_real(p) + ", " +
                             format_real(q) + ")",
                         "non_positive_mean_argument");
    }
}

double arithmetic(const PositivePair& pair) {
    if (pair.p() == pair.q()) return pair.p();
    return 0.5 * pair.p() + 0.5 * pair.q();
}

double geometric(const PositivePair& pair) {
    const double p = pair.p();
    const double q = pair.q();
    if (p == q) return p;
    const double product = p * q;
    if (std::isnormal(product) && product < std::numeric_limits<double>::max()) return std::sqrt(product);
    return std::sqrt(p) * std::sqrt(q);
}

double logarithmic(const PositivePair& pair) {
    // Symmetric, so order as p > q to keep the log1p argument non-negative.
    const double p = std::max(pair.p(), pair.q());
    const double q = std::min(pair.p(), pair.q());
    if (p == q) return p;

    const double diff = p - q;
    const double rel = diff / p;
    if (rel <= near_equal_threshold) {
        const double m = 0.5 * p + 0.5 * q;
        const double d = diff / m;
        return m * (1.0 - d * d / 12.0);
    }
    // ln p - ln q = log1p((p - q) / q) avoids cancellation for close arguments.
    const double ratio = diff / q;
    const double log_gap = std::isfinite(ratio) ? std::log1p(ratio) : std::log(p) - std::log(q);
    return diff / log_gap;
}

}  // namespace hhv::means
