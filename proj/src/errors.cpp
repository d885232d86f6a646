#include "hhv/errors.hpp"

#include "hhv/format.hpp"

namespace hhv {

const char* to_string(DomainKind kind) noexcept {
    switch (kind) {
        case DomainKind::log_non_positive: return "ln of non-positive value";
        case DomainKind::sqrt_negative: return "sqrt of negative value";
        case DomainKind::division_by_zero: return "division by zero";
        case DomainKind::zero_to_negative_power: return "zero raised to a negative power";
        case DomainKind::negative_base_fractional_power:
            return "negative base raised to a non-integer power";
        case DomainKind::non_finite_argument: return "non-finite argument";
        case DomainKind::non_finite_integrand: return "non-finite integrand value";
    }
    return "domain error";
}

DomainError::DomainError(DomainKind kind, double x)
    : NumericError("domain_error", std::string(to_string(kind)) + " at x=" + format_real(x), x),
      kind_(kind) {}

OverflowError::OverflowError(double x)
    : NumericError("overflow", "non-finite result at x=" + format_real(x), x) {}

MaxDepthExceeded::MaxDepthExceeded(int depth, double left, double right)
    : NumericError("max_depth_exceeded",
                   "adaptive quadrature reached depth " + std::to_string(depth) +
                       " on panel [" + format_real(left) + ", " + format_real(right) +
                       "] before meeting tolerance",
                   0.5 * (left + right)) {}

PositivityViolated::PositivityViolated(double x, std::string detail)
    : NumericError("positivity_violated",
                   "function is not positive at x=" + format_real(x) +
                       (detail.empty() ? std::string() : " (" + detail + ")"),
                   x) {}

PhiRangeViolated::PhiRangeViolated(double x, double phi_x, double lo, double hi)
    : NumericError("phi_range_violated",
                   "phi(" + format_real(x) + ")=" + format_real(phi_x) + " leaves [" +
                       format_real(lo) + ", " + format_real(hi) + "]",
                   x),
      phi_x_(phi_x) {}

DegeneratePhi::DegeneratePhi(double phi_a, double phi_b)
    : NumericError("degenerate_phi", "phi(a)=" + format_real(phi_a) + " and phi(b)=" +
                                         format_real(phi_b) + " coincide") {}

GenerationExhausted::GenerationExhausted(std::string family, int attempts)
    : NumericError("generation_exhausted", "no positive " + family + " candidate after " +
                                               std::to_string(attempts) + " attempts") {}

}  // namespace hhv
