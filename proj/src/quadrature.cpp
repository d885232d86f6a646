#include "hhv/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "hhv/errors.hpp"

namespace hhv {

namespace {

// Panels are always split at least this many times so that an integrand
// which happens to vanish on the first five nodes is not accepted blindly.
constexpr int min_depth = 2;

class AdaptiveSimpson {
public:
    AdaptiveSimpson(const Integrand& f, int max_depth) : f_(f), max_depth_(max_depth) {}

    double sample(double x) {
        const double v = f_(x);
        ++evaluations_;
        if (!std::isfinite(v)) throw DomainError(DomainKind::non_finite_integrand, x);
        return v;
    }

    // Integrates [a, b] given f(a), f(m), f(b) and the panel's Simpson estimate.
    double refine(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = sample(lm);
        const double frm = sample(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;

        if (depth >= min_depth && std::fabs(delta) <= 15.0 * eps) {
            error_ += std::fabs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        if (depth >= max_depth_) throw MaxDepthExceeded(depth, a, b);
        return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
    }

    std::size_t evaluations() const noexcept { return evaluations_; }
    double error() const noexcept { return error_; }

private:
    const Integrand& f_;
    int max_depth_;
    std::size_t evaluations_ = 0;
    double error_ = 0.0;
};

}  // namespace

QuadratureResult integrate(const Integrand& f, const Interval& domain, const QuadratureOptions& opts) {
    if (!(opts.tol > 0.0)) throw UsageError("quadrature tolerance must be positive");
    if (opts.max_depth < 1) throw UsageError("quadrature depth limit must be at least 1");

    AdaptiveSimpson engine(f, opts.max_depth);
    const double a = domain.a();
    const double b = domain.b();
    const double fa = engine.sample(a);
    const double fm = engine.sample(domain.midpoint());
    const double fb = engine.sample(b);
    const double whole = domain.width() / 6.0 * (fa + 4.0 * fm + fb);
    const double eps = std::max(opts.tol, opts.tol * std::fabs(whole));

    QuadratureResult result;
    result.value = engine.refine(a, b, fa, fm, fb, whole, eps, 0);
    result.error_estimate = engine.error();
    result.evaluations = engine.evaluations();
    return result;
}

double mean_value(const Integrand& f, const Interval& domain, double tol) {
    return integrate(f, domain, tol).value / domain.width();
}

}  // namespace hhv
