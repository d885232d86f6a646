#pragma once

#include <cstddef>
#include <functional>

#include "hhv/expr.hpp"

namespace hhv {

using Integrand = std::function<double(double)>;

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute, accumulated over accepted panels
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double tol = 1e-10;  // absolute-or-relative, whichever is looser
    int max_depth = 50;
};

inline constexpr double default_quad_tol = 1e-10;

// Adaptive Simpson with Richardson extrapolation. Throws DomainError
// (carrying the abscissa) when the integrand fails or returns a non-finite
// value, and MaxDepthExceeded when a panel cannot meet its share of the
// tolerance within the depth limit.
QuadratureResult integrate(const Integrand& f, const Interval& domain, const QuadratureOptions& opts);

inline QuadratureResult integrate(const Integrand& f, const Interval& domain,
                                  double tol = default_quad_tol) {
    return integrate(f, domain, QuadratureOptions{tol, 50});
}

inline QuadratureResult integrate(const Expr& f, const Interval& domain, double tol = default_quad_tol) {
    return integrate(Integrand([&f](double x) { return f.eval(x); }), domain, tol);
}

// (1 / (b - a)) * integral of f over [a, b]
double mean_value(const Integrand& f, const Interval& domain, double tol = default_quad_tol);

inline double mean_value(const Expr& f, const Interval& domain, double tol = default_quad_tol) {
    return mean_value(Integrand([&f](double x) { return f.eval(x); }), domain, tol);
}

}  // namespace hhv
