#pragma once

// Test-only reference computations, deliberately independent of the library's
// own quadrature and sampling code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

// Composite Gauss-Legendre with `panels` equal panels of `order` points.
inline double integrate(const std::function<double(double)>& f, double a, double b, std::size_t panels = 256,
                        std::size_t order = 12) {
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(order, x, w);
    const double h = (b - a) / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        double panel = 0.0;
        for (std::size_t i = 0; i < order; ++i) panel += w[i] * f(mid + 0.5 * h * x[i]);
        sum += 0.5 * h * panel;
    }
    return sum;
}

inline double mean(const std::function<double(double)>& f, double a, double b) {
    return integrate(f, a, b) / (b - a);
}

// Minimum of `margin(x, y, t)` over an n x n x m lattice, brute force.
inline double lattice_min(const std::function<double(double, double, double)>& margin, double a, double b,
                          std::size_t n, std::size_t m) {
    double best = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < m; ++k) {
                const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
                const double y = a + (b - a) * static_cast<double>(j) / static_cast<double>(n - 1);
                const double t = static_cast<double>(k) / static_cast<double>(m - 1);
                best = std::fmin(best, margin(x, y, t));
            }
        }
    }
    return best;
}

}  // namespace oracle
