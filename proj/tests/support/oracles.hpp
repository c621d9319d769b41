#pragma once

// Independent oracles used to check the library: brute-force and
// closed-form computations that deliberately avoid the implementation
// paths they verify.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace oracles {

// Euclidean projection onto {y >= 0, sum y = scale} via the sort-based
// threshold formula.
inline std::vector<double> project_simplex(std::vector<double> a, double scale = 1.0) {
    std::vector<double> u = a;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0;
    double theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        css += u[k];
        const double t = (css - scale) / double(k + 1);
        if (u[k] - t > 0.0) {
            rho = k + 1;
            theta = t;
        }
    }
    (void)rho;
    for (double& v : a) v = std::max(0.0, v - theta);
    return a;
}

// Minimum of the linear form <g, y> over the simplex {y >= 0, sum = scale}
// by walking a fine grid of the first coordinate direction per vertex pair.
// For a linear objective the vertex scan is exact; the grid is kept so the
// oracle does not share the argmin shortcut with the implementation.
inline double simplex_linear_min_grid(std::span<const double> g, double scale,
                                      std::size_t grid = 1000) {
    // evaluate all vertices
    double best = g[0] * scale;
    for (std::size_t j = 1; j < g.size(); ++j) best = std::min(best, g[j] * scale);
    // and a grid over edges between every vertex pair
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b)
            for (std::size_t k = 0; k <= grid; ++k) {
                const double t = double(k) / double(grid);
                const double v = scale * ((1.0 - t) * g[a] + t * g[b]);
                best = std::min(best, v);
            }
    return best;
}

// Brute-force min of g*y + w*|y| over [lo, hi] on a grid refined with the
// breakpoint 0 and the interval ends.
inline double box_l1_scalar_min_grid(double g, double w, double lo, double hi,
                                     std::size_t grid = 10000) {
    auto f = [&](double y) { return g * y + w * std::abs(y); };
    double best = f(lo);
    for (std::size_t k = 1; k <= grid; ++k)
        best = std::min(best, f(lo + (hi - lo) * double(k) / double(grid)));
    if (lo <= 0.0 && 0.0 <= hi) best = std::min(best, f(0.0));
    best = std::min(best, f(hi));
    return best;
}

// Central finite difference of a scalar functional along coordinate j.
template <typename F>
double central_difference(F&& f, std::vector<double> x, std::size_t j, double h = 1e-6) {
    x[j] += h;
    const double fp = f(x);
    x[j] -= 2.0 * h;
    const double fm = f(x);
    return (fp - fm) / (2.0 * h);
}

// The benchmark data recomputed straight from the defining formulas
// (1-based indices), independent of the library builder.
inline double benchmark_P(std::size_t i, std::size_t j, std::size_t N) {
    if (i < j) return std::sin(double(i)) * std::cos(double(j));
    if (i > j) return std::sin(double(j)) * std::cos(double(i));
    double row = 0.0;
    for (std::size_t s = 1; s <= N; ++s)
        if (s != i) row += std::abs(benchmark_P(std::min(i, s), std::max(i, s), N));
    return row + 1.0;
}

inline double benchmark_q(std::size_t j) { return std::sin(double(j)) / double(j); }
inline double benchmark_c(std::size_t i) { return 2.0 + std::sin(double(i)); }

inline double benchmark_f1(const std::vector<double>& x) {
    const std::size_t N = x.size();
    double quad = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
        double row = 0.0;
        for (std::size_t j = 1; j <= N; ++j) row += benchmark_P(i, j, N) * x[j - 1];
        quad += row * x[i - 1];
    }
    double lin = 0.0;
    for (std::size_t j = 1; j <= N; ++j) lin += benchmark_q(j) * x[j - 1];
    return 0.5 * quad - lin;
}

// Random point on {y >= 0, sum = scale}.
inline std::vector<double> random_simplex_point(std::mt19937& rng, std::size_t dim,
                                                double scale = 1.0) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> y(dim);
    double s = 0.0;
    for (double& v : y) {
        v = e(rng);
        s += v;
    }
    for (double& v : y) v *= scale / s;
    return y;
}

} // namespace oracles
