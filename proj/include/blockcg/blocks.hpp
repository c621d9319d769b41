#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "blockcg/errors.hpp"
#include "blockcg/problem.hpp"

namespace blockcg {

// Tie-breaking is lowest index everywhere: argmin scans left to right.

/// min <g, y> over {y >= 0, sum y = scale}: puts the full mass on the
/// cheapest coordinate.
inline LinearizedSolution simplex_linearized_min(std::span<const double> g, double scale) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < g.size(); ++j)
        if (g[j] < g[best]) best = j;
    std::vector<double> y(g.size(), 0.0);
    y[best] = scale;
    return {std::move(y), scale * g[best]};
}

/// min <g, y> over {y >= 0, sum y <= cap}: stays at the origin unless
/// some coordinate has negative cost.
inline LinearizedSolution capped_simplex_linearized_min(std::span<const double> g, double cap) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < g.size(); ++j)
        if (g[j] < g[best]) best = j;
    std::vector<double> y(g.size(), 0.0);
    if (g[best] >= 0.0) return {std::move(y), 0.0};
    y[best] = cap;
    return {std::move(y), cap * g[best]};
}

/// Coordinatewise min of g_j y + w_j |y| over [lower_j, upper_j]. The
/// objective is piecewise linear, so the minimum sits at a bound or at
/// the breakpoint 0.
inline LinearizedSolution box_l1_linearized_min(std::span<const double> g,
                                                std::span<const double> lower,
                                                std::span<const double> upper,
                                                std::span<const double> weights) {
    std::vector<double> y(g.size(), 0.0);
    double obj = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double w = weights.empty() ? 0.0 : weights[j];
        double best_y = lower[j];
        double best_v = g[j] * lower[j] + w * std::abs(lower[j]);
        auto consider = [&](double cand) {
            const double v = g[j] * cand + w * std::abs(cand);
            if (v < best_v) {
                best_v = v;
                best_y = cand;
            }
        };
        if (lower[j] <= 0.0 && 0.0 <= upper[j]) consider(0.0);
        consider(upper[j]);
        y[j] = best_y;
        obj += best_v;
    }
    return {std::move(y), obj};
}

/// Standard simplex {y >= 0, sum y = scale} with h == 0.
class SimplexBlock final : public BlockTerm {
public:
    SimplexBlock(std::size_t dim, double scale = 1.0) : dim_(dim), scale_(scale) {
        if (dim_ == 0 || !(scale_ > 0.0)) throw DimensionMismatch("simplex needs dim >= 1, scale > 0");
    }

    std::size_t dim() const override { return dim_; }
    double scale() const { return scale_; }
    double h_value(std::span<const double>) const override { return 0.0; }

    LinearizedSolution solve_linearized(std::span<const double> g) const override {
        return simplex_linearized_min(g, scale_);
    }

    bool contains(std::span<const double> y, double tol = kFeasTol) const override {
        double s = 0.0;
        for (double v : y) {
            if (v < -tol) return false;
            s += v;
        }
        return std::abs(s - scale_) <= tol * std::max(1.0, scale_);
    }

    double diameter() const override { return scale_ * std::sqrt(2.0); }

    std::vector<double> random_point(std::mt19937& rng) const override {
        std::exponential_distribution<double> exp1(1.0);
        std::vector<double> y(dim_);
        double s = 0.0;
        for (double& v : y) {
            v = exp1(rng);
            s += v;
        }
        for (double& v : y) v *= scale_ / s;
        return y;
    }

private:
    std::size_t dim_;
    double scale_;
};

/// {y >= 0, sum y <= cap} with h == 0.
class CappedSimplexBlock final : public BlockTerm {
public:
    CappedSimplexBlock(std::size_t dim, double cap) : dim_(dim), cap_(cap) {
        if (dim_ == 0 || !(cap_ > 0.0)) throw DimensionMismatch("capped simplex needs dim >= 1, cap > 0");
    }

    std::size_t dim() const override { return dim_; }
    double cap() const { return cap_; }
    double h_value(std::span<const double>) const override { return 0.0; }

    LinearizedSolution solve_linearized(std::span<const double> g) const override {
        return capped_simplex_linearized_min(g, cap_);
    }

    bool contains(std::span<const double> y, double tol = kFeasTol) const override {
        double s = 0.0;
        for (double v : y) {
            if (v < -tol) return false;
            s += v;
        }
        return s <= cap_ + tol * std::max(1.0, cap_);
    }

    double diameter() const override { return cap_ * std::sqrt(2.0); }

    std::vector<double> random_point(std::mt19937& rng) const override {
        std::exponential_distribution<double> exp1(1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> y(dim_);
        double s = 0.0;
        for (double& v : y) {
            v = exp1(rng);
            s += v;
        }
        const double mass = cap_ * unit(rng);
        for (double& v : y) v *= mass / s;
        return y;
    }

private:
    std::size_t dim_;
    double cap_;
};

/// Box [lower, upper] with the weighted l1 term h(y) = sum_j w_j |y_j|.
class BoxBlock final : public BlockTerm {
public:
    BoxBlock(std::vector<double> lower, std::vector<double> upper, std::vector<double> weights = {})
        : lower_(std::move(lower)), upper_(std::move(upper)), weights_(std::move(weights)) {
        if (lower_.empty() || lower_.size() != upper_.size())
            throw DimensionMismatch("box bounds must be nonempty and equal length");
        if (!weights_.empty() && weights_.size() != lower_.size())
            throw DimensionMismatch("l1 weights must match box dimension");
        for (std::size_t j = 0; j < lower_.size(); ++j) {
            if (lower_[j] > upper_[j]) throw DimensionMismatch("box has lower > upper");
            if (!weights_.empty() && weights_[j] < 0.0)
                throw DimensionMismatch("l1 weights must be nonnegative");
        }
    }

    std::size_t dim() const override { return lower_.size(); }

    double h_value(std::span<const double> y) const override {
        if (weights_.empty()) return 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) s += weights_[j] * std::abs(y[j]);
        return s;
    }

    LinearizedSolution solve_linearized(std::span<const double> g) const override {
        return box_l1_linearized_min(g, lower_, upper_, weights_);
    }

    bool contains(std::span<const double> y, double tol = kFeasTol) const override {
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] < lower_[j] - tol || y[j] > upper_[j] + tol) return false;
        return true;
    }

    double diameter() const override {
        double s = 0.0;
        for (std::size_t j = 0; j < lower_.size(); ++j)
            s += (upper_[j] - lower_[j]) * (upper_[j] - lower_[j]);
        return std::sqrt(s);
    }

    std::optional<double> lipschitz() const override { return lipschitz_; }
    void set_lipschitz(double L) { lipschitz_ = L; }

    std::vector<double> random_point(std::mt19937& rng) const override {
        std::vector<double> y(dim());
        for (std::size_t j = 0; j < y.size(); ++j) {
            std::uniform_real_distribution<double> u(lower_[j], upper_[j]);
            y[j] = u(rng);
        }
        return y;
    }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> weights_;
    std::optional<double> lipschitz_;
};

class ElasticDemandBlock;

struct ElasticDemandSolution {
    std::vector<double> path_flows;
    double demand = 0.0;
    double objective = 0.0;
    std::size_t best_path = 0;
    double lambda_min = 0.0;
};

/// Flow/demand set of one origin-destination pair:
/// W = {(u, v) : sum_p u_p = v, u >= 0, 0 <= v <= gamma}, with the
/// demand term h(u, v) = -sigma(v). Coordinates are laid out as
/// (u_1..u_P, v). gamma == 0 degenerates to the single point 0.
class ElasticDemandBlock final : public BlockTerm {
public:
    ElasticDemandBlock(std::size_t num_paths, std::function<double(double)> tau,
                       std::function<double(double)> sigma, double gamma,
                       std::vector<std::vector<std::size_t>> path_arcs = {})
        : num_paths_(num_paths), tau_(std::move(tau)), sigma_(std::move(sigma)), gamma_(gamma),
          path_arcs_(std::move(path_arcs)) {
        if (num_paths_ == 0) throw DisconnectedPair("pair has no paths");
        if (gamma_ < 0.0) throw DimensionMismatch("demand cap must be nonnegative");
        if (!path_arcs_.empty() && path_arcs_.size() != num_paths_)
            throw DimensionMismatch("incidence rows must match path count");
    }

    std::size_t dim() const override { return num_paths_ + 1; }
    std::size_t paths() const { return num_paths_; }
    double gamma() const { return gamma_; }
    double tau(double v) const { return tau_(v); }
    double sigma(double v) const { return sigma_(v); }
    const std::vector<std::vector<std::size_t>>& path_arcs() const { return path_arcs_; }

    double h_value(std::span<const double> y) const override { return -sigma_(y.back()); }

    LinearizedSolution solve_linearized(std::span<const double> g) const override {
        // The last component of g shifts the demand threshold; the network
        // oracle always passes 0 there, matching the plain subproblem.
        auto sol = solve_with_shift({g.data(), num_paths_}, g.back());
        std::vector<double> y = std::move(sol.path_flows);
        y.push_back(sol.demand);
        return {std::move(y), sol.objective + g.back() * sol.demand};
    }

    bool contains(std::span<const double> y, double tol = kFeasTol) const override {
        const double scale = std::max(1.0, gamma_);
        double s = 0.0;
        for (std::size_t p = 0; p < num_paths_; ++p) {
            if (y[p] < -tol * scale) return false;
            s += y[p];
        }
        const double v = y.back();
        if (v < -tol * scale || v > gamma_ + tol * scale) return false;
        return std::abs(s - v) <= tol * scale;
    }

    double diameter() const override { return gamma_ * std::sqrt(2.0); }

    std::vector<double> random_point(std::mt19937& rng) const override {
        std::vector<double> y(dim(), 0.0);
        if (gamma_ == 0.0) return y;
        std::uniform_real_distribution<double> uv(0.0, gamma_);
        std::exponential_distribution<double> exp1(1.0);
        const double v = uv(rng);
        double s = 0.0;
        for (std::size_t p = 0; p < num_paths_; ++p) {
            y[p] = exp1(rng);
            s += y[p];
        }
        for (std::size_t p = 0; p < num_paths_; ++p) y[p] *= v / s;
        y.back() = v;
        return y;
    }

    /// Case analysis for min sum_p cost_p u_p - sigma(v) over W, given the
    /// current path costs. threshold_shift adds to the best path cost when
    /// comparing against tau (0 for the plain subproblem).
    ElasticDemandSolution solve_with_shift(std::span<const double> path_costs,
                                           double threshold_shift) const {
        if (path_costs.size() != num_paths_)
            throw DimensionMismatch("path cost vector has wrong length");
        ElasticDemandSolution out;
        out.path_flows.assign(num_paths_, 0.0);

        std::size_t t = 0;
        for (std::size_t p = 1; p < num_paths_; ++p)
            if (path_costs[p] < path_costs[t]) t = p;
        out.best_path = t;
        out.lambda_min = path_costs[t];

        if (gamma_ == 0.0) {
            out.objective = -sigma_(0.0);
            return out;
        }
        if (!(tau_(0.0) > tau_(gamma_)))
            throw NonMonotoneDemand("inverse demand must be strictly decreasing on [0, gamma]");

        const double lambda = out.lambda_min + threshold_shift;
        double v = 0.0;
        if (tau_(0.0) <= lambda) {
            v = 0.0; // Case 1: demand priced out entirely
        } else if (tau_(gamma_) >= lambda) {
            v = gamma_; // Case 2: cap binds
        } else {
            // Case 3: tau(gamma) < lambda < tau(0); bisect tau(v) = lambda.
            // Bisection is used because tau is only assumed continuous.
            double lo = 0.0, hi = gamma_;
            v = 0.5 * (lo + hi);
            for (int iter = 0; iter < 200; ++iter) {
                const double tv = tau_(v);
                if (std::abs(tv - lambda) <= 1e-10) break;
                if (tv > lambda)
                    lo = v;
                else
                    hi = v;
                v = 0.5 * (lo + hi);
            }
        }
        out.demand = v;
        out.path_flows[t] = v;
        out.objective = out.lambda_min * v - sigma_(v);
        return out;
    }

private:
    std::size_t num_paths_;
    std::function<double(double)> tau_;
    std::function<double(double)> sigma_;
    double gamma_;
    std::vector<std::vector<std::size_t>> path_arcs_;
};

/// Exact minimizer of sum_p cost_p u_p - sigma(v) over the pair's
/// flow/demand set, via the shortest path and the three-case split on
/// the inverse demand level.
inline ElasticDemandSolution elastic_demand_block_min(std::span<const double> path_costs,
                                                      const ElasticDemandBlock& block) {
    return block.solve_with_shift(path_costs, 0.0);
}

} // namespace blockcg
