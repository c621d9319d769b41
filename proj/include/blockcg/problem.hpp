#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockcg/errors.hpp"
#include "blockcg/partition.hpp"

namespace blockcg {

/// Feasibility tolerance for set membership predicates.
inline constexpr double kFeasTol = 1e-9;
/// A raw per-block gap below this is treated as a subsolver failure
/// instead of rounding noise.
inline constexpr double kGapFloor = -1e-9;
/// Allowed discrepancy between a subsolver's reported objective and its
/// re-evaluation.
inline constexpr double kObjectiveTol = 1e-10;

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

inline double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

} // namespace detail

/// Value and per-block gradient oracles of the smooth part f, with call
/// accounting. Counters are mutable and atomically incremented so that
/// independent solves on distinct problem instances can run in parallel;
/// a single solve is sequential.
class SmoothOracle {
public:
    virtual ~SmoothOracle() = default;

    double value(const BlockVector& x) const {
        value_calls_.fetch_add(1, std::memory_order_relaxed);
        return do_value(x);
    }

    std::vector<double> partial_gradient(const BlockVector& x, std::size_t i) const {
        partial_gradient_calls_.fetch_add(1, std::memory_order_relaxed);
        return do_partial_gradient(x, i);
    }

    /// Concatenation of all partial gradients; adds n to the partial
    /// gradient counter.
    BlockVector full_gradient(const BlockVector& x) const {
        BlockVector g(x.partition_ptr());
        for (std::size_t i = 0; i < x.partition().blocks(); ++i) {
            auto gi = partial_gradient(x, i);
            auto bi = g.block(i);
            for (std::size_t j = 0; j < bi.size(); ++j) bi[j] = gi[j];
        }
        return g;
    }

    /// Whether f is convex; enables the convex-case stepsize rule.
    virtual bool convex() const { return false; }

    std::uint64_t value_calls() const { return value_calls_.load(std::memory_order_relaxed); }
    std::uint64_t partial_gradient_calls() const {
        return partial_gradient_calls_.load(std::memory_order_relaxed);
    }

    void reset_counters() const {
        value_calls_.store(0, std::memory_order_relaxed);
        partial_gradient_calls_.store(0, std::memory_order_relaxed);
    }

private:
    virtual double do_value(const BlockVector& x) const = 0;
    virtual std::vector<double> do_partial_gradient(const BlockVector& x, std::size_t i) const = 0;

    mutable std::atomic<std::uint64_t> value_calls_{0};
    mutable std::atomic<std::uint64_t> partial_gradient_calls_{0};
};

struct LinearizedSolution {
    std::vector<double> point;
    double objective = 0.0;
};

/// One factor X_i of the product feasible set together with its convex
/// term h_i and an exact minimizer of <g, y> + h_i(y) over X_i.
class BlockTerm {
public:
    virtual ~BlockTerm() = default;

    virtual std::size_t dim() const = 0;

    /// h_i(y); may return +infinity outside dom h_i.
    virtual double h_value(std::span<const double> y) const = 0;

    /// Exact minimizer of <g, y> + h_i(y) over X_i and its objective.
    virtual LinearizedSolution solve_linearized(std::span<const double> g) const = 0;

    /// Membership predicate for X_i.
    virtual bool contains(std::span<const double> y, double tol = kFeasTol) const = 0;

    /// Euclidean diameter of X_i.
    virtual double diameter() const = 0;

    /// Partial Lipschitz constant of g_i, when known.
    virtual std::optional<double> lipschitz() const { return std::nullopt; }

    /// A random feasible point (used by property tests and multistart).
    virtual std::vector<double> random_point(std::mt19937& rng) const = 0;
};

/// min f(x) + sum_i h_i(x_i) over X_1 x ... x X_n.
struct CompositeProblem {
    std::shared_ptr<const BlockPartition> partition;
    std::shared_ptr<const SmoothOracle> smooth;
    std::vector<std::shared_ptr<const BlockTerm>> terms;

    CompositeProblem(std::shared_ptr<const BlockPartition> partition_,
                     std::shared_ptr<const SmoothOracle> smooth_,
                     std::vector<std::shared_ptr<const BlockTerm>> terms_)
        : partition(std::move(partition_)), smooth(std::move(smooth_)), terms(std::move(terms_)) {
        if (terms.size() != partition->blocks())
            throw DimensionMismatch("expected one block term per partition block");
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (terms[i]->dim() != partition->size(i))
                throw DimensionMismatch("block term " + std::to_string(i) +
                                        " dimension does not match partition");
    }

    std::size_t blocks() const { return partition->blocks(); }

    BlockVector random_feasible(std::mt19937& rng) const {
        BlockVector x(partition);
        for (std::size_t i = 0; i < blocks(); ++i) {
            auto p = terms[i]->random_point(rng);
            auto b = x.block(i);
            for (std::size_t j = 0; j < b.size(); ++j) b[j] = p[j];
        }
        return x;
    }
};

/// Answer of the linearized subproblem for one block: the minimizer
/// y_i(x) and the per-block gap phi_i(x), clamped at zero. phi_raw keeps
/// the unclamped value for diagnostics.
struct BlockProposal {
    std::size_t block = 0;
    std::vector<double> y;
    double phi = 0.0;
    double phi_raw = 0.0;
};

/// Solves the linearized subproblem on block i at x. Costs exactly one
/// partial gradient call. phi_i(x) = <g_i, x_i - y_i> + h_i(x_i) - h_i(y_i).
inline BlockProposal block_proposal(const CompositeProblem& problem, const BlockVector& x,
                                    std::size_t i) {
    const BlockTerm& term = *problem.terms.at(i);
    auto xi = x.block(i);
    if (!term.contains(xi))
        throw InfeasibleInput("block " + std::to_string(i) + " of input lies outside its set");

    std::vector<double> g = problem.smooth->partial_gradient(x, i);
    if (g.size() != term.dim())
        throw DimensionMismatch("partial gradient has wrong length on block " + std::to_string(i));

    LinearizedSolution sol = term.solve_linearized(g);
    if (sol.point.size() != term.dim())
        throw SubsolverFailure("block minimizer has wrong length on block " + std::to_string(i));
    if (!term.contains(sol.point))
        throw SubsolverFailure("block minimizer infeasible on block " + std::to_string(i));

    const double reevaluated = detail::dot(g, sol.point) + term.h_value(sol.point);
    if (std::abs(reevaluated - sol.objective) > kObjectiveTol * (1.0 + std::abs(sol.objective)))
        throw SubsolverFailure("subsolver objective inconsistent on block " + std::to_string(i));

    const double phi_raw = detail::dot(g, xi) + term.h_value(xi) - sol.objective;
    if (phi_raw < kGapFloor)
        throw SubsolverFailure("negative gap " + std::to_string(phi_raw) + " on block " +
                               std::to_string(i) + "; subsolver is not exact");

    return BlockProposal{i, std::move(sol.point), std::max(phi_raw, 0.0), phi_raw};
}

/// phi(x) = sum_i phi_i(x). Costs exactly n partial gradient calls.
inline double total_gap(const CompositeProblem& problem, const BlockVector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < problem.blocks(); ++i) s += block_proposal(problem, x, i).phi;
    return s;
}

/// mu(x) = f(x) + sum_i h_i(x_i). Costs one value call.
inline double mu_value(const CompositeProblem& problem, const BlockVector& x) {
    for (std::size_t i = 0; i < problem.blocks(); ++i)
        if (!problem.terms[i]->contains(x.block(i)))
            throw InfeasibleInput("block " + std::to_string(i) + " of input lies outside its set");
    double v = problem.smooth->value(x);
    for (std::size_t i = 0; i < problem.blocks(); ++i)
        v += problem.terms[i]->h_value(x.block(i));
    return v;
}

} // namespace blockcg
