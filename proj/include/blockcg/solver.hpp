#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "blockcg/errors.hpp"
#include "blockcg/problem.hpp"

namespace blockcg {

enum class StepsizeRule { armijo, convex_rule, lipschitz };
enum class BlockSelection { cyclic_first, greedy_max, random };
enum class Termination { converged, iteration_budget, stage_budget };

inline const char* to_string(StepsizeRule r) {
    switch (r) {
        case StepsizeRule::armijo: return "armijo";
        case StepsizeRule::convex_rule: return "convex";
        case StepsizeRule::lipschitz: return "lipschitz";
    }
    return "?";
}

inline const char* to_string(BlockSelection s) {
    switch (s) {
        case BlockSelection::cyclic_first: return "cyclic";
        case BlockSelection::greedy_max: return "greedy";
        case BlockSelection::random: return "random";
    }
    return "?";
}

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::iteration_budget: return "iteration_budget";
        case Termination::stage_budget: return "stage_budget";
    }
    return "?";
}

struct SolverConfig {
    double beta = 0.3;
    double theta = 0.5;
    /// Stage-1 base tolerance; defaults to max_i phi_i(z0) / 2.
    std::optional<double> delta0;
    /// Geometric tolerance decay, delta_l = nu^l delta0.
    double nu = 0.5;
    /// Target total gap.
    double epsilon = 0.1;
    std::size_t max_stages = 200;
    std::size_t max_iterations = 2'000'000;
    int max_armijo_exponent = 60;
    StepsizeRule rule = StepsizeRule::armijo;
    BlockSelection selection = BlockSelection::cyclic_first;
    std::uint64_t seed = 0;

    void validate(const CompositeProblem& problem) const {
        auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
        if (!in01(beta)) throw InvalidConfig("beta must lie in (0,1)");
        if (!in01(theta)) throw InvalidConfig("theta must lie in (0,1)");
        if (!in01(nu)) throw InvalidConfig("nu must lie in (0,1)");
        if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be positive");
        if (delta0 && !(*delta0 > 0.0)) throw InvalidConfig("delta0 must be positive");
        if (max_armijo_exponent < 0) throw InvalidConfig("max_armijo_exponent must be >= 0");
        if (rule == StepsizeRule::lipschitz)
            for (std::size_t i = 0; i < problem.blocks(); ++i)
                if (!problem.terms[i]->lipschitz())
                    throw InvalidConfig("lipschitz rule needs a constant on every block (missing on " +
                                        std::to_string(i) + ")");
    }
};

/// One accepted step. block == kFullStep marks a classic full-space
/// conditional-gradient step; phi_s is then the total gap.
struct IterationRecord {
    static constexpr std::size_t kFullStep = std::numeric_limits<std::size_t>::max();

    std::size_t stage = 0;
    std::size_t iteration = 0;
    std::size_t block = 0;
    double phi_s = 0.0;
    double lambda = 0.0;
    int exponent = -1; // backtracking exponent m; -1 for the pre-set rule
    double mu_next = 0.0;
    std::uint64_t value_calls = 0;
    std::uint64_t gradient_calls = 0;
};

struct StageRecord {
    std::size_t stage = 0;
    double delta = 0.0;
    std::size_t iterations = 0;
    double exit_gap = 0.0;
};

struct RunTrace {
    BlockVector z;
    double final_gap = 0.0;
    std::size_t stages = 0;
    Termination reason = Termination::converged;
    std::vector<IterationRecord> records;
    std::vector<StageRecord> stage_records;
    double mu_initial = 0.0;
    double mu_final = 0.0;
    std::uint64_t value_calls = 0;
    /// Raw partial-gradient counter at the end of the run.
    std::uint64_t gradient_calls = 0;
    std::size_t reported_iterations = 0;
    /// "cl" figure for reports. For the adaptive method this is the raw
    /// counter; for the classic baseline it is it * n, which excludes the
    /// final check scan the way the usual accounting does.
    std::uint64_t reported_gradient_calls = 0;

    explicit RunTrace(BlockVector z_) : z(std::move(z_)) {}

    std::size_t iterations() const { return records.size(); }
};

struct LineSearchResult {
    double lambda = 0.0;
    int exponent = 0;
    double mu_next = 0.0;
};

/// Backtracking rule: smallest m in Z+ with
///   mu(x + theta^m d) <= mu(x) - beta theta^m phi_s(x),
/// where d moves only the proposal's block. Each probe costs one value
/// call; mu_x may be passed in when already known.
inline LineSearchResult armijo_search(const CompositeProblem& problem, const BlockVector& x,
                                      const BlockProposal& proposal, double beta, double theta,
                                      int max_m, std::optional<double> mu_x = std::nullopt) {
    if (!(proposal.phi > 0.0))
        throw InvalidConfig("line search requires a positive per-block gap");
    const double mu0 = mu_x ? *mu_x : mu_value(problem, x);
    double step = 1.0;
    for (int m = 0; m <= max_m; ++m, step *= theta) {
        BlockVector trial = apply_block_step(x, proposal.block, proposal.y, step);
        const double mu_t = mu_value(problem, trial);
        if (mu_t <= mu0 - beta * step * proposal.phi) return {step, m, mu_t};
    }
    throw StepsizeUnderflow("no acceptable step above theta^" + std::to_string(max_m) +
                            "; value and gradient oracles disagree");
}

struct ConvexRuleResult {
    double lambda = 0.0;
    int exponent = 0;
};

/// Convex-case rule: smallest m with
///   <g_s(x + theta^m d), d_s> + theta^-m [h_s(x_s + theta^m d_s) - h_s(x_s)]
///     <= -beta phi_s(x).
/// Each probe costs one partial gradient call and no function value;
/// acceptance implies the backtracking inequality when f is convex.
inline ConvexRuleResult convex_rule_search(const CompositeProblem& problem, const BlockVector& x,
                                           const BlockProposal& proposal, double beta, double theta,
                                           int max_m) {
    if (!problem.smooth->convex())
        throw NotDeclaredConvex("convex-case rule requires a convex smooth part");
    if (!(proposal.phi > 0.0))
        throw InvalidConfig("line search requires a positive per-block gap");

    const std::size_t s = proposal.block;
    auto xs = x.block(s);
    const BlockTerm& term = *problem.terms[s];
    const double h_x = term.h_value(xs);

    std::vector<double> d(xs.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = proposal.y[j] - xs[j];

    double step = 1.0;
    for (int m = 0; m <= max_m; ++m, step *= theta) {
        BlockVector trial = apply_block_step(x, s, proposal.y, step);
        std::vector<double> g = problem.smooth->partial_gradient(trial, s);
        const double lhs = detail::dot(g, d) + (term.h_value(trial.block(s)) - h_x) / step;
        if (lhs <= -beta * proposal.phi) return {step, m};
    }
    throw StepsizeUnderflow("no acceptable step above theta^" + std::to_string(max_m) +
                            "; gradient oracle inconsistent with convexity");
}

/// Pre-set stepsize for blocks with a Lipschitz partial gradient:
///   lambda = min(1, 2 (1 - beta) phi / (||d||^2 L)).
/// Costs no oracle calls.
inline double lipschitz_step(const BlockProposal& proposal, double d_norm, double lipschitz_constant,
                             double beta) {
    if (!(lipschitz_constant > 0.0)) throw InvalidConfig("Lipschitz constant must be positive");
    if (!(d_norm > 0.0)) throw InvalidConfig("direction norm must be positive");
    return std::min(1.0, 2.0 * (1.0 - beta) * proposal.phi / (d_norm * d_norm * lipschitz_constant));
}

namespace detail {

struct CycleState {
    std::size_t next_block = 0;
    std::size_t iterations_used = 0;
    std::size_t global_iteration = 0;
    double mu_current = 0.0;
    std::mt19937 rng;
};

struct Selection {
    std::optional<BlockProposal> chosen;
    double exit_gap = 0.0; // valid when no block was chosen; sum over the full scan
};

/// Step 1 of the basic cycle: find a block with phi_i >= delta. Every
/// probed block costs one partial gradient call. When the scan wraps
/// without a hit, the n proposals form the verification scan and their
/// gap sum is returned.
inline Selection select_block(const CompositeProblem& problem, const BlockVector& x, double delta,
                              const SolverConfig& config, CycleState& state) {
    const std::size_t n = problem.blocks();
    Selection sel;

    auto scan = [&](auto next_index) -> Selection {
        double sum = 0.0;
        double best_phi = -1.0;
        std::optional<BlockProposal> best;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = next_index(k);
            BlockProposal prop = block_proposal(problem, x, i);
            if (config.selection == BlockSelection::greedy_max) {
                sum += prop.phi;
                if (prop.phi > best_phi) {
                    best_phi = prop.phi;
                    best = std::move(prop);
                }
            } else {
                if (prop.phi >= delta) {
                    state.next_block = (i + 1) % n;
                    return {std::move(prop), 0.0};
                }
                sum += prop.phi;
            }
        }
        if (config.selection == BlockSelection::greedy_max && best_phi >= delta) {
            state.next_block = (best->block + 1) % n;
            return {std::move(best), 0.0};
        }
        return {std::nullopt, sum};
    };

    switch (config.selection) {
        case BlockSelection::cyclic_first: {
            const std::size_t start = state.next_block;
            return scan([&](std::size_t k) { return (start + k) % n; });
        }
        case BlockSelection::greedy_max:
            return scan([](std::size_t k) { return k; });
        case BlockSelection::random: {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), state.rng);
            return scan([&](std::size_t k) { return order[k]; });
        }
    }
    return sel;
}

struct CycleOutcome {
    BlockVector z;
    double exit_gap = 0.0;
    bool budget_hit = false;
};

inline CycleOutcome basic_cycle_run(const CompositeProblem& problem, BlockVector x, double delta,
                                    const SolverConfig& config, CycleState& state, std::size_t stage,
                                    std::vector<IterationRecord>& records) {
    for (;;) {
        if (state.iterations_used >= config.max_iterations)
            return {std::move(x), 0.0, true};

        Selection sel = select_block(problem, x, delta, config, state);
        if (!sel.chosen)
            return {std::move(x), sel.exit_gap, false}; // Step 2: all blocks delta-stationary

        const BlockProposal& prop = *sel.chosen;
        double lambda = 0.0;
        int exponent = -1;
        double mu_next = 0.0;

        switch (config.rule) {
            case StepsizeRule::armijo: {
                LineSearchResult r = armijo_search(problem, x, prop, config.beta, config.theta,
                                                   config.max_armijo_exponent, state.mu_current);
                lambda = r.lambda;
                exponent = r.exponent;
                x = apply_block_step(x, prop.block, prop.y, lambda);
                mu_next = r.mu_next;
                break;
            }
            case StepsizeRule::convex_rule: {
                ConvexRuleResult r = convex_rule_search(problem, x, prop, config.beta, config.theta,
                                                        config.max_armijo_exponent);
                lambda = r.lambda;
                exponent = r.exponent;
                x = apply_block_step(x, prop.block, prop.y, lambda);
                mu_next = mu_value(problem, x);
                break;
            }
            case StepsizeRule::lipschitz: {
                auto xs = x.block(prop.block);
                std::vector<double> d(xs.size());
                for (std::size_t j = 0; j < d.size(); ++j) d[j] = prop.y[j] - xs[j];
                lambda = lipschitz_step(prop, norm2(d), *problem.terms[prop.block]->lipschitz(),
                                        config.beta);
                x = apply_block_step(x, prop.block, prop.y, lambda);
                mu_next = mu_value(problem, x);
                break;
            }
        }

        state.mu_current = mu_next;
        ++state.iterations_used;
        records.push_back({stage, state.global_iteration++, prop.block, prop.phi, lambda, exponent,
                           mu_next, problem.smooth->value_calls(),
                           problem.smooth->partial_gradient_calls()});
    }
}

inline void finish_trace(RunTrace& trace, BlockVector z, double gap, Termination reason,
                         const CompositeProblem& problem, const CycleState& state) {
    trace.z = std::move(z);
    trace.final_gap = gap;
    trace.reason = reason;
    trace.mu_final = trace.records.empty() ? trace.mu_initial : state.mu_current;
    trace.value_calls = problem.smooth->value_calls();
    trace.gradient_calls = problem.smooth->partial_gradient_calls();
    trace.reported_iterations = trace.records.size();
    trace.reported_gradient_calls = trace.gradient_calls;
}

} // namespace detail

struct BasicCycleResult {
    BlockVector z;
    std::vector<IterationRecord> records;
    /// Gap sum of the terminating verification scan; NaN when the
    /// iteration budget stopped the cycle first.
    double exit_gap = 0.0;
    bool budget_hit = false;
};

/// Basic cycle: repeatedly pick a block whose gap is at least delta and
/// take a descent step on it; stop once a full scan certifies
/// phi_i(z) < delta for every block.
inline BasicCycleResult basic_cycle(const CompositeProblem& problem, const BlockVector& x0,
                                    double delta, const SolverConfig& config) {
    if (!(delta > 0.0)) throw InvalidConfig("delta must be positive");
    config.validate(problem);
    detail::CycleState state;
    state.rng.seed(config.seed);
    state.mu_current = mu_value(problem, x0);
    std::vector<IterationRecord> records;
    auto out = detail::basic_cycle_run(problem, x0, delta, config, state, 1, records);
    return {std::move(out.z), std::move(records),
            out.budget_hit ? std::numeric_limits<double>::quiet_NaN() : out.exit_gap,
            out.budget_hit};
}

/// Upper level: stages l = 1, 2, ... run the basic cycle with
/// delta_l = nu^l delta0 and stop once the total gap at the stage output
/// is at most epsilon. The stage-exit scan already evaluates all n block
/// gaps at the final point, so its sum is the reported gap.
inline RunTrace solve_adaptive(const CompositeProblem& problem, const BlockVector& z0,
                               const SolverConfig& config) {
    config.validate(problem);
    problem.smooth->reset_counters();

    RunTrace trace(z0);

    // Initial scan: gives the default delta0 and catches an already
    // stationary start.
    double gap0 = 0.0;
    double max_phi = 0.0;
    for (std::size_t i = 0; i < problem.blocks(); ++i) {
        BlockProposal prop = block_proposal(problem, z0, i);
        gap0 += prop.phi;
        max_phi = std::max(max_phi, prop.phi);
    }
    trace.mu_initial = mu_value(problem, z0);
    trace.mu_final = trace.mu_initial;
    if (gap0 <= config.epsilon) {
        trace.final_gap = gap0;
        trace.reason = Termination::converged;
        trace.value_calls = problem.smooth->value_calls();
        trace.gradient_calls = problem.smooth->partial_gradient_calls();
        trace.reported_gradient_calls = trace.gradient_calls;
        return trace;
    }

    detail::CycleState state;
    state.rng.seed(config.seed);
    state.mu_current = trace.mu_initial;

    const double delta0 = config.delta0.value_or(max_phi / 2.0);
    double delta = delta0;
    BlockVector z = z0;

    for (std::size_t stage = 1; stage <= config.max_stages; ++stage) {
        delta *= config.nu;
        const std::size_t before = trace.records.size();
        detail::CycleOutcome out =
            detail::basic_cycle_run(problem, std::move(z), delta, config, state, stage, trace.records);
        z = std::move(out.z);
        trace.stages = stage;

        if (out.budget_hit) {
            const double gap = total_gap(problem, z);
            trace.stage_records.push_back({stage, delta, trace.records.size() - before, gap});
            detail::finish_trace(trace, std::move(z), gap, Termination::iteration_budget, problem,
                                 state);
            return trace;
        }

        trace.stage_records.push_back({stage, delta, trace.records.size() - before, out.exit_gap});
        if (out.exit_gap <= config.epsilon) {
            detail::finish_trace(trace, std::move(z), out.exit_gap, Termination::converged, problem,
                                 state);
            return trace;
        }
    }

    const double gap = total_gap(problem, z);
    detail::finish_trace(trace, std::move(z), gap, Termination::stage_budget, problem, state);
    return trace;
}

/// Classic conditional gradient baseline: every iteration solves all n
/// block subproblems, steps along the full direction y(x) - x under the
/// backtracking rule on the total gap, and stops once phi(x) <= epsilon.
/// The raw gradient counter ends at (it + 1) n; the reported cl is it * n.
inline RunTrace solve_classic_cg(const CompositeProblem& problem, const BlockVector& x0,
                                 double epsilon, double beta = 0.3, double theta = 0.5,
                                 std::size_t max_iterations = 2'000'000,
                                 int max_armijo_exponent = 60) {
    if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be positive");
    problem.smooth->reset_counters();

    RunTrace trace(x0);
    const std::size_t n = problem.blocks();
    BlockVector x = x0;
    double mu = mu_value(problem, x);
    trace.mu_initial = mu;

    for (;;) {
        BlockVector y(problem.partition);
        double phi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            BlockProposal prop = block_proposal(problem, x, i);
            phi += prop.phi;
            auto bi = y.block(i);
            for (std::size_t j = 0; j < bi.size(); ++j) bi[j] = prop.y[j];
        }

        if (phi <= epsilon) {
            trace.reason = Termination::converged;
            trace.final_gap = phi;
            break;
        }
        if (trace.records.size() >= max_iterations) {
            trace.reason = Termination::iteration_budget;
            trace.final_gap = phi;
            break;
        }

        double step = 1.0;
        double mu_t = 0.0;
        int accepted = -1;
        for (int m = 0; m <= max_armijo_exponent; ++m, step *= theta) {
            BlockVector trial = x;
            for (std::size_t i = 0; i < n; ++i) {
                auto bi = trial.block(i);
                auto yi = y.block(i);
                if (step == 1.0)
                    for (std::size_t j = 0; j < bi.size(); ++j) bi[j] = yi[j];
                else
                    for (std::size_t j = 0; j < bi.size(); ++j) bi[j] += step * (yi[j] - bi[j]);
            }
            mu_t = mu_value(problem, trial);
            if (mu_t <= mu - beta * step * phi) {
                accepted = m;
                x = std::move(trial);
                break;
            }
        }
        if (accepted < 0)
            throw StepsizeUnderflow("no acceptable step above theta^" +
                                    std::to_string(max_armijo_exponent));

        mu = mu_t;
        trace.records.push_back({1, trace.records.size(), IterationRecord::kFullStep, phi, step,
                                 accepted, mu, problem.smooth->value_calls(),
                                 problem.smooth->partial_gradient_calls()});
    }

    trace.z = std::move(x);
    trace.stages = 1;
    trace.mu_final = mu;
    trace.value_calls = problem.smooth->value_calls();
    trace.gradient_calls = problem.smooth->partial_gradient_calls();
    trace.reported_iterations = trace.records.size();
    trace.reported_gradient_calls = trace.reported_iterations * n;
    trace.stage_records.push_back({1, epsilon, trace.records.size(), trace.final_gap});
    return trace;
}

} // namespace blockcg
