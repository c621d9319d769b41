#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "blockcg/blocks.hpp"
#include "blockcg/problem.hpp"

namespace blockcg {

enum class BenchmarkObjective { f1, f1_plus_f2 };

/// Quadratic test family over a product of standard simplices:
///   f1(x) = 0.5 <P x, x> - <q, x>
/// with p_ij = sin(i) cos(j) for i < j (mirrored below), a strictly
/// dominant diagonal p_ii = sum_{s != i} |p_is| + 1, and q_j = sin(j)/j.
/// The composite variant adds f2(x) = 1 / (<c, x> + tau), c_i = 2 + sin(i).
/// All index formulas are 1-based.
struct BenchmarkSpec {
    std::size_t N = 10;
    std::size_t n = 5;
    BenchmarkObjective objective = BenchmarkObjective::f1;
    double tau = 5.0;

    std::size_t block_dim() const {
        if (n == 0 || N % n != 0)
            throw DimensionMismatch("N must be divisible by n");
        return N / n;
    }
};

namespace detail {

class BenchmarkOracle final : public SmoothOracle {
public:
    BenchmarkOracle(BenchmarkSpec spec, std::shared_ptr<const BlockPartition> partition)
        : spec_(spec), partition_(std::move(partition)), P_(spec.N * spec.N, 0.0), q_(spec.N),
          c_(spec.N) {
        const std::size_t N = spec_.N;
        for (std::size_t i = 1; i <= N; ++i)
            for (std::size_t j = i + 1; j <= N; ++j) {
                const double v = std::sin(double(i)) * std::cos(double(j));
                P_[(i - 1) * N + (j - 1)] = v;
                P_[(j - 1) * N + (i - 1)] = v;
            }
        for (std::size_t i = 1; i <= N; ++i) {
            double row = 0.0;
            for (std::size_t s = 1; s <= N; ++s)
                if (s != i) row += std::abs(P_[(i - 1) * N + (s - 1)]);
            P_[(i - 1) * N + (i - 1)] = row + 1.0;
        }
        for (std::size_t j = 1; j <= N; ++j) q_[j - 1] = std::sin(double(j)) / double(j);
        for (std::size_t i = 1; i <= N; ++i) c_[i - 1] = 2.0 + std::sin(double(i));

        // Diagonal dominance makes f1 convex; c >= 1 keeps <c, x> + tau
        // bounded away from zero on the simplex product.
        for (std::size_t i = 0; i < N; ++i) {
            double off = 0.0;
            for (std::size_t s = 0; s < N; ++s)
                if (s != i) off += std::abs(P_[i * N + s]);
            if (P_[i * N + i] < off)
                throw Error("benchmark matrix lost diagonal dominance");
            if (c_[i] < 1.0) throw Error("benchmark c has entries below 1");
        }
    }

    bool convex() const override { return true; }

    double row_block_frobenius(std::size_t i) const {
        const std::size_t t = partition_->size(i);
        const std::size_t off = partition_->offset(i);
        double s = 0.0;
        for (std::size_t a = 0; a < t; ++a)
            for (std::size_t b = 0; b < t; ++b) {
                const double v = P_[(off + a) * spec_.N + (off + b)];
                s += v * v;
            }
        return std::sqrt(s);
    }

    double block_c_norm_sq(std::size_t i) const {
        const std::size_t t = partition_->size(i);
        const std::size_t off = partition_->offset(i);
        double s = 0.0;
        for (std::size_t a = 0; a < t; ++a) s += c_[off + a] * c_[off + a];
        return s;
    }

    const BenchmarkSpec& spec() const { return spec_; }

private:
    double do_value(const BlockVector& x) const override {
        const std::size_t N = spec_.N;
        double quad = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < N; ++j) row += P_[i * N + j] * x[j];
            quad += row * x[i];
        }
        double v = 0.5 * quad - dot(q_, x.data());
        if (spec_.objective == BenchmarkObjective::f1_plus_f2)
            v += 1.0 / (dot(c_, x.data()) + spec_.tau);
        return v;
    }

    std::vector<double> do_partial_gradient(const BlockVector& x, std::size_t i) const override {
        const std::size_t N = spec_.N;
        const std::size_t t = partition_->size(i);
        const std::size_t off = partition_->offset(i);
        std::vector<double> g(t);
        for (std::size_t a = 0; a < t; ++a) {
            double row = 0.0;
            for (std::size_t j = 0; j < N; ++j) row += P_[(off + a) * N + j] * x[j];
            g[a] = row - q_[off + a];
        }
        if (spec_.objective == BenchmarkObjective::f1_plus_f2) {
            const double den = dot(c_, x.data()) + spec_.tau;
            const double scale = -1.0 / (den * den);
            for (std::size_t a = 0; a < t; ++a) g[a] += scale * c_[off + a];
        }
        return g;
    }

    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
        return s;
    }

    BenchmarkSpec spec_;
    std::shared_ptr<const BlockPartition> partition_;
    std::vector<double> P_;
    std::vector<double> q_;
    std::vector<double> c_;
};

/// Simplex block carrying a partial Lipschitz constant.
class BenchmarkSimplexBlock final : public BlockTerm {
public:
    BenchmarkSimplexBlock(std::size_t dim, double lipschitz)
        : inner_(dim, 1.0), lipschitz_(lipschitz) {}

    std::size_t dim() const override { return inner_.dim(); }
    double h_value(std::span<const double> y) const override { return inner_.h_value(y); }
    LinearizedSolution solve_linearized(std::span<const double> g) const override {
        return inner_.solve_linearized(g);
    }
    bool contains(std::span<const double> y, double tol = kFeasTol) const override {
        return inner_.contains(y, tol);
    }
    double diameter() const override { return inner_.diameter(); }
    std::optional<double> lipschitz() const override { return lipschitz_; }
    std::vector<double> random_point(std::mt19937& rng) const override {
        return inner_.random_point(rng);
    }

private:
    SimplexBlock inner_;
    double lipschitz_;
};

} // namespace detail

/// The benchmark problem over n standard simplices. Block Lipschitz
/// constants are Frobenius-norm overestimates of the diagonal blocks of
/// P, plus the f2 curvature bound 2 ||c_i||^2 / tau^3 when present.
inline CompositeProblem build_benchmark(const BenchmarkSpec& spec) {
    const std::size_t t = spec.block_dim();
    auto partition = BlockPartition::uniform(spec.n, t);
    auto oracle = std::make_shared<detail::BenchmarkOracle>(spec, partition);

    std::vector<std::shared_ptr<const BlockTerm>> terms;
    terms.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double L = oracle->row_block_frobenius(i);
        if (spec.objective == BenchmarkObjective::f1_plus_f2)
            L += 2.0 * oracle->block_c_norm_sq(i) / (spec.tau * spec.tau * spec.tau);
        terms.push_back(std::make_shared<detail::BenchmarkSimplexBlock>(t, L));
    }
    return CompositeProblem{partition, oracle, std::move(terms)};
}

/// The experiments' common starting point (1/t) e.
inline BlockVector benchmark_start(const BenchmarkSpec& spec, const CompositeProblem& problem) {
    const double t = double(spec.block_dim());
    BlockVector x(problem.partition);
    for (double& v : x.data()) v = 1.0 / t;
    return x;
}

} // namespace blockcg
