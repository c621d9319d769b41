#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockcg/errors.hpp"

namespace blockcg {

/// Partition of the coordinate index set {0..N-1} into n consecutive
/// blocks. Block i covers [offset(i), offset(i) + size(i)).
class BlockPartition {
public:
    explicit BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
        if (sizes_.empty())
            throw DimensionMismatch("partition needs at least one block");
        offsets_.reserve(sizes_.size() + 1);
        offsets_.push_back(0);
        for (std::size_t s : sizes_) {
            if (s == 0)
                throw DimensionMismatch("block sizes must be positive");
            offsets_.push_back(offsets_.back() + s);
        }
    }

    std::size_t blocks() const { return sizes_.size(); }
    std::size_t total() const { return offsets_.back(); }
    std::size_t size(std::size_t i) const { return sizes_.at(i); }
    std::size_t offset(std::size_t i) const { return offsets_.at(i); }

    const std::vector<std::size_t>& sizes() const { return sizes_; }

    /// n blocks of t coordinates each.
    static std::shared_ptr<const BlockPartition> uniform(std::size_t n, std::size_t t) {
        return std::make_shared<const BlockPartition>(std::vector<std::size_t>(n, t));
    }

    static std::shared_ptr<const BlockPartition> of(std::vector<std::size_t> sizes) {
        return std::make_shared<const BlockPartition>(std::move(sizes));
    }

    friend bool operator==(const BlockPartition& a, const BlockPartition& b) {
        return a.sizes_ == b.sizes_;
    }

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
};

/// Dense vector addressable per block of its partition.
class BlockVector {
public:
    explicit BlockVector(std::shared_ptr<const BlockPartition> partition)
        : partition_(std::move(partition)), data_(partition_->total(), 0.0) {}

    BlockVector(std::shared_ptr<const BlockPartition> partition, std::vector<double> data)
        : partition_(std::move(partition)), data_(std::move(data)) {
        if (data_.size() != partition_->total())
            throw DimensionMismatch("vector length " + std::to_string(data_.size()) +
                                    " does not match partition total " +
                                    std::to_string(partition_->total()));
    }

    std::span<double> block(std::size_t i) {
        return {data_.data() + partition_->offset(i), partition_->size(i)};
    }
    std::span<const double> block(std::size_t i) const {
        return {data_.data() + partition_->offset(i), partition_->size(i)};
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }
    std::size_t size() const { return data_.size(); }

    double& operator[](std::size_t j) { return data_[j]; }
    double operator[](std::size_t j) const { return data_[j]; }

    const BlockPartition& partition() const { return *partition_; }
    std::shared_ptr<const BlockPartition> partition_ptr() const { return partition_; }

private:
    std::shared_ptr<const BlockPartition> partition_;
    std::vector<double> data_;
};

/// x with block i moved to x_i + lambda (y_i - x_i); all other blocks are
/// copied bit for bit. lambda == 1 lands on y_i exactly.
inline BlockVector apply_block_step(const BlockVector& x, std::size_t i,
                                    std::span<const double> y_i, double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw StepOutOfRange("step length must lie in (0, 1], got " + std::to_string(lambda));
    if (y_i.size() != x.partition().size(i))
        throw DimensionMismatch("block step target has wrong length");
    BlockVector out = x;
    auto b = out.block(i);
    if (lambda == 1.0) {
        for (std::size_t j = 0; j < b.size(); ++j) b[j] = y_i[j];
    } else {
        for (std::size_t j = 0; j < b.size(); ++j) b[j] += lambda * (y_i[j] - b[j]);
    }
    return out;
}

} // namespace blockcg
