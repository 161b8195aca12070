#pragma once

#include <atomic>
#include <vector>

#include "ampblas/matrix.hpp"

namespace ampblas {

/// Nonnegative integer shares summing to `total`, proportional to `weights`
/// under largest-remainder rounding with ties going to the earlier entry.
std::vector<index_t> split_static(index_t total, const std::vector<double>& weights);

/// Even split: split_static with equal weights.
std::vector<index_t> split_even(index_t total, int parts);

/// Contiguous [begin, end) range of entry `part` in a split.
struct Range {
    index_t begin = 0;
    index_t end = 0;
    index_t size() const { return end - begin; }
    bool empty() const { return begin >= end; }
};

Range share_range(const std::vector<index_t>& shares, int part);

struct Chunk {
    int class_id = 0;
    index_t start = 0;
    index_t width = 0;
};

/// Deterministic replay of a dynamic chunk dispenser: each claim in
/// `claim_sequence` takes the next slab of its class stride (or the final
/// remainder). The sequence is cycled if the range is not yet covered, so the
/// result always partitions [0, total).
std::vector<Chunk> dispense_chunks(index_t total, const std::vector<index_t>& class_strides,
                                   const std::vector<int>& claim_sequence);

/// Shared fetch-and-advance cursor over [0, total); the live counterpart of
/// dispense_chunks used inside parallel kernels. claim() is linearizable.
class ChunkDispenser {
public:
    explicit ChunkDispenser(index_t total) : total_(total) {}

    void reset(index_t total) {
        total_ = total;
        cursor_.store(0, std::memory_order_relaxed);
    }

    /// Claims the next slab of at most `stride` iterations; width 0 means the
    /// range is exhausted.
    Chunk claim(int class_id, index_t stride) {
        index_t start = cursor_.fetch_add(stride, std::memory_order_relaxed);
        if (start >= total_) return {class_id, total_, 0};
        index_t width = stride;
        if (start + width > total_) width = total_ - start;
        return {class_id, start, width};
    }

private:
    index_t total_ = 0;
    std::atomic<index_t> cursor_{0};
};

}  // namespace ampblas
