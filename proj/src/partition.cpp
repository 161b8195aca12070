#include "ampblas/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace ampblas {

std::vector<index_t> split_static(index_t total, const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("split_static: empty weights");
    if (total < 0) throw std::invalid_argument("split_static: negative total");
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("split_static: weights must be positive");
        wsum += w;
    }
    const int n = static_cast<int>(weights.size());
    std::vector<index_t> shares(n);
    std::vector<double> frac(n);
    index_t assigned = 0;
    for (int i = 0; i < n; ++i) {
        double exact = static_cast<double>(total) * weights[i] / wsum;
        shares[i] = static_cast<index_t>(exact);
        frac[i] = exact - static_cast<double>(shares[i]);
        assigned += shares[i];
    }
    index_t leftover = total - assigned;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return frac[a] > frac[b]; });
    for (index_t r = 0; r < leftover; ++r) ++shares[order[r % n]];
    return shares;
}

std::vector<index_t> split_even(index_t total, int parts) {
    return split_static(total, std::vector<double>(parts, 1.0));
}

Range share_range(const std::vector<index_t>& shares, int part) {
    Range r;
    for (int i = 0; i < part; ++i) r.begin += shares[i];
    r.end = r.begin + shares[part];
    return r;
}

std::vector<Chunk> dispense_chunks(index_t total, const std::vector<index_t>& class_strides,
                                   const std::vector<int>& claim_sequence) {
    for (index_t s : class_strides)
        if (s < 1) throw std::invalid_argument("dispense_chunks: strides must be >= 1");
    if (total > 0 && claim_sequence.empty())
        throw std::invalid_argument("dispense_chunks: empty claim sequence");
    std::vector<Chunk> out;
    index_t cursor = 0;
    std::size_t pos = 0;
    while (cursor < total) {
        int cls = claim_sequence[pos % claim_sequence.size()];
        ++pos;
        if (cls < 0 || cls >= static_cast<int>(class_strides.size()))
            throw std::invalid_argument("dispense_chunks: class id out of range");
        index_t width = std::min(class_strides[cls], total - cursor);
        out.push_back({cls, cursor, width});
        cursor += width;
    }
    return out;
}

}  // namespace ampblas
