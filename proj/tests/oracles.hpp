#pragma once

// Test-only oracles, kept independent of the library's enumeration and
// counting paths: plain adjacency matrices, lexicographic index loops,
// direct double loops.

#include <cstdint>
#include <vector>

namespace oracle {

using AdjMatrix = std::vector<std::vector<bool>>;

inline AdjMatrix from_mask(int n, std::uint64_t mask) {
    AdjMatrix adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    int bit = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++bit)
            if ((mask >> bit) & 1u) {
                adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
                adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
            }
    return adj;
}

inline long long edges_in(const AdjMatrix& adj, const std::vector<int>& subset) {
    long long e = 0;
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            e += adj[static_cast<std::size_t>(subset[a])][static_cast<std::size_t>(subset[b])];
    return e;
}

// advances a lexicographic index combination; false after the last one
inline bool next_combination(std::vector<int>& idx, int n) {
    int k = static_cast<int>(idx.size());
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

// histogram of induced edge counts over all k-subsets
inline std::vector<std::uint64_t> subset_counts(const AdjMatrix& adj, int k) {
    int n = static_cast<int>(adj.size());
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(k) * (k - 1) / 2 + 1, 0);
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    do {
        ++counts[static_cast<std::size_t>(edges_in(adj, idx))];
    } while (next_combination(idx, n));
    return counts;
}

} // namespace oracle
