#pragma once

#include "edgestat/graph.hpp"
#include "edgestat/rational.hpp"
#include "edgestat/subset_iter.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace edgestat {

// Raw subset counts per induced edge count; total == C(n,k).
struct SubsetCounts {
    int k = 0;
    long long support_max = 0; // C(k,2)
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
};

SubsetCounts exact_counts(const Graph& g, int k,
                          std::uint64_t budget = kDefaultEnumBudget);

// Exact law of the induced edge count of a uniform k-subset.
struct DistTable {
    int k = 0;
    long long support_max = 0;
    std::map<long long, Rational> probs; // nonzero entries only

    Rational prob(long long ell) const;
    static DistTable from_counts(const SubsetCounts& c);
};

DistTable exact_pmf(const Graph& g, int k,
                    std::uint64_t budget = kDefaultEnumBudget);
Rational exact_prob(const Graph& g, int k, long long ell,
                    std::uint64_t budget = kDefaultEnumBudget);

// Max of exact_prob over a space of n-vertex graphs, with a witness.
struct ExtremalResult {
    Rational value;
    Graph witness;
    std::uint64_t graphs_scanned = 0;
    std::string source;
};

// All 2^C(n,2) labeled graphs; n <= 7. Sharded across threads with a
// deterministic first-in-scan-order tie-break (threads = 0 picks the
// hardware count).
ExtremalResult max_over_graphs_exhaustive(int n, int k, long long ell,
                                          int threads = 0);

// Streams graph6 lines from a catalog file; every line must decode to an
// n-vertex graph.
ExtremalResult max_over_graphs_catalog(const std::string& path, int n, int k,
                                       long long ell);

struct MonotonicityReport {
    int k = 0;
    long long ell = 0;
    std::vector<std::pair<int, Rational>> values; // in n order
    bool monotone = true; // false would indicate an implementation bug
};

MonotonicityReport monotonicity_report(const std::vector<int>& n_list, int k,
                                       long long ell, int threads = 0);

} // namespace edgestat
