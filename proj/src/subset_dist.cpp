#include "edgestat/subset_dist.hpp"

#include "edgestat/subset_iter.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <fstream>
#include <thread>

namespace edgestat {

std::vector<std::int8_t> subset_move_script(int n, int k) {
    std::vector<std::int8_t> script;
    if (n > 120) throw std::invalid_argument("subset_move_script: n too large for int8 ops");
    for_each_ksubset_revolving(
        n, k, [&](int v) { script.push_back(static_cast<std::int8_t>(v + 1)); },
        [&](int v) { script.push_back(static_cast<std::int8_t>(-(v + 1))); },
        [&] { script.push_back(0); });
    return script;
}

SubsetCounts exact_counts(const Graph& g, int k, std::uint64_t budget) {
    if (k < 1 || k > g.n())
        throw std::invalid_argument("exact_counts: need 1 <= k <= n");
    std::uint64_t total = 0;
    if (!binomial_fits(g.n(), k, budget, total))
        throw BudgetExceeded("exact_counts: C(n,k) exceeds enumeration budget");

    SubsetCounts out;
    out.k = k;
    out.support_max = static_cast<long long>(k) * (k - 1) / 2;
    out.counts.assign(static_cast<std::size_t>(out.support_max) + 1, 0);
    out.total = total;

    VertexSet members(g.n());
    long long cur = 0;
    for_each_ksubset_revolving(
        g.n(), k,
        [&](int v) {
            cur += degree_into(g, v, members);
            members.add(v);
        },
        [&](int v) {
            members.remove(v);
            cur -= degree_into(g, v, members);
        },
        [&] { ++out.counts[static_cast<std::size_t>(cur)]; });
    return out;
}

Rational DistTable::prob(long long ell) const {
    auto it = probs.find(ell);
    return it == probs.end() ? Rational(0) : it->second;
}

DistTable DistTable::from_counts(const SubsetCounts& c) {
    DistTable t;
    t.k = c.k;
    t.support_max = c.support_max;
    for (std::size_t ell = 0; ell < c.counts.size(); ++ell)
        if (c.counts[ell]) t.probs[static_cast<long long>(ell)] = Rational(c.counts[ell], c.total);
    return t;
}

DistTable exact_pmf(const Graph& g, int k, std::uint64_t budget) {
    return DistTable::from_counts(exact_counts(g, k, budget));
}

Rational exact_prob(const Graph& g, int k, long long ell, std::uint64_t budget) {
    return exact_pmf(g, k, budget).prob(ell);
}

namespace {

// Count of k-subsets of the mask-encoded n-vertex graph inducing exactly
// `ell` edges, by script replay over single-word rows.
std::uint64_t count_ell_subsets_mask(int n, std::uint64_t mask, long long ell,
                                     const std::vector<std::int8_t>& script) {
    std::array<std::uint64_t, 12> rows{};
    int bit = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++bit)
            if ((mask >> bit) & 1u) {
                rows[static_cast<std::size_t>(i)] |= 1ULL << j;
                rows[static_cast<std::size_t>(j)] |= 1ULL << i;
            }
    std::uint64_t members = 0;
    long long cur = 0;
    std::uint64_t hits = 0;
    for (std::int8_t op : script) {
        if (op > 0) {
            int v = op - 1;
            cur += std::popcount(rows[static_cast<std::size_t>(v)] & members);
            members |= 1ULL << v;
        } else if (op < 0) {
            int v = -op - 1;
            members &= ~(1ULL << v);
            cur -= std::popcount(rows[static_cast<std::size_t>(v)] & members);
        } else {
            hits += (cur == ell);
        }
    }
    return hits;
}

} // namespace

ExtremalResult max_over_graphs_exhaustive(int n, int k, long long ell, int threads) {
    if (n < 1 || n > 7)
        throw std::invalid_argument("max_over_graphs_exhaustive: n must be in 1..7");
    if (k < 1 || k > n) throw std::invalid_argument("max_over_graphs_exhaustive: need 1 <= k <= n");
    int nbits = n * (n - 1) / 2;
    std::uint64_t total_graphs = 1ULL << nbits;
    std::uint64_t denom = binomial(n, k).convert_to<std::uint64_t>();
    auto script = subset_move_script(n, k);

    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, 64));
    int nshards = std::max(64, threads * 8);
    std::uint64_t shard_size = (total_graphs + nshards - 1) / nshards;

    struct ShardBest {
        std::uint64_t count = 0;
        std::uint64_t mask = 0;
        bool any = false;
    };
    std::vector<ShardBest> best(static_cast<std::size_t>(nshards));
    std::atomic<int> next_shard{0};

    auto worker = [&] {
        for (;;) {
            int s = next_shard.fetch_add(1);
            if (s >= nshards) return;
            std::uint64_t lo = static_cast<std::uint64_t>(s) * shard_size;
            std::uint64_t hi = std::min(total_graphs, lo + shard_size);
            ShardBest b;
            for (std::uint64_t mask = lo; mask < hi; ++mask) {
                std::uint64_t c = count_ell_subsets_mask(n, mask, ell, script);
                if (!b.any || c > b.count) {
                    b.any = true;
                    b.count = c;
                    b.mask = mask;
                }
            }
            best[static_cast<std::size_t>(s)] = b;
        }
    };

    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // merge in shard order; strict improvement keeps the first graph in
    // overall scan order
    ShardBest overall;
    for (const auto& b : best) {
        if (b.any && (!overall.any || b.count > overall.count)) overall = b;
    }

    ExtremalResult r{Rational(overall.count, denom), Graph::from_edge_mask(n, overall.mask),
                     total_graphs, "exhaustive_labeled"};
    return r;
}

ExtremalResult max_over_graphs_catalog(const std::string& path, int n, int k, long long ell) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("max_over_graphs_catalog: cannot open " + path);
    std::uint64_t denom = binomial(n, k).convert_to<std::uint64_t>();

    std::string line;
    std::uint64_t scanned = 0;
    std::uint64_t best_count = 0;
    bool any = false;
    Graph witness = Graph::empty_graph(1);
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Graph g = parse_graph6(line);
        if (g.n() != n)
            throw std::invalid_argument("catalog line " + std::to_string(line_no) +
                                        ": expected " + std::to_string(n) + " vertices, got " +
                                        std::to_string(g.n()));
        SubsetCounts c = exact_counts(g, k);
        std::uint64_t hits =
            ell >= 0 && ell <= c.support_max ? c.counts[static_cast<std::size_t>(ell)] : 0;
        ++scanned;
        if (!any || hits > best_count) {
            any = true;
            best_count = hits;
            witness = g;
        }
    }
    if (!any) throw std::runtime_error("max_over_graphs_catalog: no graphs in " + path);
    return ExtremalResult{Rational(best_count, denom), witness, scanned, "catalog(" + path + ")"};
}

MonotonicityReport monotonicity_report(const std::vector<int>& n_list, int k, long long ell,
                                       int threads) {
    MonotonicityReport rep;
    rep.k = k;
    rep.ell = ell;
    Rational prev;
    bool have_prev = false;
    for (int n : n_list) {
        ExtremalResult r = max_over_graphs_exhaustive(n, k, ell, threads);
        rep.values.emplace_back(n, r.value);
        if (have_prev && r.value > prev) rep.monotone = false;
        prev = r.value;
        have_prev = true;
    }
    return rep;
}

} // namespace edgestat
