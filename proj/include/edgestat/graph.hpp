#pragma once

#include "edgestat/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace edgestat {

// Subset of {0..n-1} as a packed bitset with a cached popcount.
// Immutable once shared across workers; mutation is for construction and
// enumerator-internal state only.
class VertexSet {
  public:
    VertexSet() = default;
    explicit VertexSet(int universe);
    static VertexSet full(int universe);
    static VertexSet of(int universe, std::span<const int> vertices);

    int universe_size() const { return n_; }
    int size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool contains(int v) const {
        return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u;
    }
    void add(int v);
    void remove(int v);
    void clear();

    std::span<const std::uint64_t> words() const { return words_; }
    std::vector<int> to_vector() const;

    bool operator==(const VertexSet&) const = default;

  private:
    int n_ = 0;
    int size_ = 0;
    std::vector<std::uint64_t> words_;
};

class Graph;
namespace detail {
void graph_set_edge(Graph& g, int u, int v);
}

// Immutable simple graph with packed adjacency rows; safe to share across
// threads after construction.
class Graph {
  public:
    // Duplicate edges collapse; throws on loops or out-of-range endpoints.
    static Graph from_edges(int n, std::span<const std::pair<int, int>> edges);
    static Graph empty_graph(int n);
    // Edges from the low C(n,2) bits of `mask`, pair (i,j), i<j, at bit
    // j(j-1)/2 + i (the graph6 bit order). Requires C(n,2) <= 64.
    static Graph from_edge_mask(int n, std::uint64_t mask);

    int n() const { return n_; }
    int words_per_row() const { return wpr_; }
    bool has_edge(int u, int v) const {
        return (rows_[static_cast<std::size_t>(u) * wpr_ + (static_cast<std::size_t>(v) >> 6)] >> (v & 63)) & 1u;
    }
    std::span<const std::uint64_t> row(int v) const {
        return {rows_.data() + static_cast<std::size_t>(v) * wpr_, static_cast<std::size_t>(wpr_)};
    }
    int degree(int v) const;
    long long edge_count() const;
    Graph complement() const;

    bool operator==(const Graph&) const = default;

  private:
    Graph(int n, int wpr) : n_(n), wpr_(wpr), rows_(static_cast<std::size_t>(n) * wpr_) {}
    void set_edge(int u, int v);

    int n_ = 0;
    int wpr_ = 0;
    std::vector<std::uint64_t> rows_;

    friend Graph generate(const struct FamilySpec& spec);
    friend Graph parse_graph6(std::string_view line);
    friend void detail::graph_set_edge(Graph& g, int u, int v);
};

// e(S): number of edges of g with both endpoints in s.
long long induced_edges(const Graph& g, const VertexSet& s);
// Same via pairwise adjacency tests; cheaper for small vertex lists and
// avoids building a bitset in sampling loops.
long long induced_edges(const Graph& g, std::span<const int> vertices);

// e(v, S): neighbours of v inside s (v itself ignored if present).
int degree_into(const Graph& g, int v, const VertexSet& s);

// --- graph6 short form (n < 63) ------------------------------------------

// One graph6 line; a single trailing '\n' (or "\r\n") is tolerated.
Graph parse_graph6(std::string_view line);
std::string write_graph6(const Graph& g);

// --- generators ------------------------------------------------------------

struct FamilySpec {
    struct Empty {
        int n;
    };
    struct Complete {
        int n;
    };
    struct CompleteBipartite {
        int a, b;
    };
    struct Gnp {
        int n;
        double p;
        std::uint64_t seed;
    };
    struct UnionOf {
        std::vector<FamilySpec> parts; // disjoint union, vertex-offset order
    };
    std::variant<Empty, Complete, CompleteBipartite, Gnp, UnionOf> v;

    int vertex_count() const;
};

// Deterministic for deterministic variants; gnp(n,p,seed) is a pure function
// of its arguments (Philox stream keyed by the spec seed, pairs in colex
// order).
Graph generate(const FamilySpec& spec);

// --- heavy/light split -------------------------------------------------------

struct HeavyLightSplit {
    VertexSet heavy;
    VertexSet light;
    double threshold; // n * ell^(1/3) / k, for reporting only
};

// Membership decided in exact integer arithmetic:
// deg >= n*ell^(1/3)/k  <=>  (k*deg)^3 >= n^3*ell.
HeavyLightSplit heavy_light(const Graph& g, int k, long long ell);

} // namespace edgestat
