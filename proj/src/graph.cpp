#include "edgestat/graph.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace edgestat {

namespace {

inline int words_for(int n) { return (n + 63) / 64; }

inline long long and_popcount(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b) {
    long long c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

} // namespace

// --- VertexSet ---------------------------------------------------------------

VertexSet::VertexSet(int universe)
    : n_(universe), words_(static_cast<std::size_t>(words_for(universe))) {
    if (universe < 0) throw std::invalid_argument("VertexSet: negative universe");
}

VertexSet VertexSet::full(int universe) {
    VertexSet s(universe);
    for (int v = 0; v < universe; ++v) s.add(v);
    return s;
}

VertexSet VertexSet::of(int universe, std::span<const int> vertices) {
    VertexSet s(universe);
    for (int v : vertices) s.add(v);
    return s;
}

void VertexSet::add(int v) {
    if (v < 0 || v >= n_) throw std::out_of_range("VertexSet::add: vertex out of range");
    std::uint64_t& w = words_[static_cast<std::size_t>(v) >> 6];
    std::uint64_t bit = 1ULL << (v & 63);
    if (!(w & bit)) {
        w |= bit;
        ++size_;
    }
}

void VertexSet::remove(int v) {
    if (v < 0 || v >= n_) throw std::out_of_range("VertexSet::remove: vertex out of range");
    std::uint64_t& w = words_[static_cast<std::size_t>(v) >> 6];
    std::uint64_t bit = 1ULL << (v & 63);
    if (w & bit) {
        w &= ~bit;
        --size_;
    }
}

void VertexSet::clear() {
    std::fill(words_.begin(), words_.end(), 0);
    size_ = 0;
}

std::vector<int> VertexSet::to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size_));
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            out.push_back(static_cast<int>(w * 64) + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

// --- Graph -------------------------------------------------------------------

void Graph::set_edge(int u, int v) {
    rows_[static_cast<std::size_t>(u) * wpr_ + (static_cast<std::size_t>(v) >> 6)] |= 1ULL << (v & 63);
    rows_[static_cast<std::size_t>(v) * wpr_ + (static_cast<std::size_t>(u) >> 6)] |= 1ULL << (u & 63);
}

Graph Graph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
    if (n <= 0) throw std::invalid_argument("Graph: vertex count must be positive");
    Graph g(n, words_for(n));
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("Graph: loops not allowed");
        g.set_edge(u, v);
    }
    return g;
}

Graph Graph::empty_graph(int n) { return from_edges(n, {}); }

Graph Graph::from_edge_mask(int n, std::uint64_t mask) {
    if (n <= 0 || static_cast<long long>(n) * (n - 1) / 2 > 64)
        throw std::invalid_argument("from_edge_mask: need C(n,2) <= 64");
    Graph g(n, words_for(n));
    int bit = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++bit)
            if ((mask >> bit) & 1u) g.set_edge(i, j);
    return g;
}

int Graph::degree(int v) const {
    long long d = 0;
    for (auto w : row(v)) d += std::popcount(w);
    return static_cast<int>(d);
}

long long Graph::edge_count() const {
    long long total = 0;
    for (auto w : rows_) total += std::popcount(w);
    return total / 2;
}

Graph Graph::complement() const {
    Graph g(n_, wpr_);
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (!has_edge(u, v)) g.set_edge(u, v);
    return g;
}

long long induced_edges(const Graph& g, const VertexSet& s) {
    long long twice = 0;
    auto sw = s.words();
    for (std::size_t w = 0; w < sw.size(); ++w) {
        std::uint64_t bits = sw[w];
        while (bits) {
            int v = static_cast<int>(w * 64) + std::countr_zero(bits);
            bits &= bits - 1;
            twice += and_popcount(g.row(v), sw);
        }
    }
    return twice / 2;
}

long long induced_edges(const Graph& g, std::span<const int> vertices) {
    long long e = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            e += g.has_edge(vertices[i], vertices[j]);
    return e;
}

int degree_into(const Graph& g, int v, const VertexSet& s) {
    if (v < 0 || v >= g.n()) throw std::out_of_range("degree_into: vertex out of range");
    // row v has no diagonal bit, so v's own membership in s never counts
    return static_cast<int>(and_popcount(g.row(v), s.words()));
}

// --- graph6 ------------------------------------------------------------------

Graph parse_graph6(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    if (line.empty()) throw std::invalid_argument("graph6: empty line");
    for (char c : line)
        if (c < 63 || c > 126) throw std::invalid_argument("graph6: byte outside printable range 63..126");
    if (line[0] == 126) throw std::invalid_argument("graph6: long form (n >= 63) not supported");
    int n = line[0] - 63;
    if (n < 1) throw std::invalid_argument("graph6: vertex count must be positive");
    long long nbits = static_cast<long long>(n) * (n - 1) / 2;
    std::size_t nbytes = static_cast<std::size_t>((nbits + 5) / 6);
    if (line.size() != 1 + nbytes)
        throw std::invalid_argument("graph6: malformed length for n=" + std::to_string(n));

    Graph g(n, (n + 63) / 64);
    long long bit = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            int byte = static_cast<int>(line[1 + bit / 6]) - 63;
            if ((byte >> (5 - bit % 6)) & 1) g.set_edge(i, j);
        }
    }
    // padding bits must be zero per the format definition
    for (long long b = nbits; b < static_cast<long long>(nbytes) * 6; ++b) {
        int byte = static_cast<int>(line[1 + static_cast<std::size_t>(b / 6)]) - 63;
        if ((byte >> (5 - b % 6)) & 1)
            throw std::invalid_argument("graph6: nonzero padding bits");
    }
    return g;
}

std::string write_graph6(const Graph& g) {
    int n = g.n();
    if (n >= 63) throw std::invalid_argument("write_graph6: only short form (n < 63) supported");
    long long nbits = static_cast<long long>(n) * (n - 1) / 2;
    std::string out(1 + static_cast<std::size_t>((nbits + 5) / 6), static_cast<char>(63));
    out[0] = static_cast<char>(63 + n);
    long long bit = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            if (g.has_edge(i, j)) out[1 + static_cast<std::size_t>(bit / 6)] += 1 << (5 - bit % 6);
        }
    }
    return out;
}

// --- generators ----------------------------------------------------------------

namespace detail {
void graph_set_edge(Graph& g, int u, int v) { g.set_edge(u, v); }
} // namespace detail

int FamilySpec::vertex_count() const {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FamilySpec::Empty>) return s.n;
            else if constexpr (std::is_same_v<T, FamilySpec::Complete>) return s.n;
            else if constexpr (std::is_same_v<T, FamilySpec::CompleteBipartite>) return s.a + s.b;
            else if constexpr (std::is_same_v<T, FamilySpec::Gnp>) return s.n;
            else {
                int total = 0;
                for (const auto& p : s.parts) total += p.vertex_count();
                return total;
            }
        },
        v);
}

namespace {

void generate_into(const FamilySpec& spec, Graph& g, int offset) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FamilySpec::Empty>) {
                if (s.n <= 0) throw std::invalid_argument("generate: sizes must be positive");
            } else if constexpr (std::is_same_v<T, FamilySpec::Complete>) {
                if (s.n <= 0) throw std::invalid_argument("generate: sizes must be positive");
                for (int u = 0; u < s.n; ++u)
                    for (int w = u + 1; w < s.n; ++w) detail::graph_set_edge(g, offset + u, offset + w);
            } else if constexpr (std::is_same_v<T, FamilySpec::CompleteBipartite>) {
                if (s.a <= 0 || s.b <= 0) throw std::invalid_argument("generate: sizes must be positive");
                for (int u = 0; u < s.a; ++u)
                    for (int w = 0; w < s.b; ++w) detail::graph_set_edge(g, offset + u, offset + s.a + w);
            } else if constexpr (std::is_same_v<T, FamilySpec::Gnp>) {
                if (s.n <= 0) throw std::invalid_argument("generate: sizes must be positive");
                if (!(s.p >= 0.0 && s.p <= 1.0))
                    throw std::invalid_argument("generate: gnp probability outside [0,1]");
                PhiloxRng rng(s.seed);
                for (int j = 1; j < s.n; ++j)
                    for (int i = 0; i < j; ++i)
                        if (rng.next_double() < s.p) detail::graph_set_edge(g, offset + i, offset + j);
            } else {
                int at = offset;
                for (const auto& part : s.parts) {
                    generate_into(part, g, at);
                    at += part.vertex_count();
                }
            }
        },
        spec.v);
}

} // namespace

Graph generate(const FamilySpec& spec) {
    int n = spec.vertex_count();
    if (n <= 0) throw std::invalid_argument("generate: empty spec");
    Graph g(n, (n + 63) / 64);
    generate_into(spec, g, 0);
    return g;
}

// --- heavy/light ---------------------------------------------------------------

HeavyLightSplit heavy_light(const Graph& g, int k, long long ell) {
    if (k < 1 || ell < 1) throw std::invalid_argument("heavy_light: need k >= 1, ell >= 1");
    int n = g.n();
    HeavyLightSplit split{VertexSet(n), VertexSet(n),
                          n * std::cbrt(static_cast<double>(ell)) / k};
    // deg >= n*ell^(1/3)/k  <=>  (k*deg)^3 >= n^3*ell, evaluated in 128-bit
    unsigned __int128 rhs =
        static_cast<unsigned __int128>(n) * n * n * static_cast<unsigned __int128>(ell);
    for (int v = 0; v < n; ++v) {
        unsigned __int128 kd = static_cast<unsigned __int128>(k) * g.degree(v);
        if (kd * kd * kd >= rhs)
            split.heavy.add(v);
        else
            split.light.add(v);
    }
    return split;
}

} // namespace edgestat
