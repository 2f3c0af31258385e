#include "edgestat/graph.hpp"

#include "edgestat/rational.hpp"
#include "edgestat/rng.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace edgestat;

namespace {

Graph make_c5() {
    std::vector<std::pair<int, int>> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
    return Graph::from_edges(5, e);
}

Graph make_complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

// independent graph6 encoder used as the oracle for the writer: packs the
// upper triangle column by column, 6 bits per byte, offset 63
std::string oracle_graph6(int n, const std::vector<std::vector<bool>>& adj) {
    std::vector<bool> bits;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) bits.push_back(adj[i][j]);
    while (bits.size() % 6) bits.push_back(false);
    std::string out(1, static_cast<char>(63 + n));
    for (std::size_t b = 0; b < bits.size(); b += 6) {
        int val = 0;
        for (int t = 0; t < 6; ++t) val = val * 2 + (bits[b + t] ? 1 : 0);
        out += static_cast<char>(63 + val);
    }
    return out;
}

Graph random_graph(int n, double p, PhiloxRng& rng) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_double() < p) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

} // namespace

TEST_CASE("from_edges basics") {
    std::vector<std::pair<int, int>> k3{{0, 1}, {1, 2}, {0, 2}};
    Graph g = Graph::from_edges(3, k3);
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(2, 0));

    Graph e2 = Graph::from_edges(2, {});
    CHECK(e2.edge_count() == 0);

    Graph c5 = make_c5();
    for (int v = 0; v < 5; ++v) CHECK(c5.degree(v) == 2);

    // duplicates collapse
    std::vector<std::pair<int, int>> dup{{0, 1}, {1, 0}, {0, 1}};
    CHECK(Graph::from_edges(2, dup).edge_count() == 1);

    std::vector<std::pair<int, int>> loop{{1, 1}};
    CHECK_THROWS_AS(Graph::from_edges(3, loop), std::invalid_argument);
    std::vector<std::pair<int, int>> oob{{0, 3}};
    CHECK_THROWS_AS(Graph::from_edges(3, oob), std::invalid_argument);
}

TEST_CASE("graph6 parse: hand-derived encodings") {
    Graph k3 = parse_graph6("Bw");
    CHECK(k3.n() == 3);
    CHECK(k3.edge_count() == 3);

    Graph e2 = parse_graph6("A?");
    CHECK(e2.n() == 2);
    CHECK(e2.edge_count() == 0);

    Graph k2 = parse_graph6("A_");
    CHECK(k2.n() == 2);
    CHECK(k2.edge_count() == 1);
    CHECK(k2.has_edge(0, 1));

    // trailing newline tolerated
    CHECK(parse_graph6("Bw\n") == k3);
}

TEST_CASE("graph6 write matches an independent encoder") {
    CHECK(write_graph6(parse_graph6("Bw")) == "Bw");
    CHECK(write_graph6(Graph::from_edges(2, {})) == "A?");
    std::vector<std::pair<int, int>> k2e{{0, 1}};
    CHECK(write_graph6(Graph::from_edges(2, k2e)) == "A_");

    PhiloxRng rng(2024, 0);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 1 + static_cast<int>(rng.uniform_below(62));
        std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                           std::vector<bool>(static_cast<std::size_t>(n), false));
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next_double() < 0.4) {
                    adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
                    adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
                    edges.emplace_back(i, j);
                }
        Graph g = Graph::from_edges(n, edges);
        CHECK(write_graph6(g) == oracle_graph6(n, adj));
        CHECK(parse_graph6(write_graph6(g)) == g);
    }
}

TEST_CASE("graph6 errors") {
    CHECK_THROWS_AS(parse_graph6(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph6("Bww"), std::invalid_argument);   // trailing garbage
    CHECK_THROWS_AS(parse_graph6("B"), std::invalid_argument);     // missing bytes
    CHECK_THROWS_AS(parse_graph6("B\x1f"), std::invalid_argument); // nonprintable
    CHECK_THROWS_AS(parse_graph6("~??"), std::invalid_argument);   // long form
    CHECK_THROWS_AS(parse_graph6("A@"), std::invalid_argument);    // nonzero padding
    Graph big = Graph::from_edges(63, {});
    CHECK_THROWS_AS(write_graph6(big), std::invalid_argument);
    CHECK_NOTHROW(write_graph6(Graph::from_edges(62, {})));
}

TEST_CASE("induced_edges and degree_into") {
    Graph c5 = make_c5();
    std::vector<int> tri{0, 1, 2};
    CHECK(induced_edges(c5, VertexSet::of(5, tri)) == 2);
    CHECK(induced_edges(c5, std::span<const int>(tri)) == 2);

    Graph e5 = Graph::from_edges(5, {});
    CHECK(induced_edges(e5, VertexSet::of(5, tri)) == 0);
    CHECK(induced_edges(e5, VertexSet(5)) == 0);

    Graph k4 = make_complete(4);
    std::vector<int> t2{1, 2, 3};
    CHECK(induced_edges(k4, VertexSet::of(4, t2)) == 3);

    std::vector<int> rest{1, 2, 3, 4};
    CHECK(degree_into(c5, 0, VertexSet::of(5, rest)) == 2);
    std::vector<int> two{1, 2};
    CHECK(degree_into(e5, 0, VertexSet::of(5, two)) == 0);
    Graph k5 = make_complete(5);
    std::vector<int> three{1, 2, 3};
    CHECK(degree_into(k5, 0, VertexSet::of(5, three)) == 3);
    // v inside s is ignored: N(0) = {1,4}, only 1 lies in {0,1,2}
    std::vector<int> with_self{0, 1, 2};
    CHECK(degree_into(c5, 0, VertexSet::of(5, with_self)) == 1);
}

TEST_CASE("handshake identity on random graphs") {
    PhiloxRng rng(99, 0);
    for (int rep = 0; rep < 40; ++rep) {
        int n = 2 + static_cast<int>(rng.uniform_below(40));
        Graph g = random_graph(n, 0.3, rng);
        VertexSet s(n);
        for (int v = 0; v < n; ++v)
            if (rng.next_double() < 0.5) s.add(v);
        long long twice = 0;
        for (int v : s.to_vector()) twice += degree_into(g, v, s);
        CHECK(induced_edges(g, s) * 2 == twice);
    }
}

TEST_CASE("generate: deterministic families") {
    Graph star = generate(FamilySpec{FamilySpec::CompleteBipartite{1, 4}});
    CHECK(star.n() == 5);
    CHECK(star.edge_count() == 4);
    CHECK(star.degree(0) == 4);

    Graph none = generate(FamilySpec{FamilySpec::Gnp{100, 0.0, 7}});
    CHECK(none.edge_count() == 0);
    Graph all = generate(FamilySpec{FamilySpec::Gnp{100, 1.0, 7}});
    CHECK(all.edge_count() == 100LL * 99 / 2);

    FamilySpec::UnionOf u;
    u.parts.push_back(FamilySpec{FamilySpec::Complete{3}});
    u.parts.push_back(FamilySpec{FamilySpec::Complete{2}});
    Graph k3k2 = generate(FamilySpec{std::move(u)});
    CHECK(k3k2.n() == 5);
    CHECK(k3k2.edge_count() == 4);
    CHECK(k3k2.has_edge(0, 1));
    CHECK(k3k2.has_edge(3, 4));
    CHECK_FALSE(k3k2.has_edge(2, 3));
}

TEST_CASE("gnp is a pure function of (n, p, seed)") {
    Graph a = generate(FamilySpec{FamilySpec::Gnp{60, 0.35, 123}});
    Graph b = generate(FamilySpec{FamilySpec::Gnp{60, 0.35, 123}});
    Graph c = generate(FamilySpec{FamilySpec::Gnp{60, 0.35, 124}});
    CHECK(a == b);
    CHECK(a != c);
    CHECK_THROWS_AS(generate(FamilySpec{FamilySpec::Gnp{10, 1.5, 1}}), std::invalid_argument);
}

TEST_CASE("heavy_light: examples") {
    Graph e10 = Graph::from_edges(10, {});
    auto s1 = heavy_light(e10, 3, 1);
    CHECK(s1.light.size() == 10);
    CHECK(s1.heavy.size() == 0);

    // K10 with k=10, ell=1: threshold 1, every degree 9
    auto s2 = heavy_light(make_complete(10), 10, 1);
    CHECK(s2.heavy.size() == 10);

    // star on 10 vertices, k=5, ell=8: threshold 10*2/5 = 4
    std::vector<std::pair<int, int>> star_e;
    for (int leaf = 1; leaf < 10; ++leaf) star_e.emplace_back(0, leaf);
    Graph star = Graph::from_edges(10, star_e);
    auto s3 = heavy_light(star, 5, 8);
    CHECK(s3.heavy.size() == 1);
    CHECK(s3.heavy.contains(0));
    CHECK(s3.light.size() == 9);
}

TEST_CASE("heavy_light: exact at integer thresholds") {
    // perfect-cube ell makes the threshold n*cbrt(ell)/k rational; membership
    // must match the integer comparison deg*k >= n*cbrt(ell) exactly
    for (long long root = 1; root <= 4; ++root) {
        long long ell = root * root * root;
        for (int n : {6, 10, 12}) {
            for (int k : {2, 3, 5}) {
                std::vector<std::pair<int, int>> edges;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (i + j >= n) edges.emplace_back(i, j);
                Graph g = Graph::from_edges(n, edges);
                auto split = heavy_light(g, k, ell);
                for (int v = 0; v < n; ++v) {
                    bool exact = static_cast<long long>(g.degree(v)) * k >= n * root;
                    CHECK(split.heavy.contains(v) == exact);
                    CHECK(split.light.contains(v) == !exact);
                }
            }
        }
    }
}

TEST_CASE("complement") {
    Graph c5 = make_c5();
    Graph cc = c5.complement();
    CHECK(cc.edge_count() == 10 - 5);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) CHECK(cc.has_edge(i, j) == !c5.has_edge(i, j));
    CHECK(cc.complement() == c5);
}

TEST_CASE("vertex set basics") {
    VertexSet s(70);
    s.add(0);
    s.add(69);
    s.add(69);
    CHECK(s.size() == 2);
    CHECK(s.contains(69));
    s.remove(69);
    CHECK(s.size() == 1);
    CHECK_FALSE(s.contains(69));
    CHECK(s.to_vector() == std::vector<int>{0});
    CHECK_THROWS_AS(s.add(70), std::out_of_range);
    CHECK(VertexSet::full(5).size() == 5);
}
