#include "edgestat/coloring.hpp"

#include "edgestat/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
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

} // namespace

TEST_CASE("run_coloring on the empty graph: all black, Y = 0") {
    Graph g = Graph::from_edges(10, {});
    PhiloxRng rng(8, 0);
    ProcessTrace t = run_coloring(g, 4, 1, rng);
    REQUIRE_FALSE(t.diverged());
    CHECK(*t.stop_index == 3);
    CHECK(*t.y_value == 0);
    CHECK(t.sequence.size() == 3);
    for (Color c : t.colors) CHECK(c == Color::black);
    CHECK(t.black_prefix().size() == 3);
}

TEST_CASE("run_coloring on the complete graph: blacks are forced repeats of v1") {
    // With ell=1 every vertex other than v1 closes an edge with the black
    // set {v1}, so it is green; the only way to accumulate blacks is to
    // redraw v1 itself. The run therefore terminates with the black prefix
    // (v1, v1, v1) and never diverges.
    Graph g = make_complete(10);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        PhiloxRng rng(seed, 0);
        ProcessTrace t = run_coloring(g, 4, 1, rng);
        REQUIRE_FALSE(t.diverged());
        int v1 = t.sequence[0];
        auto prefix = t.black_prefix();
        REQUIRE(prefix.size() == 3);
        for (int u : prefix) CHECK(u == v1);
        for (std::size_t i = 0; i < t.sequence.size(); ++i) {
            if (t.sequence[i] == v1)
                CHECK(t.colors[i] == Color::black);
            else
                CHECK(t.colors[i] == Color::green);
        }
        CHECK(*t.y_value == *t.stop_index - 3);
    }
}

TEST_CASE("run_coloring determinism and recolor round trip") {
    Graph g = generate(FamilySpec{FamilySpec::Gnp{25, 0.25, 99}});
    PhiloxRng a(55, 0), b(55, 0);
    ProcessTrace ta = run_coloring(g, 5, 2, a);
    ProcessTrace tb = run_coloring(g, 5, 2, b);
    CHECK(ta.sequence == tb.sequence);
    CHECK(ta.colors == tb.colors);
    CHECK(ta.stop_index == tb.stop_index);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        PhiloxRng rng(seed, 1);
        ProcessTrace t = run_coloring(g, 6, 2, rng);
        CHECK(recolor(g, 2, t.sequence) == t.colors);
    }
}

TEST_CASE("geometric_params: worked examples") {
    Graph e10 = Graph::from_edges(10, {});
    std::vector<int> prefix{0, 1, 2};
    GeomParams p0 = geometric_params(e10, prefix, 1);
    REQUIRE(p0.p.size() == 2);
    CHECK(p0.p[0] == 0);
    CHECK(p0.p[1] == 0);

    Graph k10 = make_complete(10);
    GeomParams pk = geometric_params(k10, prefix, 1);
    REQUIRE(pk.p.size() == 2);
    CHECK(pk.p[0] == Rational(9, 10)); // only v = u1 itself fails
    CHECK(pk.p[1] == 1);               // the prefix already spans an edge

    Graph c5 = make_c5();
    GeomParams pc = geometric_params(c5, prefix, 2);
    REQUIRE(pc.p.size() == 2);
    CHECK(pc.p[0] == 0);               // one extra vertex cannot span 2 edges
    CHECK(pc.p[1] == Rational(2, 5));  // v in {2, 4}
}

TEST_CASE("geometric_params handles repeated prefix vertices") {
    Graph c5 = make_c5();
    std::vector<int> rep{0, 0, 1};
    GeomParams p = geometric_params(c5, rep, 1);
    REQUIRE(p.p.size() == 2);
    // both gaps see the black set {0} resp. {0}: eligible = N(0) = {1,4}
    CHECK(p.p[0] == Rational(2, 5));
    CHECK(p.p[1] == Rational(2, 5));
}

TEST_CASE("y1_prob: closed-form cases") {
    GeomParams zero;
    zero.p = {Rational(0), Rational(0), Rational(0)};
    CHECK(y1_prob(zero) == 0);

    GeomParams half;
    half.p = {Rational(1, 2), Rational(1, 2)};
    CHECK(y1_prob(half) == Rational(1, 4));

    GeomParams hundred;
    for (int i = 0; i < 100; ++i) hundred.p.push_back(Rational(1, 100));
    double v = to_double(y1_prob(hundred));
    CHECK(v == doctest::Approx(0.3660323).epsilon(1e-6));
    CHECK(v <= std::exp(-1.0) + 1e-12);

    GeomParams with_one;
    with_one.p = {Rational(1, 3), Rational(1)};
    CHECK(y1_prob(with_one) == 0);
}

TEST_CASE("y1 stays below 1/e on random parameter vectors") {
    PhiloxRng rng(2718, 0);
    const double bound = std::exp(-1.0) + 1e-12;
    for (int rep = 0; rep < 1000; ++rep) {
        GeomParams params;
        int count = 1 + static_cast<int>(rng.uniform_below(62));
        for (int i = 0; i < count; ++i) {
            std::uint64_t den = 1 + rng.uniform_below(100);
            std::uint64_t num = rng.uniform_below(den + 1); // p = 1 allowed
            params.p.emplace_back(num, den);
        }
        CHECK(to_double(y1_prob(params)) <= bound);
    }
}

TEST_CASE("y_pmf: convolution identities") {
    GeomParams zero;
    zero.p = {Rational(0), Rational(0)};
    YPmf pz = y_pmf(zero, 5);
    CHECK(pz.probs[0] == 1);
    CHECK(pz.tail == 0);

    GeomParams half;
    half.p = {Rational(1, 2), Rational(1, 2)};
    YPmf ph = y_pmf(half, 8);
    CHECK(ph.probs[1] == y1_prob(half));
    CHECK(ph.probs[1] == Rational(1, 4));

    GeomParams third;
    third.p = {Rational(1, 3)};
    YPmf pt = y_pmf(third, 3);
    CHECK(pt.probs[0] == Rational(2, 3));
    CHECK(pt.probs[1] == Rational(2, 9));
    CHECK(pt.probs[2] == Rational(2, 27));

    GeomParams bad;
    bad.p = {Rational(1)};
    CHECK_THROWS_AS(y_pmf(bad, 3), std::domain_error);
}

TEST_CASE("y_pmf[1] equals y1_prob exactly on random parameters") {
    PhiloxRng rng(333, 0);
    for (int rep = 0; rep < 50; ++rep) {
        GeomParams params;
        int count = 1 + static_cast<int>(rng.uniform_below(8));
        for (int i = 0; i < count; ++i) {
            std::uint64_t den = 2 + rng.uniform_below(30);
            std::uint64_t num = rng.uniform_below(den); // strictly below 1
            params.p.emplace_back(num, den);
        }
        YPmf pmf = y_pmf(params, 4);
        CHECK(pmf.probs[1] == y1_prob(params));
        // mass accounting: probs + tail = 1
        Rational total = pmf.tail;
        for (const Rational& p : pmf.probs) total += p;
        CHECK(total == 1);
    }
}

TEST_CASE("conditional sampler matches the exact law") {
    Graph g = generate(FamilySpec{FamilySpec::Gnp{20, 0.3, 4}});
    // harvest a process-reachable prefix
    PhiloxRng seeder(17, 0);
    ProcessTrace t = run_coloring(g, 6, 2, seeder);
    REQUIRE_FALSE(t.diverged());
    std::vector<int> prefix = t.black_prefix();
    REQUIRE(prefix.size() == 5);

    GeomParams params = geometric_params(g, prefix, 2);
    YPmf pmf = y_pmf(params, 30);
    ConditionalYSampler sampler(g, prefix, 2);

    const int draws = 50'000;
    std::map<long long, int> hist;
    PhiloxRng rng(18, 0);
    for (int i = 0; i < draws; ++i) ++hist[sampler.draw(rng)];

    // compare merged bins with expected count >= 100 at 3 sigma
    double acc_exp = 0;
    long long acc_obs = 0;
    for (long long y = 0; y <= 30; ++y) {
        acc_exp += to_double(pmf.prob(static_cast<std::size_t>(y))) * draws;
        acc_obs += hist.count(y) ? hist[y] : 0;
        if (acc_exp >= 100) {
            double sigma = std::sqrt(acc_exp * std::max(0.0, 1.0 - acc_exp / draws));
            CHECK(std::abs(acc_obs - acc_exp) <= 3 * sigma + 1);
            acc_exp = 0;
            acc_obs = 0;
        }
    }
}

TEST_CASE("conditional sampler agrees with rejection-conditioned process runs") {
    // small instance where exact-prefix rejection is feasible
    Graph c5 = make_c5();
    const long long ell = 1;
    const int k = 4;
    PhiloxRng seeder(3, 0);
    ProcessTrace seed_trace = run_coloring(c5, k, ell, seeder);
    REQUIRE_FALSE(seed_trace.diverged());
    std::vector<int> prefix = seed_trace.black_prefix();
    REQUIRE(prefix.size() == 3);

    ConditionalYSampler sampler(c5, prefix, ell);
    const int ref_draws = 200'000;
    std::map<long long, double> ref;
    PhiloxRng rng_a(4, 0);
    for (int i = 0; i < ref_draws; ++i) ref[sampler.draw(rng_a)] += 1.0 / ref_draws;

    // rejection: accept runs whose black draw sequence equals the prefix
    std::map<long long, int> hist;
    int accepted = 0;
    PhiloxRng rng_b(5, 0);
    for (int tries = 0; tries < 2'000'000 && accepted < 2000; ++tries) {
        ProcessTrace t = run_coloring(c5, k, ell, rng_b, 10'000);
        if (t.diverged()) continue;
        if (t.black_prefix() == prefix) {
            ++accepted;
            ++hist[*t.y_value];
        }
    }
    REQUIRE(accepted >= 1000);

    // merged bins, 4 sigma (two finite samples feed the comparison)
    double acc_exp = 0;
    long long acc_obs = 0;
    for (long long y = 0; y <= 40; ++y) {
        acc_exp += (ref.count(y) ? ref[y] : 0.0) * accepted;
        acc_obs += hist.count(y) ? hist[y] : 0;
        if (acc_exp >= 50) {
            double sigma = std::sqrt(acc_exp * std::max(0.05, 1.0 - acc_exp / accepted));
            CHECK(std::abs(acc_obs - acc_exp) <= 4 * sigma + 1);
            acc_exp = 0;
            acc_obs = 0;
        }
    }
}

TEST_CASE("coupling_report: empty graph") {
    Graph g = Graph::from_edges(50, {});
    McConfig cfg;
    cfg.trials = 20'000;
    cfg.seed = 2;
    CouplingReport rep = coupling_report(g, 5, 1, cfg);
    CHECK(rep.pr_x_tilde.successes == 0);
    CHECK(rep.pr_both.successes == 0);
    CHECK(rep.pr_y1.successes == 0);
    CHECK(rep.pr_distinct.point > 0.5);
    CHECK(rep.implication_violations == 0);
    CHECK(rep.diverged_runs == 0);
    CHECK_FALSE(rep.small_n_warning);
}

TEST_CASE("coupling_report: zero violations even where repeats are common") {
    // n close to k*k makes repeated draws frequent; the distinct-draw
    // implication must still never fire
    std::vector<Graph> graphs;
    graphs.push_back(generate(FamilySpec{FamilySpec::Gnp{30, 0.08, 41}}));
    graphs.push_back(generate(FamilySpec{FamilySpec::CompleteBipartite{5, 45}}));
    graphs.push_back(make_c5());
    McConfig cfg;
    cfg.trials = 30'000;
    cfg.seed = 6;
    for (const Graph& g : graphs) {
        int k = g.n() >= 30 ? 6 : 3;
        CouplingReport rep = coupling_report(g, k, 1, cfg);
        CHECK(rep.implication_violations == 0);
        CHECK(rep.pr_both.point <= rep.pr_x_tilde.point);
    }
}

TEST_CASE("coupling_report warns when n is small relative to k^2") {
    McConfig cfg;
    cfg.trials = 1000;
    cfg.seed = 1;
    CouplingReport rep = coupling_report(make_c5(), 4, 1, cfg);
    CHECK(rep.small_n_warning);
}
