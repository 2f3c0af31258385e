#pragma once

#include "edgestat/graph.hpp"
#include "edgestat/rational.hpp"
#include "edgestat/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace edgestat {

struct McConfig {
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    double confidence_level = 0.99;
    enum class Interval { wilson, clopper_pearson } interval = Interval::wilson;
    int threads = 0; // 0 = hardware count; has no effect on results
};

struct Estimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t seed = 0;
};

// Wilson score interval; exact 0/1 endpoints at the boundaries.
std::pair<double, double> wilson_ci(std::uint64_t successes, std::uint64_t trials, double level);
// Clopper-Pearson, available behind McConfig::interval.
std::pair<double, double> clopper_pearson_ci(std::uint64_t successes, std::uint64_t trials,
                                             double level);

Estimate make_estimate(std::uint64_t successes, std::uint64_t trials, const McConfig& cfg);

// Repeated distinct-vertex draws on a fixed ground set. A partial
// Fisher-Yates pass is undone after every draw, so draws cost O(k) and the
// sampler state never leaks between draws (ranges stay deterministic
// regardless of which worker runs them).
class SubsetSampler {
  public:
    explicit SubsetSampler(int n);
    // k distinct uniform vertices, in draw order.
    void draw(int k, PhiloxRng& rng, std::vector<int>& out);

  private:
    std::vector<int> perm_;
    std::vector<int> swaps_;
};

VertexSet sample_ksubset(const Graph& g, int k, PhiloxRng& rng);

struct SplitSample {
    VertexSet S; // first phase, size k-m
    VertexSet Q; // second phase, size m, from the complement of S
    VertexSet A; // S u Q, uniform over k-subsets
};

SplitSample sample_split(const Graph& g, int k, int m, PhiloxRng& rng);

// --- sample contexts --------------------------------------------------------

struct SampleParams {
    int k = 0;
    long long ell = 1;
    double w = 0.0; // <= 0 picks the default max(1, ln k)
    int m = -1;     // -1 = derive from (k, ell, w); 0 = plain k-subset draw

    double resolved_w() const;
    // round(k / (w^(1/3) * sqrt(ell))) clamped to [1, k-1]
    int resolved_m() const;
};

// Read-only per-(graph, params) state shared by all trials.
struct SampleEnv {
    const Graph* g = nullptr;
    SampleParams params;
    int m = 0;
    HeavyLightSplit split;
    Rational mu1, mu2, mu; // expected heavy-heavy edges, light-light edges, difference
    double mu_double = 0.0;
};

SampleEnv make_sample_env(const Graph& g, SampleParams params);

// One draw plus the degree caches event evaluation needs.
struct SampleContext {
    const SampleEnv* env = nullptr;
    std::vector<int> s_vertices;
    std::vector<int> q_vertices;
    std::vector<int> a_vertices; // s_vertices then q_vertices
    VertexSet s_set, q_set, a_set;
    std::vector<int> deg_in_a;     // e(v, A) parallel to a_vertices
    std::vector<int> q_deg_into_s; // e(v, S) parallel to q_vertices
    long long e_s = 0;
    long long e_q = 0;
    long long x = 0; // e(A), computed independently of e_s/e_q
};

// Owns the reusable draw buffers; one factory per worker thread.
class ContextFactory {
  public:
    explicit ContextFactory(const SampleEnv& env);
    SampleContext blank() const;
    void draw_into(SampleContext& ctx, PhiloxRng& rng);
    // Build from an explicit draw order (first k-m entries form S).
    void fill_from(SampleContext& ctx, std::span<const int> ordered_a);

  private:
    const SampleEnv* env_;
    SubsetSampler sampler_;
    std::vector<int> scratch_;
};

using ContextPredicate = std::function<bool(const SampleContext&)>;
using ContextVisitor = std::function<void(const SampleContext&, std::span<std::uint64_t>)>;

// Generic harness: `visit` sees every drawn context and bumps any of the
// `counters` slots; per-range tallies are merged by summation. Trials run
// in fixed ranges of 8192, one derived RNG stream per range (stream id =
// range index), so results do not depend on the worker count.
std::vector<std::uint64_t> run_context_trials(const Graph& g, const SampleParams& params,
                                              int counters, const ContextVisitor& visit,
                                              const McConfig& cfg);

Estimate estimate_event(const Graph& g, const SampleParams& params, const ContextPredicate& pred,
                        const McConfig& cfg);

struct ContainmentResult {
    Estimate e_minus_f; // Pr[E and not F], the headline number
    Estimate e_and_f;
    Estimate e;
};

// Both predicates evaluated on shared draws, so the three counts satisfy
// successes(e_minus_f) + successes(e_and_f) == successes(e) exactly.
ContainmentResult estimate_containment(const Graph& g, const SampleParams& params,
                                       const ContextPredicate& event_e,
                                       const ContextPredicate& event_f, const McConfig& cfg);

} // namespace edgestat
