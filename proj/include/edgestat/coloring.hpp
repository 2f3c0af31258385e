#pragma once

#include "edgestat/graph.hpp"
#include "edgestat/mc.hpp"
#include "edgestat/rational.hpp"
#include "edgestat/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace edgestat {

enum class Color : std::uint8_t { black, green };

// One run of the sequential black/green coloring: vertices are sampled
// uniformly with replacement; the first is black, and a later vertex is
// green iff together with the current black set it spans at least ell
// edges. The run stops when the (k-1)-th black appears (position stored
// 1-based in stop_index); y_value counts green draws before that position.
struct ProcessTrace {
    std::vector<int> sequence;
    std::vector<Color> colors;
    std::optional<long long> stop_index; // nullopt = diverged / step cap hit
    std::optional<long long> y_value;

    bool diverged() const { return !stop_index.has_value(); }
    // Black draws in order, repeats included; length k-1 on a normally
    // stopped run.
    std::vector<int> black_prefix() const;
};

inline constexpr long long kDefaultStepCap = 1'000'000;

ProcessTrace run_coloring(const Graph& g, int k, long long ell, PhiloxRng& rng,
                          long long step_cap = kDefaultStepCap);

// Recompute the color sequence implied by `sequence`; the coloring rule is
// a pure function of the history.
std::vector<Color> recolor(const Graph& g, long long ell, std::span<const int> sequence);

// p_i = |{v in V : e({u_1..u_i, v}) >= ell}| / n for i = 1..k-2, counted
// over all of V (prefix members included; sampling is with replacement).
struct GeomParams {
    std::vector<Rational> p;
    std::vector<int> prefix;
};

GeomParams geometric_params(const Graph& g, std::span<const int> prefix, long long ell);

// Pr[Y = 1 | prefix] = sum_i p_i * prod_j (1 - p_j), exact.
Rational y1_prob(const GeomParams& params);

// Exact law of the sum of independent geometrics in the failures-counting
// convention Pr[geom(p) = y] = p^y (1-p), truncated at y_max with the
// remaining mass in `tail`. Throws std::domain_error when some p_j = 1
// (the sum diverges).
struct YPmf {
    std::vector<Rational> probs; // index y = 0..y_max
    Rational tail;

    Rational prob(std::size_t y) const { return y < probs.size() ? probs[y] : Rational(0); }
};

YPmf y_pmf(const GeomParams& params, int y_max);

// Draws Y from the conditional law of the coloring process given that the
// black prefix equals `prefix`: per gap, uniform vertices are drawn until
// one falls outside the eligible set, and the eligible hits are counted.
// Throws std::domain_error when some gap has every vertex eligible.
class ConditionalYSampler {
  public:
    ConditionalYSampler(const Graph& g, std::span<const int> prefix, long long ell);
    long long draw(PhiloxRng& rng) const;
    int gaps() const { return static_cast<int>(eligible_.size()); }

  private:
    int n_;
    std::vector<VertexSet> eligible_;
};

// Shared-sequence estimates for the coupling chain. Per trial one
// with-replacement sequence drives the coloring process and the first-k
// prefix statistics simultaneously.
struct CouplingReport {
    Estimate pr_x_tilde;  // Pr[e({v_1..v_k}) = ell]
    Estimate pr_both;     // Pr[e({v_1..v_k}) = e({v_1..v_{k-1}}) = ell]
    Estimate pr_y1;       // Pr[Y = 1]
    Estimate pr_distinct; // Pr[v_1..v_k all distinct]
    // Violations of {distinct and both} => {Y = 1}; deterministically zero.
    std::uint64_t implication_violations = 0;
    // Sequences with repeated vertices where `both` held but Y != 1; the
    // implication genuinely requires distinctness, so these are reported
    // as a diagnostic rather than counted as violations.
    std::uint64_t nondistinct_exceptions = 0;
    std::uint64_t diverged_runs = 0;
    bool small_n_warning = false; // n < k*k
};

CouplingReport coupling_report(const Graph& g, int k, long long ell, const McConfig& cfg,
                               long long step_cap = kDefaultStepCap);

} // namespace edgestat
