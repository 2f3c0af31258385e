#pragma once

#include "edgestat/mc.hpp"
#include "edgestat/rational.hpp"
#include "edgestat/subset_iter.hpp"

#include <cstdint>
#include <vector>

namespace edgestat {

// Events evaluated on a SampleContext. Thresholds involving w or fractional
// powers of ell follow the defining inequalities verbatim; cube-root bounds
// are decided by exact integer power comparison.
struct EventId {
    enum class Kind {
        D,       // all but at most w*sqrt(ell) vertices of A have degree arg in G[A]
        Dstar,   // same, for some degree
        E1,      // e(Q) == 0
        E2,      // e(S) + sum_{v in Q} e(v,S) == ell
        E3,      // all but at most w^(1/3) vertices of Q share their degree into S
        E4,      // all but at most w^(1/3) vertices of Q share their degree in A
        F1,      // every light v in A has e(v,A) <= 2*ell^(1/3)
        F2,      // every heavy v in A has e(v,A) >= ell^(1/3)/2
        F3,      // |X - Z - mu| <= w*ell^(5/6)
        F4,      // |Z - k*D| <= 3*w*ell^(5/6)
        XEquals, // e(A) == arg
    };
    Kind kind;
    long long arg = 0; // degree for D, target for XEquals

    static EventId D(long long d) { return {Kind::D, d}; }
    static EventId x_equals(long long ell) { return {Kind::XEquals, ell}; }
};

bool eval_event(const SampleContext& ctx, const EventId& id);

// Most frequent value of e(v,A) over v in A; ties broken toward the
// smallest degree. Returns (degree, multiplicity).
std::pair<int, int> mode_degree(const Graph& g, const VertexSet& a);
std::pair<int, int> mode_degree(std::span<const int> degrees);

// Z = sum of e(v,A) over light vertices of A.
long long light_degree_sum(const SampleContext& ctx);

// --- exact moment formulas ---------------------------------------------------

enum class PairRelation { identical, share_one, disjoint };

struct EdgeIndicatorMoments {
    Rational mean; // E[X_e] = C(n-2,k-2)/C(n,k)
    Rational cov;  // Cov[X_e, X_f]; the variance when relation == identical
};

EdgeIndicatorMoments edge_indicator_moments(int n, int k, PairRelation relation);

struct MomentReport {
    Rational mu1; // E[heavy-heavy induced edges]
    Rational mu2; // E[light-light induced edges]
    Rational mu;  // mu1 - mu2 = E[X - Z]
};

MomentReport exact_moments(const Graph& g, int k, long long ell);

struct VarianceReport {
    Rational variance; // exact Var[X - Z] over all k-subsets
    double bound;      // 30 * ell^(5/3)
    bool within_bound;
};

VarianceReport variance_x_minus_z(const Graph& g, int k, long long ell,
                                  std::uint64_t budget = kDefaultEnumBudget);

// --- distribution calculators -------------------------------------------------

struct HypergeomSpec {
    long long population = 0; // N
    long long special = 0;    // t
    long long draws = 0;      // m
};

struct HypergeomPmf {
    long long i_min = 0;
    long long i_max = 0;
    std::vector<Rational> probs; // index i - i_min
    long long argmax = 0;
    Rational max_value;

    Rational prob(long long i) const;
    Rational mean() const;
    Rational variance() const;
};

HypergeomPmf hypergeom_pmf(const HypergeomSpec& spec);

// d^d e^(-d) / d! via log-gamma; requires d >= 1 (equals 1/e at d = 1).
double poisson_mode_bound(long long d);
// lambda^d e^(-lambda) / d!, the quantity the bound maximises over lambda.
double poisson_pmf_at(double lambda, long long d);

struct ModeDegreePrediction {
    long long d = 0;       // nearest integer to (ell - mu)/k
    bool ambiguous = false; // interval center +- halfwidth contains >= 2 integers
    double center = 0.0;
    double halfwidth = 0.0; // (w/k) * ell^(5/6)
};

ModeDegreePrediction predicted_mode_degree(const Graph& g, int k, long long ell, double w);

// Lower median (the floor((N+1)/2)-th order statistic) of e(v,S) over
// v outside S.
int median_degree_into(const Graph& g, const VertexSet& s);

// Diagnostic split of the first-phase set: case 1 when all but at most
// w^(1/4) n/m outside vertices match the median degree into S, else case 2.
// Reported, never asserted.
struct SplitCaseReport {
    int median = 0;
    long long differing = 0;
    double threshold = 0.0;
    int case_id = 1;
};

SplitCaseReport classify_split_case(const SampleContext& ctx);

} // namespace edgestat
