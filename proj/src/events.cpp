#include "edgestat/events.hpp"

#include "edgestat/subset_iter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace edgestat {

namespace {

// count of v in `degrees` with value != mode
int exceptions_from_mode(std::span<const int> degrees) {
    auto [mode, count] = mode_degree(degrees);
    (void)mode;
    return static_cast<int>(degrees.size()) - count;
}

} // namespace

std::pair<int, int> mode_degree(std::span<const int> degrees) {
    if (degrees.empty()) throw std::invalid_argument("mode_degree: empty set");
    std::map<int, int> hist;
    for (int d : degrees) ++hist[d];
    int best_d = 0, best_c = -1;
    for (auto [d, c] : hist) {
        if (c > best_c) { // map order makes ties resolve to the smallest degree
            best_d = d;
            best_c = c;
        }
    }
    return {best_d, best_c};
}

std::pair<int, int> mode_degree(const Graph& g, const VertexSet& a) {
    std::vector<int> degs;
    degs.reserve(static_cast<std::size_t>(a.size()));
    for (int v : a.to_vector()) degs.push_back(degree_into(g, v, a));
    return mode_degree(degs);
}

long long light_degree_sum(const SampleContext& ctx) {
    const auto& light = ctx.env->split.light;
    long long z = 0;
    for (std::size_t i = 0; i < ctx.a_vertices.size(); ++i)
        if (light.contains(ctx.a_vertices[i])) z += ctx.deg_in_a[i];
    return z;
}

bool eval_event(const SampleContext& ctx, const EventId& id) {
    const SampleEnv& env = *ctx.env;
    long long ell = env.params.ell;
    double w = env.params.resolved_w();
    switch (id.kind) {
    case EventId::Kind::D: {
        int bad = 0;
        for (int d : ctx.deg_in_a) bad += (d != id.arg);
        return bad <= w * std::sqrt(static_cast<double>(ell));
    }
    case EventId::Kind::Dstar: {
        int bad = exceptions_from_mode(ctx.deg_in_a);
        return bad <= w * std::sqrt(static_cast<double>(ell));
    }
    case EventId::Kind::E1:
        return ctx.e_q == 0;
    case EventId::Kind::E2: {
        long long sum = ctx.e_s;
        for (int d : ctx.q_deg_into_s) sum += d;
        return sum == ell;
    }
    case EventId::Kind::E3: {
        if (ctx.q_vertices.empty()) return true;
        return exceptions_from_mode(ctx.q_deg_into_s) <= std::cbrt(w);
    }
    case EventId::Kind::E4: {
        if (ctx.q_vertices.empty()) return true;
        std::vector<int> q_deg_in_a(ctx.q_vertices.size());
        std::size_t off = ctx.s_vertices.size();
        for (std::size_t i = 0; i < ctx.q_vertices.size(); ++i)
            q_deg_in_a[i] = ctx.deg_in_a[off + i];
        return exceptions_from_mode(q_deg_in_a) <= std::cbrt(w);
    }
    case EventId::Kind::F1: {
        // e(v,A) <= 2*ell^(1/3)  <=>  e^3 <= 8*ell
        const auto& light = env.split.light;
        for (std::size_t i = 0; i < ctx.a_vertices.size(); ++i) {
            if (!light.contains(ctx.a_vertices[i])) continue;
            long long d = ctx.deg_in_a[i];
            if (d * d * d > 8 * ell) return false;
        }
        return true;
    }
    case EventId::Kind::F2: {
        // e(v,A) >= ell^(1/3)/2  <=>  (2e)^3 >= ell
        const auto& heavy = env.split.heavy;
        for (std::size_t i = 0; i < ctx.a_vertices.size(); ++i) {
            if (!heavy.contains(ctx.a_vertices[i])) continue;
            long long d2 = 2 * ctx.deg_in_a[i];
            if (d2 * d2 * d2 < ell) return false;
        }
        return true;
    }
    case EventId::Kind::F3: {
        long long z = light_degree_sum(ctx);
        double dev = std::abs(static_cast<double>(ctx.x - z) - env.mu_double);
        return dev <= w * std::pow(static_cast<double>(ell), 5.0 / 6.0);
    }
    case EventId::Kind::F4: {
        long long z = light_degree_sum(ctx);
        auto [d, count] = mode_degree(ctx.deg_in_a);
        (void)count;
        double dev = std::abs(static_cast<double>(z - static_cast<long long>(env.params.k) * d));
        return dev <= 3.0 * w * std::pow(static_cast<double>(ell), 5.0 / 6.0);
    }
    case EventId::Kind::XEquals:
        return ctx.x == id.arg;
    }
    throw std::logic_error("eval_event: unknown event");
}

// --- exact moment formulas -----------------------------------------------------

EdgeIndicatorMoments edge_indicator_moments(int n, int k, PairRelation relation) {
    if (k < 2 || k > n) throw std::invalid_argument("edge_indicator_moments: need 2 <= k <= n");
    BigInt cnk = binomial(n, k);
    Rational mean(binomial(n - 2, k - 2), cnk);
    Rational joint;
    switch (relation) {
    case PairRelation::identical:
        joint = mean;
        break;
    case PairRelation::share_one:
        if (n < 3) throw std::invalid_argument("edge_indicator_moments: share_one needs n >= 3");
        joint = Rational(binomial(n - 3, k - 3), cnk);
        break;
    case PairRelation::disjoint:
        if (n < 4) throw std::invalid_argument("edge_indicator_moments: disjoint needs n >= 4");
        joint = Rational(binomial(n - 4, k - 4), cnk);
        break;
    }
    return EdgeIndicatorMoments{mean, joint - mean * mean};
}

MomentReport exact_moments(const Graph& g, int k, long long ell) {
    HeavyLightSplit split = heavy_light(g, k, ell);
    long long n = g.n();
    Rational pair_prob(BigInt(k) * (k - 1), BigInt(n) * (n - 1));
    MomentReport rep;
    rep.mu1 = Rational(induced_edges(g, split.heavy)) * pair_prob;
    rep.mu2 = Rational(induced_edges(g, split.light)) * pair_prob;
    rep.mu = rep.mu1 - rep.mu2;
    return rep;
}

VarianceReport variance_x_minus_z(const Graph& g, int k, long long ell, std::uint64_t budget) {
    std::uint64_t total = 0;
    if (!binomial_fits(g.n(), k, budget, total))
        throw BudgetExceeded("variance_x_minus_z: C(n,k) exceeds enumeration budget");
    HeavyLightSplit split = heavy_light(g, k, ell);

    // W = H - L maintained incrementally: members restricted to each side
    VertexSet mem_h(g.n()), mem_l(g.n());
    long long h = 0, l = 0;
    BigInt sum_w = 0, sum_w2 = 0;
    for_each_ksubset_revolving(
        g.n(), k,
        [&](int v) {
            if (split.heavy.contains(v)) {
                h += degree_into(g, v, mem_h);
                mem_h.add(v);
            } else {
                l += degree_into(g, v, mem_l);
                mem_l.add(v);
            }
        },
        [&](int v) {
            if (split.heavy.contains(v)) {
                mem_h.remove(v);
                h -= degree_into(g, v, mem_h);
            } else {
                mem_l.remove(v);
                l -= degree_into(g, v, mem_l);
            }
        },
        [&] {
            long long wv = h - l;
            sum_w += wv;
            sum_w2 += static_cast<long long>(wv) * wv;
        });

    Rational mean(sum_w, BigInt(total));
    Rational second(sum_w2, BigInt(total));
    VarianceReport rep;
    rep.variance = second - mean * mean;
    rep.bound = 30.0 * std::pow(static_cast<double>(ell), 5.0 / 3.0);
    rep.within_bound = to_double(rep.variance) <= rep.bound;
    return rep;
}

// --- distribution calculators ----------------------------------------------------

Rational HypergeomPmf::prob(long long i) const {
    if (i < i_min || i > i_max) return Rational(0);
    return probs[static_cast<std::size_t>(i - i_min)];
}

Rational HypergeomPmf::mean() const {
    Rational m(0);
    for (long long i = i_min; i <= i_max; ++i) m += Rational(i) * prob(i);
    return m;
}

Rational HypergeomPmf::variance() const {
    Rational m = mean(), s(0);
    for (long long i = i_min; i <= i_max; ++i) s += Rational(i) * Rational(i) * prob(i);
    return s - m * m;
}

HypergeomPmf hypergeom_pmf(const HypergeomSpec& spec) {
    long long N = spec.population, t = spec.special, m = spec.draws;
    if (!(0 <= t && t <= N && 0 <= m && m <= N))
        throw std::invalid_argument("hypergeom_pmf: need 0 <= t <= N and 0 <= m <= N");
    HypergeomPmf pmf;
    pmf.i_min = std::max<long long>(0, m - (N - t));
    pmf.i_max = std::min(m, t);
    BigInt denom = binomial(N, m);
    pmf.max_value = Rational(-1);
    for (long long i = pmf.i_min; i <= pmf.i_max; ++i) {
        Rational p(binomial(t, i) * binomial(N - t, m - i), denom);
        pmf.probs.push_back(p);
        if (p > pmf.max_value) {
            pmf.max_value = p;
            pmf.argmax = i;
        }
    }
    return pmf;
}

double poisson_pmf_at(double lambda, long long d) {
    return std::exp(static_cast<double>(d) * std::log(lambda) - lambda -
                    std::lgamma(static_cast<double>(d) + 1.0));
}

double poisson_mode_bound(long long d) {
    if (d < 1) throw std::invalid_argument("poisson_mode_bound: requires d >= 1");
    double dd = static_cast<double>(d);
    return std::exp(dd * std::log(dd) - dd - std::lgamma(dd + 1.0));
}

namespace {

BigInt floor_rational(const Rational& r) {
    BigInt num = numerator(r), den = denominator(r); // den > 0 in canonical form
    BigInt q = num / den;                            // truncates toward zero
    if (num < 0 && q * den != num) --q;
    return q;
}

} // namespace

ModeDegreePrediction predicted_mode_degree(const Graph& g, int k, long long ell, double w) {
    MomentReport mom = exact_moments(g, k, ell);
    Rational center = (Rational(ell) - mom.mu) / k;
    ModeDegreePrediction pred;
    pred.center = to_double(center);
    pred.halfwidth = (w / k) * std::pow(static_cast<double>(ell), 5.0 / 6.0);
    pred.d = floor_rational(center + Rational(1, 2)).convert_to<long long>();
    // two integers inside [center - h, center + h] means the prediction
    // cannot be pinned; report instead of choosing
    long long lo = static_cast<long long>(std::ceil(pred.center - pred.halfwidth));
    long long hi = static_cast<long long>(std::floor(pred.center + pred.halfwidth));
    pred.ambiguous = hi - lo >= 1;
    return pred;
}

int median_degree_into(const Graph& g, const VertexSet& s) {
    if (s.size() >= g.n()) throw std::invalid_argument("median_degree_into: S must not cover V");
    std::vector<int> degs;
    degs.reserve(static_cast<std::size_t>(g.n() - s.size()));
    for (int v = 0; v < g.n(); ++v)
        if (!s.contains(v)) degs.push_back(degree_into(g, v, s));
    // lower median: floor((N+1)/2)-th order statistic, 1-based
    std::size_t idx = (degs.size() + 1) / 2 - 1;
    std::nth_element(degs.begin(), degs.begin() + static_cast<std::ptrdiff_t>(idx), degs.end());
    return degs[idx];
}

SplitCaseReport classify_split_case(const SampleContext& ctx) {
    const SampleEnv& env = *ctx.env;
    const Graph& g = *env.g;
    SplitCaseReport rep;
    rep.median = median_degree_into(g, ctx.s_set);
    for (int v = 0; v < g.n(); ++v)
        if (!ctx.s_set.contains(v) && degree_into(g, v, ctx.s_set) != rep.median) ++rep.differing;
    int m = std::max(1, env.m);
    rep.threshold = std::pow(env.params.resolved_w(), 0.25) * g.n() / m;
    rep.case_id = rep.differing <= rep.threshold ? 1 : 2;
    return rep;
}

} // namespace edgestat
