#include "edgestat/mc.hpp"

#include "edgestat/events.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace edgestat {

namespace {
constexpr std::uint64_t kTrialsPerStream = 8192;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }
} // namespace

std::pair<double, double> wilson_ci(std::uint64_t successes, std::uint64_t trials, double level) {
    if (trials == 0 || successes > trials)
        throw std::invalid_argument("wilson_ci: need 0 <= successes <= trials, trials >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("wilson_ci: level must be in (0,1)");
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    boost::math::normal_distribution<double> norm;
    double z = boost::math::quantile(norm, (1.0 + level) / 2.0);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    double lo = successes == 0 ? 0.0 : clamp01(center - half);
    double hi = successes == trials ? 1.0 : clamp01(center + half);
    return {lo, hi};
}

std::pair<double, double> clopper_pearson_ci(std::uint64_t successes, std::uint64_t trials,
                                             double level) {
    if (trials == 0 || successes > trials)
        throw std::invalid_argument("clopper_pearson_ci: need 0 <= successes <= trials");
    double alpha = 1.0 - level;
    double s = static_cast<double>(successes);
    double n = static_cast<double>(trials);
    double lo = 0.0, hi = 1.0;
    if (successes > 0)
        lo = boost::math::ibeta_inv(s, n - s + 1.0, alpha / 2.0);
    if (successes < trials)
        hi = boost::math::ibeta_inv(s + 1.0, n - s, 1.0 - alpha / 2.0);
    return {clamp01(lo), clamp01(hi)};
}

Estimate make_estimate(std::uint64_t successes, std::uint64_t trials, const McConfig& cfg) {
    Estimate e;
    e.successes = successes;
    e.trials = trials;
    e.point = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    auto [lo, hi] = cfg.interval == McConfig::Interval::wilson
                        ? wilson_ci(successes, trials, cfg.confidence_level)
                        : clopper_pearson_ci(successes, trials, cfg.confidence_level);
    e.ci_low = lo;
    e.ci_high = hi;
    e.seed = cfg.seed;
    return e;
}

// --- sampling -----------------------------------------------------------------

SubsetSampler::SubsetSampler(int n) : perm_(static_cast<std::size_t>(n)) {
    std::iota(perm_.begin(), perm_.end(), 0);
}

void SubsetSampler::draw(int k, PhiloxRng& rng, std::vector<int>& out) {
    int n = static_cast<int>(perm_.size());
    if (k > n) throw std::invalid_argument("SubsetSampler: k > n");
    swaps_.clear();
    out.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(perm_[static_cast<std::size_t>(i)], perm_[static_cast<std::size_t>(j)]);
        swaps_.push_back(j);
        out[static_cast<std::size_t>(i)] = perm_[static_cast<std::size_t>(i)];
    }
    for (int i = k - 1; i >= 0; --i)
        std::swap(perm_[static_cast<std::size_t>(i)], perm_[static_cast<std::size_t>(swaps_[static_cast<std::size_t>(i)])]);
}

VertexSet sample_ksubset(const Graph& g, int k, PhiloxRng& rng) {
    if (k > g.n()) throw std::invalid_argument("sample_ksubset: k > n");
    SubsetSampler sampler(g.n());
    std::vector<int> picks;
    sampler.draw(k, rng, picks);
    return VertexSet::of(g.n(), picks);
}

SplitSample sample_split(const Graph& g, int k, int m, PhiloxRng& rng) {
    if (!(1 <= m && m < k && k <= g.n()))
        throw std::invalid_argument("sample_split: need 1 <= m < k <= n");
    SubsetSampler sampler(g.n());
    std::vector<int> picks;
    sampler.draw(k, rng, picks);
    SplitSample s{VertexSet(g.n()), VertexSet(g.n()), VertexSet(g.n())};
    for (int i = 0; i < k; ++i) {
        int v = picks[static_cast<std::size_t>(i)];
        s.A.add(v);
        if (i < k - m)
            s.S.add(v);
        else
            s.Q.add(v);
    }
    return s;
}

// --- sample contexts ---------------------------------------------------------

double SampleParams::resolved_w() const {
    if (w > 0.0) return w;
    return std::max(1.0, std::log(static_cast<double>(k)));
}

int SampleParams::resolved_m() const {
    if (m >= 0) return m;
    if (k < 2) return 0;
    double raw = k / (std::cbrt(resolved_w()) * std::sqrt(static_cast<double>(ell)));
    long long r = std::llround(raw);
    return static_cast<int>(std::clamp<long long>(r, 1, k - 1));
}

SampleEnv make_sample_env(const Graph& g, SampleParams params) {
    if (params.k < 1 || params.k > g.n())
        throw std::invalid_argument("make_sample_env: need 1 <= k <= n");
    if (params.ell < 1) throw std::invalid_argument("make_sample_env: need ell >= 1");
    SampleEnv env;
    env.g = &g;
    env.params = params;
    env.m = params.resolved_m();
    env.split = heavy_light(g, params.k, params.ell);
    MomentReport mom = exact_moments(g, params.k, params.ell);
    env.mu1 = mom.mu1;
    env.mu2 = mom.mu2;
    env.mu = mom.mu;
    env.mu_double = to_double(env.mu);
    return env;
}

ContextFactory::ContextFactory(const SampleEnv& env) : env_(&env), sampler_(env.g->n()) {}

SampleContext ContextFactory::blank() const {
    SampleContext ctx;
    ctx.env = env_;
    int n = env_->g->n();
    ctx.s_set = VertexSet(n);
    ctx.q_set = VertexSet(n);
    ctx.a_set = VertexSet(n);
    return ctx;
}

void ContextFactory::fill_from(SampleContext& ctx, std::span<const int> ordered_a) {
    const Graph& g = *env_->g;
    int k = env_->params.k;
    int m = env_->m;
    if (static_cast<int>(ordered_a.size()) != k)
        throw std::invalid_argument("ContextFactory: draw size != k");

    for (int v : ctx.a_vertices) ctx.a_set.remove(v);
    for (int v : ctx.s_vertices) ctx.s_set.remove(v);
    for (int v : ctx.q_vertices) ctx.q_set.remove(v);

    ctx.s_vertices.assign(ordered_a.begin(), ordered_a.begin() + (k - m));
    ctx.q_vertices.assign(ordered_a.begin() + (k - m), ordered_a.end());
    ctx.a_vertices.assign(ordered_a.begin(), ordered_a.end());
    for (int v : ctx.s_vertices) ctx.s_set.add(v);
    for (int v : ctx.q_vertices) ctx.q_set.add(v);
    for (int v : ctx.a_vertices) ctx.a_set.add(v);

    ctx.deg_in_a.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        ctx.deg_in_a[static_cast<std::size_t>(i)] = degree_into(g, ctx.a_vertices[static_cast<std::size_t>(i)], ctx.a_set);
    ctx.q_deg_into_s.resize(ctx.q_vertices.size());
    for (std::size_t i = 0; i < ctx.q_vertices.size(); ++i)
        ctx.q_deg_into_s[i] = degree_into(g, ctx.q_vertices[i], ctx.s_set);

    ctx.e_s = induced_edges(g, std::span<const int>(ctx.s_vertices));
    ctx.e_q = induced_edges(g, std::span<const int>(ctx.q_vertices));
    ctx.x = induced_edges(g, std::span<const int>(ctx.a_vertices));
}

void ContextFactory::draw_into(SampleContext& ctx, PhiloxRng& rng) {
    sampler_.draw(env_->params.k, rng, scratch_);
    fill_from(ctx, scratch_);
}

// --- trial harness -------------------------------------------------------------

namespace {

// Runs `trials` context draws split into fixed ranges; `body(ctx)` is invoked
// once per trial and accumulates into per-range slots merged by summation.
template <class Body>
std::vector<std::uint64_t> run_ranges(const SampleEnv& env, const McConfig& cfg, int counters,
                                      Body&& body) {
    std::uint64_t nranges = (cfg.trials + kTrialsPerStream - 1) / kTrialsPerStream;
    std::vector<std::uint64_t> totals(static_cast<std::size_t>(counters), 0);
    if (cfg.trials == 0) return totals;

    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(nranges)));

    std::vector<std::vector<std::uint64_t>> partial(
        static_cast<std::size_t>(threads), std::vector<std::uint64_t>(static_cast<std::size_t>(counters), 0));
    std::atomic<std::uint64_t> next{0};

    auto worker = [&](int tid) {
        ContextFactory factory(env);
        SampleContext ctx = factory.blank();
        auto& acc = partial[static_cast<std::size_t>(tid)];
        for (;;) {
            std::uint64_t r = next.fetch_add(1);
            if (r >= nranges) return;
            PhiloxRng rng(cfg.seed, r);
            std::uint64_t lo = r * kTrialsPerStream;
            std::uint64_t hi = std::min(cfg.trials, lo + kTrialsPerStream);
            for (std::uint64_t t = lo; t < hi; ++t) {
                factory.draw_into(ctx, rng);
                body(ctx, acc);
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (const auto& acc : partial)
        for (int c = 0; c < counters; ++c) totals[static_cast<std::size_t>(c)] += acc[static_cast<std::size_t>(c)];
    return totals;
}

} // namespace

std::vector<std::uint64_t> run_context_trials(const Graph& g, const SampleParams& params,
                                              int counters, const ContextVisitor& visit,
                                              const McConfig& cfg) {
    SampleEnv env = make_sample_env(g, params);
    return run_ranges(env, cfg, counters,
                      [&](const SampleContext& ctx, std::vector<std::uint64_t>& acc) {
                          visit(ctx, std::span<std::uint64_t>(acc));
                      });
}

Estimate estimate_event(const Graph& g, const SampleParams& params, const ContextPredicate& pred,
                        const McConfig& cfg) {
    SampleEnv env = make_sample_env(g, params);
    auto totals = run_ranges(env, cfg, 1, [&](const SampleContext& ctx, std::vector<std::uint64_t>& acc) {
        if (pred(ctx)) ++acc[0];
    });
    return make_estimate(totals[0], cfg.trials, cfg);
}

ContainmentResult estimate_containment(const Graph& g, const SampleParams& params,
                                       const ContextPredicate& event_e,
                                       const ContextPredicate& event_f, const McConfig& cfg) {
    SampleEnv env = make_sample_env(g, params);
    auto totals = run_ranges(env, cfg, 3, [&](const SampleContext& ctx, std::vector<std::uint64_t>& acc) {
        bool e = event_e(ctx);
        bool f = event_f(ctx);
        if (e && !f) ++acc[0];
        if (e && f) ++acc[1];
        if (e) ++acc[2];
    });
    return ContainmentResult{make_estimate(totals[0], cfg.trials, cfg),
                             make_estimate(totals[1], cfg.trials, cfg),
                             make_estimate(totals[2], cfg.trials, cfg)};
}

} // namespace edgestat
