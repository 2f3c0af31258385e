#include "edgestat/coloring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace edgestat {

std::vector<int> ProcessTrace::black_prefix() const {
    // black draws in order, repeats included (a redrawn black vertex is
    // colored black again and counts toward the stop)
    std::vector<int> prefix;
    for (std::size_t i = 0; i < sequence.size(); ++i)
        if (colors[i] == Color::black) prefix.push_back(sequence[i]);
    return prefix;
}

ProcessTrace run_coloring(const Graph& g, int k, long long ell, PhiloxRng& rng,
                          long long step_cap) {
    if (k < 2 || ell < 1 || step_cap < k)
        throw std::invalid_argument("run_coloring: need k >= 2, ell >= 1, step_cap >= k");
    ProcessTrace trace;
    VertexSet blackset(g.n());
    long long black_edges = 0; // e(blackset); stays < ell on every reachable state
    int blacks = 0;            // black positions, multiplicity counted
    for (long long i = 1; i <= step_cap; ++i) {
        int v = rng.uniform_vertex(g.n());
        trace.sequence.push_back(v);
        bool green;
        if (i == 1) {
            green = false;
        } else {
            long long with_v =
                black_edges + (blackset.contains(v) ? 0 : degree_into(g, v, blackset));
            green = with_v >= ell;
        }
        trace.colors.push_back(green ? Color::green : Color::black);
        if (!green) {
            if (!blackset.contains(v)) {
                black_edges += degree_into(g, v, blackset);
                blackset.add(v);
            }
            if (++blacks == k - 1) {
                trace.stop_index = i;
                long long greens = 0;
                for (Color c : trace.colors) greens += (c == Color::green);
                trace.y_value = greens;
                return trace;
            }
            // every vertex green-eligible means no further black can occur
            if (black_edges >= ell) return trace;
        }
    }
    return trace; // step cap hit
}

std::vector<Color> recolor(const Graph& g, long long ell, std::span<const int> sequence) {
    std::vector<Color> colors;
    colors.reserve(sequence.size());
    VertexSet blackset(g.n());
    long long black_edges = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        int v = sequence[i];
        bool green = false;
        if (i > 0) {
            long long with_v =
                black_edges + (blackset.contains(v) ? 0 : degree_into(g, v, blackset));
            green = with_v >= ell;
        }
        colors.push_back(green ? Color::green : Color::black);
        if (!green && !blackset.contains(v)) {
            black_edges += degree_into(g, v, blackset);
            blackset.add(v);
        }
    }
    return colors;
}

GeomParams geometric_params(const Graph& g, std::span<const int> prefix, long long ell) {
    if (prefix.size() < 1)
        throw std::invalid_argument("geometric_params: prefix length must be k-1 >= 1");
    GeomParams params;
    params.prefix.assign(prefix.begin(), prefix.end());
    VertexSet u(g.n());
    long long u_edges = 0;
    int n = g.n();
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
        int v = prefix[i];
        if (!u.contains(v)) {
            u_edges += degree_into(g, v, u);
            u.add(v);
        }
        long long eligible = 0;
        for (int cand = 0; cand < n; ++cand) {
            long long with_cand =
                u_edges + (u.contains(cand) ? 0 : degree_into(g, cand, u));
            eligible += (with_cand >= ell);
        }
        params.p.emplace_back(eligible, n);
    }
    return params;
}

Rational y1_prob(const GeomParams& params) {
    Rational product(1);
    for (const Rational& p : params.p) product *= (1 - p);
    Rational sum(0);
    for (const Rational& p : params.p) sum += p;
    return sum * product; // 0 whenever some p_j = 1
}

YPmf y_pmf(const GeomParams& params, int y_max) {
    if (y_max < 0) throw std::invalid_argument("y_pmf: y_max must be >= 0");
    for (const Rational& p : params.p)
        if (p == 1) throw std::domain_error("y_pmf: some p_j = 1, the sum diverges");

    std::vector<Rational> pmf(static_cast<std::size_t>(y_max) + 1, Rational(0));
    pmf[0] = 1; // zero parameters: point mass at 0
    for (const Rational& p : params.p) {
        // convolve with Pr[geom(p) = y] = p^y (1-p)
        std::vector<Rational> powers(static_cast<std::size_t>(y_max) + 1);
        powers[0] = 1;
        for (int y = 1; y <= y_max; ++y) powers[static_cast<std::size_t>(y)] = powers[static_cast<std::size_t>(y - 1)] * p;
        std::vector<Rational> next(static_cast<std::size_t>(y_max) + 1, Rational(0));
        Rational q = 1 - p;
        for (int y = 0; y <= y_max; ++y) {
            Rational acc(0);
            for (int ggap = 0; ggap <= y; ++ggap)
                acc += powers[static_cast<std::size_t>(ggap)] * q * pmf[static_cast<std::size_t>(y - ggap)];
            next[static_cast<std::size_t>(y)] = acc;
        }
        pmf = std::move(next);
    }
    YPmf out;
    out.probs = std::move(pmf);
    Rational total(0);
    for (const Rational& p : out.probs) total += p;
    out.tail = 1 - total;
    return out;
}

ConditionalYSampler::ConditionalYSampler(const Graph& g, std::span<const int> prefix,
                                         long long ell)
    : n_(g.n()) {
    if (prefix.size() < 1)
        throw std::invalid_argument("ConditionalYSampler: prefix length must be k-1 >= 1");
    VertexSet u(g.n());
    long long u_edges = 0;
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
        int v = prefix[i];
        if (!u.contains(v)) {
            u_edges += degree_into(g, v, u);
            u.add(v);
        }
        VertexSet elig(g.n());
        for (int cand = 0; cand < n_; ++cand) {
            long long with_cand = u_edges + (u.contains(cand) ? 0 : degree_into(g, cand, u));
            if (with_cand >= ell) elig.add(cand);
        }
        if (elig.size() == n_)
            throw std::domain_error("ConditionalYSampler: a gap has every vertex eligible");
        eligible_.push_back(std::move(elig));
    }
}

long long ConditionalYSampler::draw(PhiloxRng& rng) const {
    long long y = 0;
    for (const VertexSet& elig : eligible_) {
        for (;;) {
            int v = rng.uniform_vertex(n_);
            if (!elig.contains(v)) break;
            ++y;
        }
    }
    return y;
}

CouplingReport coupling_report(const Graph& g, int k, long long ell, const McConfig& cfg,
                               long long step_cap) {
    if (k < 2 || ell < 1) throw std::invalid_argument("coupling_report: need k >= 2, ell >= 1");

    constexpr std::uint64_t kTrialsPerStream = 8192;
    std::uint64_t nranges = (cfg.trials + kTrialsPerStream - 1) / kTrialsPerStream;
    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::uint64_t>(1, nranges))));

    struct Counts {
        std::uint64_t x_tilde = 0, both = 0, y1 = 0, distinct = 0;
        std::uint64_t violations = 0, nondistinct = 0, diverged = 0;
    };
    std::vector<Counts> partial(static_cast<std::size_t>(threads));
    std::atomic<std::uint64_t> next{0};

    auto worker = [&](int tid) {
        Counts& acc = partial[static_cast<std::size_t>(tid)];
        VertexSet prefix_set(g.n());
        for (;;) {
            std::uint64_t r = next.fetch_add(1);
            if (r >= nranges) return;
            PhiloxRng rng(cfg.seed, r);
            std::uint64_t lo = r * kTrialsPerStream;
            std::uint64_t hi = std::min(cfg.trials, lo + kTrialsPerStream);
            for (std::uint64_t t = lo; t < hi; ++t) {
                // one shared with-replacement sequence per trial; the
                // coloring state and the first-k prefix statistics advance
                // together
                prefix_set.clear();
                VertexSet blackset(g.n());
                long long black_edges = 0;
                int blacks = 0;
                long long greens = 0;
                long long x_k = 0, x_k1 = 0, prefix_edges = 0;
                bool distinct = true;
                bool stopped = false, y1 = false;
                for (long long i = 1; i <= step_cap; ++i) {
                    int v = rng.uniform_vertex(g.n());
                    if (i <= k) {
                        if (prefix_set.contains(v)) {
                            distinct = false;
                        } else {
                            prefix_edges += degree_into(g, v, prefix_set);
                            prefix_set.add(v);
                        }
                        if (i == k - 1) x_k1 = prefix_edges;
                        if (i == k) x_k = prefix_edges;
                    }
                    if (!stopped) {
                        bool green;
                        if (i == 1) {
                            green = false;
                        } else {
                            long long with_v = black_edges +
                                               (blackset.contains(v) ? 0 : degree_into(g, v, blackset));
                            green = with_v >= ell;
                        }
                        if (green) {
                            ++greens;
                        } else {
                            if (!blackset.contains(v)) {
                                black_edges += degree_into(g, v, blackset);
                                blackset.add(v);
                            }
                            if (++blacks == k - 1) {
                                stopped = true;
                                y1 = greens == 1;
                            }
                        }
                    }
                    if (stopped && i >= k) break;
                }
                if (!stopped) ++acc.diverged;
                bool both = x_k == ell && x_k1 == ell;
                acc.x_tilde += (x_k == ell);
                acc.both += both;
                acc.y1 += (stopped && y1);
                acc.distinct += distinct;
                if (both && !(stopped && y1)) {
                    if (distinct)
                        ++acc.violations;
                    else
                        ++acc.nondistinct;
                }
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

    Counts total;
    for (const Counts& c : partial) {
        total.x_tilde += c.x_tilde;
        total.both += c.both;
        total.y1 += c.y1;
        total.distinct += c.distinct;
        total.violations += c.violations;
        total.nondistinct += c.nondistinct;
        total.diverged += c.diverged;
    }

    CouplingReport rep;
    rep.pr_x_tilde = make_estimate(total.x_tilde, cfg.trials, cfg);
    rep.pr_both = make_estimate(total.both, cfg.trials, cfg);
    rep.pr_y1 = make_estimate(total.y1, cfg.trials, cfg);
    rep.pr_distinct = make_estimate(total.distinct, cfg.trials, cfg);
    rep.implication_violations = total.violations;
    rep.nondistinct_exceptions = total.nondistinct;
    rep.diverged_runs = total.diverged;
    rep.small_n_warning = static_cast<long long>(g.n()) < static_cast<long long>(k) * k;
    return rep;
}

} // namespace edgestat
