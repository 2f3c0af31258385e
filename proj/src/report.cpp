#include "edgestat/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace edgestat {

namespace fs = std::filesystem;

namespace {

// --- FamilySpec <-> JSON ------------------------------------------------------

FamilySpec family_from_json(const Json& j);

Json family_to_json(const FamilySpec& spec) {
    return std::visit(
        [](const auto& s) -> Json {
            using T = std::decay_t<decltype(s)>;
            Json j;
            if constexpr (std::is_same_v<T, FamilySpec::Empty>) {
                j["empty"] = Json{{"n", s.n}};
            } else if constexpr (std::is_same_v<T, FamilySpec::Complete>) {
                j["complete"] = Json{{"n", s.n}};
            } else if constexpr (std::is_same_v<T, FamilySpec::CompleteBipartite>) {
                j["complete_bipartite"] = Json{{"a", s.a}, {"b", s.b}};
            } else if constexpr (std::is_same_v<T, FamilySpec::Gnp>) {
                j["gnp"] = Json{{"n", s.n}, {"p", s.p}, {"seed", s.seed}};
            } else {
                Json parts = Json::array();
                for (const auto& p : s.parts) parts.push_back(family_to_json(p));
                j["union_of"] = parts;
            }
            return j;
        },
        spec.v);
}

FamilySpec family_from_json(const Json& j) {
    if (!j.is_object() || j.size() != 1)
        throw std::invalid_argument("graph.family: expected exactly one variant key");
    const auto& [key, val] = *j.items().begin();
    FamilySpec spec;
    if (key == "empty") {
        spec.v = FamilySpec::Empty{val.at("n").get<int>()};
    } else if (key == "complete") {
        spec.v = FamilySpec::Complete{val.at("n").get<int>()};
    } else if (key == "complete_bipartite") {
        spec.v = FamilySpec::CompleteBipartite{val.at("a").get<int>(), val.at("b").get<int>()};
    } else if (key == "gnp") {
        if (!val.contains("seed"))
            throw std::invalid_argument("graph.family.gnp: explicit seed required");
        spec.v = FamilySpec::Gnp{val.at("n").get<int>(), val.at("p").get<double>(),
                                 val.at("seed").get<std::uint64_t>()};
    } else if (key == "union_of") {
        FamilySpec::UnionOf u;
        for (const auto& part : val) u.parts.push_back(family_from_json(part));
        spec.v = std::move(u);
    } else {
        throw std::invalid_argument("graph.family: unknown variant '" + key + "'");
    }
    return spec;
}

// --- EventId <-> JSON ---------------------------------------------------------

EventId event_from_json(const Json& j, long long default_ell) {
    std::string type = j.at("type").get<std::string>();
    if (type == "D") return EventId::D(j.at("d").get<long long>());
    if (type == "Dstar") return {EventId::Kind::Dstar, 0};
    if (type == "E1") return {EventId::Kind::E1, 0};
    if (type == "E2") return {EventId::Kind::E2, 0};
    if (type == "E3") return {EventId::Kind::E3, 0};
    if (type == "E4") return {EventId::Kind::E4, 0};
    if (type == "F1") return {EventId::Kind::F1, 0};
    if (type == "F2") return {EventId::Kind::F2, 0};
    if (type == "F3") return {EventId::Kind::F3, 0};
    if (type == "F4") return {EventId::Kind::F4, 0};
    if (type == "X_equals")
        return EventId::x_equals(j.contains("value") ? j.at("value").get<long long>() : default_ell);
    throw std::invalid_argument("event: unknown type '" + type + "'");
}

Json event_to_json(const EventId& id) {
    switch (id.kind) {
    case EventId::Kind::D: return Json{{"type", "D"}, {"d", id.arg}};
    case EventId::Kind::Dstar: return Json{{"type", "Dstar"}};
    case EventId::Kind::E1: return Json{{"type", "E1"}};
    case EventId::Kind::E2: return Json{{"type", "E2"}};
    case EventId::Kind::E3: return Json{{"type", "E3"}};
    case EventId::Kind::E4: return Json{{"type", "E4"}};
    case EventId::Kind::F1: return Json{{"type", "F1"}};
    case EventId::Kind::F2: return Json{{"type", "F2"}};
    case EventId::Kind::F3: return Json{{"type", "F3"}};
    case EventId::Kind::F4: return Json{{"type", "F4"}};
    case EventId::Kind::XEquals: return Json{{"type", "X_equals"}, {"value", id.arg}};
    }
    throw std::logic_error("event_to_json: unknown kind");
}

std::string event_label(const EventId& id) {
    switch (id.kind) {
    case EventId::Kind::D: return "D(" + std::to_string(id.arg) + ")";
    case EventId::Kind::Dstar: return "Dstar";
    case EventId::Kind::E1: return "E1";
    case EventId::Kind::E2: return "E2";
    case EventId::Kind::E3: return "E3";
    case EventId::Kind::E4: return "E4";
    case EventId::Kind::F1: return "F1";
    case EventId::Kind::F2: return "F2";
    case EventId::Kind::F3: return "F3";
    case EventId::Kind::F4: return "F4";
    case EventId::Kind::XEquals: return "X=" + std::to_string(id.arg);
    }
    return "?";
}

// --- misc helpers ---------------------------------------------------------------

const std::vector<std::string> kKinds = {
    "exact_pmf",  "extremal", "monotonicity", "mc_event",  "containment",
    "coupling",   "moments",  "event_frequencies", "hypergeom", "poisson_bound"};

bool kind_needs_graph(const std::string& kind) {
    return kind == "exact_pmf" || kind == "mc_event" || kind == "containment" ||
           kind == "coupling" || kind == "moments" || kind == "event_frequencies";
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n < 0) {
            if (ls >> n) continue;
            continue; // blank/comment before the header
        }
        int u, v;
        if (ls >> u >> v) edges.emplace_back(u, v);
    }
    if (n < 0) throw std::invalid_argument("edge list: missing vertex count header");
    return Graph::from_edges(n, edges);
}

Graph load_graph(const ExperimentConfig& cfg) {
    if (cfg.family) return generate(*cfg.family);
    if (cfg.graph6_file) {
        std::ifstream in(*cfg.graph6_file);
        if (!in) throw std::runtime_error("cannot open graph6 file: " + *cfg.graph6_file);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) return parse_graph6(line);
        throw std::invalid_argument("graph6 file is empty: " + *cfg.graph6_file);
    }
    if (cfg.edge_list_file) return load_edge_list(*cfg.edge_list_file);
    throw std::invalid_argument("config: kind '" + cfg.kind + "' requires a graph source");
}

Json rational_json(const Rational& r) {
    return Json{{"rational", rational_string(r)}, {"value", to_double(r)}};
}

SampleParams params_of(const ExperimentConfig& cfg) {
    return SampleParams{cfg.k, cfg.ell, cfg.w, cfg.split_m};
}

} // namespace

// --- config parsing ----------------------------------------------------------------

ExperimentConfig parse_config(const Json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
    ExperimentConfig cfg;
    cfg.kind = doc.value("kind", std::string{});
    if (std::find(kKinds.begin(), kKinds.end(), cfg.kind) == kKinds.end())
        throw std::invalid_argument("config.kind: unknown kind '" + cfg.kind + "'");

    if (doc.contains("graph")) {
        const Json& g = doc.at("graph");
        int sources = 0;
        if (g.contains("family")) {
            cfg.family = family_from_json(g.at("family"));
            ++sources;
        }
        if (g.contains("graph6_file")) {
            cfg.graph6_file = g.at("graph6_file").get<std::string>();
            ++sources;
        }
        if (g.contains("edge_list_file")) {
            cfg.edge_list_file = g.at("edge_list_file").get<std::string>();
            ++sources;
        }
        if (sources != 1)
            throw std::invalid_argument("config.graph: exactly one graph source required");
    } else if (kind_needs_graph(cfg.kind)) {
        throw std::invalid_argument("config: kind '" + cfg.kind + "' requires a graph source");
    }

    cfg.k = doc.value("k", 0);
    cfg.ell = doc.value("ell", 1LL);
    cfg.w = doc.value("w", 0.0);
    cfg.split_m = doc.value("m", -1);
    cfg.budget = doc.value("budget", kDefaultEnumBudget);
    cfg.with_variance = doc.value("with_variance", false);

    if (doc.contains("mc")) {
        const Json& m = doc.at("mc");
        cfg.mc.trials = m.value("trials", cfg.mc.trials);
        cfg.mc.seed = m.value("seed", cfg.mc.seed);
        cfg.mc.confidence_level = m.value("confidence_level", cfg.mc.confidence_level);
        std::string interval = m.value("interval", std::string{"wilson"});
        if (interval == "wilson")
            cfg.mc.interval = McConfig::Interval::wilson;
        else if (interval == "clopper_pearson")
            cfg.mc.interval = McConfig::Interval::clopper_pearson;
        else
            throw std::invalid_argument("config.mc.interval: unknown interval '" + interval + "'");
        if (cfg.mc.trials < 1) throw std::invalid_argument("config.mc.trials: must be >= 1");
        if (!(cfg.mc.confidence_level > 0.0 && cfg.mc.confidence_level < 1.0))
            throw std::invalid_argument("config.mc.confidence_level: must be in (0,1)");
    }

    if (doc.contains("event")) cfg.event_e = event_from_json(doc.at("event"), cfg.ell);
    if (doc.contains("event_f")) cfg.event_f = event_from_json(doc.at("event_f"), cfg.ell);

    cfg.n = doc.value("n", 0);
    if (doc.contains("n_list")) cfg.n_list = doc.at("n_list").get<std::vector<int>>();
    cfg.catalog = doc.value("catalog", std::string{});

    if (doc.contains("hypergeom")) {
        const Json& h = doc.at("hypergeom");
        cfg.hypergeom.population = h.at("population").get<long long>();
        cfg.hypergeom.special = h.at("special").get<long long>();
        cfg.hypergeom.draws = h.at("draws").get<long long>();
    }
    cfg.poisson_d_max = doc.value("poisson_d_max", 0LL);

    // kind-specific presence checks
    if (cfg.kind == "exact_pmf" || kind_needs_graph(cfg.kind)) {
        if (cfg.k < 1) throw std::invalid_argument("config.k: must be >= 1");
    }
    if (cfg.kind == "extremal" && cfg.n < 1)
        throw std::invalid_argument("config.n: extremal requires n >= 1");
    if (cfg.kind == "monotonicity" && cfg.n_list.empty())
        throw std::invalid_argument("config.n_list: monotonicity requires a nonempty list");
    if (cfg.kind == "mc_event" && !cfg.event_e)
        throw std::invalid_argument("config.event: mc_event requires an event");
    if (cfg.kind == "containment" && (!cfg.event_e || !cfg.event_f))
        throw std::invalid_argument("config: containment requires event and event_f");
    if (cfg.kind == "hypergeom" && cfg.hypergeom.population < 1)
        throw std::invalid_argument("config.hypergeom: required for kind hypergeom");
    if (cfg.kind == "poisson_bound" && cfg.poisson_d_max < 1)
        throw std::invalid_argument("config.poisson_d_max: must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    Json doc = Json::parse(in);
    return parse_config(doc);
}

Json echo_config(const ExperimentConfig& cfg) {
    Json j;
    j["kind"] = cfg.kind;
    if (cfg.family || cfg.graph6_file || cfg.edge_list_file) {
        Json g;
        if (cfg.family) g["family"] = family_to_json(*cfg.family);
        if (cfg.graph6_file) g["graph6_file"] = *cfg.graph6_file;
        if (cfg.edge_list_file) g["edge_list_file"] = *cfg.edge_list_file;
        j["graph"] = g;
    }
    j["k"] = cfg.k;
    j["ell"] = cfg.ell;
    j["w"] = cfg.w;
    j["m"] = cfg.split_m;
    j["mc"] = Json{{"trials", cfg.mc.trials},
                   {"seed", cfg.mc.seed},
                   {"confidence_level", cfg.mc.confidence_level},
                   {"interval", cfg.mc.interval == McConfig::Interval::wilson ? "wilson"
                                                                              : "clopper_pearson"}};
    if (cfg.event_e) j["event"] = event_to_json(*cfg.event_e);
    if (cfg.event_f) j["event_f"] = event_to_json(*cfg.event_f);
    if (cfg.n) j["n"] = cfg.n;
    if (!cfg.n_list.empty()) j["n_list"] = cfg.n_list;
    if (!cfg.catalog.empty()) j["catalog"] = cfg.catalog;
    if (cfg.hypergeom.population) {
        j["hypergeom"] = Json{{"population", cfg.hypergeom.population},
                              {"special", cfg.hypergeom.special},
                              {"draws", cfg.hypergeom.draws}};
    }
    if (cfg.poisson_d_max) j["poisson_d_max"] = cfg.poisson_d_max;
    j["budget"] = cfg.budget;
    if (cfg.with_variance) j["with_variance"] = true;
    return j;
}

Json estimate_to_json(const Estimate& e, const McConfig& cfg) {
    return Json{{"successes", e.successes},
                {"trials", e.trials},
                {"point", e.point},
                {"ci_low", e.ci_low},
                {"ci_high", e.ci_high},
                {"seed", e.seed},
                {"confidence_level", cfg.confidence_level},
                {"interval", cfg.interval == McConfig::Interval::wilson ? "wilson"
                                                                        : "clopper_pearson"}};
}

Json trace_to_json(const ProcessTrace& trace) {
    Json colors = Json::array();
    for (Color c : trace.colors) colors.push_back(c == Color::black ? "black" : "green");
    Json j;
    j["sequence"] = trace.sequence;
    j["colors"] = colors;
    if (trace.stop_index)
        j["stop_index"] = *trace.stop_index;
    else
        j["stop_index"] = nullptr;
    if (trace.y_value)
        j["y_value"] = *trace.y_value;
    else
        j["y_value"] = nullptr;
    j["diverged"] = trace.diverged();
    return j;
}

// --- payload builders ------------------------------------------------------------

namespace {

Json payload_exact_pmf(const ExperimentConfig& cfg) {
    Graph g = load_graph(cfg);
    SubsetCounts counts = exact_counts(g, cfg.k, cfg.budget);
    DistTable table = DistTable::from_counts(counts);
    Json pmf, pmf_float, count_map;
    for (const auto& [ell, p] : table.probs) {
        pmf[std::to_string(ell)] = rational_string(p);
        pmf_float[std::to_string(ell)] = to_double(p);
        count_map[std::to_string(ell)] = counts.counts[static_cast<std::size_t>(ell)];
    }
    return Json{{"n", g.n()},           {"k", table.k},
                {"support_max", table.support_max}, {"subsets_total", counts.total},
                {"pmf", pmf},           {"pmf_float", pmf_float},
                {"counts", count_map}};
}

Json extremal_to_json(const ExtremalResult& r) {
    return Json{{"value", rational_string(r.value)},
                {"value_float", to_double(r.value)},
                {"witness_graph6", write_graph6(r.witness)},
                {"witness_edges", r.witness.edge_count()},
                {"graphs_scanned", r.graphs_scanned},
                {"source", r.source}};
}

Json payload_extremal(const ExperimentConfig& cfg) {
    ExtremalResult r = cfg.catalog.empty()
                           ? max_over_graphs_exhaustive(cfg.n, cfg.k, cfg.ell)
                           : max_over_graphs_catalog(cfg.catalog, cfg.n, cfg.k, cfg.ell);
    return extremal_to_json(r);
}

Json payload_monotonicity(const ExperimentConfig& cfg) {
    MonotonicityReport rep = monotonicity_report(cfg.n_list, cfg.k, cfg.ell);
    Json rows = Json::array();
    for (const auto& [n, value] : rep.values)
        rows.push_back(Json{{"n", n},
                            {"value", rational_string(value)},
                            {"value_float", to_double(value)}});
    return Json{{"k", rep.k}, {"ell", rep.ell}, {"rows", rows}, {"monotone", rep.monotone}};
}

Json payload_mc_event(const ExperimentConfig& cfg) {
    Graph g = load_graph(cfg);
    SampleParams params = params_of(cfg);
    Estimate est = estimate_event(g, params, [&](const SampleContext& ctx) {
        return eval_event(ctx, *cfg.event_e);
    }, cfg.mc);
    return Json{{"event", event_label(*cfg.event_e)},
                {"m", params.resolved_m()},
                {"w", params.resolved_w()},
                {"estimate", estimate_to_json(est, cfg.mc)}};
}

Json payload_containment(const ExperimentConfig& cfg) {
    Graph g = load_graph(cfg);
    SampleParams params = params_of(cfg);
    ContainmentResult r = estimate_containment(
        g, params,
        [&](const SampleContext& ctx) { return eval_event(ctx, *cfg.event_e); },
        [&](const SampleContext& ctx) { return eval_event(ctx, *cfg.event_f); }, cfg.mc);
    return Json{{"event_e", event_label(*cfg.event_e)},
                {"event_f", event_label(*cfg.event_f)},
                {"m", params.resolved_m()},
                {"e_minus_f", estimate_to_json(r.e_minus_f, cfg.mc)},
                {"e_and_f", estimate_to_json(r.e_and_f, cfg.mc)},
                {"e", estimate_to_json(r.e, cfg.mc)}};
}

Json payload_coupling(const ExperimentConfig& cfg) {
    Graph g = load_graph(cfg);
    CouplingReport rep = coupling_report(g, cfg.k, cfg.ell, cfg.mc);
    return Json{{"pr_x_tilde", estimate_to_json(rep.pr_x_tilde, cfg.mc)},
                {"pr_both", estimate_to_json(rep.pr_both, cfg.mc)},
                {"pr_y1", estimate_to_json(rep.pr_y1, cfg.mc)},
                {"pr_distinct", estimate_to_json(rep.pr_distinct, cfg.mc)},
                {"implication_violations", rep.implication_violations},
                {"nondistinct_exceptions", rep.nondistinct_exceptions},
                {"diverged_runs", rep.diverged_runs},
                {"small_n_warning", rep.small_n_warning}};
}

Json payload_moments(const ExperimentConfig& cfg) {
    Graph g = load_graph(cfg);
    MomentReport mom = exact_moments(g, cfg.k, cfg.ell);
    HeavyLightSplit split = heavy_light(g, cfg.k, cfg.ell);
    Json j{{"mu1", rational_json(mom.mu1)},
           {"mu2", rational_json(mom.mu2)},
           {"mu", rational_json(mom.mu)},
           {"heavy_vertices", split.heavy.size()},
           {"light_vertices", split.light.size()},
           {"degree_threshold", split.threshold}};
    if (cfg.with_variance) {
        VarianceReport var = variance_x_minus_z(g, cfg.k, cfg.ell, cfg.budget);
        j["variance_x_minus_z"] = Json{{"variance", rational_json(var.variance)},
                                       {"bound", var.bound},
                                       {"within_bound", var.within_bound}};
    }
    return j;
}

Json payload_event_frequencies(const ExperimentConfig& cfg) {
    Graph g = load_graph(cfg);
    SampleParams params = params_of(cfg);
    std::vector<EventId> panel = {
        {EventId::Kind::Dstar, 0}, {EventId::Kind::E1, 0}, {EventId::Kind::E2, 0},
        {EventId::Kind::E3, 0},    {EventId::Kind::E4, 0}, {EventId::Kind::F1, 0},
        {EventId::Kind::F2, 0},    {EventId::Kind::F3, 0}, {EventId::Kind::F4, 0},
        EventId::x_equals(cfg.ell)};
    int base = static_cast<int>(panel.size());
    // extra slots: implication violations and the partition identity
    auto totals = run_context_trials(
        g, params, base + 3,
        [&](const SampleContext& ctx, std::span<std::uint64_t> acc) {
            std::vector<bool> hit(panel.size());
            for (std::size_t i = 0; i < panel.size(); ++i) {
                hit[i] = eval_event(ctx, panel[i]);
                if (hit[i]) ++acc[i];
            }
            bool e1 = hit[1], e2 = hit[2], e3 = hit[3], e4 = hit[4];
            bool x_ell = hit[static_cast<std::size_t>(base) - 1];
            if (e1 && x_ell && !e2) ++acc[static_cast<std::size_t>(base)];
            if (e1 && e3 && !e4) ++acc[static_cast<std::size_t>(base) + 1];
            long long q_sum = ctx.e_s + ctx.e_q;
            for (int d : ctx.q_deg_into_s) q_sum += d;
            if (q_sum != ctx.x) ++acc[static_cast<std::size_t>(base) + 2];
        },
        cfg.mc);
    Json freq;
    for (std::size_t i = 0; i < panel.size(); ++i)
        freq[event_label(panel[i])] =
            estimate_to_json(make_estimate(totals[i], cfg.mc.trials, cfg.mc), cfg.mc);
    Json checks{{"e1_and_x_implies_e2_violations", totals[static_cast<std::size_t>(base)]},
                {"e1_and_e3_implies_e4_violations", totals[static_cast<std::size_t>(base) + 1]},
                {"partition_identity_violations", totals[static_cast<std::size_t>(base) + 2]}};
    return Json{{"m", params.resolved_m()},
                {"w", params.resolved_w()},
                {"frequencies", freq},
                {"checks", checks}};
}

Json payload_hypergeom(const ExperimentConfig& cfg) {
    HypergeomPmf pmf = hypergeom_pmf(cfg.hypergeom);
    Json entries, entries_float;
    for (long long i = pmf.i_min; i <= pmf.i_max; ++i) {
        entries[std::to_string(i)] = rational_string(pmf.prob(i));
        entries_float[std::to_string(i)] = to_double(pmf.prob(i));
    }
    double var = to_double(pmf.variance());
    double llt = var > 0 ? 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * var) : 1.0;
    return Json{{"population", cfg.hypergeom.population},
                {"special", cfg.hypergeom.special},
                {"draws", cfg.hypergeom.draws},
                {"i_min", pmf.i_min},
                {"i_max", pmf.i_max},
                {"argmax", pmf.argmax},
                {"max_value", rational_string(pmf.max_value)},
                {"max_value_float", to_double(pmf.max_value)},
                {"mean", rational_string(pmf.mean())},
                {"variance", rational_string(pmf.variance())},
                {"local_limit_value", llt},
                {"pmf", entries},
                {"pmf_float", entries_float}};
}

Json payload_poisson(const ExperimentConfig& cfg) {
    Json rows = Json::array();
    double max_value = 0.0;
    for (long long d = 1; d <= cfg.poisson_d_max; ++d) {
        double v = poisson_mode_bound(d);
        max_value = std::max(max_value, v);
        rows.push_back(Json{{"d", d}, {"value", v}});
    }
    double inv_e = std::exp(-1.0);
    return Json{{"d_max", cfg.poisson_d_max},
                {"rows", rows},
                {"max_value", max_value},
                {"one_over_e", inv_e},
                {"all_below_1_over_e", max_value <= inv_e + 1e-12}};
}

Json build_payload(const ExperimentConfig& cfg) {
    if (cfg.kind == "exact_pmf") return payload_exact_pmf(cfg);
    if (cfg.kind == "extremal") return payload_extremal(cfg);
    if (cfg.kind == "monotonicity") return payload_monotonicity(cfg);
    if (cfg.kind == "mc_event") return payload_mc_event(cfg);
    if (cfg.kind == "containment") return payload_containment(cfg);
    if (cfg.kind == "coupling") return payload_coupling(cfg);
    if (cfg.kind == "moments") return payload_moments(cfg);
    if (cfg.kind == "event_frequencies") return payload_event_frequencies(cfg);
    if (cfg.kind == "hypergeom") return payload_hypergeom(cfg);
    if (cfg.kind == "poisson_bound") return payload_poisson(cfg);
    throw std::logic_error("build_payload: unknown kind " + cfg.kind);
}

std::string cache_key_of(const ExperimentConfig& cfg, const Json& echo) {
    std::uint64_t h = fnv1a(kVersion);
    h = fnv1a(echo.dump(), h);
    // graph bytes participate for file-backed sources
    if (cfg.graph6_file) h = fnv1a(read_file(*cfg.graph6_file), h);
    if (cfg.edge_list_file) h = fnv1a(read_file(*cfg.edge_list_file), h);
    if (!cfg.catalog.empty()) h = fnv1a(read_file(cfg.catalog), h);
    return hex64(h);
}

void atomic_write(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << contents;
    }
    fs::rename(tmp, path);
}

} // namespace

ReportRecord run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    auto started = std::chrono::steady_clock::now();
    Json echo = echo_config(cfg);
    std::string key = cache_key_of(cfg, echo);

    Json payload;
    bool from_cache = false;
    fs::path cache_file;
    if (opts.cache_dir) {
        cache_file = fs::path(*opts.cache_dir) / (key + ".json");
        if (fs::exists(cache_file)) {
            try {
                std::ifstream in(cache_file);
                Json cached = Json::parse(in);
                if (cached.at("config") == echo) {
                    payload = cached.at("payload");
                    from_cache = true;
                }
            } catch (const std::exception&) {
                from_cache = false; // unreadable entry; recompute and overwrite
            }
        }
    }

    if (!from_cache) {
        payload = build_payload(cfg);
        if (opts.cache_dir) {
            fs::create_directories(*opts.cache_dir);
            Json entry{{"edgestat_version", kVersion}, {"config", echo}, {"payload", payload}};
            atomic_write(cache_file, entry.dump(2) + "\n");
        }
    }

    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          started)
                    .count();
    ReportRecord record;
    record.cache_key = key;
    record.from_cache = from_cache;
    record.doc = Json{{"edgestat_version", kVersion},
                      {"config", echo},
                      {"cache_key", key},
                      {"payload", payload},
                      {"wall_clock_ms", ms}};
    return record;
}

std::vector<ReportRecord> sweep(const std::vector<ExperimentConfig>& configs,
                                const RunOptions& opts, int parallelism) {
    std::vector<ReportRecord> results(configs.size());
    if (configs.empty()) return results;
    int threads = parallelism > 0 ? parallelism
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(configs.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            try {
                results[i] = run_experiment(configs[i], opts);
            } catch (const std::exception& ex) {
                ReportRecord err;
                err.doc = Json{{"edgestat_version", kVersion},
                               {"config", echo_config(configs[i])},
                               {"error", ex.what()}};
                results[i] = err;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return results;
}

// --- CSV ------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += "\r\n";
    return out;
}

std::string number_str(const Json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

} // namespace

std::string payload_csv(const std::string& kind, const Json& payload) {
    std::string out;
    if (kind == "exact_pmf") {
        out += csv_row({"ell", "prob", "prob_float", "count"});
        for (const auto& [ell, p] : payload.at("pmf").items())
            out += csv_row({ell, p.get<std::string>(),
                            number_str(payload.at("pmf_float").at(ell)),
                            number_str(payload.at("counts").at(ell))});
    } else if (kind == "monotonicity") {
        out += csv_row({"n", "value", "value_float"});
        for (const auto& row : payload.at("rows"))
            out += csv_row({number_str(row.at("n")), row.at("value").get<std::string>(),
                            number_str(row.at("value_float"))});
    } else if (kind == "event_frequencies") {
        out += csv_row({"event", "successes", "trials", "point", "ci_low", "ci_high"});
        for (const auto& [label, est] : payload.at("frequencies").items())
            out += csv_row({label, number_str(est.at("successes")), number_str(est.at("trials")),
                            number_str(est.at("point")), number_str(est.at("ci_low")),
                            number_str(est.at("ci_high"))});
    } else if (kind == "hypergeom") {
        out += csv_row({"i", "prob", "prob_float"});
        for (const auto& [i, p] : payload.at("pmf").items())
            out += csv_row({i, p.get<std::string>(), number_str(payload.at("pmf_float").at(i))});
    } else if (kind == "poisson_bound") {
        out += csv_row({"d", "value"});
        for (const auto& row : payload.at("rows"))
            out += csv_row({number_str(row.at("d")), number_str(row.at("value"))});
    }
    return out;
}

CacheAuditResult cache_audit(const std::string& cache_dir, double fraction, std::uint64_t seed) {
    CacheAuditResult result;
    if (!fs::exists(cache_dir)) return result;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cache_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    result.entries = files.size();

    PhiloxRng rng(seed);
    for (const auto& file : files) {
        if (rng.next_double() >= fraction) continue;
        ++result.audited;
        try {
            std::ifstream in(file);
            Json cached = Json::parse(in);
            ExperimentConfig cfg = parse_config(cached.at("config"));
            ReportRecord fresh = run_experiment(cfg, RunOptions{});
            if (fresh.payload() != cached.at("payload")) {
                ++result.mismatches;
                result.mismatched_keys.push_back(file.stem().string());
            }
        } catch (const std::exception&) {
            ++result.mismatches;
            result.mismatched_keys.push_back(file.stem().string());
        }
    }
    return result;
}

} // namespace edgestat
