#pragma once

#include "edgestat/coloring.hpp"
#include "edgestat/events.hpp"
#include "edgestat/graph.hpp"
#include "edgestat/mc.hpp"
#include "edgestat/subset_dist.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace edgestat {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// One declarative experiment. Exactly one graph source for kinds that take
// a graph; extremal/monotonicity address a graph space instead.
struct ExperimentConfig {
    std::string kind; // exact_pmf | extremal | monotonicity | mc_event | containment |
                      // coupling | moments | event_frequencies | hypergeom | poisson_bound

    std::optional<FamilySpec> family;
    std::optional<std::string> graph6_file;
    std::optional<std::string> edge_list_file;

    int k = 0;
    long long ell = 1;
    double w = 0.0; // 0 = default max(1, ln k)
    int split_m = -1;
    McConfig mc;

    std::optional<EventId> event_e;
    std::optional<EventId> event_f;

    int n = 0;               // extremal
    std::vector<int> n_list; // monotonicity
    std::string catalog;     // extremal catalog path ("" = exhaustive)

    HypergeomSpec hypergeom;
    long long poisson_d_max = 0;

    std::uint64_t budget = kDefaultEnumBudget;
    bool with_variance = false; // moments: also enumerate Var[X - Z]
};

ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::string& path);

// Canonical echo with fixed key order; cache keys and report bytes both
// derive from it.
Json echo_config(const ExperimentConfig& cfg);

Json estimate_to_json(const Estimate& e, const McConfig& cfg);
Json trace_to_json(const ProcessTrace& trace);

struct RunOptions {
    std::optional<std::string> cache_dir; // nullopt = caching disabled
};

struct ReportRecord {
    Json doc; // version, config echo, cache_key, payload, wall_clock_ms
    std::string cache_key;
    bool from_cache = false;

    const Json& payload() const { return doc.at("payload"); }
};

ReportRecord run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Results in input order; per-config failures become {"error": ...} records
// and do not abort the sweep.
std::vector<ReportRecord> sweep(const std::vector<ExperimentConfig>& configs,
                                const RunOptions& opts = {}, int parallelism = 0);

// RFC 4180 projection of the payload for table-like kinds; empty when the
// kind has no tabular form.
std::string payload_csv(const std::string& kind, const Json& payload);

struct CacheAuditResult {
    std::uint64_t entries = 0;
    std::uint64_t audited = 0;
    std::uint64_t mismatches = 0;
    std::vector<std::string> mismatched_keys;
};

// Recomputes a seeded random fraction of cache entries from their embedded
// config echoes and compares payloads.
CacheAuditResult cache_audit(const std::string& cache_dir, double fraction,
                             std::uint64_t seed);

} // namespace edgestat
