#include "edgestat/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using edgestat::ExperimentConfig;
using edgestat::Json;
using edgestat::ReportRecord;
using edgestat::RunOptions;

namespace {

std::string default_cache_dir() {
    if (const char* env = std::getenv("EDGESTAT_CACHE_DIR")) return env;
    return ".edgestat-cache";
}

void write_outputs(const ReportRecord& record, const std::string& kind, const fs::path& out_dir,
                   const std::string& stem) {
    fs::create_directories(out_dir);
    fs::path json_path = out_dir / (stem + ".report.json");
    {
        std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
        out << record.doc.dump(2) << "\n";
    }
    std::cout << "wrote " << json_path.string() << (record.from_cache ? " (cache hit)" : "")
              << "\n";
    std::string csv = edgestat::payload_csv(kind, record.payload());
    if (!csv.empty()) {
        fs::path csv_path = out_dir / (stem + ".csv");
        std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
        out << csv;
        std::cout << "wrote " << csv_path.string() << "\n";
    }
}

void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::uint64_t> trials) {
    if (seed) cfg.mc.seed = *seed;
    if (trials) cfg.mc.trials = *trials;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"edgestat: induced-edge-count statistics of random vertex subsets"};
    app.require_subcommand(1);

    std::string cache_dir = default_cache_dir();
    bool no_cache = false;
    app.add_option("--cache", cache_dir, "cache directory (env EDGESTAT_CACHE_DIR)");
    app.add_flag("--no-cache", no_cache, "disable the result cache");

    // run
    auto* run = app.add_subcommand("run", "run one experiment config");
    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed_override, trials_override;
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--seed", seed_override, "override mc.seed");
    run->add_option("--trials", trials_override, "override mc.trials");
    run->add_option("--out", out_dir, "output directory");

    // sweep
    auto* sw = app.add_subcommand("sweep", "run every *.json config in a directory");
    std::string sweep_dir, sweep_out = ".";
    int parallelism = 0;
    sw->add_option("dir", sweep_dir, "directory of configs")->required();
    sw->add_option("--out", sweep_out, "output directory");
    sw->add_option("--parallelism", parallelism, "worker count (0 = hardware)");

    // cache audit
    auto* cache = app.add_subcommand("cache", "cache maintenance");
    auto* audit = cache->add_subcommand("audit", "recompute a random sample of cache entries");
    double fraction = 0.1;
    std::uint64_t audit_seed = 0;
    audit->add_option("--fraction", fraction, "fraction of entries to audit (default 0.1)");
    audit->add_option("--seed", audit_seed, "selection seed");

    CLI11_PARSE(app, argc, argv);

    RunOptions opts;
    if (!no_cache) opts.cache_dir = cache_dir;

    try {
        if (*run) {
            ExperimentConfig cfg = edgestat::load_config(config_path);
            apply_overrides(cfg, seed_override, trials_override);
            ReportRecord record = edgestat::run_experiment(cfg, opts);
            write_outputs(record, cfg.kind, out_dir, fs::path(config_path).stem().string());
            return 0;
        }
        if (*sw) {
            std::vector<fs::path> paths;
            for (const auto& entry : fs::directory_iterator(sweep_dir))
                if (entry.path().extension() == ".json") paths.push_back(entry.path());
            std::sort(paths.begin(), paths.end());
            std::vector<ExperimentConfig> configs;
            for (const auto& p : paths) configs.push_back(edgestat::load_config(p.string()));
            auto records = edgestat::sweep(configs, opts, parallelism);
            int failures = 0;
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (records[i].doc.contains("error")) {
                    ++failures;
                    std::cerr << paths[i].string() << ": "
                              << records[i].doc.at("error").get<std::string>() << "\n";
                    continue;
                }
                write_outputs(records[i], configs[i].kind, sweep_out,
                              paths[i].stem().string());
            }
            return failures == 0 ? 0 : 1;
        }
        if (*audit) {
            auto result = edgestat::cache_audit(cache_dir, fraction, audit_seed);
            std::cout << "cache entries: " << result.entries << ", audited: " << result.audited
                      << ", mismatches: " << result.mismatches << "\n";
            for (const auto& key : result.mismatched_keys) std::cout << "  mismatch: " << key << "\n";
            return result.mismatches == 0 ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
