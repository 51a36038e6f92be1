#pragma once

// Experiment orchestration behind the CLI: configuration, data sources for
// the simulated settings and the two real datasets, result tables, manifests,
// plots and saved models.

#include "dimred/csv.hpp"
#include "dimred/harness.hpp"
#include "dimred/reducers.hpp"
#include "dimred/sim.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace dimred::bench {

inline constexpr int kConfigVersion = 1;
inline constexpr const char* kLibraryVersion = "1.0.0";

enum class Preset { Desk, Paper };

struct BenchConfig {
    int version = kConfigVersion;
    /// "a1".."c4", "fashion" or "news"; "sim" expands to all twelve settings.
    std::vector<std::string> experiments{"a1"};
    Preset preset = Preset::Desk;
    Index n = 400;
    Index p = 100;
    int s = 10;
    int reps = 20;
    std::uint64_t seed = 20240601;
    std::filesystem::path out_dir = "results";
    std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
    MethodParams params;
    eval::KnnConfig knn;
    bool standardize = true;
    bool save_models = true;
    bool plots = true;
    bool timings = false;  ///< add an Elapsed row to the table (makes it run-dependent)
    // Fashion-MNIST
    std::filesystem::path fashion_dir;
    Index fashion_train = 2000;
    Index fashion_test = 1000;
    // Online News
    std::filesystem::path news_csv;
    Index news_n = 5000;
    bool news_log10 = false;
};

/// Sets n, p, s and reps from the preset.
void apply_preset(BenchConfig& cfg, Preset preset);
std::string preset_name(Preset p);
Preset parse_preset(const std::string& s);

nlohmann::json to_json(const BenchConfig& cfg);
/// Keys absent from `j` keep their current value in `cfg`. Throws
/// ParameterError on an unsupported version or an unknown key.
void merge_json(BenchConfig& cfg, const nlohmann::json& j);
BenchConfig load_config(const std::filesystem::path& path);

/// Expands "sim" and validates every id.
std::vector<std::string> expand_experiments(const std::vector<std::string>& ids);
bool is_classification(const std::string& experiment);

/// Data source for one experiment. Real datasets are loaded once, up front.
struct Source {
    eval::SplitSource splits;
    eval::Task task = eval::Task::Regression;
    Index features = 0;
    nlohmann::json info;  ///< feature counts, sizes, paths
};
Source make_source(const BenchConfig& cfg, const std::string& experiment);

/// Simulated dataset for one repetition (the rows that are later split).
Dataset simulated_dataset(const BenchConfig& cfg, const std::string& setting, int rep);

struct ExperimentResult {
    std::string experiment;
    eval::Task task = eval::Task::Regression;
    eval::HarnessResult result;
    nlohmann::json info;
    std::vector<std::string> log;
};

/// Runs one experiment in memory. `on_first_rep` may be null.
ExperimentResult run_experiment(const BenchConfig& cfg, const std::string& experiment,
                                std::function<void(const eval::FitOutput&)> on_first_rep = {});

/// Table rows for the given results: header Setting, Type, then all ten method
/// columns; cells of methods not run (or never successful) are NA.
csv::Table result_table(const std::vector<ExperimentResult>& results, bool timings);
/// Long per-repetition log: setting, rep, method, status, train_metric,
/// test_metric, k.
csv::Table per_rep_table(const std::vector<ExperimentResult>& results);
/// Rebuilds the result table from a per-repetition log.
csv::Table table_from_per_rep(const csv::Table& per_rep);

/// The `simulate` subcommand: one CSV per repetition (x1..xp, y).
std::vector<std::filesystem::path> cmd_simulate(const BenchConfig& cfg);
/// The `run` subcommand: table.csv, per_rep.csv, manifest.json, plots/, models/.
std::vector<ExperimentResult> cmd_run(const BenchConfig& cfg);

}  // namespace dimred::bench
