#include "dimred/bench.hpp"

#include "dimred/errors.hpp"
#include "dimred/idx.hpp"
#include "dimred/online_news.hpp"
#include "dimred/parallel.hpp"
#include "dimred/rng.hpp"
#include "dimred/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <set>

namespace dimred::bench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kFashionKey = 0xFA5;
constexpr std::uint64_t kNewsKey = 0x4E5;
constexpr std::uint64_t kSplitKey = 0x5B;

// std::hash is not stable across standard libraries; seeds must be.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
    return h;
}

json params_json(const MethodParams& p) {
    return {{"dim", p.dim},
            {"n_neighbors", p.n_neighbors},
            {"min_dist", p.min_dist},
            {"alpha", p.alpha},
            {"umap_epochs", p.umap_epochs},
            {"umap_learning_rate", p.umap_learning_rate},
            {"negative_sample_rate", p.negative_sample_rate},
            {"transform_epochs", p.transform_epochs},
            {"slices", p.slices},
            {"sir_ridge_scale", p.sir_ridge_scale},
            {"ksir_ridge_scale", p.ksir_ridge_scale},
            {"kernel", kernel_family_name(p.kernel)},
            {"gamma", p.gamma},
            {"degree", p.degree},
            {"coef0", p.coef0},
            {"perplexity", p.perplexity},
            {"tsne_epochs", p.tsne_epochs},
            {"tsne_learning_rate", p.tsne_learning_rate}};
}

template <class T>
void take(const json& j, const char* key, T& dst, std::set<std::string>& seen) {
    if (!j.contains(key)) return;
    seen.insert(key);
    dst = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& seen, const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!seen.count(key)) throw ParameterError("unknown config key '" + where + key + "'");
}

void merge_params(MethodParams& p, const json& j) {
    std::set<std::string> seen;
    take(j, "dim", p.dim, seen);
    take(j, "n_neighbors", p.n_neighbors, seen);
    take(j, "min_dist", p.min_dist, seen);
    take(j, "alpha", p.alpha, seen);
    take(j, "umap_epochs", p.umap_epochs, seen);
    take(j, "umap_learning_rate", p.umap_learning_rate, seen);
    take(j, "negative_sample_rate", p.negative_sample_rate, seen);
    take(j, "transform_epochs", p.transform_epochs, seen);
    take(j, "slices", p.slices, seen);
    take(j, "sir_ridge_scale", p.sir_ridge_scale, seen);
    take(j, "ksir_ridge_scale", p.ksir_ridge_scale, seen);
    if (j.contains("kernel")) {
        seen.insert("kernel");
        p.kernel = parse_kernel_family(j.at("kernel").get<std::string>());
    }
    take(j, "gamma", p.gamma, seen);
    take(j, "degree", p.degree, seen);
    take(j, "coef0", p.coef0, seen);
    take(j, "perplexity", p.perplexity, seen);
    take(j, "tsne_epochs", p.tsne_epochs, seen);
    take(j, "tsne_learning_rate", p.tsne_learning_rate, seen);
    reject_unknown(j, seen, "params.");
}

std::string type_label(eval::Task task, int row) {
    static const char* reg[] = {"TrainMSE", "TestMSE", "TestSE"};
    static const char* cls[] = {"TrainError", "TestError", "TestSE"};
    return task == eval::Task::Regression ? reg[row] : cls[row];
}

csv::Row table_header() {
    csv::Row h{"Setting", "Type"};
    for (Method m : kAllMethods) h.push_back(method_name(m));
    return h;
}

void append_rows(csv::Table& t, const std::string& setting, eval::Task task,
                 const std::vector<eval::EvalReport>& reports, bool timings) {
    std::map<std::string, const eval::EvalReport*> by_name;
    for (const auto& r : reports) by_name[r.method] = &r;
    const int rows = timings ? 4 : 3;
    for (int row = 0; row < rows; ++row) {
        csv::Row line{setting, row == 3 ? std::string("Elapsed") : type_label(task, row)};
        for (Method m : kAllMethods) {
            const auto it = by_name.find(method_name(m));
            if (it == by_name.end() || it->second->reps == 0) {
                line.push_back("NA");
                continue;
            }
            const eval::EvalReport& r = *it->second;
            const double v = row == 0 ? r.train_metric : row == 1 ? r.test_metric : row == 2 ? r.test_se : r.elapsed_seconds;
            line.push_back(csv::format_double(v));
        }
        t.rows.push_back(std::move(line));
    }
}

}  // namespace

std::string preset_name(Preset p) { return p == Preset::Paper ? "paper" : "desk"; }

Preset parse_preset(const std::string& s) {
    if (s == "paper") return Preset::Paper;
    if (s == "desk") return Preset::Desk;
    throw ParameterError("unknown preset '" + s + "' (expected paper or desk)");
}

void apply_preset(BenchConfig& cfg, Preset preset) {
    cfg.preset = preset;
    if (preset == Preset::Paper) {
        cfg.n = 1000;
        cfg.p = 500;
        cfg.s = 10;
        cfg.reps = 100;
    } else {
        cfg.n = 400;
        cfg.p = 100;
        cfg.s = 10;
        cfg.reps = 20;
    }
}

json to_json(const BenchConfig& c) {
    std::vector<std::string> methods;
    for (Method m : c.methods) methods.push_back(method_name(m));
    return {{"version", c.version},
            {"experiments", c.experiments},
            {"preset", preset_name(c.preset)},
            {"n", c.n},
            {"p", c.p},
            {"s", c.s},
            {"reps", c.reps},
            {"seed", c.seed},
            {"out", c.out_dir.string()},
            {"methods", methods},
            {"params", params_json(c.params)},
            {"knn", {{"k", c.knn.k}, {"cv", c.knn.cross_validate}, {"grid", c.knn.grid}, {"folds", c.knn.folds}}},
            {"standardize", c.standardize},
            {"save_models", c.save_models},
            {"plots", c.plots},
            {"timings", c.timings},
            {"fashion", {{"dir", c.fashion_dir.string()}, {"train", c.fashion_train}, {"test", c.fashion_test}}},
            {"news", {{"path", c.news_csv.string()}, {"n", c.news_n}, {"log10", c.news_log10}}}};
}

void merge_json(BenchConfig& c, const json& j) {
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    std::set<std::string> seen;
    take(j, "version", c.version, seen);
    if (c.version != kConfigVersion)
        throw ParameterError("unsupported config version " + std::to_string(c.version));
    // The preset goes first so explicit sizes in the same file override it.
    if (j.contains("preset")) {
        seen.insert("preset");
        apply_preset(c, parse_preset(j.at("preset").get<std::string>()));
    }
    take(j, "experiments", c.experiments, seen);
    take(j, "n", c.n, seen);
    take(j, "p", c.p, seen);
    take(j, "s", c.s, seen);
    take(j, "reps", c.reps, seen);
    take(j, "seed", c.seed, seen);
    if (j.contains("out")) {
        seen.insert("out");
        c.out_dir = j.at("out").get<std::string>();
    }
    if (j.contains("methods")) {
        seen.insert("methods");
        std::string joined;
        for (const auto& m : j.at("methods")) joined += m.get<std::string>() + ",";
        c.methods = parse_method_list(joined);
    }
    if (j.contains("params")) {
        seen.insert("params");
        merge_params(c.params, j.at("params"));
    }
    if (j.contains("knn")) {
        seen.insert("knn");
        std::set<std::string> ks;
        const json& k = j.at("knn");
        take(k, "k", c.knn.k, ks);
        take(k, "cv", c.knn.cross_validate, ks);
        take(k, "grid", c.knn.grid, ks);
        take(k, "folds", c.knn.folds, ks);
        reject_unknown(k, ks, "knn.");
    }
    take(j, "standardize", c.standardize, seen);
    take(j, "save_models", c.save_models, seen);
    take(j, "plots", c.plots, seen);
    take(j, "timings", c.timings, seen);
    if (j.contains("fashion")) {
        seen.insert("fashion");
        std::set<std::string> fs_seen;
        const json& f = j.at("fashion");
        std::string dir = c.fashion_dir.string();
        take(f, "dir", dir, fs_seen);
        c.fashion_dir = dir;
        take(f, "train", c.fashion_train, fs_seen);
        take(f, "test", c.fashion_test, fs_seen);
        reject_unknown(f, fs_seen, "fashion.");
    }
    if (j.contains("news")) {
        seen.insert("news");
        std::set<std::string> ns;
        const json& nw = j.at("news");
        std::string path = c.news_csv.string();
        take(nw, "path", path, ns);
        c.news_csv = path;
        take(nw, "n", c.news_n, ns);
        take(nw, "log10", c.news_log10, ns);
        reject_unknown(nw, ns, "news.");
    }
    reject_unknown(j, seen, "");
}

BenchConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParameterError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.contains("version")) throw ParameterError("config " + path.string() + " lacks a version field");
    BenchConfig c;
    merge_json(c, j);
    return c;
}

std::vector<std::string> expand_experiments(const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) {
        if (id == "sim") {
            for (char d : std::string("abc"))
                for (char m : std::string("1234")) out.push_back(std::string{d, m});
        } else if (id == "fashion" || id == "news") {
            out.push_back(id);
        } else {
            sim::parse_setting(id);  // throws on a bad id
            out.push_back(id);
        }
    }
    if (out.empty()) throw ParameterError("no experiments requested");
    return out;
}

bool is_classification(const std::string& experiment) {
    if (experiment == "fashion") return true;
    if (experiment == "news") return false;
    return sim::parse_setting(experiment).model == sim::ModelKind::Model4;
}

Dataset simulated_dataset(const BenchConfig& cfg, const std::string& setting, int rep) {
    sim::SettingSpec spec = sim::parse_setting(setting);
    spec.n = cfg.n;
    spec.p = cfg.p;
    spec.s = cfg.s;
    return sim::make_setting(spec, derive_seed(cfg.seed, {sim::setting_key(spec.dist, spec.model),
                                                          static_cast<std::uint64_t>(rep)}));
}

Source make_source(const BenchConfig& cfg, const std::string& experiment) {
    Source src;
    src.task = is_classification(experiment) ? eval::Task::Classification : eval::Task::Regression;
    const std::uint64_t seed = cfg.seed;

    if (experiment == "fashion") {
        if (cfg.fashion_dir.empty()) throw ParameterError("fashion experiment needs fashion.dir");
        auto data = std::make_shared<const idx::FashionMnist>(idx::load_fashion_mnist(cfg.fashion_dir));
        const Index ntr = std::min(cfg.fashion_train, data->train.n());
        const Index nte = std::min(cfg.fashion_test, data->test.n());
        src.features = data->train.p();
        src.info = {{"source", cfg.fashion_dir.string()},
                    {"native_train_rows", data->train.n()},
                    {"native_test_rows", data->test.n()},
                    {"train_rows", ntr},
                    {"test_rows", nte},
                    {"features", src.features},
                    {"sampling", "stratified by class, independently per repetition"}};
        src.splits = [data, ntr, nte, seed](int rep) {
            const auto r = static_cast<std::uint64_t>(rep);
            const auto tr = idx::stratified_sample(data->train.y.labels(), ntr, derive_seed(seed, {kFashionKey, r, 0}));
            const auto te = idx::stratified_sample(data->test.y.labels(), nte, derive_seed(seed, {kFashionKey, r, 1}));
            return eval::Split{data->train.subset(tr), data->test.subset(te)};
        };
        return src;
    }

    if (experiment == "news") {
        if (cfg.news_csv.empty()) throw ParameterError("news experiment needs news.path");
        auto data = std::make_shared<const news::OnlineNews>(news::load_online_news(cfg.news_csv, {cfg.news_log10}));
        const Index total = data->data.n();
        const Index take_n = std::min(cfg.news_n, total);
        src.features = data->data.p();
        src.info = {{"source", cfg.news_csv.string()},
                    {"rows", total},
                    {"subsample", take_n},
                    {"features", src.features},
                    {"feature_names", data->feature_names},
                    {"response", cfg.news_log10 ? "log10(shares)" : "ln(shares)"}};
        src.splits = [data, take_n, total, seed](int rep) {
            const auto r = static_cast<std::uint64_t>(rep);
            std::vector<Index> rows(static_cast<std::size_t>(total));
            std::iota(rows.begin(), rows.end(), Index{0});
            Rng rng(derive_seed(seed, {kNewsKey, r}));
            std::shuffle(rows.begin(), rows.end(), rng);
            rows.resize(static_cast<std::size_t>(take_n));
            std::sort(rows.begin(), rows.end());
            auto [train, test] = split(data->data.subset(rows), {0.5, derive_seed(seed, {kNewsKey, r, kSplitKey})});
            return eval::Split{std::move(train), std::move(test)};
        };
        return src;
    }

    const sim::SettingSpec spec = sim::parse_setting(experiment);
    const std::uint64_t key = sim::setting_key(spec.dist, spec.model);
    src.features = cfg.p;
    src.info = {{"rows", cfg.n}, {"features", cfg.p}, {"informative", cfg.s}, {"split", "50/50 per repetition"}};
    src.splits = [cfg, experiment, key, seed](int rep) {
        Dataset d = simulated_dataset(cfg, experiment, rep);
        auto [train, test] = split(d, {0.5, derive_seed(seed, {key, static_cast<std::uint64_t>(rep), kSplitKey})});
        return eval::Split{std::move(train), std::move(test)};
    };
    return src;
}

ExperimentResult run_experiment(const BenchConfig& cfg, const std::string& experiment,
                                std::function<void(const eval::FitOutput&)> on_first_rep) {
    ExperimentResult out;
    out.experiment = experiment;
    Source src = make_source(cfg, experiment);
    out.task = src.task;
    out.info = src.info;

    eval::HarnessOptions opts;
    opts.task = src.task;
    opts.knn = cfg.knn;
    opts.standardize = cfg.standardize;
    opts.seed = derive_seed(cfg.seed, {0xE7, fnv1a(experiment)});
    opts.params = cfg.params;
    opts.on_first_rep = std::move(on_first_rep);
    opts.log = [&out, &experiment](const std::string& line) {
        out.log.push_back(experiment + ": " + line);
        std::cerr << experiment << ": " << line << '\n';
    };
    out.result = eval::run_repetitions(src.splits, cfg.methods, cfg.reps, opts);
    return out;
}

csv::Table result_table(const std::vector<ExperimentResult>& results, bool timings) {
    csv::Table t;
    t.header = table_header();
    for (const auto& r : results) append_rows(t, r.experiment, r.task, r.result.reports, timings);
    return t;
}

csv::Table per_rep_table(const std::vector<ExperimentResult>& results) {
    csv::Table t;
    t.header = {"setting", "rep", "method", "status", "train_metric", "test_metric", "k"};
    for (const auto& r : results)
        for (const auto& rec : r.result.records)
            t.rows.push_back({r.experiment, std::to_string(rec.rep), method_name(rec.method), rec.ok ? "ok" : "failed",
                              rec.ok ? csv::format_double(rec.train_metric) : "NA",
                              rec.ok ? csv::format_double(rec.test_metric) : "NA",
                              rec.ok ? std::to_string(rec.k) : "NA"});
    return t;
}

csv::Table table_from_per_rep(const csv::Table& per_rep) {
    const csv::Row expected{"setting", "rep", "method", "status", "train_metric", "test_metric", "k"};
    if (per_rep.header != expected) throw FormatError("unexpected per-repetition header", 1);
    std::vector<std::string> order;
    std::map<std::string, std::vector<eval::RepRecord>> grouped;
    std::map<std::string, std::set<Method>> seen_methods;
    long long line = 1;
    for (const auto& row : per_rep.rows) {
        ++line;
        if (row.size() != expected.size()) throw FormatError("ragged per-repetition row", line);
        if (!grouped.count(row[0])) order.push_back(row[0]);
        eval::RepRecord rec;
        rec.rep = std::stoi(row[1]);
        rec.method = parse_method(row[2]);
        rec.ok = row[3] == "ok";
        if (rec.ok) {
            const auto tr = csv::parse_double(row[4]), te = csv::parse_double(row[5]);
            if (!tr || !te) throw FormatError("non-numeric metric", line);
            rec.train_metric = *tr;
            rec.test_metric = *te;
        }
        grouped[row[0]].push_back(rec);
        seen_methods[row[0]].insert(rec.method);
    }
    std::vector<ExperimentResult> results;
    for (const auto& setting : order) {
        ExperimentResult r;
        r.experiment = setting;
        r.task = is_classification(setting) ? eval::Task::Classification : eval::Task::Regression;
        const auto& ms = seen_methods[setting];
        r.result.reports = eval::aggregate(grouped[setting], std::vector<Method>(ms.begin(), ms.end()));
        results.push_back(std::move(r));
    }
    return result_table(results, false);
}

std::vector<fs::path> cmd_simulate(const BenchConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec || !fs::is_directory(cfg.out_dir)) throw Error("cannot create output directory " + cfg.out_dir.string());
    std::vector<fs::path> written;
    for (const auto& id : expand_experiments(cfg.experiments)) {
        if (id == "fashion" || id == "news") throw ParameterError("simulate only handles the simulated settings");
        for (int r = 0; r < cfg.reps; ++r) {
            const Dataset d = simulated_dataset(cfg, id, r);
            Eigen::MatrixXd m(d.n(), d.p() + 1);
            m.leftCols(d.p()) = d.x;
            m.col(d.p()) = d.y.values;
            csv::Row header = csv::numbered_header("x", d.p());
            header.push_back("y");
            char name[64];
            std::snprintf(name, sizeof name, "%s_rep%03d.csv", id.c_str(), r);
            const fs::path path = cfg.out_dir / name;
            csv::write_matrix(path, m, header);
            written.push_back(path);
        }
    }
    return written;
}

std::vector<ExperimentResult> cmd_run(const BenchConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec || !fs::is_directory(cfg.out_dir)) throw Error("cannot create output directory " + cfg.out_dir.string());
    {
        std::ofstream probe(cfg.out_dir / "manifest.json", std::ios::app);
        if (!probe) throw Error("output directory " + cfg.out_dir.string() + " is not writable");
    }
    if (cfg.plots) fs::create_directories(cfg.out_dir / "plots");
    if (cfg.save_models) fs::create_directories(cfg.out_dir / "models");

    const auto started = std::chrono::system_clock::now();
    std::vector<ExperimentResult> results;
    for (const auto& id : expand_experiments(cfg.experiments)) {
        const bool classification = is_classification(id);
        auto first_rep = [&cfg, &id, classification](const eval::FitOutput& f) {
            const std::string stem = id + "_" + method_name(f.method);
            if (cfg.save_models) f.reducer.save(cfg.out_dir / "models" / stem);
            if (!cfg.plots) return;
            if (f.train.cols() != 2) {
                std::cerr << id << ": " << method_name(f.method) << " embedding is " << f.train.cols()
                          << "-D; no scatter plot\n";
                return;
            }
            for (int panel = 0; panel < 2; ++panel) {
                svg::PlotSpec spec;
                spec.coords = panel == 0 ? f.train : f.test;
                const Response& y = panel == 0 ? f.data.train.y : f.data.test.y;
                if (classification)
                    spec.labels = y.labels();
                else
                    spec.values = y.values;
                spec.title = id + " " + method_name(f.method) + (panel == 0 ? " (train)" : " (test)");
                spec.path = cfg.out_dir / "plots" / (stem + (panel == 0 ? "_train.svg" : "_test.svg"));
                svg::emit_plot(spec);
            }
        };
        results.push_back(run_experiment(cfg, id, first_rep));
    }

    csv::write_file(cfg.out_dir / "table.csv", result_table(results, cfg.timings));
    csv::write_file(cfg.out_dir / "per_rep.csv", per_rep_table(results));

    json manifest;
    manifest["tool"] = "dimred";
    manifest["library_version"] = kLibraryVersion;
    manifest["config"] = to_json(cfg);
    manifest["threads"] = parallel::max_threads();
    manifest["standardization"] = cfg.standardize
                                      ? "every feature centered and scaled by training-set mean and (n-1) sd; "
                                        "the same transform applied to test rows; constant columns left unscaled"
                                      : "none";
    manifest["seed_derivation"] =
        "dataset: splitmix(seed, setting_key, rep); split: splitmix(seed, setting_key, rep, 0x5B); "
        "method: splitmix(splitmix(seed, 0xE7, fnv1a(experiment)), 0xAE9, rep, method)";
    manifest["started_unix"] = std::chrono::duration_cast<std::chrono::seconds>(started.time_since_epoch()).count();
    json exps = json::array();
    for (const auto& r : results) {
        json e;
        e["experiment"] = r.experiment;
        e["task"] = r.task == eval::Task::Regression ? "regression" : "classification";
        e["data"] = r.info;
        e["knn"] = cfg.knn.cross_validate ? "cv" : "fixed k=" + std::to_string(cfg.knn.k);
        json methods = json::object();
        for (const auto& rep : r.result.reports)
            methods[rep.method] = {{"successful_reps", rep.reps},
                                   {"failures", rep.failures},
                                   {"elapsed_seconds_mean", rep.elapsed_seconds}};
        e["methods"] = methods;
        e["log"] = r.log;
        exps.push_back(e);
    }
    manifest["experiments"] = exps;
    std::ofstream out(cfg.out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) throw Error("write failed for manifest.json");
    return results;
}

}  // namespace dimred::bench
