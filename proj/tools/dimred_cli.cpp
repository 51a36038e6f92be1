// dimred: simulate datasets, run the benchmark matrix, rebuild tables from
// per-repetition logs, and plot saved embeddings.

#include "dimred/bench.hpp"
#include "dimred/csv.hpp"
#include "dimred/errors.hpp"
#include "dimred/svg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using dimred::bench::BenchConfig;

struct CommonFlags {
    std::string config;
    std::optional<std::string> preset;
    std::optional<std::string> experiments;
    std::optional<std::string> methods;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<long> n, p;
    std::optional<int> s, reps;
    // method hyperparameters
    std::optional<int> dim, n_neighbors, slices, umap_epochs, tsne_epochs, knn_k, degree;
    std::optional<double> alpha, min_dist, gamma, perplexity, tsne_lr;
    std::optional<std::string> kernel;
    bool knn_cv = false;
    // data
    std::optional<std::string> fashion_dir, news_csv;
    std::optional<long> news_n, fashion_train, fashion_test;
    bool news_log10 = false, no_plots = false, no_models = false, timings = false;
};

void add_common(CLI::App* app, CommonFlags& f, bool run_flags) {
    app->add_option("--config", f.config, "JSON config file (must carry a version field)");
    app->add_option("--preset", f.preset, "Scale preset")->check(CLI::IsMember({"desk", "paper"}));
    app->add_option("--experiments,--setting", f.experiments,
                    "Comma-separated ids: a1..c4, sim (all twelve), fashion, news");
    app->add_option("--seed", f.seed, "Base seed");
    app->add_option("--out", f.out, "Output directory");
    app->add_option("--n", f.n, "Rows per simulated dataset");
    app->add_option("--p", f.p, "Features per simulated dataset");
    app->add_option("--s", f.s, "Informative features");
    app->add_option("--reps", f.reps, "Repetitions");
    if (!run_flags) return;
    app->add_option("--methods", f.methods, "Comma-separated columns (Orig,SSU,CaSU,CoSU,UU,PCA,KPCA,SIR,KSIR,t-SNE or all)");
    app->add_option("--dim", f.dim, "Embedding dimension");
    app->add_option("--n-neighbors", f.n_neighbors, "UMAP neighbor count");
    app->add_option("--alpha", f.alpha, "Supervised UMAP response weight");
    app->add_option("--min-dist", f.min_dist, "UMAP min_dist");
    app->add_option("--umap-epochs", f.umap_epochs, "UMAP optimization epochs");
    app->add_option("--slices", f.slices, "Slice count H for SIR, KSIR and SSU");
    app->add_option("--kernel", f.kernel, "KPCA/KSIR kernel")->check(CLI::IsMember({"gaussian", "polynomial", "linear"}));
    app->add_option("--gamma", f.gamma, "Kernel gamma (<= 0: median heuristic)");
    app->add_option("--degree", f.degree, "Polynomial kernel degree");
    app->add_option("--perplexity", f.perplexity, "t-SNE perplexity");
    app->add_option("--tsne-epochs", f.tsne_epochs, "t-SNE iterations");
    app->add_option("--tsne-learning-rate", f.tsne_lr, "t-SNE step size (<= 0: max(n/48, 50))");
    app->add_option("--knn-k", f.knn_k, "Evaluation kNN k");
    app->add_flag("--knn-cv", f.knn_cv, "Choose k by 5-fold CV over {1,3,...,15}");
    app->add_option("--fashion-dir", f.fashion_dir, "Directory with the four Fashion-MNIST IDX files");
    app->add_option("--fashion-train", f.fashion_train, "Stratified training rows per repetition");
    app->add_option("--fashion-test", f.fashion_test, "Stratified test rows per repetition");
    app->add_option("--news-csv", f.news_csv, "OnlineNewsPopularity.csv");
    app->add_option("--news-n", f.news_n, "Rows subsampled per repetition before the 50/50 split");
    app->add_flag("--news-log10", f.news_log10, "Base-10 log of shares instead of natural log");
    app->add_flag("--no-plots", f.no_plots, "Skip SVG plots");
    app->add_flag("--no-models", f.no_models, "Skip saving first-repetition models");
    app->add_flag("--timings", f.timings, "Add an Elapsed row to table.csv (breaks byte-for-byte reruns)");
}

BenchConfig resolve(const CommonFlags& f) {
    BenchConfig c = f.config.empty() ? BenchConfig{} : dimred::bench::load_config(f.config);
    if (f.preset) dimred::bench::apply_preset(c, dimred::bench::parse_preset(*f.preset));
    if (f.experiments) {
        c.experiments.clear();
        std::stringstream ss(*f.experiments);
        for (std::string id; std::getline(ss, id, ',');)
            if (!id.empty()) c.experiments.push_back(id);
    }
    if (f.methods) c.methods = dimred::parse_method_list(*f.methods);
    if (f.seed) c.seed = *f.seed;
    if (f.out) c.out_dir = *f.out;
    if (f.n) c.n = *f.n;
    if (f.p) c.p = *f.p;
    if (f.s) c.s = *f.s;
    if (f.reps) c.reps = *f.reps;
    if (f.dim) c.params.dim = *f.dim;
    if (f.n_neighbors) c.params.n_neighbors = *f.n_neighbors;
    if (f.alpha) c.params.alpha = *f.alpha;
    if (f.min_dist) c.params.min_dist = *f.min_dist;
    if (f.umap_epochs) c.params.umap_epochs = *f.umap_epochs;
    if (f.slices) c.params.slices = *f.slices;
    if (f.kernel) c.params.kernel = dimred::parse_kernel_family(*f.kernel);
    if (f.gamma) c.params.gamma = *f.gamma;
    if (f.degree) c.params.degree = *f.degree;
    if (f.perplexity) c.params.perplexity = *f.perplexity;
    if (f.tsne_epochs) c.params.tsne_epochs = *f.tsne_epochs;
    if (f.tsne_lr) c.params.tsne_learning_rate = *f.tsne_lr;
    if (f.knn_k) c.knn.k = *f.knn_k;
    if (f.knn_cv) c.knn.cross_validate = true;
    if (f.fashion_dir) c.fashion_dir = *f.fashion_dir;
    if (f.fashion_train) c.fashion_train = *f.fashion_train;
    if (f.fashion_test) c.fashion_test = *f.fashion_test;
    if (f.news_csv) c.news_csv = *f.news_csv;
    if (f.news_n) c.news_n = *f.news_n;
    if (f.news_log10) c.news_log10 = true;
    if (f.no_plots) c.plots = false;
    if (f.no_models) c.save_models = false;
    if (f.timings) c.timings = true;
    return c;
}

void print_pretty(const dimred::csv::Table& t) {
    for (const auto& h : t.header) std::printf("%-11s", h.c_str());
    std::printf("\n");
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            const auto v = j >= 2 ? dimred::csv::parse_double(row[j]) : std::nullopt;
            if (v && !std::isnan(*v))
                std::printf("%-11.4f", *v);
            else
                std::printf("%-11s", row[j].c_str());
        }
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supervised and unsupervised dimension reduction benchmark"};
    app.require_subcommand(1);

    CommonFlags sim_flags, run_flags;
    auto* simulate = app.add_subcommand("simulate", "Write simulated datasets as CSV (x1..xp, y)");
    add_common(simulate, sim_flags, false);
    auto* run = app.add_subcommand("run", "Run methods over repetitions; write table.csv, per_rep.csv, manifest.json");
    add_common(run, run_flags, true);

    std::string per_rep_path, report_out;
    bool report_pretty = false;
    auto* report = app.add_subcommand("report", "Rebuild the result table from a per-repetition log");
    report->add_option("per_rep", per_rep_path, "per_rep.csv written by run")->required()->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "Write the table here instead of stdout");
    report->add_flag("--pretty", report_pretty, "Fixed-width table with four decimals");

    std::string emb_path, plot_out, plot_title, color_col;
    auto* plot = app.add_subcommand("plot", "Scatter-plot a 2-D embedding CSV as SVG");
    plot->add_option("embedding", emb_path, "CSV with two coordinate columns and an optional color column")
        ->required()
        ->check(CLI::ExistingFile);
    plot->add_option("--out", plot_out, "SVG path")->required();
    plot->add_option("--title", plot_title, "Plot title");
    plot->add_option("--color", color_col, "Name of the coloring column");
    bool categorical = false;
    plot->add_flag("--categorical", categorical, "Treat the coloring column as class labels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            const BenchConfig cfg = resolve(sim_flags);
            for (const auto& p : dimred::bench::cmd_simulate(cfg)) std::cout << p.string() << '\n';
        } else if (*run) {
            const BenchConfig cfg = resolve(run_flags);
            dimred::bench::cmd_run(cfg);
            print_pretty(dimred::csv::read_file(cfg.out_dir / "table.csv"));
            std::cerr << "wrote " << (cfg.out_dir / "table.csv").string() << '\n';
        } else if (*report) {
            const auto table = dimred::bench::table_from_per_rep(dimred::csv::read_file(per_rep_path));
            if (report_pretty) {
                print_pretty(table);
            } else if (report_out.empty()) {
                dimred::csv::write_row(std::cout, table.header);
                for (const auto& r : table.rows) dimred::csv::write_row(std::cout, r);
            } else {
                dimred::csv::write_file(report_out, table);
            }
        } else if (*plot) {
            dimred::csv::Row header;
            const Eigen::MatrixXd m = dimred::csv::read_matrix(emb_path, &header);
            dimred::svg::PlotSpec spec;
            spec.title = plot_title;
            spec.path = plot_out;
            std::vector<Eigen::Index> coord_cols;
            Eigen::Index color = -1;
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(header.size()); ++j) {
                if (!color_col.empty() && header[static_cast<std::size_t>(j)] == color_col)
                    color = j;
                else
                    coord_cols.push_back(j);
            }
            if (!color_col.empty() && color < 0) throw dimred::ParameterError("no column named " + color_col);
            spec.coords.resize(m.rows(), static_cast<Eigen::Index>(coord_cols.size()));
            for (std::size_t c = 0; c < coord_cols.size(); ++c)
                spec.coords.col(static_cast<Eigen::Index>(c)) = m.col(coord_cols[c]);
            if (color >= 0) {
                if (categorical)
                    for (Eigen::Index i = 0; i < m.rows(); ++i) spec.labels.push_back(static_cast<int>(std::lround(m(i, color))));
                else
                    spec.values = m.col(color);
            }
            dimred::svg::emit_plot(spec);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
