#include "dimred/persist.hpp"

#include "dimred/csv.hpp"
#include "dimred/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace dimred::persist {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_manifest(const fs::path& dir, const std::string& type, json body) {
    fs::create_directories(dir);
    body["format"] = "dimred-model";
    body["version"] = kFormatVersion;
    body["type"] = type;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
    out << body.dump(2) << '\n';
}

json read_manifest(const fs::path& dir, const std::string& expected_type) {
    std::ifstream in(dir / "manifest.json", std::ios::binary);
    if (!in) throw FormatError("no manifest.json in " + dir.string(), 0);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(std::string("unreadable manifest: ") + e.what(), 0);
    }
    if (j.value("format", "") != "dimred-model") throw FormatError("not a model bundle: " + dir.string(), 0);
    if (j.value("version", 0) != kFormatVersion)
        throw FormatError("unsupported model format version " + std::to_string(j.value("version", 0)), 0);
    if (!expected_type.empty() && j.value("type", "") != expected_type)
        throw FormatError("bundle holds a '" + j.value("type", "") + "' model, expected '" + expected_type + "'", 0);
    return j;
}

void put(const fs::path& dir, const std::string& name, const Eigen::MatrixXd& m, const std::string& prefix = "c") {
    csv::write_matrix(dir / (name + ".csv"), m, csv::numbered_header(prefix, m.cols()));
}

Eigen::MatrixXd get(const fs::path& dir, const std::string& name) { return csv::read_matrix(dir / (name + ".csv")); }

Eigen::MatrixXd column(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> to_vector(const Eigen::MatrixXd& m) {
    return std::vector<double>(m.data(), m.data() + m.size());
}

json kernel_json(const KernelSpec& s) {
    return {{"family", static_cast<int>(s.family)}, {"gamma", s.gamma}, {"degree", s.degree}, {"coef0", s.coef0}};
}

KernelSpec kernel_from(const json& j) {
    KernelSpec s;
    s.family = static_cast<KernelFamily>(j.at("family").get<int>());
    s.gamma = j.at("gamma").get<double>();
    s.degree = j.at("degree").get<int>();
    s.coef0 = j.at("coef0").get<double>();
    return s;
}

}  // namespace

std::string model_type(const fs::path& dir) { return read_manifest(dir, "").at("type").get<std::string>(); }

void save(const umap::UmapModel& m, const fs::path& dir) {
    const auto& c = m.config;
    json j = {{"n_neighbors", c.n_neighbors},
              {"dim", c.dim},
              {"min_dist", c.min_dist},
              {"spread", c.spread},
              {"epochs", c.opt.epochs},
              {"learning_rate", c.opt.learning_rate},
              {"negative_sample_rate", c.opt.negative_sample_rate},
              {"seed", c.opt.seed},
              {"parallel", c.opt.parallel},
              {"gradient_clip", c.opt.gradient_clip},
              {"supervision", umap::supervision_name(c.supervision)},
              {"alpha", c.alpha},
              {"slices", c.slices},
              {"transform_epochs", c.transform_epochs},
              {"curve", {{"a", m.curve.a}, {"b", m.curve.b}, {"max_deviation", m.curve.max_deviation}}},
              {"init_fallback", m.init_fallback}};
    write_manifest(dir, "umap", j);
    put(dir, "train_x", m.train_x, "x");
    put(dir, "embedding", m.embedding, "z");
    Eigen::MatrixXd rs(static_cast<Index>(m.train_params.rho.size()), 2);
    for (Index i = 0; i < rs.rows(); ++i) {
        rs(i, 0) = m.train_params.rho[static_cast<std::size_t>(i)];
        rs(i, 1) = m.train_params.sigma[static_cast<std::size_t>(i)];
    }
    csv::write_matrix(dir / "smooth_knn.csv", rs, {"rho", "sigma"});
    Eigen::MatrixXd trip(m.graph.weights.nonZeros(), 3);
    Index t = 0;
    for (int k = 0; k < m.graph.weights.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m.graph.weights, k); it; ++it, ++t) {
            trip(t, 0) = static_cast<double>(it.row());
            trip(t, 1) = static_cast<double>(it.col());
            trip(t, 2) = it.value();
        }
    csv::write_matrix(dir / "graph.csv", trip, {"i", "j", "weight"});
}

umap::UmapModel load_umap(const fs::path& dir) {
    const json j = read_manifest(dir, "umap");
    umap::UmapModel m;
    auto& c = m.config;
    c.n_neighbors = j.at("n_neighbors");
    c.dim = j.at("dim");
    c.min_dist = j.at("min_dist");
    c.spread = j.at("spread");
    c.opt.epochs = j.at("epochs");
    c.opt.learning_rate = j.at("learning_rate");
    c.opt.negative_sample_rate = j.at("negative_sample_rate");
    c.opt.seed = j.at("seed");
    c.opt.parallel = j.at("parallel");
    c.opt.gradient_clip = j.at("gradient_clip");
    c.supervision = umap::parse_supervision(j.at("supervision"));
    c.alpha = j.at("alpha");
    c.slices = j.at("slices");
    c.transform_epochs = j.at("transform_epochs");
    m.curve.a = j.at("curve").at("a");
    m.curve.b = j.at("curve").at("b");
    m.curve.max_deviation = j.at("curve").at("max_deviation");
    m.curve.min_dist = c.min_dist;
    m.curve.spread = c.spread;
    m.init_fallback = j.at("init_fallback");
    m.train_x = get(dir, "train_x");
    m.embedding = get(dir, "embedding");
    const Eigen::MatrixXd rs = get(dir, "smooth_knn");
    for (Index i = 0; i < rs.rows(); ++i) {
        m.train_params.rho.push_back(rs(i, 0));
        m.train_params.sigma.push_back(rs(i, 1));
    }
    const Eigen::MatrixXd trip = get(dir, "graph");
    std::vector<Eigen::Triplet<double>> ts;
    for (Index t = 0; t < trip.rows(); ++t)
        ts.emplace_back(static_cast<int>(trip(t, 0)), static_cast<int>(trip(t, 1)), trip(t, 2));
    const Index n = m.train_x.rows();
    m.graph.weights.resize(n, n);
    m.graph.weights.setFromTriplets(ts.begin(), ts.end());
    m.graph.supervision = c.supervision;
    if (m.embedding.rows() != n || static_cast<Index>(m.train_params.rho.size()) != n)
        throw FormatError("inconsistent row counts in UMAP bundle " + dir.string(), 0);
    return m;
}

void save(const PcaModel& m, const fs::path& dir) {
    write_manifest(dir, "pca", {{"components", m.loadings.cols()}});
    put(dir, "means", m.means);
    put(dir, "loadings", m.loadings);
    put(dir, "eigenvalues", m.eigenvalues);
}

PcaModel load_pca(const fs::path& dir) {
    read_manifest(dir, "pca");
    PcaModel m;
    m.means = get(dir, "means");
    m.loadings = get(dir, "loadings");
    m.eigenvalues = get(dir, "eigenvalues");
    return m;
}

void save(const SirModel& m, const fs::path& dir) {
    write_manifest(dir, "sir", {{"slices", m.slices}, {"ridge", m.ridge}, {"dim", m.directions.cols()}});
    put(dir, "means", m.means);
    put(dir, "inv_sqrt_cov", m.inv_sqrt_cov);
    put(dir, "directions", m.directions);
    put(dir, "eigenvalues", m.eigenvalues);
    put(dir, "whitened_directions", m.whitened_directions);
    put(dir, "train_scores", m.train_scores, "z");
}

SirModel load_sir(const fs::path& dir) {
    const json j = read_manifest(dir, "sir");
    SirModel m;
    m.slices = j.at("slices");
    m.ridge = j.at("ridge");
    m.means = get(dir, "means");
    m.inv_sqrt_cov = get(dir, "inv_sqrt_cov");
    m.directions = get(dir, "directions");
    m.eigenvalues = get(dir, "eigenvalues");
    m.whitened_directions = get(dir, "whitened_directions");
    m.train_scores = get(dir, "train_scores");
    return m;
}

void save(const KernelModel& m, const fs::path& dir) {
    write_manifest(dir, "kernel",
                   {{"method", m.method == KernelMethod::KPCA ? "KPCA" : "KSIR"},
                    {"kernel", kernel_json(m.spec)},
                    {"train_grand_mean", m.train_grand_mean},
                    {"warnings", m.warnings}});
    put(dir, "train_x", m.train_x, "x");
    put(dir, "coefficients", m.coefficients);
    put(dir, "eigenvalues", m.eigenvalues);
    put(dir, "train_col_means", m.train_col_means);
    put(dir, "train_scores", m.train_scores, "z");
}

KernelModel load_kernel(const fs::path& dir) {
    const json j = read_manifest(dir, "kernel");
    KernelModel m;
    m.method = j.at("method") == "KPCA" ? KernelMethod::KPCA : KernelMethod::KSIR;
    m.spec = kernel_from(j.at("kernel"));
    m.train_grand_mean = j.at("train_grand_mean");
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    m.train_x = get(dir, "train_x");
    m.coefficients = get(dir, "coefficients");
    m.eigenvalues = get(dir, "eigenvalues");
    m.train_col_means = get(dir, "train_col_means");
    m.train_scores = get(dir, "train_scores");
    return m;
}

void save(const tsne::TsneModel& m, const fs::path& dir) {
    const auto& c = m.config;
    write_manifest(dir, "tsne",
                   {{"perplexity", c.perplexity},
                    {"dim", c.dim},
                    {"epochs", c.epochs},
                    {"learning_rate", c.learning_rate},
                    {"exaggeration", c.exaggeration},
                    {"exaggeration_epochs", c.exaggeration_epochs},
                    {"momentum_initial", c.momentum_initial},
                    {"momentum_final", c.momentum_final},
                    {"momentum_switch", c.momentum_switch},
                    {"init_scale", c.init_scale},
                    {"transform_neighbors", c.transform_neighbors},
                    {"seed", c.seed},
                    {"warnings", m.warnings}});
    put(dir, "train_x", m.train_x, "x");
    put(dir, "embedding", m.embedding, "z");
    csv::write_matrix(dir / "sigma.csv", column(m.sigma), {"sigma"});
    csv::write_matrix(dir / "kl_trace.csv", column(m.kl_trace), {"kl"});
}

tsne::TsneModel load_tsne(const fs::path& dir) {
    const json j = read_manifest(dir, "tsne");
    tsne::TsneModel m;
    auto& c = m.config;
    c.perplexity = j.at("perplexity");
    c.dim = j.at("dim");
    c.epochs = j.at("epochs");
    c.learning_rate = j.at("learning_rate");
    c.exaggeration = j.at("exaggeration");
    c.exaggeration_epochs = j.at("exaggeration_epochs");
    c.momentum_initial = j.at("momentum_initial");
    c.momentum_final = j.at("momentum_final");
    c.momentum_switch = j.at("momentum_switch");
    c.init_scale = j.at("init_scale");
    c.transform_neighbors = j.at("transform_neighbors");
    c.seed = j.at("seed");
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    m.train_x = get(dir, "train_x");
    m.embedding = get(dir, "embedding");
    m.sigma = to_vector(get(dir, "sigma"));
    m.kl_trace = to_vector(get(dir, "kl_trace"));
    return m;
}

void save_identity(Index features, const fs::path& dir) { write_manifest(dir, "identity", {{"features", features}}); }

}  // namespace dimred::persist
