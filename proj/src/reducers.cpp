#include "dimred/reducers.hpp"

#include "dimred/errors.hpp"
#include "dimred/kernel_methods.hpp"
#include "dimred/linear.hpp"
#include "dimred/persist.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dimred {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Categorical responses cap SIR-type dimensions at L - 1.
int sliced_dim(const Response& y, const MethodParams& p) {
    if (!y.is_categorical()) return p.dim;
    int count = 0;
    compact_labels(y.labels(), &count);
    return std::max(1, std::min(p.dim, count - 1));
}

KernelSpec kernel_for(const MethodParams& p, const DataMatrix& x) {
    KernelSpec s;
    s.family = p.kernel;
    s.degree = p.degree;
    s.coef0 = p.coef0;
    s.gamma = p.gamma > 0.0 ? p.gamma : (p.kernel == KernelFamily::Gaussian ? median_heuristic_gamma(x) : 1.0);
    return s;
}

class OrigReducer final : public Reducer {
public:
    Method method() const override { return Method::Orig; }
    Embedding fit(const DataMatrix& x, const Response&) override {
        features_ = x.cols();
        return x;
    }
    Embedding transform(const DataMatrix& x) const override {
        if (x.cols() != features_) throw DimensionError("column count differs from training data");
        return x;
    }
    void save(const std::filesystem::path& dir) const override { persist::save_identity(features_, dir); }

private:
    Index features_ = 0;
};

class UmapReducer final : public Reducer {
public:
    UmapReducer(Method m, const MethodParams& p, std::uint64_t seed) : method_(m) {
        cfg_.n_neighbors = p.n_neighbors;
        cfg_.dim = p.dim;
        cfg_.min_dist = p.min_dist;
        cfg_.alpha = p.alpha;
        cfg_.slices = p.slices;
        cfg_.transform_epochs = p.transform_epochs;
        cfg_.opt.epochs = p.umap_epochs;
        cfg_.opt.learning_rate = p.umap_learning_rate;
        cfg_.opt.negative_sample_rate = p.negative_sample_rate;
        cfg_.opt.seed = seed;
        switch (m) {
            case Method::SSU: cfg_.supervision = umap::Supervision::Sliced; break;
            case Method::CaSU: cfg_.supervision = umap::Supervision::Categorical; break;
            case Method::CoSU: cfg_.supervision = umap::Supervision::Continuous; break;
            default: cfg_.supervision = umap::Supervision::None;
        }
    }
    Method method() const override { return method_; }
    Embedding fit(const DataMatrix& x, const Response& y) override {
        if (y.is_categorical() && (method_ == Method::SSU || method_ == Method::CoSU))
            throw ParameterError(method_name(method_) + " is not defined for a categorical response");
        model_ = umap::fit(x, &y, cfg_);
        return model_.embedding;
    }
    Embedding transform(const DataMatrix& x) const override { return umap::transform(model_, x); }
    void save(const std::filesystem::path& dir) const override { persist::save(model_, dir); }
    std::vector<std::string> warnings() const override {
        if (model_.init_fallback) return {"spectral initialization failed; random initialization used"};
        return {};
    }

private:
    Method method_;
    umap::UmapParams cfg_;
    umap::UmapModel model_;
};

class PcaReducer final : public Reducer {
public:
    explicit PcaReducer(const MethodParams& p) : dim_(p.dim) {}
    Method method() const override { return Method::PCA; }
    Embedding fit(const DataMatrix& x, const Response&) override {
        model_ = pca_fit(x, dim_);
        return pca_transform(model_, x);
    }
    Embedding transform(const DataMatrix& x) const override { return pca_transform(model_, x); }
    void save(const std::filesystem::path& dir) const override { persist::save(model_, dir); }

private:
    int dim_;
    PcaModel model_;
};

class SirReducer final : public Reducer {
public:
    explicit SirReducer(const MethodParams& p) : params_(p) {}
    Method method() const override { return Method::SIR; }
    Embedding fit(const DataMatrix& x, const Response& y) override {
        SirOptions o;
        o.slices = params_.slices;
        o.dim = sliced_dim(y, params_);
        o.ridge_scale = params_.sir_ridge_scale;
        model_ = sir_fit(Dataset{x, y}, o);
        return model_.train_scores;
    }
    Embedding transform(const DataMatrix& x) const override { return sir_transform(model_, x); }
    void save(const std::filesystem::path& dir) const override { persist::save(model_, dir); }

private:
    MethodParams params_;
    SirModel model_;
};

class KernelReducer final : public Reducer {
public:
    KernelReducer(Method m, const MethodParams& p) : method_(m), params_(p) {}
    Method method() const override { return method_; }
    Embedding fit(const DataMatrix& x, const Response& y) override {
        const KernelSpec spec = kernel_for(params_, x);
        if (method_ == Method::KPCA) {
            model_ = kpca_fit(x, spec, params_.dim);
        } else {
            KsirOptions o;
            o.slices = params_.slices;
            o.dim = sliced_dim(y, params_);
            o.ridge_scale = params_.ksir_ridge_scale;
            model_ = ksir_fit(Dataset{x, y}, spec, o);
        }
        return model_.train_scores;
    }
    Embedding transform(const DataMatrix& x) const override { return kernel_transform(model_, x); }
    void save(const std::filesystem::path& dir) const override { persist::save(model_, dir); }
    std::vector<std::string> warnings() const override { return model_.warnings; }

private:
    Method method_;
    MethodParams params_;
    KernelModel model_;
};

class TsneReducer final : public Reducer {
public:
    TsneReducer(const MethodParams& p, std::uint64_t seed) {
        cfg_.dim = p.dim;
        cfg_.perplexity = p.perplexity;
        cfg_.epochs = p.tsne_epochs;
        cfg_.learning_rate = p.tsne_learning_rate;
        cfg_.seed = seed;
    }
    Method method() const override { return Method::TSNE; }
    Embedding fit(const DataMatrix& x, const Response&) override {
        model_ = tsne::fit(x, cfg_);
        return model_.embedding;
    }
    Embedding transform(const DataMatrix& x) const override { return tsne::transform(model_, x); }
    void save(const std::filesystem::path& dir) const override { persist::save(model_, dir); }
    std::vector<std::string> warnings() const override { return model_.warnings; }

private:
    tsne::TsneConfig cfg_;
    tsne::TsneModel model_;
};

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Orig: return "Orig";
        case Method::SSU: return "SSU";
        case Method::CaSU: return "CaSU";
        case Method::CoSU: return "CoSU";
        case Method::UU: return "UU";
        case Method::PCA: return "PCA";
        case Method::KPCA: return "KPCA";
        case Method::SIR: return "SIR";
        case Method::KSIR: return "KSIR";
        case Method::TSNE: return "t-SNE";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    const std::string key = lower(s);
    if (key == "tsne") return Method::TSNE;
    for (Method m : kAllMethods)
        if (lower(method_name(m)) == key) return m;
    throw ParameterError("unknown method '" + s + "'");
}

std::vector<Method> parse_method_list(const std::string& comma_separated) {
    std::vector<Method> out;
    std::stringstream ss(comma_separated);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item.empty()) continue;
        if (lower(item) == "all") return {kAllMethods.begin(), kAllMethods.end()};
        const Method m = parse_method(item);
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    // Keep table column order regardless of how the list was typed.
    std::sort(out.begin(), out.end());
    return out;
}

std::unique_ptr<Reducer> make_reducer(Method m, const MethodParams& params, std::uint64_t seed) {
    switch (m) {
        case Method::Orig: return std::make_unique<OrigReducer>();
        case Method::SSU:
        case Method::CaSU:
        case Method::CoSU:
        case Method::UU: return std::make_unique<UmapReducer>(m, params, seed);
        case Method::PCA: return std::make_unique<PcaReducer>(params);
        case Method::SIR: return std::make_unique<SirReducer>(params);
        case Method::KPCA:
        case Method::KSIR: return std::make_unique<KernelReducer>(m, params);
        case Method::TSNE: return std::make_unique<TsneReducer>(params, seed);
    }
    throw ParameterError("unknown method");
}

std::string kernel_family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Polynomial: return "polynomial";
        case KernelFamily::Linear: return "linear";
    }
    return "?";
}

KernelFamily parse_kernel_family(const std::string& s) {
    const std::string key = lower(s);
    if (key == "gaussian" || key == "rbf") return KernelFamily::Gaussian;
    if (key == "polynomial" || key == "poly") return KernelFamily::Polynomial;
    if (key == "linear") return KernelFamily::Linear;
    throw ParameterError("unknown kernel family '" + s + "'");
}

}  // namespace dimred
