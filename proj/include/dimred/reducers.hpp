#pragma once

// The ten benchmark columns behind one fit/transform interface. A reducer
// sees training rows and responses in fit() and only predictor rows in
// transform(); test responses never reach it.

#include "dimred/data.hpp"
#include "dimred/kernels.hpp"
#include "dimred/tsne.hpp"
#include "dimred/umap.hpp"

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dimred {

enum class Method { Orig, SSU, CaSU, CoSU, UU, PCA, KPCA, SIR, KSIR, TSNE };

inline constexpr std::array<Method, 10> kAllMethods{Method::Orig, Method::SSU,  Method::CaSU, Method::CoSU,
                                                    Method::UU,   Method::PCA,  Method::KPCA, Method::SIR,
                                                    Method::KSIR, Method::TSNE};

/// Table column label ("Orig", ..., "t-SNE").
std::string method_name(Method m);
/// Accepts the column label, case-insensitively; "tsne" also parses.
Method parse_method(const std::string& s);
std::vector<Method> parse_method_list(const std::string& comma_separated);

struct MethodParams {
    int dim = 2;
    // UMAP family
    int n_neighbors = 15;
    double min_dist = 0.1;
    double alpha = 0.5;
    int umap_epochs = 200;
    double umap_learning_rate = 1.0;
    double negative_sample_rate = 5.0;
    int transform_epochs = 30;
    // SIR / KSIR / SSU
    int slices = 10;
    double sir_ridge_scale = 1e-3;
    double ksir_ridge_scale = 1e-6;
    // KPCA / KSIR
    KernelFamily kernel = KernelFamily::Gaussian;
    double gamma = 0.0;  ///< <= 0 selects the median heuristic on training rows
    int degree = 2;
    double coef0 = 1.0;
    // t-SNE
    double perplexity = 30.0;
    int tsne_epochs = 1000;
    double tsne_learning_rate = 0.0;  ///< <= 0 picks the size-scaled default
};

class Reducer {
public:
    virtual ~Reducer() = default;
    virtual Method method() const = 0;
    /// Fits on the training rows and returns their embedding.
    virtual Embedding fit(const DataMatrix& x, const Response& y) = 0;
    /// Embeds new rows with the fitted model.
    virtual Embedding transform(const DataMatrix& x) const = 0;
    /// Persists the fitted model into `dir` (created if absent).
    virtual void save(const std::filesystem::path& dir) const = 0;
    /// Non-fatal notes from the last fit (dropped components, unconverged rows).
    virtual std::vector<std::string> warnings() const { return {}; }
};

/// `seed` drives every stochastic step of the method.
std::unique_ptr<Reducer> make_reducer(Method m, const MethodParams& params, std::uint64_t seed);

std::string kernel_family_name(KernelFamily f);
KernelFamily parse_kernel_family(const std::string& s);

}  // namespace dimred
