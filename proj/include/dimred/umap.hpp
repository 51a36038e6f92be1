#pragma once

#include "dimred/data.hpp"
#include "dimred/fuzzy_graph.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace dimred::umap {

/// Low-dimensional membership curve (1 + a s^{2b})^{-1}.
struct CurveParams {
    double a = 1.0;
    double b = 1.0;
    double min_dist = 0.1;
    double spread = 1.0;
    double max_deviation = 0.0;  ///< max |fit - target| over the fitting grid
};

/// Target curve: 1 up to min_dist, exp(-(s - min_dist)) beyond.
double target_curve(double s, double min_dist);

/// Least-squares fit of (a, b) on 300 equally spaced points of [0, 3 spread].
CurveParams fit_ab(double min_dist, double spread);

/// Membership as a function of the squared embedding distance.
inline double membership_sq(double sq_dist, const CurveParams& c);

struct SpectralResult {
    Embedding coords;
    int components = 0;
    bool fallback = false;  ///< eigen-solver failed; seeded Gaussian used
};

/// Eigenvectors of the symmetric normalized Laplacian with the smallest
/// nonzero eigenvalues, per connected component; components are laid out on
/// a grid and the whole embedding fits in [-10, 10] per axis.
SpectralResult spectral_init(const FuzzyGraph& g, int dim, std::uint64_t seed);

/// Seeded N(0, (10/4)^2) coordinates.
Embedding random_init(Index n, int dim, std::uint64_t seed);

struct OptimizeConfig {
    int epochs = 200;
    double learning_rate = 1.0;
    double negative_sample_rate = 5.0;
    std::uint64_t seed = 42;
    bool parallel = false;       ///< asynchronous edge updates; not bit-reproducible
    double gradient_clip = 4.0;  ///< per-coordinate step bound
};

/// Loss and gradient of the attractive edge term -w log(Phi) w.r.t. z_i.
double edge_attraction_loss(const Eigen::Ref<const Eigen::RowVectorXd>& zi,
                            const Eigen::Ref<const Eigen::RowVectorXd>& zj, double w, const CurveParams& c);
Eigen::RowVectorXd edge_attraction_gradient(const Eigen::Ref<const Eigen::RowVectorXd>& zi,
                                            const Eigen::Ref<const Eigen::RowVectorXd>& zj, double w,
                                            const CurveParams& c);

/// Cross-entropy SGD: edges are sampled proportionally to their weight,
/// repulsion by uniform negative sampling, linear learning-rate decay.
/// Throws OptimizerError if a coordinate becomes non-finite.
Embedding optimize(const FuzzyGraph& g, Embedding init, const CurveParams& curve, const OptimizeConfig& cfg);

struct UmapParams {
    int n_neighbors = 15;
    int dim = 2;
    double min_dist = 0.1;
    double spread = 1.0;
    OptimizeConfig opt;
    Supervision supervision = Supervision::None;
    double alpha = 0.5;
    int slices = 10;
    int transform_epochs = 30;
};

struct UmapModel {
    UmapParams config;
    CurveParams curve;
    DataMatrix train_x;
    SmoothKnnParams train_params;  ///< unsupervised rho/sigma of the training points
    FuzzyGraph graph;
    Embedding embedding;
    bool init_fallback = false;
};

/// `y` may be null for unsupervised fits.
UmapModel fit(const DataMatrix& x, const Response* y, const UmapParams& params);

/// Barycentric placement among the k nearest training points, then
/// `epochs` SGD epochs with training coordinates frozen (defaults to
/// config.transform_epochs; 0 disables refinement).
Embedding transform(const UmapModel& m, const DataMatrix& x_new, std::optional<int> epochs = std::nullopt);

std::string supervision_name(Supervision s);
Supervision parse_supervision(const std::string& s);

inline double membership_sq(double sq_dist, const CurveParams& c) {
    return 1.0 / (1.0 + c.a * std::pow(sq_dist, c.b));
}

}  // namespace dimred::umap
