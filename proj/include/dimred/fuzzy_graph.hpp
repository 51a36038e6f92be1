#pragma once

#include "dimred/data.hpp"
#include "dimred/kernels.hpp"

#include <Eigen/SparseCore>

#include <span>
#include <vector>

namespace dimred::umap {

/// How response information entered the graph.
enum class Supervision { None, Categorical, Continuous, Sliced };

/// Per-point local connectivity: distance to the nearest strictly positive
/// neighbor and the bandwidth solving the smooth-kNN equation.
struct SmoothKnnParams {
    std::vector<double> rho;
    std::vector<double> sigma;
};

/// Directed kNN edge weights in NeighborList layout (row i, slot t).
struct DirectedWeights {
    Index n = 0;
    int k = 0;
    std::vector<Index> index;
    std::vector<double> weight;

    Index target(Index i, int t) const { return index[static_cast<std::size_t>(i * k + t)]; }
    double& at(Index i, int t) { return weight[static_cast<std::size_t>(i * k + t)]; }
    double at(Index i, int t) const { return weight[static_cast<std::size_t>(i * k + t)]; }
};

/// Symmetric sparse membership matrix, zero diagonal, entries in [0, 1].
struct FuzzyGraph {
    Eigen::SparseMatrix<double> weights;
    Supervision supervision = Supervision::None;

    Index n() const { return weights.rows(); }
};

inline constexpr double kSigmaMin = 1e-8;
inline constexpr double kSigmaMax = 1e8;
inline constexpr double kCalibrationTolerance = 1e-5;

/// Exact Euclidean kNN, self excluded, ties to the lower index.
NeighborList knn_search(const DataMatrix& x, int k);

/// exp(-max(0, d - rho) / sigma)
double membership(double d, double rho, double sigma);

/// Solves sum_j exp(-max(0, d_ij - rho_i) / sigma_i) = log2(k) per row by
/// bisection on log(sigma) over [kSigmaMin, kSigmaMax]. Rows where no root
/// exists are clamped to an endpoint; k < 2 skips calibration with sigma = 1.
SmoothKnnParams calibrate(const NeighborList& nl);

/// lhs - log2(k) of the smooth-kNN equation for row i.
double calibration_residual(const NeighborList& nl, Index i, double rho, double sigma);

DirectedWeights edge_weights(const NeighborList& nl, const SmoothKnnParams& params);

/// w + w' - w w' per unordered pair; a missing reverse edge counts as 0.
FuzzyGraph symmetrize(const DirectedWeights& w, Supervision tag = Supervision::None);

/// Multiplier for edges whose labels differ: e^{-2.5/(1-alpha)}, 0 at alpha = 1.
double label_penalty(double alpha);

DirectedWeights supervise_categorical(DirectedWeights w, std::span<const int> labels, double alpha);

/// Two-branch power combination of a feature weight and a response weight.
double combine_continuous(double w, double wy, double alpha);

/// Response memberships are calibrated on the k nearest responses of each
/// point and evaluated on the feature graph's own edges.
DirectedWeights supervise_continuous(DirectedWeights w, const Eigen::VectorXd& y, int k, double alpha);

DirectedWeights supervise_sliced(DirectedWeights w, const Eigen::VectorXd& y, int slices, double alpha);

/// Directed weights before symmetrization, with optional supervision.
struct GraphBuild {
    NeighborList neighbors;
    SmoothKnnParams params;
    DirectedWeights directed;
    FuzzyGraph graph;
};

struct GraphOptions {
    int n_neighbors = 15;
    Supervision supervision = Supervision::None;
    double alpha = 0.5;
    int slices = 10;
};

/// `y` may be null only for Supervision::None.
GraphBuild build_graph(const DataMatrix& x, const Response* y, const GraphOptions& opts);

}  // namespace dimred::umap
