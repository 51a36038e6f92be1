#pragma once

// Data-parallel hot loops. Every kernel exists twice: a plain serial
// reference in `serial::` and an OpenMP version in `omp::`. The two produce
// bit-identical results (parallelism is over output rows only; every
// reduction runs in a fixed index order). The unqualified entry points
// dispatch on `parallel::region_threads()`.

#include "dimred/data.hpp"

#include <vector>

namespace dimred {

/// k nearest neighbors per query row, ascending by (distance, index).
struct NeighborList {
    Index n = 0;
    int k = 0;
    std::vector<Index> index;  // n * k, row-major
    std::vector<double> dist;  // n * k, row-major

    Index neighbor(Index i, int j) const { return index[static_cast<std::size_t>(i * k + j)]; }
    double distance(Index i, int j) const { return dist[static_cast<std::size_t>(i * k + j)]; }
};

enum class KernelFamily { Gaussian, Polynomial, Linear };

struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double gamma = 1.0;  ///< Gaussian: exp(-gamma |x-y|^2); Polynomial: (gamma <x,y> + coef0)^degree
    int degree = 2;
    double coef0 = 1.0;
};

/// Normalization and loss from one t-SNE gradient evaluation.
struct TsneStep {
    double z = 0.0;   ///< sum over i != j of (1 + |y_i - y_j|^2)^-1
    double kl = 0.0;  ///< KL(P || Q) with the un-exaggerated P
};

namespace kernels {

namespace serial {
/// Exact Euclidean kNN of each `query` row among `ref` rows. With
/// `exclude_self`, query row i never returns ref row i (query must be ref).
NeighborList knn(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self);
Eigen::MatrixXd sq_distances(const DataMatrix& a, const DataMatrix& b);
Eigen::MatrixXd gram(const DataMatrix& a, const DataMatrix& b, const KernelSpec& spec);
/// grad_i = 4 sum_j (exaggeration * p_ij - q_ij) (1 + |y_i-y_j|^2)^-1 (y_i - y_j)
TsneStep tsne_gradient(const Eigen::MatrixXd& p, double exaggeration, const Embedding& y, Embedding& grad);
}  // namespace serial

namespace omp {
NeighborList knn(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self);
Eigen::MatrixXd sq_distances(const DataMatrix& a, const DataMatrix& b);
Eigen::MatrixXd gram(const DataMatrix& a, const DataMatrix& b, const KernelSpec& spec);
TsneStep tsne_gradient(const Eigen::MatrixXd& p, double exaggeration, const Embedding& y, Embedding& grad);
}  // namespace omp

NeighborList knn(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self);
Eigen::MatrixXd sq_distances(const DataMatrix& a, const DataMatrix& b);
Eigen::MatrixXd gram(const DataMatrix& a, const DataMatrix& b, const KernelSpec& spec);
TsneStep tsne_gradient(const Eigen::MatrixXd& p, double exaggeration, const Embedding& y, Embedding& grad);

/// Shared per-element helpers, used by both implementations.
namespace detail {
void knn_row(const DataMatrix& ref, const double* q, Index self, int k, Index* out_idx, double* out_dist,
             std::vector<std::pair<double, Index>>& scratch);
double kernel_value(const KernelSpec& spec, const double* a, const double* b, Index p);
double sq_distance(const double* a, const double* b, Index p);
void check_knn_args(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self);
}  // namespace detail

}  // namespace kernels
}  // namespace dimred
