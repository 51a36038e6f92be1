#pragma once

#include "dimred/data.hpp"

#include <vector>

namespace dimred {

/// Flips each column so its largest-magnitude entry is positive.
void fix_column_signs(Eigen::MatrixXd& m);

/// Symmetric eigendecomposition with eigenpairs sorted by descending eigenvalue.
struct SortedEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};
SortedEigen eigen_descending(const Eigen::MatrixXd& symmetric);

struct PcaModel {
    Eigen::RowVectorXd means;
    Eigen::MatrixXd loadings;     ///< p x k, orthonormal columns
    Eigen::VectorXd eigenvalues;  ///< length k, descending, of (1/n) Xc'Xc
};

PcaModel pca_fit(const DataMatrix& x, int k);
Embedding pca_transform(const PcaModel& m, const DataMatrix& x);

struct SirOptions {
    int slices = 10;   ///< continuous responses only; categorical uses its labels
    int dim = 2;
    double ridge_scale = 1e-3;  ///< ridge = ridge_scale * trace(Sigma) / p
};

struct SirModel {
    Eigen::RowVectorXd means;
    Eigen::MatrixXd inv_sqrt_cov;   ///< (Sigma + ridge I)^{-1/2}
    Eigen::MatrixXd directions;     ///< p x dim EDR directions
    Eigen::VectorXd eigenvalues;    ///< all eigenvalues of the slice-mean covariance, descending
    Eigen::MatrixXd whitened_directions;  ///< p x dim eigenvectors in standardized coordinates
    int slices = 0;
    double ridge = 0.0;
    Embedding train_scores;
};

/// Slice assignment used by SIR and kernel SIR: response-order quantile
/// slices for continuous y, compacted labels for categorical y.
std::vector<int> sir_slices(const Response& y, int slices, int* slice_count);

/// Throws SlicingError on an empty slice and ParameterError if dim >= H.
SirModel sir_fit(const Dataset& d, const SirOptions& opts);
Embedding sir_transform(const SirModel& m, const DataMatrix& x);

}  // namespace dimred
