#pragma once

#include "dimred/data.hpp"
#include "dimred/kernels.hpp"

#include <string>
#include <vector>

namespace dimred {

/// gamma = 1 / median pairwise squared distance (over i < j).
double median_heuristic_gamma(const DataMatrix& x);

Eigen::MatrixXd gram(const DataMatrix& x, const KernelSpec& spec);

/// H K H with H = I - 11'/n.
Eigen::MatrixXd center(const Eigen::MatrixXd& k);

/// Centers a cross-kernel (rows = new points, columns = training points)
/// against training column means and grand mean.
Eigen::MatrixXd center_cross(const Eigen::MatrixXd& k_new, const Eigen::RowVectorXd& train_col_means,
                             double train_grand_mean);

enum class KernelMethod { KPCA, KSIR };

struct KernelModel {
    KernelMethod method = KernelMethod::KPCA;
    KernelSpec spec;
    DataMatrix train_x;
    Eigen::MatrixXd coefficients;  ///< n x k dual coefficients, one column per component
    Eigen::VectorXd eigenvalues;
    Eigen::RowVectorXd train_col_means;
    double train_grand_mean = 0.0;
    Embedding train_scores;
    std::vector<std::string> warnings;
};

/// Eigenvectors of the centered Gram matrix scaled to |alpha|^2 = 1/lambda.
/// Components with lambda <= 1e-12 are dropped with a warning.
KernelModel kpca_fit(const DataMatrix& x, const KernelSpec& spec, int k);

struct KsirOptions {
    int slices = 10;
    int dim = 2;
    double ridge_scale = 1e-6;  ///< eps = ridge_scale * trace(Kc Kc) / n
};

/// Generalized problem Kc E Kc a = lambda (Kc Kc + eps I) a for given slice
/// labels 0..H-1. Eigenpairs sorted by descending lambda, a' B a = 1.
struct KsirEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    double ridge = 0.0;
};
KsirEigen ksir_eigenproblem(const Eigen::MatrixXd& centered_gram, const std::vector<int>& labels, int slice_count,
                            double ridge_scale);

KernelModel ksir_fit(const Dataset& d, const KernelSpec& spec, const KsirOptions& opts);

/// Shared by KPCA and KSIR: centered cross-kernel times dual coefficients.
Embedding kernel_transform(const KernelModel& m, const DataMatrix& x_new);

}  // namespace dimred
