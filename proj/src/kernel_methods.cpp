#include "dimred/kernel_methods.hpp"

#include "dimred/errors.hpp"
#include "dimred/linear.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace dimred {

double median_heuristic_gamma(const DataMatrix& x) {
    const Eigen::MatrixXd d = kernels::sq_distances(x, x);
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(x.rows() * (x.rows() - 1) / 2));
    for (Index j = 1; j < x.rows(); ++j)
        for (Index i = 0; i < j; ++i) upper.push_back(d(i, j));
    if (upper.empty()) throw SizeError("median heuristic needs at least 2 points");
    auto mid = upper.begin() + static_cast<std::ptrdiff_t>(upper.size() / 2);
    std::nth_element(upper.begin(), mid, upper.end());
    const double median = *mid;
    return median > 0.0 ? 1.0 / median : 1.0;
}

Eigen::MatrixXd gram(const DataMatrix& x, const KernelSpec& spec) { return kernels::gram(x, x, spec); }

Eigen::MatrixXd center(const Eigen::MatrixXd& k) {
    if (k.rows() != k.cols()) throw DimensionError("center() needs a square matrix");
    const Eigen::RowVectorXd col_means = k.colwise().mean();
    const Eigen::VectorXd row_means = k.rowwise().mean();
    const double grand = k.mean();
    Eigen::MatrixXd out = k;
    out.rowwise() -= col_means;
    out.colwise() -= row_means;
    out.array() += grand;
    return out;
}

Eigen::MatrixXd center_cross(const Eigen::MatrixXd& k_new, const Eigen::RowVectorXd& train_col_means,
                             double train_grand_mean) {
    if (k_new.cols() != train_col_means.size()) throw DimensionError("cross-kernel width mismatch");
    Eigen::MatrixXd out = k_new;
    const Eigen::VectorXd row_means = k_new.rowwise().mean();
    out.rowwise() -= train_col_means;
    out.colwise() -= row_means;
    out.array() += train_grand_mean;
    return out;
}

namespace {

KernelModel base_model(KernelMethod method, const DataMatrix& x, const KernelSpec& spec, Eigen::MatrixXd& centered) {
    KernelModel m;
    m.method = method;
    m.spec = spec;
    m.train_x = x;
    const Eigen::MatrixXd k = gram(x, spec);
    m.train_col_means = k.colwise().mean();
    m.train_grand_mean = k.mean();
    centered = center(k);
    return m;
}

}  // namespace

KernelModel kpca_fit(const DataMatrix& x, const KernelSpec& spec, int k) {
    validate(x);
    if (k < 1 || k > x.rows()) throw ParameterError("KPCA needs 1 <= k <= n");
    Eigen::MatrixXd kc;
    KernelModel m = base_model(KernelMethod::KPCA, x, spec, kc);
    SortedEigen es = eigen_descending(kc);

    std::vector<Index> keep;
    for (Index c = 0; c < k; ++c) {
        if (es.values[c] > 1e-12)
            keep.push_back(c);
        else
            m.warnings.push_back("KPCA component " + std::to_string(c) + " dropped (eigenvalue " +
                                 std::to_string(es.values[c]) + ")");
    }
    m.coefficients.resize(x.rows(), static_cast<Index>(keep.size()));
    m.eigenvalues.resize(static_cast<Index>(keep.size()));
    for (std::size_t t = 0; t < keep.size(); ++t) {
        const auto c = static_cast<Index>(t);
        m.eigenvalues[c] = es.values[keep[t]];
        m.coefficients.col(c) = es.vectors.col(keep[t]) / std::sqrt(es.values[keep[t]]);
    }
    fix_column_signs(m.coefficients);
    m.train_scores = kc * m.coefficients;
    return m;
}

KsirEigen ksir_eigenproblem(const Eigen::MatrixXd& kc, const std::vector<int>& labels, int slice_count,
                            double ridge_scale) {
    const Index n = kc.rows();
    if (static_cast<Index>(labels.size()) != n) throw DimensionError("slice labels do not match Gram size");
    std::vector<Index> counts(static_cast<std::size_t>(slice_count), 0);
    for (int h : labels) ++counts[static_cast<std::size_t>(h)];
    for (int h = 0; h < slice_count; ++h)
        if (counts[static_cast<std::size_t>(h)] == 0) throw SlicingError("KSIR slice " + std::to_string(h) + " is empty");

    // Kc E Kc with E = sum_h d_h d_h' / n_h, i.e. n_h * (slice mean column)(slice mean column)'.
    Eigen::MatrixXd slice_means = Eigen::MatrixXd::Zero(n, slice_count);
    for (Index i = 0; i < n; ++i) slice_means.col(labels[static_cast<std::size_t>(i)]) += kc.col(i);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int h = 0; h < slice_count; ++h) {
        const double nh = static_cast<double>(counts[static_cast<std::size_t>(h)]);
        const Eigen::VectorXd mean_h = slice_means.col(h) / nh;
        a.noalias() += nh * mean_h * mean_h.transpose();
    }
    Eigen::MatrixXd b = kc * kc;
    KsirEigen out;
    out.ridge = ridge_scale * b.trace() / static_cast<double>(n);
    if (!(out.ridge > 0.0)) out.ridge = ridge_scale;
    b.diagonal().array() += out.ridge;
    a = 0.5 * (a + a.transpose()).eval();
    b = 0.5 * (b + b.transpose()).eval();

    // Whiten with B^{-1/2} from an eigendecomposition. A Cholesky-based
    // reduction loses the bound lambda <= 1 once B is this ill-conditioned.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bes(b);
    if (bes.info() != Eigen::Success) throw NumericalError("KSIR ridge matrix decomposition failed");
    const Eigen::MatrixXd inv_sqrt =
        bes.eigenvectors() * bes.eigenvalues().cwiseMax(out.ridge).cwiseSqrt().cwiseInverse().asDiagonal() *
        bes.eigenvectors().transpose();
    Eigen::MatrixXd c = inv_sqrt * a * inv_sqrt;
    c = 0.5 * (c + c.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ces(c);
    if (ces.info() != Eigen::Success) throw NumericalError("KSIR generalized eigenproblem failed");
    out.values = ces.eigenvalues().reverse();
    out.vectors = inv_sqrt * ces.eigenvectors().rowwise().reverse();
    return out;
}

KernelModel ksir_fit(const Dataset& d, const KernelSpec& spec, const KsirOptions& opts) {
    validate(d);
    int slice_count = 0;
    const std::vector<int> labels = sir_slices(d.y, opts.slices, &slice_count);
    if (opts.dim < 1 || opts.dim >= slice_count)
        throw ParameterError("KSIR needs 1 <= dim < slice count (" + std::to_string(slice_count) + ")");
    Eigen::MatrixXd kc;
    KernelModel m = base_model(KernelMethod::KSIR, d.x, spec, kc);
    KsirEigen es = ksir_eigenproblem(kc, labels, slice_count, opts.ridge_scale);
    m.eigenvalues = es.values.head(opts.dim);
    m.coefficients = es.vectors.leftCols(opts.dim);
    fix_column_signs(m.coefficients);
    m.train_scores = kc * m.coefficients;
    return m;
}

Embedding kernel_transform(const KernelModel& m, const DataMatrix& x_new) {
    if (x_new.cols() != m.train_x.cols()) throw DimensionError("kernel transform column count mismatch");
    const Eigen::MatrixXd k_new = kernels::gram(x_new, m.train_x, m.spec);
    return center_cross(k_new, m.train_col_means, m.train_grand_mean) * m.coefficients;
}

}  // namespace dimred
