#include "dimred/linear.hpp"

#include "dimred/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace dimred {

void fix_column_signs(Eigen::MatrixXd& m) {
    for (Index c = 0; c < m.cols(); ++c) {
        Index arg = 0;
        m.col(c).cwiseAbs().maxCoeff(&arg);
        if (m(arg, c) < 0.0) m.col(c) *= -1.0;
    }
}

SortedEigen eigen_descending(const Eigen::MatrixXd& symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
    SortedEigen out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

PcaModel pca_fit(const DataMatrix& x, int k) {
    validate(x);
    if (k < 1 || k > std::min(x.rows(), x.cols()))
        throw ParameterError("PCA needs 1 <= k <= min(n, p), got k = " + std::to_string(k));
    PcaModel m;
    m.means = x.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - m.means;
    const Eigen::MatrixXd cov = (xc.transpose() * xc) / static_cast<double>(x.rows());
    SortedEigen es = eigen_descending(cov);
    m.loadings = es.vectors.leftCols(k);
    fix_column_signs(m.loadings);
    m.eigenvalues = es.values.head(k).cwiseMax(0.0);
    return m;
}

Embedding pca_transform(const PcaModel& m, const DataMatrix& x) {
    if (x.cols() != m.means.size()) throw DimensionError("PCA transform column count mismatch");
    return (x.rowwise() - m.means) * m.loadings;
}

std::vector<int> sir_slices(const Response& y, int slices, int* slice_count) {
    if (y.is_categorical()) return compact_labels(y.labels(), slice_count);
    if (slice_count) *slice_count = slices;
    return slice_response(y.values, slices);
}

SirModel sir_fit(const Dataset& d, const SirOptions& opts) {
    validate(d);
    const Index n = d.n(), p = d.p();
    SirModel m;
    const std::vector<int> labels = sir_slices(d.y, opts.slices, &m.slices);
    if (opts.dim < 1 || opts.dim >= m.slices)
        throw ParameterError("SIR needs 1 <= dim < slice count (" + std::to_string(m.slices) + "), got " +
                             std::to_string(opts.dim));
    if (opts.dim > p) throw ParameterError("SIR dim exceeds feature count");

    m.means = d.x.colwise().mean();
    const Eigen::MatrixXd xc = d.x.rowwise() - m.means;
    Eigen::MatrixXd cov = (xc.transpose() * xc) / static_cast<double>(n);
    m.ridge = opts.ridge_scale * cov.trace() / static_cast<double>(p);
    if (!(m.ridge > 0.0)) m.ridge = opts.ridge_scale;
    cov.diagonal().array() += m.ridge;

    SortedEigen ce = eigen_descending(cov);
    const Eigen::VectorXd floored = ce.values.cwiseMax(m.ridge);
    m.inv_sqrt_cov = ce.vectors * floored.cwiseSqrt().cwiseInverse().asDiagonal() * ce.vectors.transpose();

    const Eigen::MatrixXd u = xc * m.inv_sqrt_cov;
    Eigen::MatrixXd slice_sum = Eigen::MatrixXd::Zero(m.slices, p);
    std::vector<Index> counts(static_cast<std::size_t>(m.slices), 0);
    for (Index i = 0; i < n; ++i) {
        const int h = labels[static_cast<std::size_t>(i)];
        slice_sum.row(h) += u.row(i);
        ++counts[static_cast<std::size_t>(h)];
    }
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, p);
    for (int h = 0; h < m.slices; ++h) {
        const Index nh = counts[static_cast<std::size_t>(h)];
        if (nh == 0) throw SlicingError("SIR slice " + std::to_string(h) + " is empty");
        const Eigen::RowVectorXd mean_h = slice_sum.row(h) / static_cast<double>(nh);
        v.noalias() += (static_cast<double>(nh) / static_cast<double>(n)) * (mean_h.transpose() * mean_h);
    }

    SortedEigen ve = eigen_descending(v);
    m.eigenvalues = ve.values;
    m.whitened_directions = ve.vectors.leftCols(opts.dim);
    m.directions = m.inv_sqrt_cov * m.whitened_directions;
    for (Index c = 0; c < m.directions.cols(); ++c) {
        Index arg = 0;
        m.directions.col(c).cwiseAbs().maxCoeff(&arg);
        if (m.directions(arg, c) < 0.0) {
            m.directions.col(c) *= -1.0;
            m.whitened_directions.col(c) *= -1.0;
        }
    }
    m.train_scores = sir_transform(m, d.x);
    return m;
}

Embedding sir_transform(const SirModel& m, const DataMatrix& x) {
    if (x.cols() != m.means.size()) throw DimensionError("SIR transform column count mismatch");
    return (x.rowwise() - m.means) * m.directions;
}

}  // namespace dimred
