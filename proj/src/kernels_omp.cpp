#include "dimred/kernels.hpp"

#include "dimred/errors.hpp"
#include "dimred/parallel.hpp"

#include <omp.h>

#include <cmath>

namespace dimred::kernels::omp {

NeighborList knn(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self) {
    detail::check_knn_args(ref, query, k, exclude_self);
    NeighborList out{query.rows(), k, std::vector<Index>(static_cast<std::size_t>(query.rows() * k)),
                     std::vector<double>(static_cast<std::size_t>(query.rows() * k))};
    const Index m = query.rows();
#pragma omp parallel num_threads(parallel::region_threads())
    {
        std::vector<std::pair<double, Index>> scratch;
        scratch.reserve(static_cast<std::size_t>(ref.rows()));
#pragma omp for schedule(static)
        for (Index i = 0; i < m; ++i)
            detail::knn_row(ref, query.row(i).data(), exclude_self ? i : -1, k,
                            &out.index[static_cast<std::size_t>(i * k)], &out.dist[static_cast<std::size_t>(i * k)],
                            scratch);
    }
    return out;
}

Eigen::MatrixXd sq_distances(const DataMatrix& a, const DataMatrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("column count mismatch");
    Eigen::MatrixXd d(a.rows(), b.rows());
#pragma omp parallel for schedule(static) num_threads(parallel::region_threads())
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.rows(); ++j) d(i, j) = detail::sq_distance(a.row(i).data(), b.row(j).data(), a.cols());
    return d;
}

Eigen::MatrixXd gram(const DataMatrix& a, const DataMatrix& b, const KernelSpec& spec) {
    if (a.cols() != b.cols()) throw DimensionError("column count mismatch");
    Eigen::MatrixXd k(a.rows(), b.rows());
#pragma omp parallel for schedule(static) num_threads(parallel::region_threads())
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.rows(); ++j) k(i, j) = detail::kernel_value(spec, a.row(i).data(), b.row(j).data(), a.cols());
    return k;
}

TsneStep tsne_gradient(const Eigen::MatrixXd& p, double exaggeration, const Embedding& y, Embedding& grad) {
    const Index n = y.rows(), d = y.cols();
    std::vector<double> row_w(static_cast<std::size_t>(n)), row_plogw(static_cast<std::size_t>(n)),
        row_plogp(static_cast<std::size_t>(n));
    const int threads = parallel::region_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Index i = 0; i < n; ++i) {
        double sw = 0.0, spw = 0.0, spp = 0.0;
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = 1.0 / (1.0 + detail::sq_distance(y.row(i).data(), y.row(j).data(), d));
            sw += w;
            const double pij = p(i, j);
            if (pij > 0.0) {
                spw += pij * std::log(w);
                spp += pij * std::log(pij);
            }
        }
        row_w[static_cast<std::size_t>(i)] = sw;
        row_plogw[static_cast<std::size_t>(i)] = spw;
        row_plogp[static_cast<std::size_t>(i)] = spp;
    }
    TsneStep step;
    double plogw = 0.0, plogp = 0.0;
    for (Index i = 0; i < n; ++i) {
        step.z += row_w[static_cast<std::size_t>(i)];
        plogw += row_plogw[static_cast<std::size_t>(i)];
        plogp += row_plogp[static_cast<std::size_t>(i)];
    }
    const double psum = p.sum() - p.diagonal().sum();
    step.kl = plogp - plogw + std::log(step.z) * psum;

    grad.setZero(n, d);
    const double inv_z = 1.0 / step.z;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = 1.0 / (1.0 + detail::sq_distance(y.row(i).data(), y.row(j).data(), d));
            const double mult = 4.0 * (exaggeration * p(i, j) - w * inv_z) * w;
            for (Index c = 0; c < d; ++c) grad(i, c) += mult * (y(i, c) - y(j, c));
        }
    }
    return step;
}

}  // namespace dimred::kernels::omp
