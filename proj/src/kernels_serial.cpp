#include "dimred/kernels.hpp"

#include "dimred/errors.hpp"
#include "dimred/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace dimred::kernels {

namespace detail {

double sq_distance(const double* a, const double* b, Index p) {
    double s = 0.0;
    for (Index j = 0; j < p; ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

double kernel_value(const KernelSpec& spec, const double* a, const double* b, Index p) {
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return std::exp(-spec.gamma * sq_distance(a, b, p));
        case KernelFamily::Polynomial: {
            double dot = 0.0;
            for (Index j = 0; j < p; ++j) dot += a[j] * b[j];
            return std::pow(spec.gamma * dot + spec.coef0, spec.degree);
        }
        case KernelFamily::Linear: {
            double dot = 0.0;
            for (Index j = 0; j < p; ++j) dot += a[j] * b[j];
            return dot;
        }
    }
    return 0.0;
}

void check_knn_args(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self) {
    if (ref.cols() != query.cols()) throw DimensionError("kNN query and reference column counts differ");
    const Index available = exclude_self ? ref.rows() - 1 : ref.rows();
    if (k < 1 || k > available)
        throw ParameterError("kNN needs 1 <= k <= " + std::to_string(available) + ", got " + std::to_string(k));
    if (exclude_self && ref.rows() != query.rows())
        throw DimensionError("self-excluding kNN requires query == reference");
}

void knn_row(const DataMatrix& ref, const double* q, Index self, int k, Index* out_idx, double* out_dist,
             std::vector<std::pair<double, Index>>& scratch) {
    const Index p = ref.cols();
    scratch.clear();
    for (Index j = 0; j < ref.rows(); ++j) {
        if (j == self) continue;
        scratch.emplace_back(sq_distance(q, ref.row(j).data(), p), j);
    }
    std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end());
    for (int t = 0; t < k; ++t) {
        out_dist[t] = std::sqrt(scratch[static_cast<std::size_t>(t)].first);
        out_idx[t] = scratch[static_cast<std::size_t>(t)].second;
    }
}

}  // namespace detail

namespace serial {

NeighborList knn(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self) {
    detail::check_knn_args(ref, query, k, exclude_self);
    NeighborList out{query.rows(), k, std::vector<Index>(static_cast<std::size_t>(query.rows() * k)),
                     std::vector<double>(static_cast<std::size_t>(query.rows() * k))};
    std::vector<std::pair<double, Index>> scratch;
    scratch.reserve(static_cast<std::size_t>(ref.rows()));
    for (Index i = 0; i < query.rows(); ++i)
        detail::knn_row(ref, query.row(i).data(), exclude_self ? i : -1, k, &out.index[static_cast<std::size_t>(i * k)],
                        &out.dist[static_cast<std::size_t>(i * k)], scratch);
    return out;
}

Eigen::MatrixXd sq_distances(const DataMatrix& a, const DataMatrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("column count mismatch");
    Eigen::MatrixXd d(a.rows(), b.rows());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.rows(); ++j) d(i, j) = detail::sq_distance(a.row(i).data(), b.row(j).data(), a.cols());
    return d;
}

Eigen::MatrixXd gram(const DataMatrix& a, const DataMatrix& b, const KernelSpec& spec) {
    if (a.cols() != b.cols()) throw DimensionError("column count mismatch");
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.rows(); ++j) k(i, j) = detail::kernel_value(spec, a.row(i).data(), b.row(j).data(), a.cols());
    return k;
}

TsneStep tsne_gradient(const Eigen::MatrixXd& p, double exaggeration, const Embedding& y, Embedding& grad) {
    const Index n = y.rows(), d = y.cols();
    std::vector<double> row_w(static_cast<std::size_t>(n)), row_plogw(static_cast<std::size_t>(n)),
        row_plogp(static_cast<std::size_t>(n));
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
    double plogw = 0.0, plogp = 0.0, psum = 0.0;
    for (Index i = 0; i < n; ++i) {
        step.z += row_w[static_cast<std::size_t>(i)];
        plogw += row_plogw[static_cast<std::size_t>(i)];
        plogp += row_plogp[static_cast<std::size_t>(i)];
    }
    psum = p.sum() - p.diagonal().sum();
    step.kl = plogp - plogw + std::log(step.z) * psum;

    grad.setZero(n, d);
    const double inv_z = 1.0 / step.z;
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

}  // namespace serial

namespace {
bool use_parallel() { return parallel::region_threads() > 1; }
}  // namespace

NeighborList knn(const DataMatrix& ref, const DataMatrix& query, int k, bool exclude_self) {
    return use_parallel() ? omp::knn(ref, query, k, exclude_self) : serial::knn(ref, query, k, exclude_self);
}

Eigen::MatrixXd sq_distances(const DataMatrix& a, const DataMatrix& b) {
    return use_parallel() ? omp::sq_distances(a, b) : serial::sq_distances(a, b);
}

Eigen::MatrixXd gram(const DataMatrix& a, const DataMatrix& b, const KernelSpec& spec) {
    return use_parallel() ? omp::gram(a, b, spec) : serial::gram(a, b, spec);
}

TsneStep tsne_gradient(const Eigen::MatrixXd& p, double exaggeration, const Embedding& y, Embedding& grad) {
    return use_parallel() ? omp::tsne_gradient(p, exaggeration, y, grad) : serial::tsne_gradient(p, exaggeration, y, grad);
}

}  // namespace dimred::kernels
