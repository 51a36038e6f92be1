#include "dimred/fuzzy_graph.hpp"

#include "dimred/errors.hpp"
#include "dimred/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dimred::umap {

NeighborList knn_search(const DataMatrix& x, int k) {
    if (k < 1 || k >= x.rows())
        throw ParameterError("n_neighbors must satisfy 1 <= k < n (k = " + std::to_string(k) +
                             ", n = " + std::to_string(x.rows()) + ")");
    return kernels::knn(x, x, k, true);
}

double membership(double d, double rho, double sigma) {
    const double excess = d - rho;
    return excess <= 0.0 ? 1.0 : std::exp(-excess / sigma);
}

namespace {

double smooth_knn_lhs(const NeighborList& nl, Index i, double rho, double sigma) {
    double s = 0.0;
    for (int t = 0; t < nl.k; ++t) s += membership(nl.distance(i, t), rho, sigma);
    return s;
}

void calibrate_row(const NeighborList& nl, Index i, double& rho, double& sigma) {
    rho = 0.0;
    for (int t = 0; t < nl.k; ++t) {
        const double d = nl.distance(i, t);
        if (d > 0.0) {
            rho = d;
            break;
        }
    }
    if (nl.k < 2) {
        sigma = 1.0;
        return;
    }
    const double target = std::log2(static_cast<double>(nl.k));
    double lo = std::log(kSigmaMin), hi = std::log(kSigmaMax);
    // lhs is non-decreasing in sigma; no root means one of the endpoints.
    if (smooth_knn_lhs(nl, i, rho, kSigmaMin) >= target) {
        sigma = kSigmaMin;
        return;
    }
    if (smooth_knn_lhs(nl, i, rho, kSigmaMax) <= target) {
        sigma = kSigmaMax;
        return;
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double r = smooth_knn_lhs(nl, i, rho, std::exp(mid)) - target;
        if (std::abs(r) <= 0.01 * kCalibrationTolerance) break;
        if (r > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    sigma = std::exp(mid);
}

}  // namespace

double calibration_residual(const NeighborList& nl, Index i, double rho, double sigma) {
    return smooth_knn_lhs(nl, i, rho, sigma) - std::log2(static_cast<double>(nl.k));
}

SmoothKnnParams calibrate(const NeighborList& nl) {
    SmoothKnnParams out{std::vector<double>(static_cast<std::size_t>(nl.n)),
                        std::vector<double>(static_cast<std::size_t>(nl.n))};
#pragma omp parallel for schedule(static) num_threads(parallel::region_threads())
    for (Index i = 0; i < nl.n; ++i)
        calibrate_row(nl, i, out.rho[static_cast<std::size_t>(i)], out.sigma[static_cast<std::size_t>(i)]);
    return out;
}

DirectedWeights edge_weights(const NeighborList& nl, const SmoothKnnParams& params) {
    DirectedWeights w{nl.n, nl.k, nl.index, std::vector<double>(nl.dist.size())};
    for (Index i = 0; i < nl.n; ++i)
        for (int t = 0; t < nl.k; ++t)
            w.at(i, t) = membership(nl.distance(i, t), params.rho[static_cast<std::size_t>(i)],
                                    params.sigma[static_cast<std::size_t>(i)]);
    return w;
}

FuzzyGraph symmetrize(const DirectedWeights& w, Supervision tag) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(w.weight.size());
    for (Index i = 0; i < w.n; ++i)
        for (int t = 0; t < w.k; ++t) {
            const Index j = w.target(i, t);
            if (j != i && w.at(i, t) > 0.0) triplets.emplace_back(i, j, w.at(i, t));
        }
    Eigen::SparseMatrix<double> directed(w.n, w.n);
    directed.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseMatrix<double> transposed = directed.transpose();
    Eigen::SparseMatrix<double> product = directed.cwiseProduct(transposed);
    FuzzyGraph g;
    g.weights = (directed + transposed) - product;
    g.weights.prune(0.0);
    g.weights.makeCompressed();
    g.supervision = tag;
    return g;
}

double label_penalty(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
    if (alpha == 1.0) return 0.0;
    return std::exp(-2.5 / (1.0 - alpha));
}

DirectedWeights supervise_categorical(DirectedWeights w, std::span<const int> labels, double alpha) {
    const double penalty = label_penalty(alpha);
    if (static_cast<Index>(labels.size()) != w.n) throw DimensionError("label count does not match graph size");
    for (Index i = 0; i < w.n; ++i)
        for (int t = 0; t < w.k; ++t)
            if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(w.target(i, t))])
                w.at(i, t) *= penalty;
    return w;
}

double combine_continuous(double w, double wy, double alpha) {
    if (alpha < 0.5) return w * std::pow(wy, alpha / (1.0 - alpha));
    return std::pow(w, (1.0 - alpha) / alpha) * wy;
}

DirectedWeights supervise_continuous(DirectedWeights w, const Eigen::VectorXd& y, int k, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("continuous supervision needs alpha in [0, 1)");
    if (y.size() != w.n) throw DimensionError("response length does not match graph size");
    if (!y.allFinite()) throw ParameterError("response contains non-finite values");
    DataMatrix ycol = y;
    const NeighborList ynl = kernels::knn(ycol, ycol, k, true);
    const SmoothKnnParams yp = calibrate(ynl);
    for (Index i = 0; i < w.n; ++i)
        for (int t = 0; t < w.k; ++t) {
            const double dy = std::abs(y[i] - y[w.target(i, t)]);
            const double wy = membership(dy, yp.rho[static_cast<std::size_t>(i)], yp.sigma[static_cast<std::size_t>(i)]);
            w.at(i, t) = combine_continuous(w.at(i, t), wy, alpha);
        }
    return w;
}

DirectedWeights supervise_sliced(DirectedWeights w, const Eigen::VectorXd& y, int slices, double alpha) {
    const std::vector<int> labels = slice_response(y, slices);
    return supervise_categorical(std::move(w), labels, alpha);
}

GraphBuild build_graph(const DataMatrix& x, const Response* y, const GraphOptions& opts) {
    GraphBuild b;
    b.neighbors = knn_search(x, opts.n_neighbors);
    b.params = calibrate(b.neighbors);
    b.directed = edge_weights(b.neighbors, b.params);
    if (opts.supervision != Supervision::None) {
        if (!y) throw ParameterError("supervised graph requested without a response");
        if (y->size() != x.rows()) throw DimensionError("response length does not match sample count");
    }
    switch (opts.supervision) {
        case Supervision::None:
            break;
        case Supervision::Categorical: {
            // Continuous responses are treated as one class per unique value.
            std::vector<int> labels;
            if (y->is_categorical()) {
                labels = y->labels();
            } else {
                std::vector<std::pair<double, Index>> order;
                for (Index i = 0; i < y->size(); ++i) order.emplace_back(y->values[i], i);
                std::sort(order.begin(), order.end());
                labels.assign(static_cast<std::size_t>(y->size()), 0);
                int code = -1;
                for (std::size_t r = 0; r < order.size(); ++r) {
                    if (r == 0 || order[r].first != order[r - 1].first) ++code;
                    labels[static_cast<std::size_t>(order[r].second)] = code;
                }
            }
            b.directed = supervise_categorical(std::move(b.directed), labels, opts.alpha);
            break;
        }
        case Supervision::Continuous:
            if (y->is_categorical()) throw ParameterError("continuous supervision needs a continuous response");
            b.directed = supervise_continuous(std::move(b.directed), y->values, opts.n_neighbors, opts.alpha);
            break;
        case Supervision::Sliced:
            if (y->is_categorical()) throw ParameterError("sliced supervision needs a continuous response");
            b.directed = supervise_sliced(std::move(b.directed), y->values, opts.slices, opts.alpha);
            break;
    }
    b.graph = symmetrize(b.directed, opts.supervision);
    return b;
}

}  // namespace dimred::umap
