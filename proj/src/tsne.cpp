#include "dimred/tsne.hpp"

#include "dimred/errors.hpp"
#include "dimred/kernels.hpp"
#include "dimred/parallel.hpp"
#include "dimred/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dimred::tsne {

namespace {

// Fills row i of p_{j|i} for precision beta; returns entropy in bits.
double conditional_row(const Eigen::MatrixXd& d2, Index i, double beta, double shift, Eigen::Ref<Eigen::VectorXd> row) {
    const Index n = d2.rows();
    double sum = 0.0;
    for (Index j = 0; j < n; ++j) {
        row[j] = j == i ? 0.0 : std::exp(-beta * (d2(j, i) - shift));
        sum += row[j];
    }
    double entropy_nats = 0.0;
    for (Index j = 0; j < n; ++j) {
        row[j] /= sum;
        if (row[j] > 0.0) entropy_nats -= row[j] * std::log(row[j]);
    }
    return entropy_nats / std::numbers::ln2;
}

}  // namespace

Eigen::MatrixXd conditional_affinities(const DataMatrix& x, double perplexity, std::vector<double>& sigma,
                                       int& unconverged) {
    const Index n = x.rows();
    const Eigen::MatrixXd d2 = kernels::sq_distances(x, x);
    // Column i holds p_{.|i}; transposed at the end.
    Eigen::MatrixXd cond(n, n);
    sigma.assign(static_cast<std::size_t>(n), 1.0);
    const double target = std::log2(perplexity);
    int failed = 0;

#pragma omp parallel for schedule(static) reduction(+ : failed) num_threads(parallel::region_threads())
    for (Index i = 0; i < n; ++i) {
        double shift = std::numeric_limits<double>::infinity(), mean = 0.0;
        for (Index j = 0; j < n; ++j)
            if (j != i) {
                shift = std::min(shift, d2(j, i));
                mean += d2(j, i);
            }
        mean /= static_cast<double>(n - 1);
        const double scale = mean > 0.0 ? mean : 1.0;
        // Bisection on log(beta * scale); entropy decreases in beta.
        double lo = -40.0, hi = 40.0, log_beta = 0.0;
        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            log_beta = 0.5 * (lo + hi);
            const double h = conditional_row(d2, i, std::exp(log_beta) / scale, shift, cond.col(i));
            if (std::abs(std::exp2(h) - perplexity) <= 1e-4) {
                ok = true;
                break;
            }
            if (h > target)
                lo = log_beta;
            else
                hi = log_beta;
        }
        if (!ok) ++failed;
        const double beta = std::exp(log_beta) / scale;
        sigma[static_cast<std::size_t>(i)] = std::sqrt(1.0 / (2.0 * beta));
    }
    unconverged = failed;
    return cond.transpose();
}

AffinityMatrix affinities(const DataMatrix& x, double perplexity) {
    validate(x);
    const Index n = x.rows();
    if (!(perplexity > 2.0 && perplexity < static_cast<double>(n)))
        throw ParameterError("perplexity must satisfy 2 < perplexity < n (n = " + std::to_string(n) + ")");
    AffinityMatrix a;
    a.perplexity = perplexity;
    const Eigen::MatrixXd cond = conditional_affinities(x, perplexity, a.sigma, a.unconverged);
    a.p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
    return a;
}

double kl_divergence(const Eigen::MatrixXd& p, const Embedding& y) {
    Embedding grad;
    return kernels::tsne_gradient(p, 1.0, y, grad).kl;
}

Embedding optimize(const Eigen::MatrixXd& p, Embedding y, const TsneConfig& cfg, std::vector<double>* kl_trace) {
    const Index n = y.rows(), d = y.cols();
    Embedding grad(n, d), update = Embedding::Zero(n, d), gains = Embedding::Ones(n, d);
    if (kl_trace) kl_trace->clear();
    const double rate = cfg.learning_rate > 0.0
                            ? cfg.learning_rate
                            : std::max(static_cast<double>(n) / (4.0 * std::max(cfg.exaggeration, 1.0)), 50.0);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double exaggeration = epoch < cfg.exaggeration_epochs ? cfg.exaggeration : 1.0;
        const double momentum = epoch < cfg.momentum_switch ? cfg.momentum_initial : cfg.momentum_final;
        const TsneStep step = kernels::tsne_gradient(p, exaggeration, y, grad);
        if (!std::isfinite(step.kl) || !grad.allFinite()) throw OptimizerError("non-finite t-SNE loss", epoch);
        if (kl_trace) kl_trace->push_back(step.kl);
        for (Index i = 0; i < n; ++i)
            for (Index c = 0; c < d; ++c) {
                double& g = gains(i, c);
                g = (grad(i, c) > 0.0) != (update(i, c) > 0.0) ? g + 0.2 : g * 0.8;
                g = std::max(g, 0.01);
                update(i, c) = momentum * update(i, c) - rate * g * grad(i, c);
            }
        y += update;
        y.rowwise() -= y.colwise().mean();
    }
    if (!y.allFinite()) throw OptimizerError("non-finite t-SNE coordinate", cfg.epochs);
    return y;
}

TsneModel fit(const DataMatrix& x, const TsneConfig& cfg) {
    if (cfg.dim < 1) throw ParameterError("t-SNE dimension must be >= 1");
    TsneModel m;
    m.config = cfg;
    m.train_x = x;
    AffinityMatrix a = affinities(x, cfg.perplexity);
    m.sigma = a.sigma;
    if (a.unconverged > 0)
        m.warnings.push_back(std::to_string(a.unconverged) + " affinity rows did not reach the perplexity tolerance");

    Rng rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, cfg.init_scale);
    Embedding init(x.rows(), cfg.dim);
    for (Index i = 0; i < init.rows(); ++i)
        for (int c = 0; c < cfg.dim; ++c) init(i, c) = normal(rng);
    m.embedding = optimize(a.p, std::move(init), cfg, &m.kl_trace);
    return m;
}

Embedding transform(const TsneModel& m, const DataMatrix& x_new) {
    if (x_new.cols() != m.train_x.cols()) throw DimensionError("t-SNE transform column count mismatch");
    const int k = std::min<int>(m.config.transform_neighbors, static_cast<int>(m.train_x.rows()));
    const NeighborList nl = kernels::knn(m.train_x, x_new, k, false);
    Embedding out(x_new.rows(), m.embedding.cols());
    for (Index i = 0; i < x_new.rows(); ++i) {
        double sigma_bar = 0.0;
        for (int t = 0; t < k; ++t) sigma_bar += m.sigma[static_cast<std::size_t>(nl.neighbor(i, t))];
        sigma_bar /= k;
        const bool exact = nl.distance(i, 0) == 0.0;
        std::vector<double> logw(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t) {
            const double dist = nl.distance(i, t);
            logw[static_cast<std::size_t>(t)] = exact ? (dist == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity())
                                                      : -dist * dist / (2.0 * sigma_bar * sigma_bar);
        }
        const double top = *std::max_element(logw.begin(), logw.end());
        double wsum = 0.0;
        Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(m.embedding.cols());
        for (int t = 0; t < k; ++t) {
            const double w = std::exp(logw[static_cast<std::size_t>(t)] - top);
            wsum += w;
            z += w * m.embedding.row(nl.neighbor(i, t));
        }
        out.row(i) = z / wsum;
    }
    return out;
}

}  // namespace dimred::tsne
