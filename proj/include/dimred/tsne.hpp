#pragma once

#include "dimred/data.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dimred::tsne {

struct AffinityMatrix {
    Eigen::MatrixXd p;          ///< symmetric joint affinities, zero diagonal, sums to 1
    std::vector<double> sigma;  ///< per-point Gaussian bandwidth
    double perplexity = 30.0;
    int unconverged = 0;        ///< rows whose bisection hit the iteration cap
};

/// Row-conditional Gaussian affinities p_{j|i}, each row calibrated so that
/// 2^entropy matches `perplexity` to within 1e-4.
Eigen::MatrixXd conditional_affinities(const DataMatrix& x, double perplexity, std::vector<double>& sigma,
                                       int& unconverged);

/// (p_{j|i} + p_{i|j}) / 2n. Requires 2 < perplexity < n.
AffinityMatrix affinities(const DataMatrix& x, double perplexity);

struct TsneConfig {
    double perplexity = 30.0;
    int dim = 2;
    int epochs = 1000;
    double learning_rate = 0.0;  ///< <= 0: max(n / (4 * exaggeration), 50)
    double exaggeration = 12.0;
    int exaggeration_epochs = 50;
    double momentum_initial = 0.5;
    double momentum_final = 0.8;
    int momentum_switch = 250;
    double init_scale = 1e-4;
    int transform_neighbors = 15;
    std::uint64_t seed = 42;
};

/// KL(P || Q) with Student-t Q over all ordered pairs i != j.
double kl_divergence(const Eigen::MatrixXd& p, const Embedding& y);

/// Exact O(n^2) gradient descent with momentum, per-coordinate gains and
/// early exaggeration. `kl_trace`, if given, receives the un-exaggerated KL
/// before each update.
Embedding optimize(const Eigen::MatrixXd& p, Embedding init, const TsneConfig& cfg,
                   std::vector<double>* kl_trace = nullptr);

struct TsneModel {
    TsneConfig config;
    DataMatrix train_x;
    std::vector<double> sigma;
    Embedding embedding;
    std::vector<double> kl_trace;
    std::vector<std::string> warnings;
};

TsneModel fit(const DataMatrix& x, const TsneConfig& cfg);

/// Places each new point at the Gaussian-weighted barycenter of its nearest
/// training embeddings; training coordinates are not changed.
Embedding transform(const TsneModel& m, const DataMatrix& x_new);

}  // namespace dimred::tsne
