#include "dimred/errors.hpp"
#include "dimred/kernels.hpp"
#include "dimred/tsne.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dimred;

namespace {

DataMatrix equilateral() {
    DataMatrix x(3, 2);
    x << 0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2;
    return x;
}

// Two Gaussian blobs in 5-D, centers 10 apart; label = row parity.
std::pair<DataMatrix, std::vector<int>> blobs(Index n, std::uint64_t seed) {
    DataMatrix x = oracle::random_matrix(n, 5, seed);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(i % 2);
        if (i % 2) x(i, 0) += 10.0;
    }
    return {x, labels};
}

tsne::TsneConfig small_config(int epochs, std::uint64_t seed) {
    tsne::TsneConfig c;
    c.perplexity = 10;
    c.epochs = epochs;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("affinities on an equilateral triangle") {
    const tsne::AffinityMatrix a = tsne::affinities(equilateral(), 2.5);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) CHECK(a.p(i, j) == doctest::Approx(i == j ? 0.0 : 1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("affinity rows hit the perplexity target") {
    const DataMatrix x = oracle::random_matrix(50, 4, 1);
    std::vector<double> sigma;
    int unconverged = 0;
    const Eigen::MatrixXd cond = tsne::conditional_affinities(x, 10.0, sigma, unconverged);
    CHECK(unconverged == 0);
    for (Index i = 0; i < 50; ++i) {
        CHECK(cond(i, i) == 0.0);
        CHECK(cond.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(oracle::entropy_bits(cond.row(i)) - std::log2(10.0)) < 1e-3);
    }
    const tsne::AffinityMatrix a = tsne::affinities(x, 10.0);
    CHECK(a.p == a.p.transpose());
    CHECK(std::abs(a.p.sum() - 1.0) < 1e-8);
    CHECK(a.p.minCoeff() >= 0.0);
    CHECK_THROWS_AS(tsne::affinities(x, 2.0), ParameterError);
    CHECK_THROWS_AS(tsne::affinities(x, 50.0), ParameterError);
}

TEST_CASE("KL divergence and its gradient") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Index n = 4 + static_cast<Index>(s % 5);
        const Eigen::MatrixXd p = tsne::affinities(oracle::random_matrix(n, 3, 10 + s), 2.5).p;
        const Embedding y = oracle::random_matrix(n, 2, 20 + s);
        const double kl = tsne::kl_divergence(p, y);
        CHECK(kl >= 0.0);
        CHECK(kl == doctest::Approx(oracle::tsne_kl(p, y)).epsilon(1e-10));

        Embedding grad(n, 2);
        const TsneStep step = kernels::tsne_gradient(p, 1.0, y, grad);
        CHECK(step.kl == doctest::Approx(kl).epsilon(1e-10));
        const auto f = [&](const Eigen::VectorXd& v) {
            return tsne::kl_divergence(p, Eigen::Map<const Embedding>(v.data(), n, 2));
        };
        const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
        const Eigen::VectorXd analytic = Eigen::Map<const Eigen::VectorXd>(grad.data(), grad.size());
        CHECK(oracle::relative_error(analytic, oracle::finite_gradient(f, flat)) < 1e-4);
    }
}

TEST_CASE("Student-t similarities normalize") {
    const Embedding y = oracle::random_matrix(12, 2, 2);
    Eigen::MatrixXd q(12, 12);
    double z = 0;
    for (Index i = 0; i < 12; ++i)
        for (Index j = 0; j < 12; ++j) z += (q(i, j) = i == j ? 0.0 : 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm()));
    q /= z;
    CHECK(std::abs(q.sum() - 1.0) < 1e-8);
    Embedding grad(12, 2);
    const Eigen::MatrixXd p = tsne::affinities(oracle::random_matrix(12, 3, 3), 4.0).p;
    CHECK(kernels::tsne_gradient(p, 1.0, y, grad).z == doctest::Approx(z).epsilon(1e-12));
    // KL vanishes exactly when P equals Q.
    CHECK(std::abs(tsne::kl_divergence(q, y)) < 1e-12);
}

TEST_CASE("t-SNE reaches zero KL on the equilateral fixture") {
    tsne::TsneConfig cfg;
    cfg.perplexity = 2.5;
    cfg.epochs = 1000;
    const tsne::TsneModel m = tsne::fit(equilateral(), cfg);
    CHECK(m.embedding.allFinite());
    CHECK(tsne::kl_divergence(tsne::affinities(equilateral(), 2.5).p, m.embedding) < 1e-3);
}

TEST_CASE("KL decreases window by window after exaggeration") {
    const int epochs = 500, window = 50;
    std::vector<double> mean_trace(static_cast<std::size_t>(epochs), 0.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const tsne::TsneModel m = tsne::fit(oracle::random_matrix(60, 4, 40 + s), small_config(epochs, s));
        REQUIRE(m.kl_trace.size() == mean_trace.size());
        for (std::size_t e = 0; e < mean_trace.size(); ++e) mean_trace[e] += m.kl_trace[e] / 5;
    }
    double previous = INFINITY;
    for (int start = window; start < epochs; start += window) {
        double w = 0;
        for (int e = start; e < start + window; ++e) w += mean_trace[static_cast<std::size_t>(e)] / window;
        CHECK(w <= previous);
        previous = w;
    }
}

TEST_CASE("t-SNE keeps separated blobs apart") {
    const auto [x, labels] = blobs(100, 5);
    const tsne::TsneModel m = tsne::fit(x, small_config(1000, 7));
    const NeighborList nl = kernels::knn(m.embedding, m.embedding, 1, true);
    int agree = 0;
    for (Index i = 0; i < 100; ++i) agree += labels[static_cast<std::size_t>(nl.neighbor(i, 0))] == labels[static_cast<std::size_t>(i)];
    CHECK(agree >= 98);

    const auto [held, held_labels] = blobs(100, 6);
    const Embedding z = tsne::transform(m, held);
    Eigen::RowVectorXd c[2] = {Eigen::RowVectorXd::Zero(2), Eigen::RowVectorXd::Zero(2)};
    for (Index i = 0; i < 100; ++i) c[labels[static_cast<std::size_t>(i)]] += m.embedding.row(i) / 50.0;
    int own = 0;
    for (Index i = 0; i < 100; ++i) {
        const int l = held_labels[static_cast<std::size_t>(i)];
        own += (z.row(i) - c[l]).norm() < (z.row(i) - c[1 - l]).norm();
    }
    CHECK(own >= 95);
}

TEST_CASE("t-SNE transform placement rules") {
    const DataMatrix x = oracle::random_matrix(40, 3, 8);
    const tsne::TsneModel m = tsne::fit(x, small_config(300, 1));
    CHECK((tsne::transform(m, x.row(11)) - m.embedding.row(11)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK_THROWS_AS(tsne::transform(m, DataMatrix::Zero(1, 2)), DimensionError);

    tsne::TsneModel pair;
    pair.train_x.resize(2, 1);
    pair.train_x << -1, 1;
    pair.sigma = {0.8, 0.8};
    pair.embedding.resize(2, 2);
    pair.embedding << 0, 0, 4, 2;
    const Embedding mid = tsne::transform(pair, DataMatrix::Zero(1, 1));
    CHECK(mid(0, 0) == doctest::Approx(2.0));
    CHECK(mid(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("t-SNE is deterministic under a seed") {
    const DataMatrix x = oracle::random_matrix(30, 3, 9);
    CHECK(tsne::fit(x, small_config(200, 3)).embedding == tsne::fit(x, small_config(200, 3)).embedding);
}
