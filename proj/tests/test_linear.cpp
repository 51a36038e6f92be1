#include "dimred/errors.hpp"
#include "dimred/linear.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

using namespace dimred;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Dataset single_index(Index n, Index p, const Eigen::VectorXd& beta, double noise, std::uint64_t seed) {
    Dataset d;
    d.x = oracle::random_matrix(n, p, seed);
    const Eigen::VectorXd eps = oracle::random_matrix(n, 1, seed + 1, noise).col(0);
    d.y = Response::continuous(d.x * beta + eps);
    return d;
}

}  // namespace

TEST_CASE("PCA on a diagonal line") {
    DataMatrix x(5, 2);
    for (int i = 0; i < 5; ++i) x.row(i) << i, i;
    const PcaModel m = pca_fit(x, 1);
    CHECK(m.loadings(0, 0) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(m.loadings(1, 0) == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("PCA on an isotropic cloud") {
    const PcaModel m = pca_fit(oracle::random_matrix(10000, 2, 3), 2);
    CHECK(std::abs(m.eigenvalues[0] - m.eigenvalues[1]) / m.eigenvalues[0] < 0.05);
}

TEST_CASE("PCA matches a dense eigendecomposition oracle") {
    const DataMatrix x = oracle::random_matrix(8, 3, 4);
    const PcaModel m = pca_fit(x, 3);
    const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = xc.transpose() * xc / 8.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const Eigen::MatrixXd v = es.eigenvectors().rowwise().reverse();
    CHECK(oracle::equal_up_to_sign(pca_transform(m, x), xc * v, 1e-8));
    for (int j = 0; j < 3; ++j) CHECK(m.eigenvalues[j] == doctest::Approx(es.eigenvalues()[2 - j]).epsilon(1e-10));
    CHECK((m.loadings.transpose() * m.loadings - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("PCA projection identities") {
    const DataMatrix x = oracle::random_matrix(40, 4, 5, 2.0);
    const PcaModel full = pca_fit(x, 4);
    CHECK(pca_transform(full, full.means).norm() < 1e-12);
    const Embedding z = pca_transform(full, x);
    const DataMatrix xc = x.rowwise() - full.means;
    for (Index i = 0; i < 40; ++i) CHECK(z.row(i).norm() == doctest::Approx(xc.row(i).norm()).epsilon(1e-12));
    const Eigen::MatrixXd zc = Eigen::MatrixXd(z).rowwise() - z.colwise().mean();
    const Eigen::MatrixXd cz = zc.transpose() * zc / 40.0;
    for (int j = 0; j < 4; ++j) CHECK(std::abs(cz(j, j) - full.eigenvalues[j]) < 1e-8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(std::abs(cz(i, j)) < 1e-8);
    const double trace = (xc.transpose() * xc / 40.0).trace();
    CHECK(full.eigenvalues.sum() == doctest::Approx(trace).epsilon(1e-12));
    CHECK(pca_fit(x, 2).eigenvalues.sum() <= trace);
    for (Index c = 0; c < 4; ++c) {
        Index arg = 0;
        full.loadings.col(c).cwiseAbs().maxCoeff(&arg);
        CHECK(full.loadings(arg, c) > 0);
    }
    CHECK_THROWS_AS(pca_fit(x, 0), ParameterError);
    CHECK_THROWS_AS(pca_fit(x, 5), ParameterError);
    CHECK_THROWS_AS(pca_transform(full, DataMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("SIR recovers a single index") {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(10);
    beta.head(3) << 1, -2, 0.5;
    const Dataset d = single_index(2000, 10, beta, 0.5, 7);
    const SirModel m = sir_fit(d, {10, 1, 1e-3});
    CHECK(oracle::max_principal_angle(m.directions, beta) < 5 * kDeg);
}

TEST_CASE("two-slice SIR is discriminant analysis") {
    const Index n = 4000, p = 4;
    DataMatrix x = oracle::random_matrix(n, p, 8);
    Eigen::MatrixXd mix(p, p);
    mix << 1, 0.3, 0, 0, 0, 1, 0.4, 0, 0, 0, 1, 0.2, 0.1, 0, 0, 1;
    x = (x * mix).eval();
    std::vector<int> labels(static_cast<std::size_t>(n));
    Eigen::RowVectorXd shift(p);
    shift << 1.0, -0.5, 0.25, 0.0;
    for (Index i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(i % 2);
        if (i % 2) x.row(i) += shift;
    }
    const SirModel m = sir_fit(Dataset{x, Response::categorical(labels)}, {10, 1, 1e-3});
    CHECK(m.slices == 2);

    Eigen::RowVectorXd m0 = Eigen::RowVectorXd::Zero(p), m1 = m0;
    for (Index i = 0; i < n; ++i) (i % 2 ? m1 : m0) += x.row(i);
    m0 /= n / 2.0;
    m1 /= n / 2.0;
    Eigen::MatrixXd within = Eigen::MatrixXd::Zero(p, p);
    for (Index i = 0; i < n; ++i) {
        const Eigen::RowVectorXd r = x.row(i) - (i % 2 ? m1 : m0);
        within += r.transpose() * r;
    }
    within /= n;
    const Eigen::VectorXd lda = within.ldlt().solve((m1 - m0).transpose());
    CHECK(oracle::max_principal_angle(m.directions, lda) < 5 * kDeg);
}

TEST_CASE("SIR on pure noise stays near the permutation null") {
    Dataset d;
    d.x = oracle::random_matrix(300, 5, 9);
    d.y = Response::continuous(oracle::random_matrix(300, 1, 10).col(0));
    const double observed = sir_fit(d, {10, 1, 1e-3}).eigenvalues[0];
    std::vector<double> null;
    std::mt19937_64 g(11);
    for (int r = 0; r < 40; ++r) {
        Eigen::VectorXd y = d.y.values;
        std::shuffle(y.data(), y.data() + y.size(), g);
        null.push_back(sir_fit(Dataset{d.x, Response::continuous(y)}, {10, 1, 1e-3}).eigenvalues[0]);
    }
    std::sort(null.begin(), null.end());
    CHECK(observed < 3 * null[static_cast<std::size_t>(0.95 * null.size())]);
}

TEST_CASE("SIR transform identities") {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(6);
    beta.head(2) << 1, 1;
    const Dataset d = single_index(200, 6, beta, 0.3, 12);
    const SirModel m = sir_fit(d, {8, 2, 1e-3});
    CHECK(sir_transform(m, m.means).norm() < 1e-12);
    CHECK(sir_transform(m, d.x) == m.train_scores);
    CHECK((m.whitened_directions.transpose() * m.whitened_directions - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-10);

    Dataset shifted = d;
    Eigen::RowVectorXd c(6);
    c << 3, -1, 2, 0.5, 7, -4;
    shifted.x = d.x.rowwise() + c;
    const SirModel ms = sir_fit(shifted, {8, 2, 1e-3});
    CHECK((sir_transform(ms, shifted.x) - m.train_scores).cwiseAbs().maxCoeff() < 1e-6);
    CHECK_THROWS_AS(sir_transform(m, DataMatrix::Zero(2, 5)), DimensionError);
}

TEST_CASE("SIR has at most H - 1 nonzero eigenvalues") {
    Eigen::VectorXd beta = Eigen::VectorXd::Ones(6);
    const Dataset d = single_index(40, 6, beta, 0.2, 13);
    const SirModel m = sir_fit(d, {3, 1, 1e-3});
    for (Index j = 2; j < m.eigenvalues.size(); ++j) CHECK(std::abs(m.eigenvalues[j]) < 1e-8);
}

TEST_CASE("SIR on pre-sliced labels equals SIR on the continuous response") {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(5);
    beta[0] = 1;
    const Dataset d = single_index(120, 5, beta, 0.4, 14);
    const SirModel a = sir_fit(d, {6, 2, 1e-3});
    const SirModel b = sir_fit(Dataset{d.x, Response::categorical(slice_response(d.y.values, 6))}, {6, 2, 1e-3});
    CHECK(a.directions == b.directions);
    CHECK(a.train_scores == b.train_scores);
}

TEST_CASE("SIR argument checks") {
    Eigen::VectorXd beta = Eigen::VectorXd::Ones(3);
    const Dataset d = single_index(50, 3, beta, 0.1, 15);
    CHECK_THROWS_AS(sir_fit(d, {4, 4, 1e-3}), ParameterError);
    CHECK_THROWS_AS(sir_fit(Dataset{d.x, Response::continuous(Eigen::VectorXd::Constant(50, 2.0))}, {4, 1, 1e-3}),
                    SlicingError);
}

TEST_CASE("SIR stays finite when p exceeds n") {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(80);
    beta.head(4).setOnes();
    const Dataset d = single_index(40, 80, beta, 0.5, 16);
    const SirModel m = sir_fit(d, {5, 2, 1e-3});
    CHECK(m.train_scores.allFinite());
    CHECK(m.ridge > 0);
}
