// Serial reference vs OpenMP kernels, and both against brute-force oracles.

#include "dimred/errors.hpp"
#include "dimred/kernels.hpp"
#include "dimred/parallel.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace dimred;

TEST_CASE("knn matches an exhaustive scan") {
    const DataMatrix x = oracle::random_matrix(50, 5, 1);
    const NeighborList nl = kernels::knn(x, x, 10, true);
    for (Index i = 0; i < 50; ++i) {
        const auto all = oracle::brute_neighbors(x, x.row(i), i);
        for (int t = 0; t < 10; ++t) {
            CHECK(nl.neighbor(i, t) == all[static_cast<std::size_t>(t)].second);
            CHECK(nl.distance(i, t) == doctest::Approx(all[static_cast<std::size_t>(t)].first).epsilon(1e-12));
        }
    }
}

TEST_CASE("knn ties go to the lower index, self kept when not excluded") {
    DataMatrix x(4, 1);
    x << 0, 1, -1, 0;
    const NeighborList with_self = kernels::knn(x, x, 2, false);
    CHECK(with_self.neighbor(0, 0) == 0);
    CHECK(with_self.neighbor(0, 1) == 3);
    const NeighborList no_self = kernels::knn(x, x, 3, true);
    CHECK(no_self.neighbor(0, 0) == 3);
    CHECK(no_self.neighbor(0, 1) == 1);  // |1| == |-1|, index 1 < 2
    CHECK(no_self.neighbor(0, 2) == 2);
    CHECK(no_self.distance(0, 0) == 0.0);
}

TEST_CASE("knn argument checks") {
    const DataMatrix x = oracle::random_matrix(5, 2, 2);
    CHECK_THROWS_AS(kernels::knn(x, x, 5, true), ParameterError);
    CHECK_THROWS_AS(kernels::knn(x, x, 0, false), ParameterError);
    CHECK_THROWS_AS(kernels::knn(x, oracle::random_matrix(3, 3, 1), 2, false), DimensionError);
}

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
    parallel::set_max_threads(4);
    const DataMatrix a = oracle::random_matrix(97, 7, 3);
    const DataMatrix b = oracle::random_matrix(31, 7, 4);

    const NeighborList s = kernels::serial::knn(a, b, 6, false), o = kernels::omp::knn(a, b, 6, false);
    CHECK(s.index == o.index);
    CHECK(s.dist == o.dist);
    const NeighborList s2 = kernels::serial::knn(a, a, 6, true), o2 = kernels::omp::knn(a, a, 6, true);
    CHECK(s2.index == o2.index);
    CHECK(s2.dist == o2.dist);

    CHECK(kernels::serial::sq_distances(a, b) == kernels::omp::sq_distances(a, b));
    for (KernelFamily f : {KernelFamily::Gaussian, KernelFamily::Polynomial, KernelFamily::Linear}) {
        const KernelSpec spec{f, 0.3, 3, 0.5};
        CHECK(kernels::serial::gram(a, b, spec) == kernels::omp::gram(a, b, spec));
    }

    Eigen::MatrixXd p = Eigen::MatrixXd::Random(60, 60).cwiseAbs();
    p = (p + p.transpose()).eval();
    p.diagonal().setZero();
    p /= p.sum();
    const DataMatrix y = oracle::random_matrix(60, 2, 5);
    Embedding gs(60, 2), go(60, 2);
    const TsneStep ss = kernels::serial::tsne_gradient(p, 4.0, y, gs);
    const TsneStep so = kernels::omp::tsne_gradient(p, 4.0, y, go);
    CHECK(gs == go);
    CHECK(ss.kl == so.kl);
    CHECK(ss.z == so.z);
    parallel::set_max_threads(0);
}

TEST_CASE("gram entries follow the kernel formulas") {
    const DataMatrix a = oracle::random_matrix(4, 3, 6);
    const DataMatrix b = oracle::random_matrix(5, 3, 7);
    const Eigen::MatrixXd g = kernels::gram(a, b, {KernelFamily::Gaussian, 0.7, 2, 1.0});
    const Eigen::MatrixXd poly = kernels::gram(a, b, {KernelFamily::Polynomial, 0.5, 3, 2.0});
    const Eigen::MatrixXd lin = kernels::gram(a, b, {KernelFamily::Linear, 1.0, 2, 1.0});
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 5; ++j) {
            const double dot = a.row(i).dot(b.row(j));
            CHECK(g(i, j) == doctest::Approx(std::exp(-0.7 * (a.row(i) - b.row(j)).squaredNorm())));
            CHECK(poly(i, j) == doctest::Approx(std::pow(0.5 * dot + 2.0, 3)));
            CHECK(lin(i, j) == doctest::Approx(dot));
        }
}

TEST_CASE("t-SNE gradient kernel matches the entrywise KL oracle") {
    Eigen::MatrixXd p = Eigen::MatrixXd::Random(12, 12).cwiseAbs();
    p = (p + p.transpose()).eval();
    p.diagonal().setZero();
    p /= p.sum();
    const DataMatrix y = oracle::random_matrix(12, 2, 8);
    Embedding grad(12, 2);
    const TsneStep st = kernels::tsne_gradient(p, 1.0, y, grad);
    CHECK(st.kl == doctest::Approx(oracle::tsne_kl(p, y)).epsilon(1e-10));
}
