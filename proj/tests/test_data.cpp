#include "dimred/data.hpp"
#include "dimred/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace dimred;

TEST_CASE("split of 1000 rows at one half gives 500/500") {
    const SplitIndices s = split_indices(1000, {0.5, 7});
    CHECK(s.train.size() == 500);
    CHECK(s.test.size() == 500);
}

TEST_CASE("split is a seeded partition") {
    for (Index n : {4, 5, 17, 200}) {
        for (double f : {0.3, 0.5, 0.8}) {
            if (std::llround(n * f) < 2 || n - std::llround(n * f) < 2) continue;
            const SplitIndices s = split_indices(n, {f, 99});
            std::vector<int> hits(static_cast<std::size_t>(n), 0);
            for (Index i : s.train) ++hits[static_cast<std::size_t>(i)];
            for (Index i : s.test) ++hits[static_cast<std::size_t>(i)];
            for (int h : hits) CHECK(h == 1);
            CHECK(std::abs(static_cast<double>(s.train.size()) - n * f) <= 1.0);
            CHECK(std::is_sorted(s.train.begin(), s.train.end()));
            const SplitIndices again = split_indices(n, {f, 99});
            CHECK(again.train == s.train);
            CHECK(again.test == s.test);
        }
    }
    const SplitIndices five = split_indices(5, {0.5, 1});
    const std::set<std::size_t> sizes{five.train.size(), five.test.size()};
    CHECK(sizes == std::set<std::size_t>{2, 3});
    CHECK(split_indices(50, {0.5, 1}).train != split_indices(50, {0.5, 2}).train);
}

TEST_CASE("split rejects sizes that leave a side under two rows") {
    CHECK_THROWS_AS(split_indices(3, {0.5, 0}), SizeError);
    CHECK_THROWS_AS(split_indices(10, {0.95, 0}), SizeError);
    CHECK_THROWS_AS(split_indices(10, {1.0, 0}), ParameterError);
}

TEST_CASE("split keeps rows paired with responses") {
    Dataset d;
    d.x = DataMatrix(6, 1);
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i) {
        d.x(i, 0) = i;
        y[i] = 10.0 * i;
    }
    d.y = Response::continuous(y);
    const auto [tr, te] = split(d, {0.5, 3});
    for (Index i = 0; i < tr.n(); ++i) CHECK(tr.y.values[i] == doctest::Approx(10.0 * tr.x(i, 0)));
    for (Index i = 0; i < te.n(); ++i) CHECK(te.y.values[i] == doctest::Approx(10.0 * te.x(i, 0)));
}

TEST_CASE("standardize centers, scales and inverts") {
    DataMatrix x(3, 2);
    x << 1, 4, 2, 4, 3, 4;
    const auto [z, st] = standardize(x, false);
    CHECK(z(0, 0) == -1.0);
    CHECK(z(1, 0) == 0.0);
    CHECK(z(2, 0) == 1.0);
    CHECK(z.col(1).isZero());
    CHECK(st.scales[1] == 1.0);

    const DataMatrix r = oracle::random_matrix(6, 3, 5, 3.0).array() + 2.0;
    const auto [zs, sts] = standardize(r, true);
    for (Index j = 0; j < 3; ++j) {
        CHECK(std::abs(zs.col(j).mean()) < 1e-12);
        const double var = (zs.col(j).array() - zs.col(j).mean()).square().sum() / 5.0;
        CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
    }
    const DataMatrix back = sts.invert(zs);
    CHECK(((back - r).cwiseAbs().array() / r.cwiseAbs().array().max(1e-300)).maxCoeff() < 1e-10);
}

TEST_CASE("validate guards shape and finiteness") {
    CHECK_THROWS_AS(validate(DataMatrix(1, 3)), SizeError);
    DataMatrix bad = DataMatrix::Zero(3, 2);
    bad(1, 1) = std::nan("");
    CHECK_THROWS(validate(bad));
    Dataset d{DataMatrix::Zero(3, 2), Response::continuous(Eigen::VectorXd::Zero(4))};
    CHECK_THROWS_AS(validate(d), DimensionError);
}

TEST_CASE("slice_response examples") {
    Eigen::VectorXd y(4);
    y << 1, 2, 3, 4;
    CHECK(slice_response(y, 2) == std::vector<int>{0, 0, 1, 1});
    CHECK_THROWS_AS(slice_response(Eigen::VectorXd::Constant(4, 5.0), 2), SlicingError);
    CHECK_THROWS_AS(slice_response(y, 1), ParameterError);

    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> U(0, 1);
    Eigen::VectorXd u(100);
    for (auto& v : u) v = U(g);
    const auto labels = slice_response(u, 10);
    std::vector<int> count(10, 0);
    for (int l : labels) ++count[static_cast<std::size_t>(l)];
    for (int c : count) CHECK(c == 10);
}

TEST_CASE("slice labels never decrease along sorted responses") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 g(seed);
        std::uniform_int_distribution<int> U(0, 30);  // force ties
        const Index n = 20 + static_cast<Index>(seed) * 7;
        Eigen::VectorXd y(n);
        for (auto& v : y) v = U(g);
        const int H = 2 + static_cast<int>(seed % 6);
        const auto labels = slice_response(y, H);
        std::vector<Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y[a] < y[b]; });
        for (std::size_t t = 1; t < order.size(); ++t)
            CHECK(labels[static_cast<std::size_t>(order[t])] >= labels[static_cast<std::size_t>(order[t - 1])]);
        std::vector<int> count(static_cast<std::size_t>(H), 0);
        for (int l : labels) ++count[static_cast<std::size_t>(l)];
        CHECK(*std::max_element(count.begin(), count.end()) - *std::min_element(count.begin(), count.end()) <= 1);
    }
}

TEST_CASE("compact_labels maps to 0..L-1 in label order") {
    int L = 0;
    CHECK(compact_labels({7, -2, 7, 3}, &L) == std::vector<int>{2, 0, 2, 1});
    CHECK(L == 3);
}

TEST_CASE("categorical response accessors") {
    const Response r = Response::categorical({1, 0, 1});
    CHECK(r.is_categorical());
    CHECK(r.labels() == std::vector<int>{1, 0, 1});
    CHECK_THROWS_AS(Response::continuous(Eigen::VectorXd::Zero(2)).labels(), ParameterError);
    const std::vector<Index> rows{2, 0};
    CHECK(r.subset(rows).labels() == std::vector<int>{1, 1});
}
