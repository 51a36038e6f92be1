#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code; each oracle is the plainest possible
// re-derivation of the quantity under test.

#include "dimred/data.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using dimred::DataMatrix;
using dimred::Index;

inline DataMatrix random_matrix(Index n, Index p, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> N(0.0, scale);
    DataMatrix m(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) m(i, j) = N(g);
    return m;
}

/// All (distance, index) pairs of a query against every reference row, sorted.
inline std::vector<std::pair<double, Index>> brute_neighbors(const DataMatrix& ref, const Eigen::RowVectorXd& q,
                                                             Index skip = -1) {
    std::vector<std::pair<double, Index>> all;
    for (Index j = 0; j < ref.rows(); ++j) {
        if (j == skip) continue;
        double s = 0.0;
        for (Index c = 0; c < ref.cols(); ++c) s += (ref(j, c) - q[c]) * (ref(j, c) - q[c]);
        all.emplace_back(s, j);
    }
    std::sort(all.begin(), all.end());
    for (auto& e : all) e.first = std::sqrt(e.first);
    return all;
}

/// Central difference gradient of f at x.
inline Eigen::VectorXd finite_gradient(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
                                       double h = 1e-6) {
    Eigen::VectorXd g(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = f(x);
        x[i] = keep - h;
        const double down = f(x);
        x[i] = keep;
        g[i] = (up - down) / (2 * h);
    }
    return g;
}

inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

/// Fuzzy-set cross entropy over unordered pairs, with the low-dimensional
/// membership 1 / (1 + a d^{2b}) and weights from a dense symmetric matrix.
inline double cross_entropy(const Eigen::MatrixXd& w, const DataMatrix& z, double a, double b) {
    constexpr double eps = 1e-12;
    double total = 0.0;
    for (Index i = 0; i < z.rows(); ++i)
        for (Index j = i + 1; j < z.rows(); ++j) {
            const double d2 = (z.row(i) - z.row(j)).squaredNorm();
            const double phi = 1.0 / (1.0 + a * std::pow(d2, b));
            const double v = w(i, j);
            if (v > 0) total -= v * std::log(std::max(phi, eps));
            if (v < 1) total -= (1 - v) * std::log(std::max(1 - phi, eps));
        }
    return total;
}

/// KL(P || Q) with a Student-t Q, computed entry by entry.
inline double tsne_kl(const Eigen::MatrixXd& p, const DataMatrix& y) {
    const Index n = y.rows();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    double z = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j) {
                q(i, j) = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
                z += q(i, j);
            }
    double kl = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j && p(i, j) > 0) kl += p(i, j) * std::log(p(i, j) / (q(i, j) / z));
    return kl;
}

/// Sum of squared residuals of 1/(1 + a s^{2b}) against the piecewise target
/// on 300 points of [0, 3 spread].
inline double curve_sse(double a, double b, double min_dist, double spread) {
    double sse = 0.0;
    for (int t = 0; t < 300; ++t) {
        const double s = 3.0 * spread * t / 299.0;
        const double target = s <= min_dist ? 1.0 : std::exp(-(s - min_dist));
        const double fit = 1.0 / (1.0 + a * std::pow(s, 2 * b));
        sse += (fit - target) * (fit - target);
    }
    return sse;
}

/// Coarse-to-fine grid search for the curve parameters.
inline std::pair<double, double> grid_fit_ab(double min_dist, double spread) {
    double best_a = 1, best_b = 1, best = curve_sse(1, 1, min_dist, spread);
    double a_lo = 0.05, a_hi = 5.0, b_lo = 0.1, b_hi = 2.0;
    for (int level = 0; level < 6; ++level) {
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j) {
                const double a = a_lo + (a_hi - a_lo) * i / 40.0, b = b_lo + (b_hi - b_lo) * j / 40.0;
                const double v = curve_sse(a, b, min_dist, spread);
                if (v < best) {
                    best = v;
                    best_a = a;
                    best_b = b;
                }
            }
        const double ra = (a_hi - a_lo) / 10, rb = (b_hi - b_lo) / 10;
        a_lo = std::max(1e-3, best_a - ra);
        a_hi = best_a + ra;
        b_lo = std::max(1e-3, best_b - rb);
        b_hi = best_b + rb;
    }
    return {best_a, best_b};
}

/// Largest principal angle (radians) between the column spans of a and b.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                               Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                               Eigen::MatrixXd::Identity(b.rows(), b.cols());
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(qa.transpose() * qb).singularValues();
    return std::acos(std::clamp(sv.minCoeff(), -1.0, 1.0));
}

/// Shannon entropy in bits of a probability row.
inline double entropy_bits(const Eigen::RowVectorXd& p) {
    double h = 0.0;
    for (Index j = 0; j < p.size(); ++j)
        if (p[j] > 0) h -= p[j] * std::log2(p[j]);
    return h;
}

/// Column j of a is +/- column j of b within tol.
inline bool equal_up_to_sign(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index j = 0; j < a.cols(); ++j) {
        const double plus = (a.col(j) - b.col(j)).cwiseAbs().maxCoeff();
        const double minus = (a.col(j) + b.col(j)).cwiseAbs().maxCoeff();
        if (std::min(plus, minus) > tol) return false;
    }
    return true;
}

}  // namespace oracle
