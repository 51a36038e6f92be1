#include "dimred/rng.hpp"
#include "dimred/umap.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <queue>

namespace dimred::umap {

namespace {

std::vector<int> connected_components(const Eigen::SparseMatrix<double>& w, int& count) {
    const Index n = w.rows();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    count = 0;
    for (Index start = 0; start < n; ++start) {
        if (comp[static_cast<std::size_t>(start)] >= 0) continue;
        std::queue<Index> q;
        q.push(start);
        comp[static_cast<std::size_t>(start)] = count;
        while (!q.empty()) {
            const Index v = q.front();
            q.pop();
            for (Eigen::SparseMatrix<double>::InnerIterator it(w, v); it; ++it) {
                if (comp[static_cast<std::size_t>(it.row())] < 0) {
                    comp[static_cast<std::size_t>(it.row())] = count;
                    q.push(it.row());
                }
            }
        }
        ++count;
    }
    return comp;
}

// Nontrivial Laplacian eigenvectors of one component; false on solver failure.
bool component_coords(const Eigen::SparseMatrix<double>& w, const std::vector<Index>& members, int dim,
                      Eigen::MatrixXd& out) {
    const auto m = static_cast<Index>(members.size());
    std::vector<Index> local(static_cast<std::size_t>(w.rows()), -1);
    for (Index t = 0; t < m; ++t) local[static_cast<std::size_t>(members[static_cast<std::size_t>(t)])] = t;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (Index t = 0; t < m; ++t)
        for (Eigen::SparseMatrix<double>::InnerIterator it(w, members[static_cast<std::size_t>(t)]); it; ++it)
            a(local[static_cast<std::size_t>(it.row())], t) = it.value();
    Eigen::VectorXd inv_sqrt_deg = a.colwise().sum().transpose();
    for (Index t = 0; t < m; ++t) inv_sqrt_deg[t] = inv_sqrt_deg[t] > 0.0 ? 1.0 / std::sqrt(inv_sqrt_deg[t]) : 0.0;
    Eigen::MatrixXd lap = -(inv_sqrt_deg.asDiagonal() * a * inv_sqrt_deg.asDiagonal());
    lap.diagonal().array() += 1.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    if (es.info() != Eigen::Success) return false;
    out = es.eigenvectors().middleCols(1, dim);
    for (Index c = 0; c < out.cols(); ++c) {
        Index arg = 0;
        out.col(c).cwiseAbs().maxCoeff(&arg);
        if (out(arg, c) < 0.0) out.col(c) *= -1.0;
    }
    return out.allFinite();
}

}  // namespace

Embedding random_init(Index n, int dim, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 2.5);
    Embedding e(n, dim);
    for (Index i = 0; i < n; ++i)
        for (int c = 0; c < dim; ++c) e(i, c) = normal(rng);
    return e;
}

SpectralResult spectral_init(const FuzzyGraph& g, int dim, std::uint64_t seed) {
    const Index n = g.n();
    SpectralResult r;
    r.coords = Embedding::Zero(n, dim);
    const std::vector<int> comp = connected_components(g.weights, r.components);

    std::vector<std::vector<Index>> members(static_cast<std::size_t>(r.components));
    for (Index i = 0; i < n; ++i) members[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].push_back(i);

    // Grid of cells along the first one or two axes, one cell per component.
    const int per_row = dim >= 2 ? static_cast<int>(std::ceil(std::sqrt(static_cast<double>(r.components)))) : r.components;
    const int rows = (r.components + per_row - 1) / per_row;
    const double cell_x = 20.0 / per_row;
    const double cell_y = dim >= 2 ? 20.0 / rows : 20.0;

    Rng rng(seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    for (int c = 0; c < r.components; ++c) {
        const auto& mem = members[static_cast<std::size_t>(c)];
        const auto m = static_cast<Index>(mem.size());
        Eigen::MatrixXd local;
        if (m > dim) {
            if (!component_coords(g.weights, mem, dim, local)) {
                r.coords = random_init(n, dim, seed);
                r.fallback = true;
                return r;
            }
        } else {
            local.resize(m, dim);
            for (Index t = 0; t < m; ++t)
                for (int q = 0; q < dim; ++q) local(t, q) = m == 1 ? 0.0 : jitter(rng);
        }
        // Scale each axis to [-1, 1] within the component, then into its cell.
        for (int q = 0; q < dim; ++q) {
            const double mx = local.col(q).cwiseAbs().maxCoeff();
            if (mx > 0.0) local.col(q) /= mx;
        }
        if (r.components == 1) {
            local *= 10.0;
        } else {
            const int gx = c % per_row, gy = c / per_row;
            const double cx = -10.0 + (gx + 0.5) * cell_x;
            const double cy = -10.0 + (gy + 0.5) * cell_y;
            for (int q = 0; q < dim; ++q) {
                const double half = 0.4 * (q == 0 ? cell_x : q == 1 ? cell_y : 20.0);
                local.col(q) *= half;
                if (q == 0) local.col(q).array() += cx;
                if (q == 1) local.col(q).array() += cy;
            }
        }
        for (Index t = 0; t < m; ++t) r.coords.row(mem[static_cast<std::size_t>(t)]) = local.row(t);
    }
    return r;
}

}  // namespace dimred::umap
