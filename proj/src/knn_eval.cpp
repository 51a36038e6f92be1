#include "dimred/knn_eval.hpp"

#include "dimred/errors.hpp"
#include "dimred/kernels.hpp"
#include "dimred/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace dimred::eval {

Eigen::VectorXd knn_predict(const Embedding& train, const Eigen::VectorXd& train_y, const Embedding& query, int k,
                            Task task) {
    if (train.rows() == 0) throw SizeError("kNN needs a non-empty training set");
    if (train_y.size() != train.rows()) throw DimensionError("training responses do not match training rows");
    if (k < 1 || k > train.rows()) throw ParameterError("kNN k must lie in [1, training size]");
    const NeighborList nl = kernels::knn(train, query, k, false);
    Eigen::VectorXd pred(query.rows());
    for (Index i = 0; i < query.rows(); ++i) {
        if (task == Task::Regression) {
            double s = 0.0;
            for (int t = 0; t < k; ++t) s += train_y[nl.neighbor(i, t)];
            pred[i] = s / k;
        } else {
            std::map<long, int> votes;
            for (int t = 0; t < k; ++t) ++votes[std::lround(train_y[nl.neighbor(i, t)])];
            long best = 0;
            int best_count = -1;
            for (const auto& [label, count] : votes)
                if (count > best_count) {  // map order: lowest label wins ties
                    best = label;
                    best_count = count;
                }
            pred[i] = static_cast<double>(best);
        }
    }
    return pred;
}

double metric(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth, Task task) {
    if (pred.size() != truth.size()) throw DimensionError("prediction and truth lengths differ");
    if (pred.size() == 0) throw SizeError("metric of an empty prediction");
    if (task == Task::Regression) return (pred - truth).squaredNorm() / static_cast<double>(pred.size());
    Index wrong = 0;
    for (Index i = 0; i < pred.size(); ++i) wrong += std::lround(pred[i]) != std::lround(truth[i]) ? 1 : 0;
    return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

double mean(std::span<const double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double standard_error(std::span<const double> values) {
    const auto r = values.size();
    if (r < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(r - 1)) / std::sqrt(static_cast<double>(r));
}

int select_k(const Embedding& train, const Eigen::VectorXd& train_y, Task task, const KnnConfig& cfg,
             std::uint64_t seed) {
    const Index n = train.rows();
    const int folds = std::clamp<int>(cfg.folds, 2, static_cast<int>(n));
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    Rng rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    int best_k = cfg.k;
    double best = std::numeric_limits<double>::infinity();
    for (int k : cfg.grid) {
        double total = 0.0;
        bool usable = true;
        for (int f = 0; f < folds && usable; ++f) {
            std::vector<Index> fit_rows, held_rows;
            for (Index r = 0; r < n; ++r)
                (r % folds == f ? held_rows : fit_rows).push_back(perm[static_cast<std::size_t>(r)]);
            if (k > static_cast<int>(fit_rows.size()) || held_rows.empty()) {
                usable = false;
                break;
            }
            Eigen::VectorXd fy(static_cast<Index>(fit_rows.size())), hy(static_cast<Index>(held_rows.size()));
            for (std::size_t t = 0; t < fit_rows.size(); ++t) fy[static_cast<Index>(t)] = train_y[fit_rows[t]];
            for (std::size_t t = 0; t < held_rows.size(); ++t) hy[static_cast<Index>(t)] = train_y[held_rows[t]];
            const Eigen::VectorXd pred =
                knn_predict(select_rows(train, fit_rows), fy, select_rows(train, held_rows), k, task);
            total += metric(pred, hy, task) * static_cast<double>(held_rows.size());
        }
        if (usable && total < best) {
            best = total;
            best_k = k;
        }
    }
    return best_k;
}

double silhouette(const Embedding& emb, std::span<const int> labels) {
    const Index n = emb.rows();
    if (static_cast<Index>(labels.size()) != n) throw DimensionError("label count mismatch");
    int label_count = 0;
    const std::vector<int> code = compact_labels(std::vector<int>(labels.begin(), labels.end()), &label_count);
    if (label_count < 2) return 0.0;
    std::vector<Index> sizes(static_cast<std::size_t>(label_count), 0);
    for (int c : code) ++sizes[static_cast<std::size_t>(c)];
    const Eigen::MatrixXd d2 = kernels::sq_distances(emb, emb);
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        std::vector<double> sums(static_cast<std::size_t>(label_count), 0.0);
        for (Index j = 0; j < n; ++j)
            if (j != i) sums[static_cast<std::size_t>(code[static_cast<std::size_t>(j)])] += std::sqrt(d2(i, j));
        const auto own = static_cast<std::size_t>(code[static_cast<std::size_t>(i)]);
        if (sizes[own] < 2) continue;
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sums.size(); ++c)
            if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

}  // namespace dimred::eval
