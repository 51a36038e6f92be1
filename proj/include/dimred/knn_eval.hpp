#pragma once

#include "dimred/data.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dimred::eval {

enum class Task { Regression, Classification };

struct KnnConfig {
    int k = 5;
    bool cross_validate = false;  ///< choose k from `grid` by CV on the training embedding
    std::vector<int> grid{1, 3, 5, 7, 9, 11, 13, 15};
    int folds = 5;
};

/// Mean of the k nearest responses (regression) or majority vote with the
/// lowest label winning ties (classification). Neighbor ties go to the lower
/// training index. Querying the training set itself counts each point as its
/// own neighbor.
Eigen::VectorXd knn_predict(const Embedding& train, const Eigen::VectorXd& train_y, const Embedding& query, int k,
                            Task task);

/// MSE for regression, misclassification rate for classification.
double metric(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth, Task task);

/// Sample standard deviation / sqrt(R).
double standard_error(std::span<const double> values);

double mean(std::span<const double> values);

/// k from the grid with the lowest CV metric (first on ties). Grid entries
/// not smaller than the training-fold size are skipped.
int select_k(const Embedding& train, const Eigen::VectorXd& train_y, Task task, const KnnConfig& cfg,
             std::uint64_t seed);

/// Mean silhouette width with Euclidean distances.
double silhouette(const Embedding& emb, std::span<const int> labels);

struct EvalReport {
    std::string method;
    double train_metric = 0.0;  ///< NaN when every repetition failed
    double test_metric = 0.0;
    double test_se = 0.0;
    int reps = 0;      ///< successful repetitions
    int failures = 0;
    double elapsed_seconds = 0.0;  ///< mean fit + transform + evaluate time per repetition
};

}  // namespace dimred::eval
