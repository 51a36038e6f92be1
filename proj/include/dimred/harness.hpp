#pragma once

// Repetition driver: per repetition obtain a fresh train/test split, fit each
// method on the training rows, embed both sides, score with kNN, aggregate.

#include "dimred/knn_eval.hpp"
#include "dimred/reducers.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dimred::eval {

struct Split {
    Dataset train;
    Dataset test;
};

/// Repetition r's data; must be a pure function of r.
using SplitSource = std::function<Split(int rep)>;
using ReducerFactory = std::function<std::unique_ptr<Reducer>(Method, std::uint64_t seed)>;

struct FitOutput {
    int rep;
    Method method;
    const Reducer& reducer;
    const Embedding& train;
    const Embedding& test;
    const Split& data;  // standardized
};

struct HarnessOptions {
    Task task = Task::Regression;
    KnnConfig knn;
    bool standardize = true;  ///< center and scale on training statistics, applied to both sides
    std::uint64_t seed = 0;
    MethodParams params;
    ReducerFactory factory;                               ///< defaults to make_reducer(m, params, seed)
    std::function<void(const FitOutput&)> on_first_rep;  ///< serialized; repetition 0 only
    std::function<void(const std::string&)> log;         ///< serialized
};

struct RepRecord {
    int rep = 0;
    Method method = Method::Orig;
    bool ok = false;
    double train_metric = 0.0;
    double test_metric = 0.0;
    int k = 0;
    double elapsed_seconds = 0.0;
    std::string error;
};

struct HarnessResult {
    std::vector<RepRecord> records;  // sorted by (rep, method)
    std::vector<EvalReport> reports;  // one per method, in column order
};

/// Seed handed to method `m` in repetition `rep`.
std::uint64_t method_seed(std::uint64_t base, int rep, Method m);

/// Requires R >= 2. A method that throws in one repetition is recorded as a
/// failure there and the batch continues.
HarnessResult run_repetitions(const SplitSource& source, const std::vector<Method>& methods, int reps,
                              const HarnessOptions& opts);

/// Means and SEs of the successful repetitions, in the order of `methods`.
/// Records are sorted by repetition before reduction, so the result does not
/// depend on completion order.
std::vector<EvalReport> aggregate(std::vector<RepRecord> records, const std::vector<Method>& methods);

}  // namespace dimred::eval
