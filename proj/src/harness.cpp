#include "dimred/harness.hpp"

#include "dimred/errors.hpp"
#include "dimred/parallel.hpp"
#include "dimred/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>

namespace dimred::eval {
namespace {

RepRecord evaluate(const Split& s, Method m, int rep, const HarnessOptions& opts, std::mutex& io) {
    RepRecord rec;
    rec.rep = rep;
    rec.method = m;
    const auto start = std::chrono::steady_clock::now();
    try {
        const std::uint64_t seed = method_seed(opts.seed, rep, m);
        std::unique_ptr<Reducer> red = opts.factory ? opts.factory(m, seed) : make_reducer(m, opts.params, seed);
        const Embedding train_emb = red->fit(s.train.x, s.train.y);
        const Embedding test_emb = red->transform(s.test.x);
        if (!train_emb.allFinite() || !test_emb.allFinite()) throw NumericalError("non-finite embedding");

        const Eigen::VectorXd& ytr = s.train.y.values;
        int k = opts.knn.k;
        if (opts.knn.cross_validate) k = select_k(train_emb, ytr, opts.task, opts.knn, derive_seed(seed, {0xC5}));
        if (k >= train_emb.rows()) throw ParameterError("kNN k must be smaller than the training size");
        rec.k = k;
        rec.train_metric = metric(knn_predict(train_emb, ytr, train_emb, k, opts.task), ytr, opts.task);
        rec.test_metric = metric(knn_predict(train_emb, ytr, test_emb, k, opts.task), s.test.y.values, opts.task);
        rec.ok = true;

        const auto warns = red->warnings();
        if (rep == 0 || !warns.empty()) {
            std::lock_guard lock(io);
            if (opts.log)
                for (const auto& w : warns) opts.log("rep " + std::to_string(rep) + " " + method_name(m) + ": " + w);
            if (rep == 0 && opts.on_first_rep) opts.on_first_rep(FitOutput{rep, m, *red, train_emb, test_emb, s});
        }
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
        std::lock_guard lock(io);
        if (opts.log) opts.log("rep " + std::to_string(rep) + " " + method_name(m) + " failed: " + e.what());
    }
    rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

Split prepare(const SplitSource& source, int rep, bool standardize) {
    Split s = source(rep);
    validate(s.train);
    if (s.test.x.cols() != s.train.x.cols()) throw DimensionError("train and test column counts differ");
    if (standardize) {
        const Standardization st = fit_standardization(s.train.x, true);
        s.train.x = st.apply(s.train.x);
        s.test.x = st.apply(s.test.x);
    }
    return s;
}

}  // namespace

std::uint64_t method_seed(std::uint64_t base, int rep, Method m) {
    return derive_seed(base, {0xAE9, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(m)});
}

HarnessResult run_repetitions(const SplitSource& source, const std::vector<Method>& methods, int reps,
                              const HarnessOptions& opts) {
    if (reps < 2) throw ParameterError("at least two repetitions are needed for a standard error");
    if (methods.empty()) throw ParameterError("no methods requested");
    const std::size_t M = methods.size();
    std::vector<RepRecord> records(static_cast<std::size_t>(reps) * M);
    std::mutex io;

    // Each repetition is sequential and fully seeded, so the outer schedule
    // cannot change any record.
    const int threads = std::min(parallel::region_threads(), reps);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int r = 0; r < reps; ++r) {
        Split s;
        std::string failure;
        try {
            s = prepare(source, r, opts.standardize);
        } catch (const std::exception& e) {
            failure = e.what();
        }
        for (std::size_t j = 0; j < M; ++j) {
            RepRecord& rec = records[static_cast<std::size_t>(r) * M + j];
            if (failure.empty()) {
                rec = evaluate(s, methods[j], r, opts, io);
            } else {
                rec.rep = r;
                rec.method = methods[j];
                rec.error = "data: " + failure;
            }
        }
        if (!failure.empty()) {
            std::lock_guard lock(io);
            if (opts.log) opts.log("rep " + std::to_string(r) + " data failed: " + failure);
        }
    }

    HarnessResult out;
    out.reports = aggregate(records, methods);
    out.records = std::move(records);
    return out;
}

std::vector<EvalReport> aggregate(std::vector<RepRecord> records, const std::vector<Method>& methods) {
    std::sort(records.begin(), records.end(), [](const RepRecord& a, const RepRecord& b) {
        return a.rep != b.rep ? a.rep < b.rep : a.method < b.method;
    });
    std::vector<EvalReport> out;
    for (Method m : methods) {
        EvalReport rep;
        rep.method = method_name(m);
        std::vector<double> train, test;
        double elapsed = 0.0;
        int seen = 0;
        for (const auto& r : records) {
            if (r.method != m) continue;
            ++seen;
            elapsed += r.elapsed_seconds;
            if (!r.ok) {
                ++rep.failures;
                continue;
            }
            train.push_back(r.train_metric);
            test.push_back(r.test_metric);
        }
        rep.reps = static_cast<int>(test.size());
        rep.train_metric = mean(train);
        rep.test_metric = mean(test);
        rep.test_se = standard_error(test);
        rep.elapsed_seconds = seen ? elapsed / seen : 0.0;
        out.push_back(rep);
    }
    return out;
}

}  // namespace dimred::eval
