#include "dimred/data.hpp"

#include "dimred/errors.hpp"
#include "dimred/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace dimred {

Response Response::continuous(Eigen::VectorXd y) {
    return Response{ResponseKind::Continuous, std::move(y)};
}

Response Response::categorical(const std::vector<int>& labels) {
    Eigen::VectorXd v(static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) v[static_cast<Index>(i)] = labels[i];
    return Response{ResponseKind::Categorical, std::move(v)};
}

std::vector<int> Response::labels() const {
    if (!is_categorical()) throw ParameterError("labels() requested from a continuous response");
    std::vector<int> out(static_cast<std::size_t>(values.size()));
    for (Index i = 0; i < values.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(values[i]));
    return out;
}

Response Response::subset(std::span<const Index> rows) const {
    Response r{kind, Eigen::VectorXd(static_cast<Index>(rows.size()))};
    for (std::size_t i = 0; i < rows.size(); ++i) r.values[static_cast<Index>(i)] = values[rows[i]];
    return r;
}

DataMatrix select_rows(const DataMatrix& x, std::span<const Index> rows) {
    DataMatrix out(static_cast<Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
    return out;
}

Dataset Dataset::subset(std::span<const Index> rows) const {
    return Dataset{select_rows(x, rows), y.subset(rows)};
}

void validate(const DataMatrix& x) {
    if (x.rows() < 2) throw SizeError("data matrix needs at least 2 rows");
    if (x.cols() < 1) throw SizeError("data matrix needs at least 1 column");
    if (!x.allFinite()) throw ParameterError("data matrix contains non-finite entries");
}

void validate(const Dataset& d) {
    validate(d.x);
    if (d.y.size() != d.n()) throw DimensionError("response length does not match sample count");
    if (!d.y.values.allFinite()) throw ParameterError("response contains non-finite values");
}

SplitIndices split_indices(Index n, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ParameterError("train_fraction must lie in (0, 1)");
    const auto n_train = static_cast<Index>(std::llround(static_cast<double>(n) * spec.train_fraction));
    if (n_train < 2 || n - n_train < 2)
        throw SizeError("split needs at least 2 samples on each side, n = " + std::to_string(n));

    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    Rng rng(spec.seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    SplitIndices out;
    out.train.assign(perm.begin(), perm.begin() + n_train);
    out.test.assign(perm.begin() + n_train, perm.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec) {
    auto idx = split_indices(d.n(), spec);
    return {d.subset(idx.train), d.subset(idx.test)};
}

DataMatrix Standardization::apply(const DataMatrix& x) const {
    if (x.cols() != means.size()) throw DimensionError("standardization column count mismatch");
    DataMatrix z = x.rowwise() - means;
    z.array().rowwise() /= scales.array();
    return z;
}

DataMatrix Standardization::invert(const DataMatrix& z) const {
    if (z.cols() != means.size()) throw DimensionError("standardization column count mismatch");
    DataMatrix x = z.array().rowwise() * scales.array();
    x.rowwise() += means;
    return x;
}

Standardization fit_standardization(const DataMatrix& x, bool scale) {
    if (x.rows() < 2) throw SizeError("standardization needs at least 2 rows");
    Standardization s;
    s.means = x.colwise().mean();
    s.scales = Eigen::RowVectorXd::Ones(x.cols());
    if (scale) {
        const double denom = static_cast<double>(x.rows() - 1);
        for (Index j = 0; j < x.cols(); ++j) {
            const double sd = std::sqrt((x.col(j).array() - s.means[j]).square().sum() / denom);
            // Constant columns keep scale 1 so they map to exact zeros.
            if (sd > 0.0 && std::isfinite(sd)) s.scales[j] = sd;
        }
    }
    return s;
}

std::pair<DataMatrix, Standardization> standardize(const DataMatrix& x, bool scale) {
    auto s = fit_standardization(x, scale);
    return {s.apply(x), std::move(s)};
}

std::vector<int> slice_response(const Eigen::VectorXd& y, int slices) {
    const auto n = static_cast<std::size_t>(y.size());
    if (slices < 2) throw ParameterError("slice count must be at least 2");
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y[a] < y[b]; });

    std::size_t distinct = n == 0 ? 0 : 1;
    for (std::size_t r = 1; r < n; ++r)
        if (y[order[r]] != y[order[r - 1]]) ++distinct;
    if (static_cast<std::size_t>(slices) > distinct)
        throw SlicingError("slice count " + std::to_string(slices) + " exceeds the " +
                           std::to_string(distinct) + " distinct response values");

    std::vector<int> labels(n);
    for (std::size_t r = 0; r < n; ++r)
        labels[static_cast<std::size_t>(order[r])] = static_cast<int>(r * static_cast<std::size_t>(slices) / n);
    return labels;
}

std::vector<int> compact_labels(const std::vector<int>& labels, int* label_count) {
    std::map<int, int> code;
    for (int l : labels) code.emplace(l, 0);
    int next = 0;
    for (auto& [label, c] : code) c = next++;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = code[labels[i]];
    if (label_count) *label_count = next;
    return out;
}

}  // namespace dimred
