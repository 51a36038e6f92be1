#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dimred {

using Index = Eigen::Index;

/// n samples (rows) by p features (columns).
using DataMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n samples by d target coordinates.
using Embedding = DataMatrix;

enum class ResponseKind { Continuous, Categorical };

/// Per-sample response. Categorical labels are stored as integral doubles so
/// both kinds share one vector.
struct Response {
    ResponseKind kind = ResponseKind::Continuous;
    Eigen::VectorXd values;

    static Response continuous(Eigen::VectorXd y);
    static Response categorical(const std::vector<int>& labels);

    Index size() const { return values.size(); }
    bool is_categorical() const { return kind == ResponseKind::Categorical; }

    /// Raw integer labels; throws ParameterError on a continuous response.
    std::vector<int> labels() const;

    Response subset(std::span<const Index> rows) const;
};

struct Dataset {
    DataMatrix x;
    Response y;

    Index n() const { return x.rows(); }
    Index p() const { return x.cols(); }

    Dataset subset(std::span<const Index> rows) const;
};

/// Throws if the matrix has n < 2, p < 1 or a non-finite entry.
void validate(const DataMatrix& x);
/// Also checks that x and y agree in length and that y is well formed.
void validate(const Dataset& d);

DataMatrix select_rows(const DataMatrix& x, std::span<const Index> rows);

struct SplitSpec {
    double train_fraction = 0.5;
    std::uint64_t seed = 0;
};

struct SplitIndices {
    std::vector<Index> train;  // ascending
    std::vector<Index> test;   // ascending
};

/// Seeded random partition of {0..n-1}; train size is round(n * fraction).
SplitIndices split_indices(Index n, const SplitSpec& spec);

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec);

/// Column centering (and optional unit-variance scaling) fitted on one matrix
/// and applicable to others.
struct Standardization {
    Eigen::RowVectorXd means;
    Eigen::RowVectorXd scales;

    DataMatrix apply(const DataMatrix& x) const;
    DataMatrix invert(const DataMatrix& z) const;
};

/// Scales use the unbiased (n-1) standard deviation; constant columns get
/// scale 1. With `scale == false` every scale is 1.
Standardization fit_standardization(const DataMatrix& x, bool scale = true);

std::pair<DataMatrix, Standardization> standardize(const DataMatrix& x, bool scale = true);

/// Equal-count slicing by response order: label h for the h-th block of the
/// stably sorted responses (ties broken by original index).
std::vector<int> slice_response(const Eigen::VectorXd& y, int slices);

/// Maps arbitrary integer labels onto 0..L-1 in increasing label order.
std::vector<int> compact_labels(const std::vector<int>& labels, int* label_count = nullptr);

}  // namespace dimred
