#pragma once

#include <stdexcept>
#include <string>

namespace dimred {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hyperparameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Too few samples for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Response slicing is impossible (too few distinct values, empty slice).
class SlicingError : public Error {
public:
    using Error::Error;
};

/// Column count or shape disagrees with a fitted model or a response model.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A fit or solve did not converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The embedding optimizer produced a non-finite coordinate or loss.
class OptimizerError : public Error {
public:
    OptimizerError(const std::string& what, int epoch)
        : Error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

/// Malformed input file. `offset` is a byte offset or a 1-based line number,
/// depending on the format.
class FormatError : public Error {
public:
    FormatError(const std::string& what, long long offset)
        : Error(what + " (at " + std::to_string(offset) + ")"), offset_(offset) {}
    long long offset() const noexcept { return offset_; }

private:
    long long offset_;
};

}  // namespace dimred
