#pragma once

// Big-endian IDX files (the MNIST container) and the Fashion-MNIST loader.

#include "dimred/data.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace dimred::idx {

inline constexpr std::uint32_t kImageMagic = 0x00000803;  // unsigned byte, 3 dims
inline constexpr std::uint32_t kLabelMagic = 0x00000801;  // unsigned byte, 1 dim

struct IdxArray {
    std::uint32_t magic = 0;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;  // row-major
};

/// Throws FormatError carrying the byte offset of a bad magic number or of the
/// point where a truncated file ends.
IdxArray read(const std::filesystem::path& path, std::uint32_t expected_magic);
void write(const std::filesystem::path& path, const IdxArray& a);

/// Images flattened to rows and scaled to [0, 1]; labels as a categorical response.
Dataset to_dataset(const IdxArray& images, const IdxArray& labels);

struct FashionMnist {
    Dataset train;  // native 60,000-image split
    Dataset test;   // native 10,000-image split
};

/// Reads train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-images-idx3-ubyte
/// and t10k-labels-idx1-ubyte from `dir`.
FashionMnist load_fashion_mnist(const std::filesystem::path& dir);

/// Sorted row indices of a class-stratified sample of size `count`: each
/// class gets floor(count * n_c / n) rows, leftovers go to the classes with the
/// largest remainders (lowest label on ties).
std::vector<Index> stratified_sample(const std::vector<int>& labels, Index count, std::uint64_t seed);

}  // namespace dimred::idx
