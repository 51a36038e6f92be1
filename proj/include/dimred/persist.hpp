#pragma once

// Fitted models as directory bundles: manifest.json (type, format version,
// scalar parameters) plus one CSV per matrix, written at round-trip precision.

#include "dimred/kernel_methods.hpp"
#include "dimred/linear.hpp"
#include "dimred/tsne.hpp"
#include "dimred/umap.hpp"

#include <filesystem>
#include <string>

namespace dimred::persist {

inline constexpr int kFormatVersion = 1;

void save(const umap::UmapModel& m, const std::filesystem::path& dir);
void save(const PcaModel& m, const std::filesystem::path& dir);
void save(const SirModel& m, const std::filesystem::path& dir);
void save(const KernelModel& m, const std::filesystem::path& dir);
void save(const tsne::TsneModel& m, const std::filesystem::path& dir);
/// The Orig column: a manifest recording the feature count only.
void save_identity(Index features, const std::filesystem::path& dir);

/// "umap", "pca", "sir", "kernel", "tsne" or "identity". Throws FormatError on
/// a missing manifest or an unknown format version.
std::string model_type(const std::filesystem::path& dir);

umap::UmapModel load_umap(const std::filesystem::path& dir);
PcaModel load_pca(const std::filesystem::path& dir);
SirModel load_sir(const std::filesystem::path& dir);
KernelModel load_kernel(const std::filesystem::path& dir);
tsne::TsneModel load_tsne(const std::filesystem::path& dir);

}  // namespace dimred::persist
