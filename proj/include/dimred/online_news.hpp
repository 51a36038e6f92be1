#pragma once

#include "dimred/data.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dimred::news {

struct LoadOptions {
    bool log10 = false;  ///< base-10 instead of natural log for shares
};

struct OnlineNews {
    Dataset data;
    std::vector<std::string> feature_names;  // after dropping url and timedelta
};

/// Header names are trimmed before matching (the public file pads them with
/// spaces). Throws FormatError with the 1-based line number on a non-numeric
/// cell or ragged row, and when no `shares` column exists.
OnlineNews load_online_news(const std::filesystem::path& path, const LoadOptions& opts = {});

}  // namespace dimred::news
