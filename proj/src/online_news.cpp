#include "dimred/online_news.hpp"

#include "dimred/csv.hpp"
#include "dimred/errors.hpp"

#include <cmath>
#include <fstream>

namespace dimred::news {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

OnlineNews load_online_news(const std::filesystem::path& path, const LoadOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    csv::Reader reader(in);
    csv::Row header;
    if (!reader.next(header)) throw FormatError("empty file " + path.string(), 1);

    OnlineNews out;
    std::vector<std::size_t> feature_cols;
    std::ptrdiff_t shares_col = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string name = trim(header[j]);
        if (name == "url" || name == "timedelta") continue;
        if (name == "shares") {
            shares_col = static_cast<std::ptrdiff_t>(j);
            continue;
        }
        feature_cols.push_back(j);
        out.feature_names.push_back(name);
    }
    if (shares_col < 0) throw FormatError("no 'shares' column in " + path.string(), 1);

    std::vector<double> xs;
    std::vector<double> ys;
    csv::Row row;
    while (reader.next(row)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row.size() != header.size()) throw FormatError("ragged row in " + path.string(), reader.line());
        for (std::size_t j : feature_cols) {
            const auto v = csv::parse_double(row[j]);
            if (!v || std::isnan(*v))
                throw FormatError("non-numeric value '" + row[j] + "' in column " + out.feature_names[xs.size() % feature_cols.size()],
                                  reader.line());
            xs.push_back(*v);
        }
        const auto s = csv::parse_double(row[static_cast<std::size_t>(shares_col)]);
        if (!s || std::isnan(*s) || *s <= 0.0)
            throw FormatError("invalid shares value '" + row[static_cast<std::size_t>(shares_col)] + "'", reader.line());
        ys.push_back(opts.log10 ? std::log10(*s) : std::log(*s));
    }

    const auto n = static_cast<Index>(ys.size());
    const auto p = static_cast<Index>(feature_cols.size());
    out.data.x.resize(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) out.data.x(i, j) = xs[static_cast<std::size_t>(i * p + j)];
    out.data.y = Response::continuous(Eigen::Map<const Eigen::VectorXd>(ys.data(), n));
    return out;
}

}  // namespace dimred::news
