#pragma once

// RFC-4180 reading and writing. Missing numeric cells are written as NA.

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dimred::csv {

using Row = std::vector<std::string>;

/// Streams records; quoted fields may contain commas, doubled quotes and
/// line breaks. Accepts LF or CRLF record terminators.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}
    /// False at end of input. Throws FormatError on an unterminated quote.
    bool next(Row& row);
    /// 1-based physical line on which the last returned record started.
    long long line() const { return record_line_; }

private:
    std::istream& in_;
    long long line_ = 1;
    long long record_line_ = 0;
};

void write_row(std::ostream& out, const Row& row);
std::string quote(std::string_view field);

/// Shortest text that reads back to the same double ("%.17g"); NaN -> "NA".
std::string format_double(double v);
/// Strict parse of the whole field; "NA" and "" give NaN; nullopt on garbage.
std::optional<double> parse_double(std::string_view s);

struct Table {
    Row header;
    std::vector<Row> rows;
};

Table read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Table& t);

/// Numeric matrix with a header row. Throws FormatError with the line number
/// on a ragged row or a non-numeric cell.
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const Row& header);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path, Row* header = nullptr);

/// Header of the form prefix1, prefix2, ...
Row numbered_header(const std::string& prefix, Eigen::Index count);

}  // namespace dimred::csv
