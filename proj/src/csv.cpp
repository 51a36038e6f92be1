#include "dimred/csv.hpp"

#include "dimred/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace dimred::csv {

bool Reader::next(Row& row) {
    row.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    record_line_ = line_;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    for (;;) {
        const int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
            if (quoted) throw FormatError("unterminated quoted field", record_line_);
            row.push_back(std::move(field));
            return true;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                    after_quote = true;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
            after_quote = false;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && in_.peek() == '\n') in_.get();
            ++line_;
            row.push_back(std::move(field));
            return true;
        } else if (ch == '"' && field.empty() && !after_quote) {
            quoted = true;
        } else {
            field.push_back(ch);
        }
    }
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << quote(row[i]);
    }
    out << '\n';
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty() || s == "NA") return std::numeric_limits<double>::quiet_NaN();
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    Reader r(in);
    Table t;
    if (!r.next(t.header)) throw FormatError("missing header row in " + path.string(), 1);
    Row row;
    while (r.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        t.rows.push_back(row);
    }
    return t;
}

void write_file(const std::filesystem::path& path, const Table& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_row(out, t.header);
    for (const auto& r : t.rows) write_row(out, r);
    if (!out) throw Error("write failed for " + path.string());
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const Row& header) {
    if (static_cast<Eigen::Index>(header.size()) != m.cols()) throw DimensionError("header width differs from matrix");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_row(out, header);
    std::string line;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        line.clear();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) line.push_back(',');
            line += format_double(m(i, j));
        }
        line.push_back('\n');
        out << line;
    }
    if (!out) throw Error("write failed for " + path.string());
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path, Row* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    Reader r(in);
    Row head;
    if (!r.next(head)) throw FormatError("missing header row in " + path.string(), 1);
    std::vector<double> values;
    Row row;
    Eigen::Index rows = 0;
    while (r.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != head.size()) throw FormatError("ragged row in " + path.string(), r.line());
        for (const auto& cell : row) {
            const auto v = parse_double(cell);
            if (!v) throw FormatError("non-numeric cell '" + cell + "' in " + path.string(), r.line());
            values.push_back(*v);
        }
        ++rows;
    }
    const auto cols = static_cast<Eigen::Index>(head.size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
    if (header) *header = std::move(head);
    return m;
}

Row numbered_header(const std::string& prefix, Eigen::Index count) {
    Row h;
    h.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index j = 0; j < count; ++j) h.push_back(prefix + std::to_string(j + 1));
    return h;
}

}  // namespace dimred::csv
