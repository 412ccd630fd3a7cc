#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "maxvolkit/errors.hpp"
#include "maxvolkit/matrix.hpp"

namespace maxvolkit {
namespace detail {

inline std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '%') continue;
        return true;
    }
    return false;
}

}  // namespace detail

/// Reader for Matrix Market files: "array" and "coordinate" formats with
/// "real" or "integer" fields and general/symmetric/skew-symmetric symmetry.
/// Coordinate files are densified. "pattern" and "complex" fields are
/// rejected.
inline DenseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("matrix market: empty input", 1);
    ++line_no;

    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (detail::lowercase(banner) != "%%matrixmarket")
        throw ParseError("matrix market: missing %%MatrixMarket banner", line_no);
    if (detail::lowercase(object) != "matrix")
        throw ParseError("matrix market: unsupported object '" + object + "'", line_no);
    format = detail::lowercase(format);
    field = detail::lowercase(field);
    symmetry = detail::lowercase(symmetry);

    if (format != "array" && format != "coordinate")
        throw ParseError("matrix market: unsupported format '" + format + "'", line_no);
    if (field == "pattern" || field == "complex")
        throw ParseError("matrix market: field '" + field + "' is not supported, use real or integer",
                         line_no);
    if (field != "real" && field != "integer")
        throw ParseError("matrix market: unknown field '" + field + "'", line_no);
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
        throw ParseError("matrix market: unsupported symmetry '" + symmetry + "'", line_no);

    if (!detail::next_content_line(in, line, line_no))
        throw ParseError("matrix market: missing size line", line_no);
    std::istringstream size_line(line);
    long n_rows = 0, n_cols = 0, n_entries = 0;
    if (!(size_line >> n_rows >> n_cols)) throw ParseError("matrix market: bad size line", line_no);
    if (format == "coordinate" && !(size_line >> n_entries))
        throw ParseError("matrix market: coordinate size line needs an entry count", line_no);
    if (n_rows < 1 || n_cols < 1)
        throw ParseError("matrix market: dimensions must be positive", line_no);
    if (symmetry != "general" && n_rows != n_cols)
        throw ParseError("matrix market: symmetric storage requires a square matrix", line_no);

    DenseMatrix a = DenseMatrix::Zero(n_rows, n_cols);

    auto check_value = [&line_no](double v) {
        if (!std::isfinite(v)) throw ParseError("matrix market: non-finite value", line_no);
        return v;
    };

    if (format == "array") {
        // Array files store entries in column-major order; symmetric variants
        // store only the (strictly, for skew) lower triangle.
        std::vector<std::pair<Index, Index>> slots;
        for (Index j = 0; j < n_cols; ++j) {
            Index i0 = symmetry == "general" ? 0 : (symmetry == "symmetric" ? j : j + 1);
            for (Index i = i0; i < n_rows; ++i) slots.emplace_back(i, j);
        }
        std::size_t filled = 0;
        while (filled < slots.size()) {
            if (!detail::next_content_line(in, line, line_no))
                throw ParseError("matrix market: unexpected end of file, expected " +
                                     std::to_string(slots.size()) + " values",
                                 line_no);
            std::istringstream values(line);
            double v = 0.0;
            while (values >> v) {
                if (filled == slots.size())
                    throw ParseError("matrix market: more values than expected", line_no);
                const auto [i, j] = slots[filled++];
                a(i, j) = check_value(v);
                if (symmetry == "symmetric") a(j, i) = a(i, j);
                if (symmetry == "skew-symmetric") a(j, i) = -a(i, j);
            }
            if (!values.eof()) throw ParseError("matrix market: malformed value", line_no);
        }
    } else {
        for (long e = 0; e < n_entries; ++e) {
            if (!detail::next_content_line(in, line, line_no))
                throw ParseError("matrix market: unexpected end of file, expected " +
                                     std::to_string(n_entries) + " entries",
                                 line_no);
            std::istringstream entry(line);
            long i = 0, j = 0;
            double v = 0.0;
            if (!(entry >> i >> j >> v))
                throw ParseError("matrix market: malformed coordinate entry", line_no);
            if (i < 1 || i > n_rows || j < 1 || j > n_cols)
                throw ParseError("matrix market: index out of range", line_no);
            a(i - 1, j - 1) = check_value(v);
            if (symmetry == "symmetric") a(j - 1, i - 1) = v;
            if (symmetry == "skew-symmetric") a(j - 1, i - 1) = -v;
        }
    }
    return a;
}

inline DenseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path);
    return read_matrix_market(in);
}

/// Writes dense array format ("%%MatrixMarket matrix array real general")
/// with round-trip-exact decimal formatting.
inline void write_matrix_market(std::ostream& out, const DenseMatrix& a) {
    require_finite(a, "write_matrix_market");
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << " " << a.cols() << "\n";
    char buf[64];
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
            out << buf << "\n";
        }
    }
}

inline void write_matrix_market(const std::string& path, const DenseMatrix& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open matrix file for writing: " + path);
    write_matrix_market(out, a);
}

}  // namespace maxvolkit
