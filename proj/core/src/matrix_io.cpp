#include "ratecode/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace ratecode {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t column) {
    const std::string t = trimmed(cell);
    double value = 0.0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("non-numeric cell '" + t + "' at row " + std::to_string(row) +
                             ", column " + std::to_string(column),
                         row, column);
    return value;
}

std::vector<std::vector<double>> read_rows(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t file_row = 0;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        ++file_row;
        if (file_row == 1 && has_header) continue;
        if (trimmed(line).empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c)
            row.push_back(parse_cell(fields[c], file_row, c + 1));
        if (expected == 0) {
            expected = row.size();
        } else if (row.size() != expected) {
            throw ParseError("row " + std::to_string(file_row) + " has " +
                                 std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(expected),
                             file_row, row.size());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("'" + path + "' contains no data rows");
    return rows;
}

}  // namespace

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) throw InvalidInput("failed to format a double");
    return std::string(buffer, ptr);
}

Matrix load_matrix(const std::string& path, bool has_header) {
    const auto rows = read_rows(path, has_header);
    const auto m = static_cast<Index>(rows.size());
    const auto n = static_cast<Index>(rows.front().size());
    Matrix samples(n, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j)
            samples(j, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return samples;
}

void save_matrix(const std::string& path, const Matrix& samples) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    for (Index i = 0; i < samples.cols(); ++i) {
        for (Index j = 0; j < samples.rows(); ++j) {
            if (j > 0) out << ',';
            out << format_double(samples(j, i));
        }
        out << '\n';
    }
    if (!out) throw InvalidInput("failed while writing '" + path + "'");
}

std::vector<int> load_labels(const std::string& path, bool has_header) {
    const auto rows = read_rows(path, has_header);
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 1)
            throw ParseError("label row " + std::to_string(i + 1) + " must have one field",
                             i + 1, rows[i].size());
        const double v = rows[i][0];
        const int label = static_cast<int>(v);
        if (static_cast<double>(label) != v)
            throw ParseError("label at row " + std::to_string(i + 1) + " is not an integer",
                             i + 1, 1);
        labels.push_back(label);
    }
    return labels;
}

void save_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    for (int label : labels) out << label << '\n';
    if (!out) throw InvalidInput("failed while writing '" + path + "'");
}

void save_curve(const std::string& path, const std::vector<double>& x,
                const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidInput("curve columns differ in length");
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
    if (!out) throw InvalidInput("failed while writing '" + path + "'");
}

}  // namespace ratecode
