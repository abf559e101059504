#ifndef RATECODE_MATRIX_IO_HPP_
#define RATECODE_MATRIX_IO_HPP_

#include <string>
#include <vector>

#include "ratecode/types.hpp"

namespace ratecode {

/// Reads a CSV sample file: one sample per row, comma separator, '.' decimal
/// point. The returned matrix is transposed to the column-sample convention
/// (n rows, m columns). Ragged rows and non-numeric cells raise ParseError
/// with 1-based row/column positions.
Matrix load_matrix(const std::string& path, bool has_header = false);

/// Writes samples one per row using the shortest decimal representation that
/// round-trips to the same double.
void save_matrix(const std::string& path, const Matrix& samples);

/// Integer labels, one per row.
std::vector<int> load_labels(const std::string& path, bool has_header = false);
void save_labels(const std::string& path, const std::vector<int>& labels);

/// Two-column x,y CSV used for plot data.
void save_curve(const std::string& path, const std::vector<double>& x,
                const std::vector<double>& y);

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double value);

}  // namespace ratecode

#endif  // RATECODE_MATRIX_IO_HPP_
