#ifndef VOLCOL_IO_HPP
#define VOLCOL_IO_HPP

#include <iosfwd>
#include <string>

#include "volcol/types.hpp"

namespace volcol {

// CSV: one row per line, decimal doubles, no header.
// Binary: "VCOL1", u64 rows, u64 cols, then rows*cols f64 in row-major order,
// all little-endian.
enum class MatrixFormat { Csv, Binary };

MatrixFormat parse_format(const std::string& name);

Matrix<double> read_matrix_csv(std::istream& in);
Matrix<double> read_matrix_binary(std::istream& in);
void write_matrix_csv(std::ostream& out, const Matrix<double>& X);
void write_matrix_binary(std::ostream& out, const Matrix<double>& X);

/// Detects the format from the magic bytes.
Matrix<double> read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Matrix<double>& X, MatrixFormat format);

/// Shortest decimal text that parses back to exactly v.
std::string format_double(double v);

}  // namespace volcol

#endif  // VOLCOL_IO_HPP
