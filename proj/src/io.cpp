#include "volcol/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace volcol {

namespace {

constexpr std::array<char, 5> kMagic = {'V', 'C', 'O', 'L', '1'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) throw ParseError("truncated binary matrix");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(cell) + "'");
  if (!std::isfinite(v)) throw ParseError("line " + std::to_string(line) + ": non-finite entry");
  return v;
}

}  // namespace

MatrixFormat parse_format(const std::string& name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "bin") return MatrixFormat::Binary;
  throw InvalidArgumentError("unknown matrix format '" + name + "'");
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

Matrix<double> read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_cell(rest.substr(0, comma), lineno));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("line " + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix");
  Matrix<double> X(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return X;
}

Matrix<double> read_matrix_binary(std::istream& in) {
  std::array<char, 5> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ParseError("bad magic, expected VCOL1");
  const auto m = get_le<std::uint64_t>(in);
  const auto n = get_le<std::uint64_t>(in);
  if (m == 0 || n == 0 || m > (1u << 30) || n > (1u << 30)) throw ParseError("bad binary matrix dimensions");
  Matrix<double> X(static_cast<Index>(m), static_cast<Index>(n));
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) {
      X(i, j) = get_le<double>(in);
      if (!std::isfinite(X(i, j))) throw ParseError("non-finite entry");
    }
  return X;
}

void write_matrix_csv(std::ostream& out, const Matrix<double>& X) {
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      if (j) out << ',';
      out << format_double(X(i, j));
    }
    out << '\n';
  }
}

void write_matrix_binary(std::ostream& out, const Matrix<double>& X) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(X.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(X.cols()));
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) put_le<double>(out, X(i, j));
}

Matrix<double> read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::array<char, 5> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 5 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_matrix_binary(in) : read_matrix_csv(in);
}

void write_matrix(const std::string& path, const Matrix<double>& X, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  if (format == MatrixFormat::Binary)
    write_matrix_binary(out, X);
  else
    write_matrix_csv(out, X);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace volcol
