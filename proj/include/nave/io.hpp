#pragma once

#include "nave/core.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

/// Vector/matrix text format: first line `dims: r c` (or `dims: d` for a
/// vector), then whitespace-separated entries, one row per line.
namespace nave {

inline void write_matrix(std::ostream& os, const DenseMatrix& m) {
  os << "dims: " << m.rows() << ' ' << m.cols() << '\n';
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
}

inline void write_vector(std::ostream& os, const RealVector& v) {
  os << "dims: " << v.size() << '\n';
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    os << (i ? " " : "") << v[i];
  os << '\n';
}

namespace detail {
inline std::istringstream dims_line(std::istream& is, const char* what) {
  std::string line;
  do {
    if (!std::getline(is, line))
      throw InvalidInput(std::string(what) + ": missing dims header");
  } while (line.find_first_not_of(" \t\r") == std::string::npos);
  std::istringstream hdr(line);
  std::string tag;
  hdr >> tag;
  if (tag != "dims:")
    throw InvalidInput(std::string(what) + ": expected `dims:` header");
  return hdr;
}
}  // namespace detail

inline DenseMatrix read_matrix(std::istream& is) {
  std::istringstream hdr = detail::dims_line(is, "read_matrix");
  Eigen::Index r = 0, c = 0;
  hdr >> r >> c;
  if (c == 0) c = r;  // `dims: d` shorthand for a square matrix
  if (r <= 0 || c <= 0) throw InvalidInput("read_matrix: bad dims");
  DenseMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      if (!(is >> m(i, j)))
        throw InvalidInput("read_matrix: truncated entries");
  return m;
}

inline RealVector read_vector(std::istream& is) {
  std::istringstream hdr = detail::dims_line(is, "read_vector");
  Eigen::Index d = 0;
  hdr >> d;
  if (d <= 0) throw InvalidInput("read_vector: bad dims");
  RealVector v(d);
  for (Eigen::Index i = 0; i < d; ++i)
    if (!(is >> v[i])) throw InvalidInput("read_vector: truncated entries");
  return v;
}

inline DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file: " + path);
  return read_matrix(in);
}

}  // namespace nave
