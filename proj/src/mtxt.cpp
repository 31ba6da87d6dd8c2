#include "ortho/mtxt.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ortho::mtxt {

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw IoError("mtxt: bad number '" + tok + "'");
  return v;
}

template <class T>
Matrix<T> read_body(std::istream& is, Index rows, Index cols) {
  Matrix<T> m(rows, cols);
  std::string line;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw IoError("mtxt: expected " + std::to_string(rows) + " rows");
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      --i;
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    for (Index j = 0; j < cols; ++j) {
      if constexpr (is_complex_v<T>) {
        std::string im;
        if (!(ls >> tok >> im)) throw IoError("mtxt: short row " + std::to_string(i));
        m(i, j) = cplx(parse_double(tok), parse_double(im));
      } else {
        if (!(ls >> tok)) throw IoError("mtxt: short row " + std::to_string(i));
        m(i, j) = parse_double(tok);
      }
    }
    if (ls >> tok) throw IoError("mtxt: too many entries in row " + std::to_string(i));
  }
  return m;
}

}  // namespace

void write(std::ostream& os, const Matrix<double>& m) {
  os << m.rows() << ' ' << m.cols() << " real\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      put(os, m(i, j));
    }
    os << '\n';
  }
}

void write(std::ostream& os, const Matrix<cplx>& m) {
  os << m.rows() << ' ' << m.cols() << " complex\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      put(os, m(i, j).real());
      os << ' ';
      put(os, m(i, j).imag());
    }
    os << '\n';
  }
}

void write_file(const std::filesystem::path& path, const AnyMatrix& m) {
  std::ofstream os(path);
  if (!os) throw IoError("mtxt: cannot open '" + path.string() + "' for writing");
  std::visit([&](const auto& mat) { write(os, mat); }, m);
  if (!os) throw IoError("mtxt: write failed for '" + path.string() + "'");
}

AnyMatrix read(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("mtxt: missing header");
  std::istringstream hs(header);
  long long rows = -1, cols = -1;
  std::string field, extra;
  if (!(hs >> rows >> cols >> field) || rows < 0 || cols < 0) throw IoError("mtxt: malformed header '" + header + "'");
  if (hs >> extra) throw IoError("mtxt: trailing tokens in header");
  if (field == "real") return read_body<double>(is, rows, cols);
  if (field == "complex") return read_body<cplx>(is, rows, cols);
  throw IoError("mtxt: unknown field '" + field + "'");
}

AnyMatrix read_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("mtxt: cannot open '" + path.string() + "'");
  return read(is);
}

template <>
Matrix<double> read_as<double>(const std::filesystem::path& path) {
  auto any = read_file(path);
  if (auto* m = std::get_if<Matrix<double>>(&any)) return std::move(*m);
  throw IoError("mtxt: '" + path.string() + "' is complex, expected real");
}

template <>
Matrix<cplx> read_as<cplx>(const std::filesystem::path& path) {
  auto any = read_file(path);
  if (auto* m = std::get_if<Matrix<cplx>>(&any)) return std::move(*m);
  return to_complex(std::get<Matrix<double>>(any));
}

}  // namespace ortho::mtxt
