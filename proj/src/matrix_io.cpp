#include "gdoac/matrix_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gdoac {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::string out;
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ' ';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void parse_fail(const std::string& name, int line,
                             const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Eigen::MatrixXd parse_matrix(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) parse_fail(name, 1, "empty input");
  ++lineno;
  long rows = 0, cols = 0;
  {
    std::istringstream hdr(line);
    if (!(hdr >> rows >> cols) || rows < 0 || cols < 0) {
      parse_fail(name, lineno, "expected header \"<rows> <cols>\"");
    }
    std::string extra;
    if (hdr >> extra) parse_fail(name, lineno, "trailing tokens in header");
  }

  Eigen::MatrixXd m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      parse_fail(name, lineno + 1, "unexpected end of input, expected row " +
                                       std::to_string(r + 1));
    }
    ++lineno;
    std::istringstream row(line);
    for (long c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!(row >> v)) {
        parse_fail(name, lineno,
                   "expected " + std::to_string(cols) + " values, failed at column " +
                       std::to_string(c + 1));
      }
      m(r, c) = v;
    }
    std::string extra;
    if (row >> extra) parse_fail(name, lineno, "trailing tokens in row");
  }
  return m;
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), path);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(tmp + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  write_text_atomic(path, format_matrix(m));
}

}  // namespace gdoac
