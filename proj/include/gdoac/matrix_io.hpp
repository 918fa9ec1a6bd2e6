#pragma once

#include <Eigen/Dense>
#include <string>

namespace gdoac {

// Plain-text matrix format shared by codebook export, received-signal dumps
// and the detect subcommand:
//   line 1: "<rows> <cols>"
//   lines 2..rows+1: one row per line, cols decimal values ("%.17g", so
//   doubles round-trip exactly)
// Parse failures throw std::runtime_error naming the file and line.
Eigen::MatrixXd read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Eigen::MatrixXd& m);

std::string format_matrix(const Eigen::MatrixXd& m);
Eigen::MatrixXd parse_matrix(const std::string& text, const std::string& name);

// Writes to "<path>.tmp" then renames, so readers never observe a partial
// file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string format_double(double v);

}  // namespace gdoac
