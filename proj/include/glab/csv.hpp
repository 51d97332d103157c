#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace glab {

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double x);

/// First line of every CSV artifact: `# graphonlab <version>, master_seed=<s>`.
void write_csv_preamble(std::ostream& out, uint64_t master_seed);

Eigen::MatrixXd load_dense_csv(const std::string& path);
void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m);

} // namespace glab
