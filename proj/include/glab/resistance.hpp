#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>

#include "glab/graphon.hpp"
#include "glab/sampler.hpp"
#include "glab/spectral.hpp"

namespace glab {

/// Connectivity via the spectral gap: lambda_2 > 1e-10 * N.
bool is_connected(const SpectrumSummary& summary);

/// R^ave = (1/N) sum_{i>=2} 1/lambda_i. Throws on disconnected input.
double r_ave_spectral(const SpectrumSummary& summary);

/// Independent oracle: Moore-Penrose pseudoinverse of L, pairwise effective
/// resistances L+_ii + L+_jj - 2 L+_ij averaged with the 1/(2N^2) factor.
double r_ave_pseudoinverse(const Eigen::MatrixXd& laplacian);

/// Graphon estimate (1/N) * integral of 1/d(x). Requires delta_W > 0.
double r_ave_graphon(const Graphon& graphon, int n);

struct ResistanceReport {
    double r_spectral = 0.0;
    double r_pseudoinverse = 0.0;
    double r_graphon = 0.0;
    double abs_error = 0.0;  // |r_spectral - r_graphon|
    double rel_error = 0.0;  // abs_error / r_spectral
    bool connected = false;
};

/// All three routes plus errors. Throws on a disconnected graph; no partial
/// report is produced.
ResistanceReport resistance_report(const Graphon& graphon,
                                   const SimpleGraph& simple,
                                   const SpectrumSummary& summary);

void write_resistance_header(std::ostream& out, uint64_t master_seed);
void write_resistance_row(std::ostream& out, int n, int trial,
                          const ResistanceReport& r);

} // namespace glab
