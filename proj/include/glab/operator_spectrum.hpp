#pragma once

#include <utility>
#include <vector>

#include "glab/graphon.hpp"

namespace glab {

/// Nystrom estimate of kernel-operator quantities on the midpoint grid
/// x_m = (m - 1/2)/M.
struct OperatorSpectrumEstimate {
    int resolution = 0;
    double operator_norm = 0.0;
    /// Eigenvalues of the discretized graphon Laplacian, sorted ascending.
    std::vector<double> laplacian_eigenvalues;
    /// Range of the discretized degree values (essential spectrum).
    std::pair<double, double> essential_range{0.0, 0.0};
    /// Eigenvalues strictly below essential_range.first - separation_tol,
    /// respectively above essential_range.second + separation_tol.
    std::vector<double> isolated_below;
    std::vector<double> isolated_above;
    /// {delta_W} together with the isolated eigenvalues, one multiplicity of
    /// the trivial zero removed: the candidates for the limit of the
    /// normalized spectral gap of sampled weighted graphs.
    std::vector<double> gap_limit_candidates;
    /// min of gap_limit_candidates.
    double spectral_gap_limit = 0.0;
    bool converged = true;
    double achieved_tol = 0.0;
};

/// Spectral norm of the midpoint kernel matrix K_{mk} = W(x_m,x_k)/M,
/// refined by doubling M until successive estimates differ by less than
/// `tol` or `max_resolution` is reached (converged=false in that case).
OperatorSpectrumEstimate operator_norm_estimate(const Graphon& graphon,
                                                int initial_resolution = 64,
                                                int max_resolution = 2048,
                                                double tol = 1e-5);

/// Eigenvalues of diag(row sums of K) - K at resolution M, classified
/// against the discretized essential range.
OperatorSpectrumEstimate graphon_laplacian_spectrum(const Graphon& graphon,
                                                    int resolution,
                                                    double separation_tol = 1e-3);

} // namespace glab
