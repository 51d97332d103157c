#include "glab/operator_spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "glab/common.hpp"

namespace glab {

namespace {

Eigen::MatrixXd midpoint_kernel_matrix(const Graphon& graphon, int m) {
    Eigen::MatrixXd k(m, m);
    for (int i = 0; i < m; ++i) {
        const double xi = (i + 0.5) / m;
        for (int j = 0; j <= i; ++j) {
            const double v = graphon(xi, (j + 0.5) / m) / m;
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

double spectral_norm(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ContractError("eigensolver failed on kernel matrix");
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

} // namespace

OperatorSpectrumEstimate operator_norm_estimate(const Graphon& graphon,
                                                int initial_resolution,
                                                int max_resolution, double tol) {
    if (initial_resolution < 16)
        throw ContractError("operator_norm_estimate: resolution must be >= 16");
    if (max_resolution < initial_resolution)
        throw ContractError("operator_norm_estimate: max_resolution below initial");

    OperatorSpectrumEstimate out;
    int m = initial_resolution;
    double prev = spectral_norm(midpoint_kernel_matrix(graphon, m));
    out.resolution = m;
    out.operator_norm = prev;
    out.converged = false;
    out.achieved_tol = std::numeric_limits<double>::infinity();
    while (2 * m <= max_resolution) {
        m *= 2;
        const double cur = spectral_norm(midpoint_kernel_matrix(graphon, m));
        out.resolution = m;
        out.operator_norm = cur;
        out.achieved_tol = std::abs(cur - prev);
        if (out.achieved_tol < tol) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    return out;
}

OperatorSpectrumEstimate graphon_laplacian_spectrum(const Graphon& graphon,
                                                    int resolution,
                                                    double separation_tol) {
    if (resolution < 64)
        throw ContractError("graphon_laplacian_spectrum: resolution must be >= 64");
    if (!(separation_tol > 0.0))
        throw ContractError("graphon_laplacian_spectrum: separation_tol must be > 0");

    const Eigen::MatrixXd k = midpoint_kernel_matrix(graphon, resolution);
    // Discretized degrees are the row sums of K, which keeps the constant
    // eigenvector exactly in the kernel of diag(d) - K.
    const Eigen::VectorXd d = k.rowwise().sum();
    Eigen::MatrixXd lap = -k;
    lap.diagonal() += d;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ContractError("eigensolver failed on graphon Laplacian");

    OperatorSpectrumEstimate out;
    out.resolution = resolution;
    out.operator_norm = spectral_norm(k);
    out.laplacian_eigenvalues.assign(es.eigenvalues().data(),
                                     es.eigenvalues().data() + resolution);
    out.essential_range = {d.minCoeff(), d.maxCoeff()};
    for (double ev : out.laplacian_eigenvalues) {
        if (ev < out.essential_range.first - separation_tol)
            out.isolated_below.push_back(ev);
        else if (ev > out.essential_range.second + separation_tol)
            out.isolated_above.push_back(ev);
    }

    // Spectral-gap limit: delta_W together with the isolated eigenvalues,
    // dropping one multiplicity of the trivial zero.
    std::vector<double> candidates = out.isolated_below;
    candidates.insert(candidates.end(), out.isolated_above.begin(),
                      out.isolated_above.end());
    if (!candidates.empty()) {
        std::size_t zero_idx = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (std::abs(candidates[i]) < std::abs(candidates[zero_idx])) zero_idx = i;
        candidates.erase(candidates.begin() + zero_idx);
    }
    candidates.push_back(graphon.delta());
    std::sort(candidates.begin(), candidates.end());
    out.gap_limit_candidates = std::move(candidates);
    out.spectral_gap_limit = out.gap_limit_candidates.front();
    return out;
}

} // namespace glab
