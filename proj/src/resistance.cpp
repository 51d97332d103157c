#include "glab/resistance.hpp"

#include <cmath>
#include <ostream>

#include "glab/common.hpp"
#include "glab/csv.hpp"
#include "glab/quadrature.hpp"

namespace glab {

bool is_connected(const SpectrumSummary& summary) {
    return summary.n >= 2 && summary.lambdas[1] > 1e-10 * summary.n;
}

double r_ave_spectral(const SpectrumSummary& summary) {
    if (!is_connected(summary))
        throw ContractError(
            "graph is disconnected (lambda_2 = " +
            format_double(summary.n >= 2 ? summary.lambdas[1] : 0.0) +
            "), effective resistance is undefined");
    double sum = 0.0;
    for (int i = 1; i < summary.n; ++i) sum += 1.0 / summary.lambdas[i];
    return sum / summary.n;
}

double r_ave_pseudoinverse(const Eigen::MatrixXd& laplacian) {
    const int n = static_cast<int>(laplacian.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian);
    if (es.info() != Eigen::Success)
        throw ContractError("r_ave_pseudoinverse: eigensolver failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double thr = 1e-10 * n;
    int kernel_dim = 0;
    for (int i = 0; i < n; ++i)
        if (ev(i) <= thr) ++kernel_dim;
    if (kernel_dim != 1)
        throw ContractError("graph is disconnected (Laplacian kernel dimension " +
                            std::to_string(kernel_dim) + ")");

    Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if (ev(i) > thr) inv(i) = 1.0 / ev(i);
    const Eigen::MatrixXd pinv =
        es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            sum += pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j);
    // unordered pairs counted once; the 1/(2N^2) normalization doubles them
    return 2.0 * sum / (2.0 * static_cast<double>(n) * n);
}

double r_ave_graphon(const Graphon& graphon, int n) {
    if (n < 1) throw ContractError("r_ave_graphon: n must be >= 1");
    if (!(graphon.delta() > 0.0))
        throw ContractError("r_ave_graphon: requires degree minimum delta_W > 0");
    const double integral = integrate(
        [&graphon](double x) { return 1.0 / graphon.degree(x); }, 0.0, 1.0,
        graphon.quadrature_panels());
    return integral / n;
}

ResistanceReport resistance_report(const Graphon& graphon,
                                   const SimpleGraph& simple,
                                   const SpectrumSummary& summary) {
    if (simple.n != summary.n)
        throw ContractError("resistance_report: summary does not match graph");
    ResistanceReport r;
    r.connected = is_connected(summary);
    if (!r.connected)
        throw ContractError("resistance_report: graph is disconnected");
    r.r_spectral = r_ave_spectral(summary);
    r.r_pseudoinverse = r_ave_pseudoinverse(laplacian(simple.adjacency));
    r.r_graphon = r_ave_graphon(graphon, simple.n);
    r.abs_error = std::abs(r.r_spectral - r.r_graphon);
    r.rel_error = r.abs_error / r.r_spectral;
    return r;
}

void write_resistance_header(std::ostream& out, uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "n,trial,r_spectral,r_pinv,r_graphon,abs_err,rel_err,connected\n";
}

void write_resistance_row(std::ostream& out, int n, int trial,
                          const ResistanceReport& r) {
    out << n << ',' << trial << ',' << format_double(r.r_spectral) << ','
        << format_double(r.r_pseudoinverse) << ','
        << format_double(r.r_graphon) << ',' << format_double(r.abs_error)
        << ',' << format_double(r.rel_error) << ',' << r.connected << '\n';
}

} // namespace glab
