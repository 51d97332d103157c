#include "glab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "glab/common.hpp"
#include "glab/csv.hpp"
#include "glab/quadrature.hpp"

namespace glab {

double StepFunction::l2_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s / n);
}

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency) {
    const Eigen::Index n = adjacency.rows();
    if (adjacency.cols() != n) throw ContractError("laplacian: adjacency not square");
    Eigen::MatrixXd lap = -adjacency;
    for (Eigen::Index i = 0; i < n; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) off += adjacency(i, j);
        lap(i, i) = off;
    }
    return lap;
}

std::vector<double> spectrum(const Eigen::MatrixXd& lap) {
    const Eigen::Index n = lap.rows();
    if (lap.cols() != n) throw ContractError("spectrum: matrix not square");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (std::abs(lap(i, j) - lap(j, i)) > 1e-12)
                throw ContractError("spectrum: input asymmetric beyond 1e-12");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ContractError("spectrum: eigensolver failed");
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(ev.begin(), ev.end());
    for (double& v : ev)
        if (v < 0.0 && v > -1e-10) v = 0.0;
    return ev;
}

SpectrumSummary summarize(const Eigen::MatrixXd& adjacency) {
    const int n = static_cast<int>(adjacency.rows());
    if (n < 1) throw ContractError("summarize: empty adjacency");
    SpectrumSummary s;
    s.n = n;
    s.lambdas = spectrum(laplacian(adjacency));
    s.mus.resize(n);
    for (int i = 0; i < n; ++i) s.mus[i] = s.lambdas[i] / n;
    s.degrees.resize(n);
    for (int i = 0; i < n; ++i) s.degrees[i] = adjacency.row(i).sum();
    s.degrees_sorted = s.degrees;
    std::sort(s.degrees_sorted.begin(), s.degrees_sorted.end());
    s.spectral_gap = n > 1 ? s.mus[1] : 0.0;
    return s;
}

StepFunctions step_functions(const SpectrumSummary& summary) {
    StepFunctions out;
    out.mu = {summary.n, summary.mus};
    out.degree.n = out.degree_sorted.n = summary.n;
    out.degree.values.resize(summary.n);
    out.degree_sorted.values.resize(summary.n);
    for (int i = 0; i < summary.n; ++i) {
        out.degree.values[i] = summary.degrees[i] / summary.n;
        out.degree_sorted.values[i] = summary.degrees_sorted[i] / summary.n;
    }
    return out;
}

double step_l2_distance(const StepFunction& a, const StepFunction& b) {
    if (a.n != b.n || a.values.size() != b.values.size())
        throw ContractError("step_l2_distance: partition sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        s += d * d;
    }
    return std::sqrt(s / a.n);
}

double step_to_function_l2(const StepFunction& step,
                           const std::function<double(double)>& f,
                           std::span<const double> panel_points) {
    const int n = step.n;
    if (n <= 0) throw ContractError("step_to_function_l2: empty step function");
    QuadratureOptions opts;
    opts.order = 8;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / n;
        const double b = static_cast<double>(i + 1) / n;
        const double v = step.values[i];
        total += integrate([&f, v](double x) {
                               const double d = v - f(x);
                               return d * d;
                           },
                           a, b, panel_points, opts);
    }
    return std::sqrt(std::max(total, 0.0));
}

namespace {

struct IntervalMoments {
    std::vector<double> d1;  // integral of d over B_i
    std::vector<double> d2;  // integral of d^2 over B_i
};

IntervalMoments interval_degree_moments(const Graphon& graphon, int n) {
    IntervalMoments m;
    m.d1.resize(n);
    m.d2.resize(n);
    QuadratureOptions opts;
    opts.order = 8;
    const auto& panels = graphon.quadrature_panels();
    for (int i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / n;
        const double b = static_cast<double>(i + 1) / n;
        m.d1[i] = integrate([&graphon](double x) { return graphon.degree(x); }, a,
                            b, panels, opts);
        m.d2[i] = integrate(
            [&graphon](double x) {
                const double d = graphon.degree(x);
                return d * d;
            },
            a, b, panels, opts);
    }
    return m;
}

double assignment_cost(const std::vector<int>& perm,
                       std::span<const double> mus, const IntervalMoments& m) {
    const int n = static_cast<int>(mus.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mu = mus[perm[i]];
        total += mu * mu / n - 2.0 * mu * m.d1[i] + m.d2[i];
    }
    return std::sqrt(std::max(total, 0.0));
}

} // namespace

PermutationDistance optimal_permutation_distance(std::span<const double> sorted_mus,
                                                 const Graphon& graphon) {
    const int n = static_cast<int>(sorted_mus.size());
    if (n < 1) throw ContractError("optimal_permutation_distance: empty input");
    if (!std::is_sorted(sorted_mus.begin(), sorted_mus.end()))
        throw ContractError("optimal_permutation_distance: mus must be sorted");

    const IntervalMoments m = interval_degree_moments(graphon, n);
    std::vector<int> by_mass(n);
    std::iota(by_mass.begin(), by_mass.end(), 0);
    std::stable_sort(by_mass.begin(), by_mass.end(),
                     [&m](int a, int b) { return m.d1[a] < m.d1[b]; });

    PermutationDistance out;
    out.permutation.resize(n);
    for (int rank = 0; rank < n; ++rank)
        out.permutation[by_mass[rank]] = rank;
    out.distance = assignment_cost(out.permutation, sorted_mus, m);
    return out;
}

Assignment assignment_min_cost(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) throw ContractError("assignment_min_cost: empty cost matrix");
    for (const auto& row : cost)
        if (static_cast<int>(row.size()) != n)
            throw ContractError("assignment_min_cost: cost matrix not square");

    // Jonker-Volgenant style shortest augmenting paths with potentials,
    // 1-based internally.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    Assignment out;
    out.row_to_col.assign(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) out.row_to_col[p[j] - 1] = j - 1;
    out.total_cost = 0.0;
    for (int i = 0; i < n; ++i) out.total_cost += cost[i][out.row_to_col[i]];
    return out;
}

PermutationDistance optimal_permutation_distance_oracle(
    std::span<const double> sorted_mus, const Graphon& graphon) {
    const int n = static_cast<int>(sorted_mus.size());
    const IntervalMoments m = interval_degree_moments(graphon, n);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double mu = sorted_mus[j];
            cost[i][j] = mu * mu / n - 2.0 * mu * m.d1[i] + m.d2[i];
        }
    const Assignment a = assignment_min_cost(cost);

    PermutationDistance out;
    out.permutation = a.row_to_col;
    out.distance = assignment_cost(out.permutation, sorted_mus, m);
    return out;
}

StepGraphonNorms step_graphon_norms(const Eigen::MatrixXd& adjacency) {
    const Eigen::Index n = adjacency.rows();
    if (adjacency.cols() != n)
        throw ContractError("step_graphon_norms: adjacency not square");
    StepGraphonNorms out;
    out.frobenius = adjacency.norm();
    // ||W_G||_2^2 = sum a_ij^2 / N^2; the direct step-graphon integral.
    out.l2_step = std::sqrt(adjacency.squaredNorm() / static_cast<double>(n * n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(adjacency,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ContractError("step_graphon_norms: eigensolver failed");
    const auto& ev = es.eigenvalues();
    out.op_norm_step =
        std::max(std::abs(ev(0)), std::abs(ev(n - 1))) / static_cast<double>(n);
    return out;
}

SpectralGapPair spectral_gap_pair(const Graphon& graphon,
                                  const WeightedGraph& weighted,
                                  const SimpleGraph& simple) {
    if (weighted.n != simple.n)
        throw ContractError("spectral_gap_pair: graphs have different sizes");
    SpectralGapPair out;
    out.mu2_bar = summarize(weighted).spectral_gap;
    out.mu2 = summarize(simple).spectral_gap;
    out.eta = graphon.eta();
    out.lower_bound_holds = out.mu2_bar >= out.eta - 1e-10;
    return out;
}

void write_spectrum_csv(std::ostream& out, const SpectrumSummary& summary,
                        uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "index,lambda,mu,degree,degree_sorted\n";
    for (int i = 0; i < summary.n; ++i)
        out << (i + 1) << ',' << format_double(summary.lambdas[i]) << ','
            << format_double(summary.mus[i]) << ','
            << format_double(summary.degrees[i]) << ','
            << format_double(summary.degrees_sorted[i]) << '\n';
}

void write_step_csv(std::ostream& out, const StepFunction& step,
                    uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "i,left_endpoint,value\n";
    for (int i = 0; i < step.n; ++i)
        out << (i + 1) << ',' << format_double(static_cast<double>(i) / step.n)
            << ',' << format_double(step.values[i]) << '\n';
}

} // namespace glab
