#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "glab/graphon.hpp"
#include "glab/sampler.hpp"

namespace glab {

/// Piecewise-constant function on the uniform partition
/// B_i = [(i-1)/N, i/N).
struct StepFunction {
    int n = 0;
    std::vector<double> values;

    double l2_norm() const;
};

/// Sorted Laplacian spectrum of a graph together with its degrees.
struct SpectrumSummary {
    int n = 0;
    std::vector<double> lambdas;         // ascending
    std::vector<double> mus;             // lambdas / n
    std::vector<double> degrees;         // node order, diagonal included
    std::vector<double> degrees_sorted;  // ascending
    double spectral_gap = 0.0;           // mus[1]
};

/// L = D - A with D the diagonal of row sums. The diagonal of A cancels, so
/// L(i,i) is accumulated as the off-diagonal row sum and every row sums to
/// zero exactly.
Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency);

/// Eigenvalues of a symmetric matrix, ascending, with negative roundoff
/// above -1e-10 clamped to zero. Rejects input that is asymmetric beyond
/// 1e-12.
std::vector<double> spectrum(const Eigen::MatrixXd& laplacian);

/// Full summary for a graph given by its adjacency matrix.
SpectrumSummary summarize(const Eigen::MatrixXd& adjacency);
inline SpectrumSummary summarize(const WeightedGraph& g) { return summarize(g.adjacency); }
inline SpectrumSummary summarize(const SimpleGraph& g) { return summarize(g.adjacency); }

struct StepFunctions {
    StepFunction mu;             // sorted normalized eigenvalues
    StepFunction degree;         // normalized degrees in node order
    StepFunction degree_sorted;  // normalized degrees ascending
};
StepFunctions step_functions(const SpectrumSummary& summary);

/// sqrt( (1/N) sum (a_i - b_i)^2 ); the L2 distance of two step functions on
/// the same partition.
double step_l2_distance(const StepFunction& a, const StepFunction& b);

/// L2 distance between a step function and an integrable f, by order-8
/// Gauss-Legendre per interval with extra panel splits at `panel_points`.
double step_to_function_l2(const StepFunction& step,
                           const std::function<double(double)>& f,
                           std::span<const double> panel_points = {});

struct PermutationDistance {
    double distance = 0.0;
    /// value placed on interval B_i is mus[permutation[i]]
    std::vector<int> permutation;
};

/// Minimum over all permutations pi of || mu^pi_N - d ||_2 for the graphon's
/// degree function. The cost decomposes as c_ij = mu_j^2/N - 2 mu_j D_i + E_i
/// with D_i, E_i the interval moments of d, so by the rearrangement
/// inequality sorted mus matched to intervals sorted by D_i is optimal.
PermutationDistance optimal_permutation_distance(std::span<const double> sorted_mus,
                                                 const Graphon& graphon);

/// Exact assignment solver (cubic augmenting-path), kept as the verification
/// oracle for the closed-form matching.
struct Assignment {
    std::vector<int> row_to_col;
    double total_cost = 0.0;
};
Assignment assignment_min_cost(const std::vector<std::vector<double>>& cost);

/// Same minimization as optimal_permutation_distance but through the exact
/// assignment solver on the full cost matrix.
PermutationDistance optimal_permutation_distance_oracle(
    std::span<const double> sorted_mus, const Graphon& graphon);

struct StepGraphonNorms {
    double frobenius = 0.0;      // ||A||_F
    double l2_step = 0.0;        // ||W_G||_2 = ||A||_F / N
    double op_norm_step = 0.0;   // |||T_{W_G}||| = sigma_max(A) / N
};
StepGraphonNorms step_graphon_norms(const Eigen::MatrixXd& adjacency);

struct SpectralGapPair {
    double mu2_bar = 0.0;  // weighted graph
    double mu2 = 0.0;      // simple graph
    double eta = 0.0;
    bool lower_bound_holds = false;  // mu2_bar >= eta (up to roundoff)
};
SpectralGapPair spectral_gap_pair(const Graphon& graphon,
                                  const WeightedGraph& weighted,
                                  const SimpleGraph& simple);

// -- CSV interchange ---------------------------------------------------------

/// rows: index, lambda, mu, degree, degree_sorted
void write_spectrum_csv(std::ostream& out, const SpectrumSummary& summary,
                        uint64_t master_seed);
/// rows: i, left_endpoint, value
void write_step_csv(std::ostream& out, const StepFunction& step,
                    uint64_t master_seed);

} // namespace glab
