#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "glab/graphon.hpp"
#include "glab/sampler.hpp"
#include "glab/spectral.hpp"

namespace glab {

enum class SamplingMode { Random, Deterministic };

std::string to_string(SamplingMode mode);

/// Scalar inputs for the deviation-bound formulas.
struct BoundInputs {
    int n = 0;
    double nu = 0.1;  // must lie in (0, e^-1)
    SamplingMode mode = SamplingMode::Random;
    double lipschitz = 0.0;    // L
    int breakpoints = 0;       // K
    double eta = 0.0;          // kernel minimum
    double delta = 0.0;        // degree minimum
    double operator_norm = 0.0;

    static BoundInputs from_graphon(const Graphon& graphon, int n, double nu,
                                    SamplingMode mode, double operator_norm);
};

/// 1/N + sqrt(8 log(N/nu) / (N+1)) for random sampling; 1/N for
/// deterministic latents. Natural logarithm throughout.
double b_n(int n, double nu, SamplingMode mode);

struct ThetaPhi {
    double theta = 0.0;  // 2 sqrt((L^2 - K^2) b^2 + K b)
    double phi = 0.0;    // sqrt(4 log(2N/nu)/N) + theta
};
/// Throws ContractError when the radicand (L^2-K^2) b^2 + K b is negative
/// (possible when K > L at small N); the formula is evaluated as written.
ThetaPhi theta_phi(const BoundInputs& in);

struct GammaVarphi {
    double gamma = 0.0;   // sqrt(log(2N/nu) / (N eta))
    double varphi = 0.0;  // (1/sqrt(eta) + 2) sqrt(log(2N/nu)/N)
};
/// Requires eta > 0.
GammaVarphi gamma_varphi(const BoundInputs& in);

struct LargeEnough {
    bool block_width = false;   // 2/N < min block width
    bool degree_mass = false;   // log(2N/nu)/N + (2K+3L)/N < max_x d(x)
    bool tail = false;          // N e^{-N/5} < nu
    bool resistance = false;    // log(2N/nu)/N < eta^2 / (1+2 eta)
    bool all_sampling() const { return block_width && degree_mass && tail; }
};
LargeEnough check_large_enough(const BoundInputs& in, const Graphon& graphon);

struct ResultBounds {
    double prop1 = 0.0;  // (2/N)^{1/4} sqrt(|||T_W||| + phi)
    double prop2 = 0.0;  // prop1 + phi
    double thm1 = 0.0;   // varphi + (2/N)^{1/4} sqrt(|||T_W||| + theta) + theta
    /// resistance error bound; NaN when its denominators are nonpositive,
    /// with the reason in thm2_note
    double thm2 = std::numeric_limits<double>::quiet_NaN();
    std::string thm2_note;
};
ResultBounds result_bounds(const BoundInputs& in);

/// Strict form of the resistance error bound. Throws ContractError when a
/// denominator (eta - gamma or eta - varphi) is nonpositive; the message
/// points at the resistance admissibility condition.
double resistance_error_bound(const BoundInputs& in);

/// One measured result: bound vs left-hand side on a realization.
struct BoundEntry {
    double bound = std::numeric_limits<double>::quiet_NaN();
    double lhs = std::numeric_limits<double>::quiet_NaN();
    bool holds = false;
    double coverage_target = 0.0;  // probability level attached to the inequality
    std::string note;              // nonempty when the entry could not be evaluated
};

struct BoundReport {
    BoundInputs inputs;
    double b = 0.0;
    double theta = 0.0, phi = 0.0;
    double gamma = 0.0, varphi = 0.0;
    LargeEnough flags;
    BoundEntry prop1, prop2, thm1, thm2;
    bool thm1_hypothesis_met = false;  // graphon nondecreasing in x
};

/// Evaluates all four bound inequalities on one (weighted, simple)
/// realization. Entries that cannot be evaluated (negative radicand,
/// Theorem-2 denominators, disconnected graph) carry a note instead of
/// aborting the report.
BoundReport evaluate_realization(const Graphon& graphon,
                                 const WeightedGraph& weighted,
                                 const SimpleGraph& simple,
                                 const BoundInputs& in);
/// Same, reusing an already-computed spectrum summary of the simple graph.
BoundReport evaluate_realization(const Graphon& graphon,
                                 const WeightedGraph& weighted,
                                 const SimpleGraph& simple,
                                 const BoundInputs& in,
                                 const SpectrumSummary& simple_summary);

/// CSV row layout shared by the CLI and the lab sweep.
void write_bound_report_header(std::ostream& out, uint64_t master_seed);
void write_bound_report_row(std::ostream& out, int trial, const BoundReport& r);

} // namespace glab
