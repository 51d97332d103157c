#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "glab/graphon.hpp"

namespace glab {

/// Stage tags for derived seeds.
inline constexpr std::string_view kStageLatents = "latents";
inline constexpr std::string_view kStageThinning = "thinning";

/// Child seed for (master, n, trial, stage). Counter-based so trials can be
/// scheduled in any order without changing the streams.
uint64_t derive_seed(uint64_t master_seed, uint64_t n, uint64_t trial,
                     std::string_view stage);

/// n i.i.d. uniforms on [0,1], returned sorted ascending. Bit-reproducible
/// for a given seed on any platform.
std::vector<double> sample_latents(int n, uint64_t seed);

/// Complete weighted graph: adjacency(i,j) = W(X_(i), X_(j)), diagonal
/// included.
struct WeightedGraph {
    int n = 0;
    std::vector<double> latents;
    Eigen::MatrixXd adjacency;
    bool deterministic = false;  // latents are the grid i/N
};

WeightedGraph weighted_graph(const Graphon& graphon, std::vector<double> latents);

/// Weighted graph on the deterministic latent grid (1/N, ..., N/N).
WeightedGraph deterministic_weighted_graph(const Graphon& graphon, int n);

/// Simple graph: 0/1 symmetric adjacency with zero diagonal.
struct SimpleGraph {
    int n = 0;
    Eigen::MatrixXd adjacency;
    uint64_t parent_seed = 0;
};

/// Each pair i<j gets an edge independently with probability
/// weighted.adjacency(i,j).
SimpleGraph bernoulli_thin(const WeightedGraph& weighted, uint64_t seed);

// -- CSV interchange ---------------------------------------------------------

/// (i, j, weight) rows over i <= j, including the diagonal.
void write_weighted_edge_list(std::ostream& out, const WeightedGraph& g,
                              uint64_t master_seed);
/// (i, j) rows over edges with i < j.
void write_simple_edge_list(std::ostream& out, const SimpleGraph& g,
                            uint64_t master_seed);
/// Reads a simple-graph edge list produced by write_simple_edge_list (the
/// `n` header column fixes the vertex count).
SimpleGraph read_simple_edge_list(std::istream& in);

} // namespace glab
