#include "glab/sampler.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "glab/common.hpp"
#include "glab/csv.hpp"

namespace glab {

namespace {

// splitmix64 finalizer; the standard remedy for correlated integer seeds.
uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa; avoids implementation-defined distributions.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

uint64_t derive_seed(uint64_t master_seed, uint64_t n, uint64_t trial,
                     std::string_view stage) {
    uint64_t h = mix64(master_seed);
    h = mix64(h ^ n);
    h = mix64(h ^ trial);
    for (unsigned char c : stage) h = mix64(h ^ c);
    return h;
}

std::vector<double> sample_latents(int n, uint64_t seed) {
    if (n < 2) throw ContractError("sample_latents: n must be >= 2");
    std::mt19937_64 rng(seed);
    std::vector<double> xs(n);
    for (double& x : xs) x = uniform01(rng);
    std::sort(xs.begin(), xs.end());
    return xs;
}

WeightedGraph weighted_graph(const Graphon& graphon, std::vector<double> latents) {
    const int n = static_cast<int>(latents.size());
    if (n < 2) throw ContractError("weighted_graph: need at least 2 latents");
    if (!std::is_sorted(latents.begin(), latents.end()))
        throw ContractError("weighted_graph: latents must be sorted ascending");
    for (double x : latents)
        if (!(x >= 0.0 && x <= 1.0))
            throw ContractError("weighted_graph: latents must lie in [0,1]");

    WeightedGraph g;
    g.n = n;
    g.latents = std::move(latents);
    g.adjacency.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double w = graphon(g.latents[i], g.latents[j]);
            g.adjacency(i, j) = w;
            g.adjacency(j, i) = w;
        }
    return g;
}

WeightedGraph deterministic_weighted_graph(const Graphon& graphon, int n) {
    if (n < 2) throw ContractError("deterministic_weighted_graph: n must be >= 2");
    std::vector<double> latents(n);
    for (int i = 0; i < n; ++i)
        latents[i] = static_cast<double>(i + 1) / n;
    WeightedGraph g = weighted_graph(graphon, std::move(latents));
    g.deterministic = true;
    return g;
}

SimpleGraph bernoulli_thin(const WeightedGraph& weighted, uint64_t seed) {
    const int n = weighted.n;
    SimpleGraph g;
    g.n = n;
    g.parent_seed = seed;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double e = uniform01(rng) < weighted.adjacency(i, j) ? 1.0 : 0.0;
            g.adjacency(i, j) = e;
            g.adjacency(j, i) = e;
        }
    return g;
}

void write_weighted_edge_list(std::ostream& out, const WeightedGraph& g,
                              uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "i,j,weight,n=" << g.n << (g.deterministic ? ",deterministic" : "")
        << "\n";
    for (int i = 0; i < g.n; ++i)
        for (int j = i; j < g.n; ++j)
            out << i << ',' << j << ',' << format_double(g.adjacency(i, j)) << '\n';
}

void write_simple_edge_list(std::ostream& out, const SimpleGraph& g,
                            uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "i,j,n=" << g.n << "\n";
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (g.adjacency(i, j) != 0.0) out << i << ',' << j << '\n';
}

SimpleGraph read_simple_edge_list(std::istream& in) {
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("i,j", 0) == 0) {
            const auto pos = line.find("n=");
            if (pos == std::string::npos)
                throw UsageError("edge list header is missing the n= column");
            n = std::stoi(line.substr(pos + 2));
            continue;
        }
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
            throw UsageError("malformed edge-list row: " + line);
        edges.emplace_back(std::stoi(a), std::stoi(b));
    }
    if (n < 2) throw UsageError("edge list does not declare a vertex count >= 2");
    SimpleGraph g;
    g.n = n;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw UsageError("edge endpoints out of range");
        g.adjacency(i, j) = 1.0;
        g.adjacency(j, i) = 1.0;
    }
    return g;
}

} // namespace glab
