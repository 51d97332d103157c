#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glab/bounds.hpp"
#include "glab/graphon.hpp"

namespace glab {

enum class Metric { Prop1, Prop2, Thm1, Mu2Pair, Resistance, Bounds };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

struct ExperimentPlan {
    std::string graphon_manifest;  // path, empty when the graphon is passed in code
    std::vector<int> n_grid = {16, 32, 64, 128, 256, 512, 1024};
    int trials_per_n = 10;
    uint64_t master_seed = 0;
    double nu = 0.1;
    SamplingMode mode = SamplingMode::Random;
    std::set<Metric> metrics;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
    static ExperimentPlan from_file(const std::string& path);
};

/// One (n, trial) row. Values are (column, value) pairs in a fixed order
/// derived from the plan's metric set, identical across rows.
struct RunRecord {
    int n = 0;
    int trial = 0;
    uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> values;
    std::string error;        // nonempty when the row failed; row is kept
    double wall_seconds = 0;  // informational only, never serialized
};

/// Runs the sweep over (n, trial) on a work queue. Rows come back sorted by
/// (n, trial) regardless of scheduling; failures are recorded per row.
std::vector<RunRecord> run_plan(const ExperimentPlan& plan, const Graphon& graphon,
                                std::ostream* progress = nullptr);

struct SlopeFit {
    std::string metric;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_min = 0, n_max = 0;
    int points = 0;
};

/// Least-squares line through (ln n, ln mean_metric(n)); failed rows are
/// excluded from the means. Requires at least 4 grid points with data.
SlopeFit fit_slope(const std::vector<RunRecord>& records, const std::string& metric);

/// Per-n mean of a metric column over successful rows: (n, mean, count).
struct MetricMeans {
    std::vector<int> n;
    std::vector<double> mean;
    std::vector<int> count;
};
MetricMeans metric_means(const std::vector<RunRecord>& records,
                         const std::string& metric);

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records,
                       uint64_t master_seed);
void write_slopes_csv(std::ostream& out, const std::vector<SlopeFit>& fits,
                      uint64_t master_seed);
/// Per-n fraction of rows on which each bound inequality held. Only
/// meaningful when the records carry the *_holds columns; returns false and
/// writes nothing otherwise.
bool write_coverage_csv(std::ostream& out, const std::vector<RunRecord>& records,
                        uint64_t master_seed);

/// Writes per-figure CSV data plus a gnuplot script under out_dir/figures:
/// kernel pixel map, eigenvalue-distance decay, spectral-gap difference and
/// convergence, resistance curves and relative error. Reference curves are
/// anchored at the first plotted mean. Returns the file names written.
std::vector<std::string> emit_figures(const Graphon& graphon,
                                      const std::vector<RunRecord>& records,
                                      const ExperimentPlan& plan,
                                      const std::string& out_dir);

} // namespace glab
