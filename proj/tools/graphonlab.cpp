// Command-line laboratory: sample graphs from graphon manifests, compute
// Laplacian spectra, evaluate deviation bounds and effective resistance, and
// run convergence sweeps that emit CSV plus gnuplot scripts.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "glab/bounds.hpp"
#include "glab/common.hpp"
#include "glab/csv.hpp"
#include "glab/graphon.hpp"
#include "glab/lab.hpp"
#include "glab/operator_spectrum.hpp"
#include "glab/resistance.hpp"
#include "glab/sampler.hpp"
#include "glab/spectral.hpp"

namespace {

using namespace glab;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write to " + path);
    return out;
}

double manifest_nu(const std::string& manifest_path, double cli_nu, bool cli_set) {
    if (cli_set) return cli_nu;
    const KvFile kv = KvFile::parse_file(manifest_path);
    if (auto nu = kv.number("nu")) return *nu;
    return 0.1;
}

struct SampleArgs {
    std::string manifest, out, weighted_out;
    int n = 0;
    uint64_t seed = 0;
    bool deterministic = false;
    bool dense = false;
};

void cmd_sample(const SampleArgs& a) {
    const Graphon graphon = Graphon::from_manifest_file(a.manifest);
    const WeightedGraph weighted =
        a.deterministic
            ? deterministic_weighted_graph(graphon, a.n)
            : weighted_graph(graphon,
                             sample_latents(a.n, derive_seed(a.seed, a.n, 0,
                                                             kStageLatents)));
    const SimpleGraph simple =
        bernoulli_thin(weighted, derive_seed(a.seed, a.n, 0, kStageThinning));

    auto out = open_out(a.out);
    if (a.dense) {
        write_csv_preamble(out, a.seed);
        write_dense_csv(out, simple.adjacency);
    } else {
        write_simple_edge_list(out, simple, a.seed);
    }
    if (!a.weighted_out.empty()) {
        auto wout = open_out(a.weighted_out);
        if (a.dense) {
            write_csv_preamble(wout, a.seed);
            write_dense_csv(wout, weighted.adjacency);
        } else {
            write_weighted_edge_list(wout, weighted, a.seed);
        }
    }
    std::cerr << "wrote " << a.out << " (n=" << a.n << ", "
              << (a.deterministic ? "deterministic" : "random") << " latents)\n";
}

void cmd_spectrum(const std::string& graph_path, const std::string& out_path) {
    std::ifstream in(graph_path);
    if (!in) throw UsageError("cannot open " + graph_path);
    const SimpleGraph g = read_simple_edge_list(in);
    const SpectrumSummary summary = summarize(g.adjacency);
    auto out = open_out(out_path);
    write_spectrum_csv(out, summary, 0);
    std::cerr << "wrote " << out_path << " (n=" << summary.n
              << ", spectral gap mu_2=" << format_double(summary.spectral_gap)
              << ")\n";
}

struct BoundsArgs {
    std::string manifest, out;
    int n = 0;
    double nu = 0.1;
    bool nu_set = false;
    uint64_t seed = 0;
    bool seed_set = false;
    bool deterministic = false;
};

void cmd_bounds(const BoundsArgs& a) {
    const Graphon graphon = Graphon::from_manifest_file(a.manifest);
    const double nu = manifest_nu(a.manifest, a.nu, a.nu_set);
    const SamplingMode mode =
        a.deterministic ? SamplingMode::Deterministic : SamplingMode::Random;

    const OperatorSpectrumEstimate norm = operator_norm_estimate(graphon);
    const BoundInputs in =
        BoundInputs::from_graphon(graphon, a.n, nu, mode, norm.operator_norm);
    const LargeEnough flags = check_large_enough(in, graphon);
    std::cout << "large-enough conditions at n=" << a.n << ", nu=" << nu << ":\n"
              << "  block width   2/N < min width                  : "
              << (flags.block_width ? "yes" : "no") << "\n"
              << "  degree mass   log(2N/nu)/N + (2K+3L)/N < max d : "
              << (flags.degree_mass ? "yes" : "no") << "\n"
              << "  tail          N exp(-N/5) < nu                 : "
              << (flags.tail ? "yes" : "no") << "\n"
              << "  resistance    log(2N/nu)/N < eta^2/(1+2 eta)   : "
              << (flags.resistance ? "yes" : "no") << "\n";

    const WeightedGraph weighted =
        a.deterministic
            ? deterministic_weighted_graph(graphon, a.n)
            : weighted_graph(graphon,
                             sample_latents(a.n, derive_seed(a.seed, a.n, 0,
                                                             kStageLatents)));
    const SimpleGraph simple =
        bernoulli_thin(weighted, derive_seed(a.seed, a.n, 0, kStageThinning));
    const BoundReport report = evaluate_realization(graphon, weighted, simple, in);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file = open_out(a.out);
        out = &file;
    }
    write_bound_report_header(*out, a.seed);
    write_bound_report_row(*out, 0, report);
    if (!a.seed_set)
        std::cerr << "note: no --seed given, realization used seed 0\n";
    if (!report.thm2.note.empty())
        std::cerr << "note: " << report.thm2.note << "\n";
}

void cmd_resistance(const std::string& manifest, int n, uint64_t seed) {
    const Graphon graphon = Graphon::from_manifest_file(manifest);
    const WeightedGraph weighted = weighted_graph(
        graphon, sample_latents(n, derive_seed(seed, n, 0, kStageLatents)));
    const SimpleGraph simple =
        bernoulli_thin(weighted, derive_seed(seed, n, 0, kStageThinning));
    const SpectrumSummary summary = summarize(simple.adjacency);
    const ResistanceReport report = resistance_report(graphon, simple, summary);
    write_resistance_header(std::cout, seed);
    write_resistance_row(std::cout, n, 0, report);
}

void cmd_experiment(const std::string& plan_path, const std::string& out_dir,
                    int threads_override) {
    ExperimentPlan plan = ExperimentPlan::from_file(plan_path);
    if (threads_override > 0) plan.threads = threads_override;
    const Graphon graphon = Graphon::from_manifest_file(plan.graphon_manifest);

    std::filesystem::create_directories(out_dir);
    const std::vector<RunRecord> records = run_plan(plan, graphon, &std::cerr);
    {
        auto out = open_out((std::filesystem::path(out_dir) / "records.csv").string());
        write_records_csv(out, records, plan.master_seed);
    }
    std::vector<SlopeFit> fits;
    for (const char* metric :
         {"prop1_lhs", "prop2_lhs", "thm1_lhs", "mu2_abs_diff", "r_rel_err"}) {
        try {
            fits.push_back(fit_slope(records, metric));
        } catch (const ContractError&) {
            // metric absent from the plan or too few points; skip the fit
        }
    }
    {
        auto out = open_out((std::filesystem::path(out_dir) / "slopes.csv").string());
        write_slopes_csv(out, fits, plan.master_seed);
    }
    {
        std::ostringstream coverage;
        if (write_coverage_csv(coverage, records, plan.master_seed)) {
            auto out =
                open_out((std::filesystem::path(out_dir) / "coverage.csv").string());
            out << coverage.str();
        }
    }
    const auto figures = emit_figures(graphon, records, plan, out_dir);
    std::cerr << "wrote records.csv, slopes.csv and " << figures.size()
              << " figure files under " << out_dir << "\n";
    for (const SlopeFit& f : fits)
        std::cerr << "  slope[" << f.metric << "] = " << format_double(f.slope)
                  << " (r^2 = " << format_double(f.r_squared) << ")\n";
}

struct GraphonSpecArgs {
    std::string manifest;
    int resolution = 1024;
    double grid_step = 1e-3;
    double separation_tol = 1e-3;
};

void cmd_graphon_spec(const GraphonSpecArgs& a) {
    const Graphon graphon = Graphon::from_manifest_file(a.manifest);
    std::cout << "graphon: " << graphon.label() << "\n"
              << "  family " << to_string(graphon.family()) << ", L = "
              << format_double(graphon.lipschitz()) << ", K = "
              << graphon.breakpoint_count() << "\n";

    const ExtremaBrackets br = graphon.estimate_extrema(a.grid_step);
    std::cout << "  kernel minimum eta_W in [" << format_double(br.eta_low)
              << ", " << format_double(br.eta_high) << "]"
              << (graphon.eta_exact()
                      ? " (exact: " + format_double(graphon.eta()) + ")"
                      : "")
              << "\n"
              << "  degree minimum delta_W in [" << format_double(br.delta_low)
              << ", " << format_double(br.delta_high) << "]"
              << (graphon.delta_exact()
                      ? " (exact: " + format_double(graphon.delta()) + ")"
                      : "")
              << "\n"
              << "  degree maximum in [" << format_double(br.dmax_low) << ", "
              << format_double(br.dmax_high) << "]\n";

    const OperatorSpectrumEstimate norm = operator_norm_estimate(graphon);
    std::cout << "  operator norm |||T_W||| = " << format_double(norm.operator_norm)
              << " (resolution " << norm.resolution << ", "
              << (norm.converged ? "converged" : "NOT converged") << ", tol "
              << format_double(norm.achieved_tol) << ")\n";

    const OperatorSpectrumEstimate spec =
        graphon_laplacian_spectrum(graphon, a.resolution, a.separation_tol);
    std::cout << "  Laplacian essential range ["
              << format_double(spec.essential_range.first) << ", "
              << format_double(spec.essential_range.second) << "]\n"
              << "  isolated eigenvalues below:";
    for (double ev : spec.isolated_below) std::cout << ' ' << format_double(ev);
    if (spec.isolated_below.empty()) std::cout << " (none)";
    std::cout << "\n  isolated eigenvalues above:";
    for (double ev : spec.isolated_above) std::cout << ' ' << format_double(ev);
    if (spec.isolated_above.empty()) std::cout << " (none)";
    std::cout << "\n  spectral gap limit = "
              << format_double(spec.spectral_gap_limit) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graphon sampling and Laplacian spectrum laboratory"};
    app.require_subcommand(1);

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "sample a graph from a manifest");
    sample_cmd->add_option("--manifest", sample.manifest)->required();
    sample_cmd->add_option("--n", sample.n)->required()->check(CLI::Range(2, 1 << 20));
    sample_cmd->add_option("--seed", sample.seed);
    sample_cmd->add_flag("--deterministic", sample.deterministic);
    sample_cmd->add_option("--out", sample.out)->required();
    sample_cmd->add_option("--weighted-out", sample.weighted_out);
    sample_cmd->add_flag("--dense", sample.dense,
                         "dense matrix CSV instead of edge list");

    std::string spectrum_graph, spectrum_out;
    auto* spectrum_cmd =
        app.add_subcommand("spectrum", "Laplacian spectrum of an edge-list CSV");
    spectrum_cmd->add_option("--graph", spectrum_graph)->required();
    spectrum_cmd->add_option("--out", spectrum_out)->required();

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand(
        "bounds", "deviation bounds and admissibility conditions at one n");
    bounds_cmd->add_option("--manifest", bounds.manifest)->required();
    bounds_cmd->add_option("--n", bounds.n)->required()->check(CLI::Range(2, 1 << 20));
    auto* nu_opt = bounds_cmd->add_option("--nu", bounds.nu);
    auto* seed_opt = bounds_cmd->add_option("--seed", bounds.seed);
    bounds_cmd->add_flag("--deterministic", bounds.deterministic);
    bounds_cmd->add_option("--out", bounds.out);

    std::string res_manifest;
    int res_n = 0;
    uint64_t res_seed = 0;
    auto* res_cmd = app.add_subcommand(
        "resistance", "three-way average effective resistance report");
    res_cmd->add_option("--manifest", res_manifest)->required();
    res_cmd->add_option("--n", res_n)->required()->check(CLI::Range(2, 1 << 20));
    res_cmd->add_option("--seed", res_seed);

    std::string plan_path, exp_out;
    int exp_threads = 0;
    auto* exp_cmd = app.add_subcommand("experiment", "run a sweep plan");
    exp_cmd->add_option("--plan", plan_path)->required();
    exp_cmd->add_option("--out", exp_out)->required();
    exp_cmd->add_option("--threads", exp_threads);

    GraphonSpecArgs gspec;
    auto* gspec_cmd = app.add_subcommand(
        "graphon-spec", "kernel extrema, operator norm and Laplacian spectrum");
    gspec_cmd->add_option("--manifest", gspec.manifest)->required();
    gspec_cmd->add_option("--resolution", gspec.resolution)
        ->check(CLI::Range(64, 8192));
    gspec_cmd->add_option("--grid-step", gspec.grid_step);
    gspec_cmd->add_option("--separation-tol", gspec.separation_tol);

    try {
        app.parse(argc, argv);
        bounds.nu_set = nu_opt->count() > 0;
        bounds.seed_set = seed_opt->count() > 0;

        if (sample_cmd->parsed()) cmd_sample(sample);
        else if (spectrum_cmd->parsed()) cmd_spectrum(spectrum_graph, spectrum_out);
        else if (bounds_cmd->parsed()) cmd_bounds(bounds);
        else if (res_cmd->parsed()) cmd_resistance(res_manifest, res_n, res_seed);
        else if (exp_cmd->parsed()) cmd_experiment(plan_path, exp_out, exp_threads);
        else if (gspec_cmd->parsed()) cmd_graphon_spec(gspec);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
