#include "glab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "glab/common.hpp"
#include "glab/csv.hpp"
#include "glab/operator_spectrum.hpp"
#include "glab/resistance.hpp"

namespace glab {

std::string to_string(Metric metric) {
    switch (metric) {
        case Metric::Prop1: return "prop1";
        case Metric::Prop2: return "prop2";
        case Metric::Thm1: return "thm1";
        case Metric::Mu2Pair: return "mu2_pair";
        case Metric::Resistance: return "resistance";
        case Metric::Bounds: return "bounds";
    }
    return "?";
}

Metric metric_from_string(const std::string& name) {
    for (Metric m : {Metric::Prop1, Metric::Prop2, Metric::Thm1, Metric::Mu2Pair,
                     Metric::Resistance, Metric::Bounds})
        if (to_string(m) == name) return m;
    throw UsageError("unknown metric '" + name +
                     "' (expected prop1, prop2, thm1, mu2_pair, resistance, "
                     "or bounds)");
}

void ExperimentPlan::validate() const {
    if (n_grid.empty()) throw UsageError("plan: n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2) throw UsageError("plan: every n must be >= 2");
        if (i && n_grid[i] <= n_grid[i - 1])
            throw UsageError("plan: n_grid must be strictly increasing");
    }
    if (trials_per_n < 1) throw UsageError("plan: trials_per_n must be >= 1");
    if (!(nu > 0.0 && nu < std::exp(-1.0)))
        throw UsageError("plan: nu must lie in (0, e^-1)");
}

ExperimentPlan ExperimentPlan::from_file(const std::string& path) {
    const KvFile kv = KvFile::parse_file(path);
    ExperimentPlan plan;
    plan.graphon_manifest = kv.at("graphon_manifest").string();
    {
        std::filesystem::path p(plan.graphon_manifest);
        if (p.is_relative())
            plan.graphon_manifest =
                (std::filesystem::path(path).parent_path() / p).string();
    }
    if (kv.has("n_grid")) {
        plan.n_grid.clear();
        for (double v : kv.at("n_grid").array())
            plan.n_grid.push_back(static_cast<int>(v));
    }
    if (auto v = kv.number("trials_per_n")) plan.trials_per_n = static_cast<int>(*v);
    if (auto v = kv.number("master_seed"))
        plan.master_seed = static_cast<uint64_t>(*v);
    if (auto v = kv.number("nu")) plan.nu = *v;
    if (auto v = kv.string("sampling_mode")) {
        if (*v == "random") plan.mode = SamplingMode::Random;
        else if (*v == "deterministic") plan.mode = SamplingMode::Deterministic;
        else throw UsageError(path + ": sampling_mode must be random or deterministic");
    }
    if (auto v = kv.number("threads")) plan.threads = static_cast<int>(*v);
    if (kv.has("metrics")) {
        // metrics = "prop1 mu2_pair resistance"
        const std::string list = kv.at("metrics").string();
        std::string tok;
        for (char c : list + " ") {
            if (c == ' ' || c == ',') {
                if (!tok.empty()) plan.metrics.insert(metric_from_string(tok));
                tok.clear();
            } else {
                tok += c;
            }
        }
    }
    plan.validate();
    return plan;
}

namespace {

struct ColumnSet {
    std::vector<std::string> names;

    explicit ColumnSet(const std::set<Metric>& metrics) {
        const bool bounds = metrics.count(Metric::Bounds) > 0;
        if (metrics.count(Metric::Prop1) || bounds)
            add({"prop1_lhs", "prop1_bound", "prop1_holds"});
        if (metrics.count(Metric::Prop2) || bounds)
            add({"prop2_lhs", "prop2_bound", "prop2_holds"});
        if (metrics.count(Metric::Thm1) || bounds)
            add({"thm1_lhs", "thm1_bound", "thm1_holds", "thm1_hypothesis_met"});
        if (metrics.count(Metric::Mu2Pair))
            add({"mu2_bar", "mu2", "mu2_abs_diff"});
        if (metrics.count(Metric::Resistance))
            add({"r_spectral", "r_graphon", "r_abs_err", "r_rel_err", "connected"});
        if (bounds)
            add({"b_N", "theta", "phi", "gamma", "varphi", "cond_block_width",
                 "cond_degree_mass", "cond_tail", "cond_resistance", "thm2_lhs",
                 "thm2_bound", "thm2_holds"});
    }

    void add(std::initializer_list<const char*> cols) {
        for (const char* c : cols) names.emplace_back(c);
    }
};

bool needs_bound_report(const std::set<Metric>& metrics) {
    return metrics.count(Metric::Prop1) || metrics.count(Metric::Prop2) ||
           metrics.count(Metric::Thm1) || metrics.count(Metric::Bounds);
}

bool needs_operator_norm(const std::set<Metric>& metrics) {
    return needs_bound_report(metrics);
}

RunRecord run_one(const ExperimentPlan& plan, const Graphon& graphon,
                  const ColumnSet& columns, double operator_norm, int n,
                  int trial) {
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.n = n;
    rec.trial = trial;
    rec.seed = derive_seed(plan.master_seed, n, trial, kStageLatents);
    std::map<std::string, double> out;

    try {
        WeightedGraph weighted =
            plan.mode == SamplingMode::Deterministic
                ? deterministic_weighted_graph(graphon, n)
                : weighted_graph(graphon, sample_latents(n, rec.seed));
        SimpleGraph simple = bernoulli_thin(
            weighted, derive_seed(plan.master_seed, n, trial, kStageThinning));

        const SpectrumSummary summary = summarize(simple);

        if (needs_bound_report(plan.metrics)) {
            const BoundInputs in = BoundInputs::from_graphon(
                graphon, n, plan.nu, plan.mode, operator_norm);
            const BoundReport r =
                evaluate_realization(graphon, weighted, simple, in, summary);
            out["prop1_lhs"] = r.prop1.lhs;
            out["prop1_bound"] = r.prop1.bound;
            out["prop1_holds"] = r.prop1.holds;
            out["prop2_lhs"] = r.prop2.lhs;
            out["prop2_bound"] = r.prop2.bound;
            out["prop2_holds"] = r.prop2.holds;
            out["thm1_lhs"] = r.thm1.lhs;
            out["thm1_bound"] = r.thm1.bound;
            out["thm1_holds"] = r.thm1.holds;
            out["thm1_hypothesis_met"] = r.thm1_hypothesis_met;
            out["b_N"] = r.b;
            out["theta"] = r.theta;
            out["phi"] = r.phi;
            out["gamma"] = r.gamma;
            out["varphi"] = r.varphi;
            out["cond_block_width"] = r.flags.block_width;
            out["cond_degree_mass"] = r.flags.degree_mass;
            out["cond_tail"] = r.flags.tail;
            out["cond_resistance"] = r.flags.resistance;
            out["thm2_lhs"] = r.thm2.lhs;
            out["thm2_bound"] = r.thm2.bound;
            out["thm2_holds"] = r.thm2.holds;
        }
        if (plan.metrics.count(Metric::Mu2Pair)) {
            const double mu2_bar = summarize(weighted).spectral_gap;
            out["mu2_bar"] = mu2_bar;
            out["mu2"] = summary.spectral_gap;
            out["mu2_abs_diff"] = std::abs(summary.spectral_gap - mu2_bar);
        }
        if (plan.metrics.count(Metric::Resistance)) {
            out["connected"] = is_connected(summary);
            if (!is_connected(summary)) {
                rec.error = "disconnected realization";
            } else {
                const double r_n = r_ave_spectral(summary);
                const double r_w = r_ave_graphon(graphon, n);
                out["r_spectral"] = r_n;
                out["r_graphon"] = r_w;
                out["r_abs_err"] = std::abs(r_n - r_w);
                out["r_rel_err"] = std::abs(r_n - r_w) / r_n;
            }
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
        for (char& c : rec.error)
            if (c == ',' || c == '\n') c = ';';
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const std::string& col : columns.names) {
        auto it = out.find(col);
        rec.values.emplace_back(col, it == out.end() ? nan : it->second);
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

} // namespace

std::vector<RunRecord> run_plan(const ExperimentPlan& plan, const Graphon& graphon,
                                std::ostream* progress) {
    plan.validate();
    const ColumnSet columns(plan.metrics);

    double operator_norm = 0.0;
    if (needs_operator_norm(plan.metrics)) {
        const OperatorSpectrumEstimate est = operator_norm_estimate(graphon);
        operator_norm = est.operator_norm;
        if (progress)
            *progress << "operator norm " << format_double(operator_norm)
                      << " at resolution " << est.resolution
                      << (est.converged ? "" : " (not converged)") << "\n";
    }

    struct Task {
        int n, trial;
    };
    std::vector<Task> tasks;
    for (int n : plan.n_grid)
        for (int t = 0; t < plan.trials_per_n; ++t) tasks.push_back({n, t});

    std::vector<RunRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress_mu;
    std::map<int, int> done_per_n;

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int threads =
        std::max(1, std::min<int>(plan.threads > 0 ? plan.threads : std::max(hw, 1),
                                  static_cast<int>(tasks.size())));

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            records[i] = run_one(plan, graphon, columns, operator_norm,
                                 tasks[i].n, tasks[i].trial);
            if (progress) {
                std::scoped_lock lock(progress_mu);
                const int done = ++done_per_n[tasks[i].n];
                if (done == plan.trials_per_n)
                    *progress << "n=" << tasks[i].n << ": " << done << "/"
                              << plan.trials_per_n << " trials done\n";
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // tasks were generated sorted by (n, trial) and written by index
    return records;
}

MetricMeans metric_means(const std::vector<RunRecord>& records,
                         const std::string& metric) {
    std::map<int, std::pair<double, int>> acc;
    for (const RunRecord& rec : records) {
        if (!rec.error.empty()) continue;
        for (const auto& [name, value] : rec.values)
            if (name == metric && std::isfinite(value)) {
                acc[rec.n].first += value;
                acc[rec.n].second += 1;
            }
    }
    MetricMeans out;
    for (const auto& [n, sum_count] : acc) {
        if (sum_count.second == 0) continue;
        out.n.push_back(n);
        out.mean.push_back(sum_count.first / sum_count.second);
        out.count.push_back(sum_count.second);
    }
    return out;
}

SlopeFit fit_slope(const std::vector<RunRecord>& records, const std::string& metric) {
    const MetricMeans means = metric_means(records, metric);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < means.n.size(); ++i) {
        if (means.mean[i] <= 0.0) continue;
        xs.push_back(std::log(static_cast<double>(means.n[i])));
        ys.push_back(std::log(means.mean[i]));
    }
    if (xs.size() < 4)
        throw ContractError("fit_slope: need at least 4 grid points with data for '" +
                            metric + "'");

    const std::size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double denom = m * sxx - sx * sx;
    SlopeFit fit;
    fit.metric = metric;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    const double ss_tot = syy - sy * sy / m;
    double ss_res = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.n_min = means.n.front();
    fit.n_max = means.n.back();
    fit.points = static_cast<int>(m);
    return fit;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records,
                       uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "n,trial,seed";
    if (!records.empty())
        for (const auto& [name, value] : records.front().values) out << ',' << name;
    out << ",error\n";
    for (const RunRecord& rec : records) {
        out << rec.n << ',' << rec.trial << ',' << rec.seed;
        for (const auto& [name, value] : rec.values)
            out << ',' << format_double(value);
        out << ',' << rec.error << '\n';
    }
}

bool write_coverage_csv(std::ostream& out, const std::vector<RunRecord>& records,
                        uint64_t master_seed) {
    static const char* kHoldColumns[] = {"prop1_holds", "prop2_holds",
                                         "thm1_holds", "thm2_holds"};
    if (records.empty()) return false;
    std::vector<std::string> present;
    for (const char* col : kHoldColumns)
        for (const auto& [name, value] : records.front().values)
            if (name == col) present.push_back(col);
    if (present.empty()) return false;

    struct Acc {
        int rows = 0;
        std::map<std::string, int> held;
    };
    std::map<int, Acc> per_n;
    for (const RunRecord& rec : records) {
        if (!rec.error.empty()) continue;
        Acc& acc = per_n[rec.n];
        ++acc.rows;
        for (const auto& [name, value] : rec.values)
            for (const std::string& col : present)
                if (name == col && value == 1.0) ++acc.held[col];
    }
    write_csv_preamble(out, master_seed);
    out << "n,rows";
    for (const std::string& col : present)
        out << ',' << col.substr(0, col.size() - std::strlen("_holds")) << "_coverage";
    out << '\n';
    for (auto& [n, acc] : per_n) {
        out << n << ',' << acc.rows;
        for (const std::string& col : present)
            out << ','
                << format_double(acc.rows ? static_cast<double>(acc.held[col]) / acc.rows
                                          : 0.0);
        out << '\n';
    }
    return true;
}

void write_slopes_csv(std::ostream& out, const std::vector<SlopeFit>& fits,
                      uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "metric,slope,intercept,r_squared,n_min,n_max,points\n";
    for (const SlopeFit& f : fits)
        out << f.metric << ',' << format_double(f.slope) << ','
            << format_double(f.intercept) << ',' << format_double(f.r_squared)
            << ',' << f.n_min << ',' << f.n_max << ',' << f.points << '\n';
}

namespace {

struct FigureWriter {
    std::filesystem::path dir;
    uint64_t seed;
    std::vector<std::string> written;

    std::ofstream open(const std::string& name) {
        std::ofstream out(dir / name);
        if (!out) throw UsageError("cannot write " + (dir / name).string());
        written.push_back(name);
        return out;
    }

    /// data: one curve plus an anchored reference curve
    void decay_figure(const std::string& stem, const std::string& title,
                      const MetricMeans& means, const std::string& ref_label,
                      const std::function<double(double)>& ref) {
        if (means.n.empty()) return;
        const double anchor = means.mean.front() / ref(means.n.front());
        {
            auto csv = open(stem + ".csv");
            write_csv_preamble(csv, seed);
            csv << "n,mean,reference,count\n";
            for (std::size_t i = 0; i < means.n.size(); ++i)
                csv << means.n[i] << ',' << format_double(means.mean[i]) << ','
                    << format_double(anchor * ref(means.n[i])) << ','
                    << means.count[i] << '\n';
        }
        auto gp = open(stem + ".gp");
        gp << "set datafile separator ','\n"
           << "set logscale xy\n"
           << "set xlabel 'N'\n"
           << "set title \"" << title << "\"\n"
           << "set key left bottom\n"
           << "plot '" << stem << ".csv' using 1:2 with linespoints title 'measured', \\\n"
           << "     '" << stem << ".csv' using 1:3 with lines title '" << ref_label
           << "'\n";
    }
};

} // namespace

std::vector<std::string> emit_figures(const Graphon& graphon,
                                      const std::vector<RunRecord>& records,
                                      const ExperimentPlan& plan,
                                      const std::string& out_dir) {
    namespace fs = std::filesystem;
    FigureWriter fw{fs::path(out_dir) / "figures", plan.master_seed, {}};
    std::error_code ec;
    fs::create_directories(fw.dir, ec);
    if (ec) throw UsageError("cannot create " + fw.dir.string());

    // kernel pixel map, always emitted
    {
        const int m = 256;
        auto csv = fw.open("fig1_graphon_pixel.csv");
        write_csv_preamble(csv, plan.master_seed);
        csv << "x,y,w\n";
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double x = (i + 0.5) / m, y = (j + 0.5) / m;
                csv << format_double(x) << ',' << format_double(y) << ','
                    << format_double(graphon(x, y)) << '\n';
            }
        auto gp = fw.open("fig1_graphon_pixel.gp");
        gp << "set datafile separator ','\n"
           << "set size square\n"
           << "set xrange [0:1]\nset yrange [0:1] reverse\n"
           << "set cbrange [0:1]\n"
           << "set title 'kernel pixel map'\n"
           << "plot 'fig1_graphon_pixel.csv' using 1:2:3 with image notitle\n";
    }

    const MetricMeans thm1 = metric_means(records, "thm1_lhs");
    if (!thm1.n.empty())
        fw.decay_figure("fig2_eigenvalue_distance",
                        "L2 distance of normalized spectrum to degree function",
                        thm1, "c N^{-1/4}",
                        [](double n) { return std::pow(n, -0.25); });

    const MetricMeans gap_diff = metric_means(records, "mu2_abs_diff");
    if (!gap_diff.n.empty())
        fw.decay_figure("fig3_gap_difference", "|mu_2 - mu_2(weighted)|", gap_diff,
                        "c (log N / N)^{1/2}",
                        [](double n) { return std::sqrt(std::log(n) / n); });

    const MetricMeans mu2_bar = metric_means(records, "mu2_bar");
    const MetricMeans mu2 = metric_means(records, "mu2");
    if (!mu2_bar.n.empty() && !mu2.n.empty()) {
        auto csv = fw.open("fig4_gap_convergence.csv");
        write_csv_preamble(csv, plan.master_seed);
        csv << "n,mu2_bar,mu2,delta_W\n";
        for (std::size_t i = 0; i < mu2_bar.n.size(); ++i)
            csv << mu2_bar.n[i] << ',' << format_double(mu2_bar.mean[i]) << ','
                << format_double(mu2.mean[i]) << ','
                << format_double(graphon.delta()) << '\n';
        auto gp = fw.open("fig4_gap_convergence.gp");
        gp << "set datafile separator ','\n"
           << "set logscale x\n"
           << "set xlabel 'N'\n"
           << "set title 'normalized spectral gap convergence'\n"
           << "plot 'fig4_gap_convergence.csv' using 1:2 with linespoints title "
              "'weighted', \\\n"
           << "     'fig4_gap_convergence.csv' using 1:3 with linespoints title "
              "'simple', \\\n"
           << "     'fig4_gap_convergence.csv' using 1:4 with lines title "
              "'degree minimum'\n";
    }

    const MetricMeans r_spec = metric_means(records, "r_spectral");
    const MetricMeans r_graphon = metric_means(records, "r_graphon");
    if (!r_spec.n.empty() && !r_graphon.n.empty()) {
        auto csv = fw.open("fig5_resistance.csv");
        write_csv_preamble(csv, plan.master_seed);
        csv << "n,r_spectral,r_graphon\n";
        for (std::size_t i = 0; i < r_spec.n.size(); ++i)
            csv << r_spec.n[i] << ',' << format_double(r_spec.mean[i]) << ','
                << format_double(r_graphon.mean[i]) << '\n';
        auto gp = fw.open("fig5_resistance.gp");
        gp << "set datafile separator ','\n"
           << "set logscale xy\n"
           << "set xlabel 'N'\n"
           << "set title 'average effective resistance'\n"
           << "plot 'fig5_resistance.csv' using 1:2 with linespoints title "
              "'sampled graph', \\\n"
           << "     'fig5_resistance.csv' using 1:3 with lines title 'graphon "
              "estimate'\n";
    }

    const MetricMeans rel = metric_means(records, "r_rel_err");
    if (!rel.n.empty())
        fw.decay_figure("fig6_resistance_relative_error",
                        "relative resistance error", rel, "c N^{-1/4}",
                        [](double n) { return std::pow(n, -0.25); });

    return fw.written;
}

} // namespace glab
