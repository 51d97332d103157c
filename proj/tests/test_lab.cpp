#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "glab/common.hpp"
#include "glab/lab.hpp"

using namespace glab;

namespace {

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.n_grid = {10};
    plan.trials_per_n = 1;
    plan.master_seed = 7;
    plan.metrics = {Metric::Mu2Pair};
    return plan;
}

std::string records_to_string(const std::vector<RunRecord>& records,
                              uint64_t seed) {
    std::ostringstream out;
    write_records_csv(out, records, seed);
    return out.str();
}

std::vector<RunRecord> synthetic_records(
    const std::vector<int>& grid,
    const std::function<double(double)>& metric_fn) {
    std::vector<RunRecord> records;
    for (int n : grid) {
        RunRecord rec;
        rec.n = n;
        rec.trial = 0;
        rec.values.emplace_back("m", metric_fn(n));
        records.push_back(rec);
    }
    return records;
}

} // namespace

TEST_CASE("plan validation") {
    ExperimentPlan plan = small_plan();
    plan.n_grid = {};
    CHECK_THROWS_AS(plan.validate(), UsageError);
    plan.n_grid = {32, 16};
    CHECK_THROWS_AS(plan.validate(), UsageError);
    plan.n_grid = {16, 32};
    plan.trials_per_n = 0;
    CHECK_THROWS_AS(plan.validate(), UsageError);
    plan.trials_per_n = 1;
    plan.nu = 0.5;
    CHECK_THROWS_AS(plan.validate(), UsageError);
    plan.nu = 0.1;
    CHECK_NOTHROW(plan.validate());
}

TEST_CASE("plan parsing from a key-value file") {
    const std::string dir = "lab_plan_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream manifest(dir + "/g.toml");
        manifest << "family = \"constant\"\np = 0.3\n";
        std::ofstream plan(dir + "/plan.toml");
        plan << "graphon_manifest = \"g.toml\"\n"
             << "n_grid = [16, 32]\n"
             << "trials_per_n = 2\n"
             << "master_seed = 11\n"
             << "nu = 0.2\n"
             << "sampling_mode = \"random\"\n"
             << "metrics = \"mu2_pair resistance\"\n";
    }
    const ExperimentPlan plan = ExperimentPlan::from_file(dir + "/plan.toml");
    CHECK(plan.n_grid == std::vector<int>{16, 32});
    CHECK(plan.trials_per_n == 2);
    CHECK(plan.master_seed == 11);
    CHECK(plan.metrics.count(Metric::Mu2Pair) == 1);
    CHECK(plan.metrics.count(Metric::Resistance) == 1);
    CHECK(plan.metrics.count(Metric::Prop1) == 0);
    CHECK(std::filesystem::path(plan.graphon_manifest).filename() == "g.toml");
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_plan on a constant kernel") {
    const Graphon g = Graphon::constant(0.3);
    const auto records = run_plan(small_plan(), g);
    REQUIRE(records.size() == 1);
    CHECK(records[0].error.empty());
    double mu2_bar = -1;
    for (const auto& [name, value] : records[0].values)
        if (name == "mu2_bar") mu2_bar = value;
    CHECK(mu2_bar == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
    const Graphon g = Graphon::bilinear(0.5);
    ExperimentPlan plan;
    plan.n_grid = {8, 16, 24};
    plan.trials_per_n = 3;
    plan.master_seed = 3;
    plan.metrics = {Metric::Mu2Pair, Metric::Resistance};

    plan.threads = 1;
    const std::string serial = records_to_string(run_plan(plan, g), plan.master_seed);
    const std::string again = records_to_string(run_plan(plan, g), plan.master_seed);
    CHECK(serial == again);

    plan.threads = 4;
    const std::string parallel =
        records_to_string(run_plan(plan, g), plan.master_seed);
    CHECK(serial == parallel);
}

TEST_CASE("disconnected realizations are flagged rows, not failures") {
    const Graphon g = Graphon::constant(0.01);
    ExperimentPlan plan;
    plan.n_grid = {10};
    plan.trials_per_n = 4;
    plan.master_seed = 1;
    plan.metrics = {Metric::Resistance};
    const auto records = run_plan(plan, g);
    REQUIRE(records.size() == 4);
    int flagged = 0;
    for (const auto& rec : records)
        if (!rec.error.empty()) ++flagged;
    CHECK(flagged == 4);  // p = 0.01 at n = 10 cannot connect
    // rows carry the metric columns as NaN but keep n/trial/seed
    CHECK(records[0].n == 10);
    CHECK(records[0].values.size() == records[3].values.size());
}

TEST_CASE("deterministic sampling mode in a sweep") {
    const Graphon g = Graphon::bilinear(0.8);
    ExperimentPlan plan;
    plan.n_grid = {32};
    plan.trials_per_n = 2;
    plan.master_seed = 13;
    plan.mode = SamplingMode::Deterministic;
    plan.metrics = {Metric::Bounds};
    const auto records = run_plan(plan, g);
    REQUIRE(records.size() == 2);
    for (const auto& rec : records) {
        double b = -1;
        for (const auto& [name, value] : rec.values)
            if (name == "b_N") b = value;
        CHECK(b == doctest::Approx(1.0 / 32).epsilon(1e-15));
    }
}

TEST_CASE("coverage summary") {
    const Graphon g = Graphon::constant(0.5);
    ExperimentPlan plan;
    plan.n_grid = {16, 32};
    plan.trials_per_n = 3;
    plan.master_seed = 21;
    plan.metrics = {Metric::Bounds};
    const auto records = run_plan(plan, g);

    std::ostringstream out;
    REQUIRE(write_coverage_csv(out, records, plan.master_seed));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);  // preamble
    std::getline(in, line);
    CHECK(line == "n,rows,prop1_coverage,prop2_coverage,thm1_coverage,thm2_coverage");
    std::getline(in, line);
    CHECK(line.rfind("16,3,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("32,3,", 0) == 0);

    SUBCASE("absent without bound columns") {
        plan.metrics = {Metric::Mu2Pair};
        const auto r2 = run_plan(plan, g);
        std::ostringstream none;
        CHECK_FALSE(write_coverage_csv(none, r2, plan.master_seed));
        CHECK(none.str().empty());
    }
}

TEST_CASE("per-trial wall time grows no worse than a cubic with headroom") {
    const Graphon g = Graphon::bilinear(0.8);
    ExperimentPlan plan;
    plan.n_grid = {64, 512};
    plan.trials_per_n = 2;
    plan.master_seed = 2;
    plan.threads = 1;
    plan.metrics = {Metric::Mu2Pair};
    const auto records = run_plan(plan, g);
    double t_small = 0.0, t_large = 0.0;
    for (const auto& rec : records)
        (rec.n == 64 ? t_small : t_large) += rec.wall_seconds / 2.0;
    // floor the denominator so timer jitter cannot blow up the ratio
    const double ratio = t_large / std::max(t_small, 2e-3);
    CHECK(ratio <= 1.5 * std::pow(512.0 / 64.0, 3.0));
}

TEST_CASE("fit_slope") {
    const std::vector<int> grid{16, 32, 64, 128, 256, 512, 1024};
    SUBCASE("exact quarter-power law") {
        const auto records = synthetic_records(
            grid, [](double n) { return 3.0 * std::pow(n, -0.25); });
        const SlopeFit fit = fit_slope(records, "m");
        CHECK(fit.slope == doctest::Approx(-0.25).epsilon(1e-10));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fit.n_min == 16);
        CHECK(fit.n_max == 1024);
    }
    SUBCASE("sqrt(log n / n) lands between -0.5 and -0.35") {
        const std::vector<int> grid2{32, 64, 128, 256, 512, 1024};
        const auto records = synthetic_records(grid2, [](double n) {
            return 2.0 * std::sqrt(std::log(n) / n);
        });
        const SlopeFit fit = fit_slope(records, "m");
        CHECK(fit.slope > -0.5);
        CHECK(fit.slope < -0.35);
    }
    SUBCASE("constant metric has zero slope") {
        const auto records = synthetic_records(grid, [](double) { return 0.7; });
        CHECK(std::abs(fit_slope(records, "m").slope) <= 1e-12);
    }
    SUBCASE("needs at least 4 grid points") {
        const auto records = synthetic_records({16, 32, 64},
                                               [](double n) { return 1.0 / n; });
        CHECK_THROWS_AS((void)fit_slope(records, "m"), ContractError);
    }
    SUBCASE("failed rows are excluded from the means") {
        auto records = synthetic_records(grid, [](double n) { return 1.0 / n; });
        RunRecord bad;
        bad.n = 16;
        bad.trial = 1;
        bad.error = "boom";
        bad.values.emplace_back("m", 1e9);
        records.push_back(bad);
        const SlopeFit fit = fit_slope(records, "m");
        CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-10));
        const MetricMeans means = metric_means(records, "m");
        CHECK(means.count.front() == 1);
    }
}

TEST_CASE("figure emission") {
    const std::string dir = "lab_figs_test";
    std::filesystem::remove_all(dir);
    const Graphon g = Graphon::bilinear(0.8);

    SUBCASE("plan without metrics still draws the kernel") {
        ExperimentPlan plan = small_plan();
        plan.metrics = {};
        const auto files = emit_figures(g, {}, plan, dir);
        CHECK(files.size() == 2);  // csv + gp for the pixel map
        CHECK(std::filesystem::exists(dir + "/figures/fig1_graphon_pixel.csv"));
    }
    SUBCASE("full metric set emits six figures with anchored references") {
        ExperimentPlan plan;
        plan.n_grid = {8, 16, 32, 64};
        plan.trials_per_n = 2;
        plan.master_seed = 5;
        plan.metrics = {Metric::Thm1, Metric::Mu2Pair, Metric::Resistance};
        const auto records = run_plan(plan, g);
        const auto files = emit_figures(g, records, plan, dir);
        CHECK(files.size() == 12);  // six figures, csv + gp each

        // reference curve passes through the first plotted mean
        std::ifstream fig2(dir + "/figures/fig2_eigenvalue_distance.csv");
        std::string line;
        std::getline(fig2, line);  // preamble
        std::getline(fig2, line);  // header
        std::getline(fig2, line);  // first data row
        std::stringstream row(line);
        std::string n, mean, ref;
        std::getline(row, n, ',');
        std::getline(row, mean, ',');
        std::getline(row, ref, ',');
        CHECK(std::stod(mean) == doctest::Approx(std::stod(ref)).epsilon(1e-12));
    }
    std::filesystem::remove_all(dir);
}
