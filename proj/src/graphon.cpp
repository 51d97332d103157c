#include "glab/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "glab/common.hpp"
#include "glab/csv.hpp"
#include "glab/quadrature.hpp"

namespace glab {

namespace {

constexpr double kValidateTol = 1e-12;

void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0))
        throw ContractError(std::string(what) + " must lie in [0,1]");
}

std::vector<double> full_partition(std::vector<double> interior) {
    std::sort(interior.begin(), interior.end());
    for (double a : interior)
        if (!(a > 0.0 && a < 1.0))
            throw ContractError("interior breakpoints must lie in (0,1)");
    if (std::adjacent_find(interior.begin(), interior.end()) != interior.end())
        throw ContractError("duplicate breakpoints");
    std::vector<double> full;
    full.reserve(interior.size() + 2);
    full.push_back(0.0);
    full.insert(full.end(), interior.begin(), interior.end());
    full.push_back(1.0);
    return full;
}

int block_index(const std::vector<double>& partition, double x) {
    // half-open blocks [a_{k-1}, a_k), last block closed at 1
    const auto it = std::upper_bound(partition.begin() + 1, partition.end() - 1, x);
    return static_cast<int>(it - partition.begin()) - 1;
}

} // namespace

std::string to_string(GraphonFamily family) {
    switch (family) {
        case GraphonFamily::Constant: return "constant";
        case GraphonFamily::Bilinear: return "bilinear";
        case GraphonFamily::Block: return "block";
        case GraphonFamily::Grid: return "grid";
        case GraphonFamily::Custom: return "custom";
    }
    return "?";
}

Graphon Graphon::constant(double p) {
    check_unit_interval(p, "constant level p");
    Graphon g;
    g.family_ = GraphonFamily::Constant;
    g.label_ = "constant(" + format_double(p) + ")";
    g.param_ = p;
    g.kernel_ = [p](double, double) { return p; };
    g.lipschitz_ = 0.0;
    g.eta_ = g.delta_ = g.dmax_upper_ = p;
    g.eta_exact_ = g.delta_exact_ = true;
    g.degree_nondecreasing_ = true;
    g.validate();
    return g;
}

Graphon Graphon::bilinear(double a) {
    check_unit_interval(a, "bilinear coefficient a");
    Graphon g;
    g.family_ = GraphonFamily::Bilinear;
    g.label_ = "bilinear(" + format_double(a) + ")";
    g.param_ = a;
    g.kernel_ = [a](double x, double y) { return 1.0 - a * x * y; };
    g.lipschitz_ = a;
    g.eta_ = 1.0 - a;             // attained at (1,1)
    g.delta_ = 1.0 - a / 2.0;     // d(x) = 1 - a*x/2, minimum at x=1
    g.dmax_upper_ = 1.0;
    g.eta_exact_ = g.delta_exact_ = true;
    g.degree_nondecreasing_ = (a == 0.0);
    g.validate();
    return g;
}

Graphon Graphon::block(std::vector<std::vector<double>> values,
                       std::vector<double> interior_breakpoints) {
    const std::size_t k1 = interior_breakpoints.size() + 1;
    if (values.size() != k1)
        throw ContractError("block values must be (K+1)x(K+1) for K breakpoints");
    for (const auto& row : values) {
        if (row.size() != k1)
            throw ContractError("block values must be square");
        for (double v : row) check_unit_interval(v, "block value");
    }
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(values[i][j] - values[j][i]) > kValidateTol)
                throw ContractError("block value matrix must be symmetric");

    Graphon g;
    g.family_ = GraphonFamily::Block;
    g.label_ = "block(" + std::to_string(k1) + "x" + std::to_string(k1) + ")";
    g.breakpoints_ = full_partition(std::move(interior_breakpoints));
    g.panels_ = g.breakpoints_;
    g.block_values_ = std::move(values);
    const auto parts = g.breakpoints_;
    const auto vals = g.block_values_;
    g.kernel_ = [parts, vals](double x, double y) {
        return vals[block_index(parts, x)][block_index(parts, y)];
    };
    g.lipschitz_ = 0.0;

    double eta = 1.0, dmin = 1.0, dmax = 0.0;
    std::vector<double> block_degrees(k1, 0.0);
    for (std::size_t k = 0; k < k1; ++k) {
        double d = 0.0;
        for (std::size_t l = 0; l < k1; ++l) {
            eta = std::min(eta, g.block_values_[k][l]);
            d += g.block_values_[k][l] * (parts[l + 1] - parts[l]);
        }
        block_degrees[k] = d;
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    g.eta_ = eta;
    g.delta_ = dmin;
    g.dmax_upper_ = dmax;
    g.eta_exact_ = g.delta_exact_ = true;
    g.degree_nondecreasing_ = std::is_sorted(block_degrees.begin(), block_degrees.end());
    g.validate();
    return g;
}

Graphon Graphon::grid(Eigen::MatrixXd node_values) {
    const Eigen::Index n = node_values.rows();
    if (n < 2 || node_values.cols() != n)
        throw ContractError("grid node values must be square with size >= 2");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            check_unit_interval(node_values(i, j), "grid node value");
            if (std::abs(node_values(i, j) - node_values(j, i)) > kValidateTol)
                throw ContractError("grid node values must be symmetric");
        }
    const int cells = static_cast<int>(n) - 1;

    Graphon g;
    g.family_ = GraphonFamily::Grid;
    g.label_ = "grid(" + std::to_string(n) + "x" + std::to_string(n) + ")";
    g.grid_values_ = std::move(node_values);
    // Continuous piecewise-bilinear kernel: globally Lipschitz, so K = 0.
    // Cell boundaries are still quadrature panels.
    g.panels_.clear();
    for (int c = 0; c <= cells; ++c)
        g.panels_.push_back(static_cast<double>(c) / cells);
    const Eigen::MatrixXd v = g.grid_values_;
    g.kernel_ = [v, cells](double x, double y) {
        const double sx = std::clamp(x, 0.0, 1.0) * cells;
        const double sy = std::clamp(y, 0.0, 1.0) * cells;
        const int ix = std::min(static_cast<int>(sx), cells - 1);
        const int iy = std::min(static_cast<int>(sy), cells - 1);
        const double tx = sx - ix, ty = sy - iy;
        return (1 - tx) * (1 - ty) * v(ix, iy) + tx * (1 - ty) * v(ix + 1, iy) +
               (1 - tx) * ty * v(ix, iy + 1) + tx * ty * v(ix + 1, iy + 1);
    };
    double max_diff = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            max_diff = std::max(max_diff,
                                std::abs(g.grid_values_(i + 1, j) - g.grid_values_(i, j)));
    g.lipschitz_ = max_diff * cells;
    g.eta_ = g.grid_values_.minCoeff();  // bilinear patches attain extrema at corners
    g.eta_exact_ = true;
    // d(x) is piecewise linear in x with node values equal to the trapezoid
    // integrals of the kernel rows.
    std::vector<double> row_deg(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = 0.5 * (g.grid_values_(i, 0) + g.grid_values_(i, n - 1));
        for (Eigen::Index j = 1; j + 1 < n; ++j) s += g.grid_values_(i, j);
        row_deg[i] = s / cells;
    }
    g.delta_ = *std::min_element(row_deg.begin(), row_deg.end());
    g.dmax_upper_ = *std::max_element(row_deg.begin(), row_deg.end());
    g.delta_exact_ = true;
    g.degree_nondecreasing_ = std::is_sorted(row_deg.begin(), row_deg.end());
    g.validate();
    return g;
}

Graphon Graphon::custom(Kernel kernel, double lipschitz,
                        std::vector<double> interior_breakpoints,
                        std::optional<double> eta, std::optional<double> delta,
                        std::string label) {
    if (lipschitz < 0.0) throw ContractError("Lipschitz constant must be >= 0");
    Graphon g;
    g.family_ = GraphonFamily::Custom;
    g.label_ = std::move(label);
    g.kernel_ = std::move(kernel);
    g.lipschitz_ = lipschitz;
    g.breakpoints_ = full_partition(std::move(interior_breakpoints));
    g.panels_ = g.breakpoints_;
    g.finalize(eta, delta);
    return g;
}

void Graphon::finalize(std::optional<double> eta_override,
                       std::optional<double> delta_override) {
    if (eta_override || delta_override || !eta_exact_ || !delta_exact_) {
        ExtremaBrackets br;
        if (!eta_override || !delta_override) {
            const double step = std::min(2e-3, min_block_width() / 4.0);
            br = estimate_extrema(step);
        }
        if (eta_override) {
            check_unit_interval(*eta_override, "eta_W");
            eta_ = *eta_override;
            eta_exact_ = true;
        } else if (!eta_exact_) {
            eta_ = br.eta_low;
        }
        if (delta_override) {
            check_unit_interval(*delta_override, "delta_W");
            delta_ = *delta_override;
            delta_exact_ = true;
        } else if (!delta_exact_) {
            delta_ = br.delta_low;
        }
        if (!eta_override || !delta_override) dmax_upper_ = br.dmax_high;
    }
    if (family_ == GraphonFamily::Custom) {
        // sampled monotonicity check, per block
        degree_nondecreasing_ = true;
        double prev = -1.0;
        for (std::size_t k = 0; k + 1 < breakpoints_.size() && degree_nondecreasing_; ++k) {
            const double a = breakpoints_[k], b = breakpoints_[k + 1];
            for (int i = 0; i < 32; ++i) {
                const double x = a + (b - a) * (i + 0.5) / 32.0;
                const double d = degree(x);
                if (d < prev - 1e-9) {
                    degree_nondecreasing_ = false;
                    break;
                }
                prev = d;
            }
        }
    }
    validate();
}

void Graphon::validate() const {
    std::mt19937_64 rng(0x67726170686f6eULL);
    auto unif = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

    for (int i = 0; i < 256; ++i) {
        const double x = unif(), y = unif();
        const double wxy = kernel_(x, y), wyx = kernel_(y, x);
        if (std::abs(wxy - wyx) > kValidateTol)
            throw ContractError(label_ + ": kernel is not symmetric at sampled points");
        if (!(wxy >= 0.0 && wxy <= 1.0))
            throw ContractError(label_ + ": kernel leaves [0,1] at sampled points");
        if (wxy < eta_ - kValidateTol)
            throw ContractError(label_ + ": kernel drops below declared eta_W");
    }
    // Lipschitz spot check on random pairs within one block
    const int nblocks = static_cast<int>(breakpoints_.size()) - 1;
    for (int i = 0; i < 256; ++i) {
        const int k = static_cast<int>(unif() * nblocks) % nblocks;
        const int l = static_cast<int>(unif() * nblocks) % nblocks;
        const double ax = breakpoints_[k], bx = breakpoints_[k + 1];
        const double ay = breakpoints_[l], by = breakpoints_[l + 1];
        const double x1 = ax + (bx - ax) * unif(), x2 = ax + (bx - ax) * unif();
        const double y1 = ay + (by - ay) * unif(), y2 = ay + (by - ay) * unif();
        const double lhs = std::abs(kernel_(x1, y1) - kernel_(x2, y2));
        const double rhs = lipschitz_ * (std::abs(x1 - x2) + std::abs(y1 - y2));
        if (lhs > rhs + 1e-9)
            throw ContractError(label_ + ": declared Lipschitz constant violated");
    }
    for (int i = 0; i < 16; ++i) {
        const double d = degree(unif());
        if (d < delta_ - 1e-9)
            throw ContractError(label_ + ": degree drops below declared delta_W");
        if (d > dmax_upper_ + 1e-9)
            throw ContractError(label_ + ": degree exceeds estimated maximum");
    }
}

double Graphon::degree(double x) const {
    check_unit_interval(x, "degree argument x");
    const double d =
        integrate([this, x](double y) { return kernel_(x, y); }, 0.0, 1.0, panels_);
    return std::clamp(d, 0.0, 1.0);
}

double Graphon::min_block_width() const {
    double w = 1.0;
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k)
        w = std::min(w, breakpoints_[k + 1] - breakpoints_[k]);
    return w;
}

ExtremaBrackets Graphon::estimate_extrema(double grid_step) const {
    if (!(grid_step > 0.0))
        throw ContractError("estimate_extrema: grid_step must be positive");
    if (grid_step >= min_block_width())
        throw ContractError(
            "estimate_extrema: grid_step too coarse, must be below the smallest "
            "block width " +
            format_double(min_block_width()));
    if (grid_step < 2e-4)
        throw ContractError("estimate_extrema: grid_step below 2e-4 is not supported");

    // Midpoint grids per block: every point of a block is within grid_step/2
    // of a sample in each coordinate, so the Lipschitz certificates below hold.
    std::vector<std::vector<double>> block_samples;
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        const double a = breakpoints_[k], b = breakpoints_[k + 1];
        const int m = static_cast<int>(std::ceil((b - a) / grid_step));
        std::vector<double> pts(m);
        for (int i = 0; i < m; ++i) pts[i] = a + (b - a) * (i + 0.5) / m;
        block_samples.push_back(std::move(pts));
    }

    ExtremaBrackets br;
    double wmin = 1.0;
    for (const auto& xs : block_samples)
        for (const auto& ys : block_samples)
            for (double x : xs)
                for (double y : ys) wmin = std::min(wmin, kernel_(x, y));
    br.eta_high = wmin;
    br.eta_low = std::max(0.0, wmin - 2.0 * lipschitz_ * grid_step);

    double dmin = 1.0, dmax = 0.0;
    for (const auto& xs : block_samples)
        for (double x : xs) {
            const double d = degree(x);
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    br.delta_high = dmin;
    br.delta_low = std::max(0.0, dmin - lipschitz_ * grid_step);
    br.dmax_low = dmax;
    br.dmax_high = std::min(1.0, dmax + lipschitz_ * grid_step);
    return br;
}

Graphon::RearrangedDegree Graphon::degree_rearranged() const {
    RearrangedDegree out;
    switch (family_) {
        case GraphonFamily::Constant: {
            const double p = param_;
            out.value = [p](double) { return p; };
            out.panels = {0.0, 1.0};
            return out;
        }
        case GraphonFamily::Bilinear: {
            const double a = param_;
            // d(x) = 1 - a*x/2 is nonincreasing; its nondecreasing
            // rearrangement is d(1-x).
            out.value = [a](double x) { return 1.0 - a * (1.0 - x) / 2.0; };
            out.panels = {0.0, 1.0};
            return out;
        }
        case GraphonFamily::Block: {
            const std::size_t k1 = block_values_.size();
            std::vector<std::pair<double, double>> deg_width(k1);
            for (std::size_t k = 0; k < k1; ++k) {
                double d = 0.0;
                for (std::size_t l = 0; l < k1; ++l)
                    d += block_values_[k][l] * (breakpoints_[l + 1] - breakpoints_[l]);
                deg_width[k] = {d, breakpoints_[k + 1] - breakpoints_[k]};
            }
            std::sort(deg_width.begin(), deg_width.end());
            std::vector<double> cuts{0.0};
            std::vector<double> vals;
            for (const auto& [d, w] : deg_width) {
                vals.push_back(d);
                cuts.push_back(cuts.back() + w);
            }
            cuts.back() = 1.0;
            out.panels = cuts;
            out.value = [cuts, vals](double x) {
                const auto it =
                    std::upper_bound(cuts.begin() + 1, cuts.end() - 1, x);
                return vals[it - cuts.begin() - 1];
            };
            return out;
        }
        default: {
            // quantile estimate from a fine midpoint sample of d
            const int m = 4096;
            auto samples = std::make_shared<std::vector<double>>();
            samples->reserve(m);
            for (int i = 0; i < m; ++i)
                samples->push_back(degree((i + 0.5) / m));
            std::sort(samples->begin(), samples->end());
            out.value = [samples, m](double x) {
                const double u = std::clamp(x, 0.0, 1.0) * (m - 1);
                const int i = std::min(static_cast<int>(u), m - 2);
                const double t = u - i;
                return (1 - t) * (*samples)[i] + t * (*samples)[i + 1];
            };
            out.panels.resize(65);
            for (int i = 0; i <= 64; ++i) out.panels[i] = i / 64.0;
            return out;
        }
    }
}

Graphon Graphon::from_manifest(const KvFile& kv) {
    const std::string family = kv.at("family").string();
    std::optional<double> eta = kv.number("eta_W");
    std::optional<double> delta = kv.number("delta_W");

    Graphon g = [&]() {
        if (family == "constant") return constant(kv.at("p").number());
        if (family == "bilinear") return bilinear(kv.at("a").number());
        if (family == "block") {
            std::vector<double> breaks;
            if (kv.has("breakpoints")) breaks = kv.at("breakpoints").array();
            return block(kv.at("values").matrix(), breaks);
        }
        if (family == "grid") {
            const std::string file = kv.at("grid_csv").string();
            std::filesystem::path p(file);
            if (p.is_relative() && !kv.origin().empty() && kv.origin() != "<string>")
                p = std::filesystem::path(kv.origin()).parent_path() / p;
            return grid(load_dense_csv(p.string()));
        }
        throw UsageError(kv.origin() + ": unknown graphon family '" + family +
                         "' (expected constant, bilinear, block, or grid)");
    }();

    if (auto L = kv.number("lipschitz_L")) {
        if (*L < g.lipschitz_)
            throw UsageError(kv.origin() +
                             ": lipschitz_L is below the family's exact constant");
        g.lipschitz_ = *L;
    }
    if (eta || delta) g.finalize(eta, delta);
    return g;
}

Graphon Graphon::from_manifest_file(const std::string& path) {
    return from_manifest(KvFile::parse_file(path));
}

} // namespace glab
