#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "glab/manifest.hpp"

namespace glab {

enum class GraphonFamily { Constant, Bilinear, Block, Grid, Custom };

std::string to_string(GraphonFamily family);

/// Certified brackets for the kernel minimum and the degree-function extrema.
/// Each bracket is guaranteed to contain the true value.
struct ExtremaBrackets {
    double eta_low = 0.0;    // kernel minimum
    double eta_high = 1.0;
    double delta_low = 0.0;  // degree minimum
    double delta_high = 1.0;
    double dmax_low = 0.0;   // degree maximum
    double dmax_high = 1.0;
};

/// A symmetric measurable kernel W:[0,1]^2 -> [0,1], piecewise Lipschitz on
/// the blocks of a breakpoint partition. Immutable after construction; safe
/// to share across threads.
class Graphon {
public:
    using Kernel = std::function<double(double, double)>;

    static Graphon constant(double p);
    /// W(x,y) = 1 - a*x*y with a in [0,1].
    static Graphon bilinear(double a);
    /// Piecewise constant kernel. `values` is the symmetric (K+1)x(K+1) block
    /// value matrix; `interior_breakpoints` are the K cut positions in (0,1).
    static Graphon block(std::vector<std::vector<double>> values,
                         std::vector<double> interior_breakpoints);
    /// Bilinear interpolation of symmetric node values on the uniform grid
    /// {0, 1/G, ..., 1}; `node_values` is (G+1)x(G+1).
    static Graphon grid(Eigen::MatrixXd node_values);
    /// Arbitrary kernel with declared Lipschitz data. Extrema are estimated
    /// with a certified grid scan unless exact values are supplied.
    static Graphon custom(Kernel kernel, double lipschitz,
                          std::vector<double> interior_breakpoints,
                          std::optional<double> eta = std::nullopt,
                          std::optional<double> delta = std::nullopt,
                          std::string label = "custom");

    /// Manifest keys: family, family parameters, optional lipschitz_L,
    /// eta_W, delta_W overrides. Relative grid_csv paths resolve against the
    /// manifest's directory.
    static Graphon from_manifest(const KvFile& kv);
    static Graphon from_manifest_file(const std::string& path);

    double operator()(double x, double y) const { return kernel_(x, y); }

    /// Degree d(x) = integral of W(x,.) by composite Gauss-Legendre with
    /// panels split at the kernel's breakpoints.
    double degree(double x) const;

    GraphonFamily family() const { return family_; }
    const std::string& label() const { return label_; }
    double lipschitz() const { return lipschitz_; }
    /// Number of interior breakpoints (K).
    int breakpoint_count() const { return static_cast<int>(breakpoints_.size()) - 2; }
    /// Full partition 0 = a_0 < ... < a_{K+1} = 1.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    /// Panel boundaries for quadrature; a superset of breakpoints() for
    /// families whose kernels have extra structure (grid cells).
    const std::vector<double>& quadrature_panels() const { return panels_; }
    double min_block_width() const;

    /// Kernel minimum: exact when the family provides it, otherwise the
    /// certified lower estimate (never an overestimate).
    double eta() const { return eta_; }
    bool eta_exact() const { return eta_exact_; }
    /// Degree-function minimum, same convention as eta().
    double delta() const { return delta_; }
    bool delta_exact() const { return delta_exact_; }
    /// Upper bracket of the degree-function maximum (never an underestimate).
    double degree_max_upper() const { return dmax_upper_; }

    /// Grid scan with Lipschitz certificates. Requires
    /// 0 < grid_step < min_block_width().
    ExtremaBrackets estimate_extrema(double grid_step) const;

    bool degree_nondecreasing() const { return degree_nondecreasing_; }

    /// Nondecreasing rearrangement of the degree function, as a callable plus
    /// the panel boundaries where it may lose smoothness. Analytic for the
    /// catalog families, quantile-based for grid/custom kernels.
    struct RearrangedDegree {
        std::function<double(double)> value;
        std::vector<double> panels;
    };
    RearrangedDegree degree_rearranged() const;

private:
    Graphon() = default;
    void finalize(std::optional<double> eta_override,
                  std::optional<double> delta_override);
    void validate() const;

    Kernel kernel_;
    GraphonFamily family_ = GraphonFamily::Custom;
    std::string label_;
    double lipschitz_ = 0.0;
    std::vector<double> breakpoints_{0.0, 1.0};
    std::vector<double> panels_{0.0, 1.0};
    double eta_ = 0.0;
    double delta_ = 0.0;
    double dmax_upper_ = 1.0;
    bool eta_exact_ = false;
    bool delta_exact_ = false;
    bool degree_nondecreasing_ = false;

    // family parameters used by degree_rearranged()
    double param_ = 0.0;                         // constant p / bilinear a
    std::vector<std::vector<double>> block_values_;
    Eigen::MatrixXd grid_values_;
};

} // namespace glab
