#pragma once

#include <functional>
#include <span>
#include <vector>

namespace glab {

/// Gauss-Legendre nodes and weights on [-1,1], computed by Newton iteration
/// on the Legendre recurrence.
class GaussLegendre {
public:
    explicit GaussLegendre(int order);

    int order() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Integral of f over [a,b] with a single panel.
    double panel(const std::function<double(double)>& f, double a, double b) const;

    /// Cached rule for a given order (orders are small; cache lives forever).
    static const GaussLegendre& rule(int order);

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct QuadratureOptions {
    int order = 16;
    double abs_tol = 1e-13;  // per unit panel width
    int max_depth = 32;
};

/// Composite Gauss-Legendre integration of f over [a,b]. `interior_points`
/// become panel boundaries (values outside (a,b) are ignored); each panel is
/// bisected adaptively until the order-p estimate is stable.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> interior_points = {},
                 const QuadratureOptions& opts = {});

/// Tensor Gauss-Legendre integral over [0,1]^2 with panel boundaries taken
/// from `interior_points` in both coordinates and `refine` subdivisions per
/// panel. Used as an independent cross-check of 1-D results.
double integrate2d(const std::function<double(double, double)>& f,
                   std::span<const double> interior_points, int order = 16,
                   int refine = 4);

} // namespace glab
