#include "glab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "glab/common.hpp"

namespace glab {

GaussLegendre::GaussLegendre(int order) {
    if (order < 1) throw ContractError("Gauss-Legendre order must be >= 1");
    nodes_.resize(order);
    weights_.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th root of P_n.
        double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
            }
            pp = order * (z * p1 - p2) / (z * z - 1.0);
            const double dz = -p1 / pp;
            z += dz;
            if (std::abs(dz) < 1e-16) break;
        }
        nodes_[i] = -z;
        nodes_[order - 1 - i] = z;
        weights_[i] = weights_[order - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

double GaussLegendre::panel(const std::function<double(double)>& f, double a,
                            double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
}

const GaussLegendre& GaussLegendre::rule(int order) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, GaussLegendre(order)).first;
    return it->second;
}

namespace {

double integrate_panel_adaptive(const std::function<double(double)>& f,
                                const GaussLegendre& gl, double a, double b,
                                double coarse, double abs_tol, int depth,
                                int max_depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl.panel(f, a, mid);
    const double right = gl.panel(f, mid, b);
    const double fine = left + right;
    if (std::abs(fine - coarse) <= abs_tol * (b - a) || depth >= max_depth)
        return fine;
    return integrate_panel_adaptive(f, gl, a, mid, left, abs_tol, depth + 1,
                                    max_depth) +
           integrate_panel_adaptive(f, gl, mid, b, right, abs_tol, depth + 1,
                                    max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> interior_points,
                 const QuadratureOptions& opts) {
    if (!(a <= b)) throw ContractError("integrate: requires a <= b");
    if (a == b) return 0.0;

    std::vector<double> cuts;
    cuts.push_back(a);
    for (double p : interior_points)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const GaussLegendre& gl = GaussLegendre::rule(opts.order);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double coarse = gl.panel(f, cuts[i], cuts[i + 1]);
        total += integrate_panel_adaptive(f, gl, cuts[i], cuts[i + 1], coarse,
                                          opts.abs_tol, 0, opts.max_depth);
    }
    return total;
}

double integrate2d(const std::function<double(double, double)>& f,
                   std::span<const double> interior_points, int order,
                   int refine) {
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (double p : interior_points)
        if (p > 0.0 && p < 1.0) cuts.push_back(p);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Subdivide every panel `refine` times in each coordinate.
    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        for (int r = 0; r < refine; ++r)
            edges.push_back(cuts[i] + (cuts[i + 1] - cuts[i]) * r / refine);
    edges.push_back(1.0);

    const GaussLegendre& gl = GaussLegendre::rule(order);
    double total = 0.0;
    for (std::size_t ix = 0; ix + 1 < edges.size(); ++ix) {
        const double xm = 0.5 * (edges[ix] + edges[ix + 1]);
        const double xh = 0.5 * (edges[ix + 1] - edges[ix]);
        for (std::size_t iy = 0; iy + 1 < edges.size(); ++iy) {
            const double ym = 0.5 * (edges[iy] + edges[iy + 1]);
            const double yh = 0.5 * (edges[iy + 1] - edges[iy]);
            double cell = 0.0;
            for (int i = 0; i < gl.order(); ++i) {
                const double x = xm + xh * gl.nodes()[i];
                double row = 0.0;
                for (int j = 0; j < gl.order(); ++j)
                    row += gl.weights()[j] * f(x, ym + yh * gl.nodes()[j]);
                cell += gl.weights()[i] * row;
            }
            total += cell * xh * yh;
        }
    }
    return total;
}

} // namespace glab
