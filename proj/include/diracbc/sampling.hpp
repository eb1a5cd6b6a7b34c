#pragma once
//
// Deterministic direction grids on unit spheres of the tangent space and the
// local minimizers used to refine sampled margins.
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "diracbc/core.hpp"

namespace diracbc {

/// Quasi-uniform unit vectors in R^m (m = d - 1 tangent coordinates).
///
/// m = 1: {+1, -1}. m = 2: angles 2 pi j / n. m = 3: Fibonacci sphere. m = 4: additive R3
/// sequence pushed to S^3 by the uniform quaternion map.
inline std::vector<RealVector> sphere_grid(int m, int samples)
{
    using std::numbers::pi;
    std::vector<RealVector> out;
    const int n = std::max(samples, 1);
    if (m == 1) {
        out.push_back(RealVector::Constant(1, 1.0));
        out.push_back(RealVector::Constant(1, -1.0));
    } else if (m == 2) {
        for (int j = 0; j < n; ++j) {
            const double phi = 2.0 * pi * j / n;
            RealVector v(2);
            v << std::cos(phi), std::sin(phi);
            out.push_back(v);
        }
    } else if (m == 3) {
        const double golden = pi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < n; ++j) {
            const double z = 1.0 - (2.0 * j + 1.0) / n;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * j;
            RealVector v(3);
            v << r * std::cos(phi), r * std::sin(phi), z;
            out.push_back(v);
        }
    } else if (m == 4) {
        // plastic-number based R3 sequence
        const double g = 1.2207440846057596;
        const double a1 = 1.0 / g, a2 = 1.0 / (g * g), a3 = 1.0 / (g * g * g);
        for (int j = 0; j < n; ++j) {
            const double u1 = std::fmod(0.5 + a1 * (j + 1), 1.0);
            const double u2 = std::fmod(0.5 + a2 * (j + 1), 1.0);
            const double u3 = std::fmod(0.5 + a3 * (j + 1), 1.0);
            const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
            RealVector v(4);
            v << s1 * std::sin(2 * pi * u2), s1 * std::cos(2 * pi * u2), s2 * std::sin(2 * pi * u3),
                s2 * std::cos(2 * pi * u3);
            out.push_back(v);
        }
    } else {
        throw Error(ErrorCode::dimension_mismatch, "no direction grid for this tangent dimension");
    }
    return out;
}

struct MinimumResult {
    RealVector x;
    double value = INFINITY;
};

/// Nelder-Mead simplex minimization from x0 with initial step `step`.
inline MinimumResult nelder_mead(const std::function<double(const RealVector&)>& f, const RealVector& x0, double step,
                                 int max_evals = 400, double ftol = 1e-15)
{
    const Eigen::Index m = x0.size();
    std::vector<RealVector> pts;
    std::vector<double> vals;
    pts.push_back(x0);
    for (Eigen::Index i = 0; i < m; ++i) {
        RealVector p = x0;
        p(i) += step;
        pts.push_back(p);
    }
    for (const auto& p : pts)
        vals.push_back(f(p));
    int evals = static_cast<int>(pts.size());
    std::vector<std::size_t> order(pts.size());

    while (evals < max_evals) {
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
        if (vals[worst] - vals[best] <= ftol && (pts[worst] - pts[best]).norm() < 1e-14)
            break;
        if (vals[best] == 0.0)
            break;
        RealVector centroid = RealVector::Zero(m);
        for (std::size_t i = 0; i + 1 < order.size(); ++i)
            centroid += pts[order[i]];
        centroid /= static_cast<double>(m);

        const RealVector xr = centroid + (centroid - pts[worst]);
        const double fr = f(xr);
        ++evals;
        if (fr < vals[best]) {
            const RealVector xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            const bool outside = fr < vals[worst];
            const RealVector xc =
                outside ? RealVector(centroid + 0.5 * (xr - centroid)) : RealVector(centroid + 0.5 * (pts[worst] - centroid));
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (std::size_t i = 1; i < order.size(); ++i) {
                    const std::size_t k = order[i];
                    pts[k] = pts[best] + 0.5 * (pts[k] - pts[best]);
                    vals[k] = f(pts[k]);
                    ++evals;
                }
            }
        }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    return {pts[static_cast<std::size_t>(it - vals.begin())], *it};
}

/// Golden-section search on [lo, hi]; converges to machine precision on unimodal f.
inline std::pair<double, double> golden_section(const std::function<double(double)>& f, double lo, double hi,
                                                int iterations = 90)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iterations && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++i) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

/// Brent minimization of f on [lo, hi], polished by golden section around the Brent point.
///
/// Brent stops at ~sqrt(eps) relative accuracy; margins vanish linearly at failing directions,
/// so the polish is what brings them down to rounding level.
inline MinimumResult brent_minimize(const std::function<double(double)>& f, double lo, double hi)
{
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits / 2, iters);
    const double w = std::max(1e-6, 1e-3 * (hi - lo));
    const auto p = golden_section(f, std::max(lo, r.first - w), std::min(hi, r.first + w));
    RealVector x(1);
    if (p.second < r.second) {
        x << p.first;
        return {x, p.second};
    }
    x << r.first;
    return {x, r.second};
}

} // namespace diracbc
