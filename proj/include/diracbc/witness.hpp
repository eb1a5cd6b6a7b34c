#pragma once
//
// Concentrating half-space spinors psi_n = chi_n(s) exp(n i <s, xi0> - n t) chi(t) v0 that
// exhibit the failure of regularity: bounded graph norm, growing d/dt norm.
//

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "diracbc/regularity.hpp"

namespace diracbc {

enum class Cutoff {
    standard_bump, // exp(1 - 1/(1 - x^2))
    flat_bump,     // exp(1 - 1/(1 - x^4)), flatter at the origin
};

struct WitnessSpec {
    BoundaryFrame frame;
    Subspace lambda;
    RealVector xi0;
    Vector v0;
    std::vector<int> n_list{4, 16, 64, 256};
    Cutoff cutoff = Cutoff::standard_bump;
};

struct WitnessNorms {
    int n = 0;
    double l2 = 0.0;    // |psi_n|^2
    double graph = 0.0; // |psi_n|^2 + |D psi_n|^2
    double h1_t = 0.0;  // |d/dt psi_n|^2
};

struct WitnessReport {
    std::vector<WitnessNorms> rows;
    double l2_slope = 0.0;
    double ratio_slope = 0.0; // log(h1_t / graph) against log n
    double graph_spread = 0.0; // max graph / min graph
};

/// Lifts a failing verdict's witness (k, v) into the half-space model.
inline WitnessSpec witness_build(const BoundaryCondition& bc, const SLVerdict& verdict, double tol = 1e-8)
{
    if (verdict.regular != Regularity::not_regular || !verdict.witness)
        throw Error(ErrorCode::no_witness, "verdict carries no failing direction");
    WitnessSpec spec;
    spec.frame = bc.frame;
    spec.lambda = bc.lambda;
    spec.xi0 = verdict.witness->direction / verdict.witness->direction.norm();
    spec.v0 = verdict.witness->vector / verdict.witness->vector.norm();
    const auto [eig, mem] = witness_residuals(bc, SLWitness{spec.xi0, spec.v0});
    if (eig > tol || mem > tol)
        throw Error(ErrorCode::no_witness, "witness residuals exceed tolerance (" + std::to_string(eig) + ", " +
                                               std::to_string(mem) + ")");
    return spec;
}

namespace detail {

inline double bump(Cutoff c, double x)
{
    if (x >= 1.0)
        return 0.0;
    const double x2 = x * x;
    return c == Cutoff::standard_bump ? std::exp(1.0 - 1.0 / (1.0 - x2)) : std::exp(1.0 - 1.0 / (1.0 - x2 * x2));
}

inline double bump_derivative(Cutoff c, double x)
{
    if (x >= 1.0)
        return 0.0;
    const double x2 = x * x;
    if (c == Cutoff::standard_bump) {
        const double q = 1.0 - x2;
        return bump(c, x) * (-2.0 * x / (q * q));
    }
    const double q = 1.0 - x2 * x2;
    return bump(c, x) * (-4.0 * x * x2 / (q * q));
}

/// |S^{m-1}| for the (m = d - 1)-dimensional boundary.
inline double sphere_area(int m)
{
    using std::numbers::pi;
    switch (m) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    case 4: return 2.0 * pi * pi;
    default: throw Error(ErrorCode::dimension_mismatch, "unsupported boundary dimension");
    }
}

/// Composite Gauss-Legendre on [0, 1] with panels [0, h], [h, 2h], [2h, 4h], ... , compared
/// between 64 and 128 nodes per panel.
template <class F>
double composite(F f, double h)
{
    using boost::math::quadrature::gauss;
    std::vector<double> cuts{0.0};
    double x = std::min(h, 1.0);
    while (x < 1.0) {
        cuts.push_back(x);
        x *= 2.0;
    }
    cuts.push_back(1.0);
    double coarse = 0.0, fine = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        coarse += gauss<double, 64>::integrate(f, cuts[i], cuts[i + 1]);
        fine += gauss<double, 128>::integrate(f, cuts[i], cuts[i + 1]);
    }
    if (std::abs(fine - coarse) > 1e-6 * std::max(std::abs(fine), 1e-300))
        throw Error(ErrorCode::quadrature_not_converged,
                    "64/128-node results differ: " + std::to_string(coarse) + " vs " + std::to_string(fine));
    return fine;
}

} // namespace detail

/// The three norms of psi_n, reduced to one-dimensional integrals.
///
/// |psi_n|^2 = |chi_n|^2 int e^{-2nt} chi^2, with |chi_n|^2 = |S^{d-2}| int chi(u)^2 u^{d-2} du independent
/// of n (r_n = n^{-1/2} rescaling) and |grad chi_n|^2 = r_n^{-2} |S^{d-2}| int chi'(u)^2 u^{d-2} du.
/// D psi_n = -i c_nu [(chi'(t) chi_n + chi(t) a(grad chi_n)) e^{...} v0]; the order-n term cancels because
/// a(xi0) v0 = -i v0, and the cross term vanishes since a(s^) is skew and unitary.
inline WitnessNorms witness_norms(const WitnessSpec& spec, int n)
{
    if (n < 1)
        throw Error(ErrorCode::param_out_of_domain, "n must be positive");
    const Cutoff c = spec.cutoff;
    const int m = spec.frame.dim() - 1;
    const double area = detail::sphere_area(m);
    const double nn = static_cast<double>(n);
    const double r = 1.0 / std::sqrt(nn);

    const auto radial = [m](double u) { return m == 1 ? 1.0 : std::pow(u, m - 1); };
    const double chi_s = area * detail::composite([&](double u) { return std::pow(detail::bump(c, u), 2) * radial(u); }, 1.0);
    const double grad_s =
        area / (r * r) *
        detail::composite([&](double u) { return std::pow(detail::bump_derivative(c, u), 2) * radial(u); }, 1.0);

    const double h = 1.0 / nn;
    const double t_chi =
        detail::composite([&](double t) { return std::exp(-2.0 * nn * t) * std::pow(detail::bump(c, t), 2); }, h);
    const double t_dchi = detail::composite(
        [&](double t) { return std::exp(-2.0 * nn * t) * std::pow(detail::bump_derivative(c, t), 2); }, h);
    const double t_h1 = detail::composite(
        [&](double t) {
            const double g = detail::bump_derivative(c, t) - nn * detail::bump(c, t);
            return std::exp(-2.0 * nn * t) * g * g;
        },
        h);

    WitnessNorms out;
    out.n = n;
    const double v2 = spec.v0.squaredNorm();
    out.l2 = chi_s * t_chi * v2;
    const double d2 = (chi_s * t_dchi + grad_s * t_chi) * v2;
    out.graph = out.l2 + d2;
    out.h1_t = chi_s * t_h1 * v2;
    return out;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t k = x.size();
    if (k < 2)
        return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double kk = static_cast<double>(k);
    return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

inline WitnessReport witness_report(const WitnessSpec& spec, const std::vector<int>& n_list)
{
    WitnessReport rep;
    std::vector<double> ns, l2, ratio;
    double gmin = INFINITY, gmax = 0.0;
    for (const int n : n_list) {
        const auto w = witness_norms(spec, n);
        rep.rows.push_back(w);
        ns.push_back(n);
        l2.push_back(w.l2);
        ratio.push_back(w.h1_t / w.graph);
        gmin = std::min(gmin, w.graph);
        gmax = std::max(gmax, w.graph);
    }
    rep.l2_slope = loglog_slope(ns, l2);
    rep.ratio_slope = loglog_slope(ns, ratio);
    rep.graph_spread = rep.rows.empty() ? 0.0 : gmax / gmin;
    return rep;
}

inline WitnessReport witness_report(const WitnessSpec& spec) { return witness_report(spec, spec.n_list); }

} // namespace diracbc
