#pragma once
//
// Shapiro-Lopatinski regularity: the sampled oracle over unit tangent directions,
// the chirality criterion, the Moebius criterion and the low-dimensional classifiers.
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "diracbc/boundary.hpp"
#include "diracbc/sampling.hpp"

namespace diracbc {

enum class Regularity { regular, not_regular, boundary };

constexpr std::string_view to_string(Regularity r) noexcept
{
    switch (r) {
    case Regularity::regular: return "regular";
    case Regularity::not_regular: return "not_regular";
    case Regularity::boundary: return "boundary";
    }
    return "unknown";
}

struct SLWitness {
    RealVector direction; // unit tangent covector k
    Vector vector;        // unit v in E_{-i}(a(k)) meeting Lambda
};

struct SLVerdict {
    Regularity regular = Regularity::regular;
    std::optional<SLWitness> witness;
    double margin = 0.0; // smallest principal angle found, radians
    std::string method;
    std::vector<std::string> warnings;

    [[nodiscard]] bool is_regular() const noexcept { return regular == Regularity::regular; }
};

struct SampledOptions {
    int samples = 512;
    double tol = 1e-8;              // witness threshold on sin(angle)
    double boundary_margin = 1e-4;  // smaller margins are downgraded to boundary
    int refine_starts = 8;
    double circle_refine_below = 0.05; // circle grids refine only when the grid minimum is this small
};

/// a(k) = c_nu c_k for a unit tangent covector k.
inline Matrix principal_symbol(const BoundaryFrame& frame, const RealVector& k, double tol = default_tol)
{
    if (k.size() != frame.dim())
        throw Error(ErrorCode::dimension_mismatch, "covector has wrong number of components");
    if (std::abs(k.dot(frame.nu())) > std::max(tol, 1e-12) || std::abs(k.norm() - 1.0) > std::max(tol, 1e-12))
        throw Error(ErrorCode::not_tangent, "k must be a unit covector orthogonal to nu");
    return frame.c_nu() * clifford_mult(frame.rep(), k);
}

inline Subspace e_minus_i(const BoundaryFrame& frame, const RealVector& k)
{
    return skew_eigenspace(principal_symbol(frame, k), -I_unit);
}

inline Subspace e_plus_i(const BoundaryFrame& frame, const RealVector& k)
{
    return skew_eigenspace(principal_symbol(frame, k), I_unit);
}

namespace detail {

struct MarginValue {
    double sine = INFINITY;
    Vector vector;
};

/// sigma_min((Id - P_Lambda) T) and the unit vector T x realising it.
inline MarginValue margin_against(const Matrix& lambda_perp_proj, const Matrix& target)
{
    const Matrix m = lambda_perp_proj * target;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const Eigen::Index last = svd.singularValues().size() - 1;
    MarginValue out;
    if (target.cols() > m.rows()) {
        out.sine = 0.0;
        out.vector = target * svd.matrixV().col(target.cols() - 1);
    } else {
        out.sine = svd.singularValues()(last);
        out.vector = target * svd.matrixV().col(last);
    }
    out.vector /= out.vector.norm();
    return out;
}

using Evaluator = std::function<MarginValue(const RealVector& k)>;

/// Evaluator for "target(k) must avoid lambda": the sine of the smallest principal angle.
inline Evaluator avoid(const Subspace& lambda, std::function<Matrix(const RealVector&)> target)
{
    Matrix perp = identity(lambda.ambient) - lambda.projector();
    return [perp = std::move(perp), target = std::move(target)](const RealVector& k) {
        return margin_against(perp, target(k));
    };
}

/// Shared driver: grid over unit tangent directions, then local refinement of the smallest
/// values. `eval(k)` returns a nonnegative margin that vanishes exactly on failing directions.
class DirectionSearch {
public:
    DirectionSearch(const BoundaryFrame& frame, Evaluator eval, SampledOptions opt)
        : frame_(frame), eval_(std::move(eval)), opt_(opt)
    {
    }

    [[nodiscard]] SLVerdict run(const std::string& method) const
    {
        const int m = frame_.dim() - 1;
        const auto grid = sphere_grid(m, opt_.samples);

        std::vector<double> values(grid.size());
        std::vector<Vector> vecs(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const auto mv = eval_(frame_.tangent_vector(grid[j]));
            values[j] = mv.sine;
            vecs[j] = mv.vector;
        }

        SLVerdict verdict;
        verdict.method = method;
        // first exact grid hit wins
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (values[j] <= opt_.tol) {
                verdict.regular = Regularity::not_regular;
                verdict.witness = SLWitness{frame_.tangent_vector(grid[j]), vecs[j]};
                verdict.margin = std::asin(std::min(values[j], 1.0));
                return verdict;
            }
        }

        double best = *std::min_element(values.begin(), values.end());
        RealVector best_x;
        Vector best_v;
        if (m >= 2 && (m > 2 || best < opt_.circle_refine_below)) {
            for (const auto& cand : candidates(grid, values, m)) {
                const auto r = refine(grid, cand, m);
                if (r.sine < best) {
                    best = r.sine;
                    best_x = r.x;
                    best_v = r.vector;
                }
                if (best <= opt_.tol)
                    break;
            }
        }
        verdict.margin = std::asin(std::min(best, 1.0));
        if (best <= opt_.tol && best_x.size() > 0) {
            verdict.regular = Regularity::not_regular;
            verdict.witness = SLWitness{frame_.tangent_vector(best_x), best_v};
        } else if (verdict.margin < opt_.boundary_margin) {
            verdict.regular = Regularity::boundary;
            verdict.warnings.push_back("margin below " + std::to_string(opt_.boundary_margin) +
                                       ": sampling cannot separate this point from the failure set");
        }
        return verdict;
    }

private:
    struct Refined {
        double sine = INFINITY;
        RealVector x;
        Vector vector;
    };

    [[nodiscard]] std::vector<std::size_t> candidates(const std::vector<RealVector>& grid,
                                                      const std::vector<double>& values, int m) const
    {
        const std::size_t n = values.size();
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j) {
            if (m == 2) {
                // local minima along the circle only
                const double prev = values[(j + n - 1) % n], next = values[(j + 1) % n];
                if (values[j] > prev || values[j] > next)
                    continue;
            }
            idx.push_back(j);
        }
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const auto limit = static_cast<std::size_t>(opt_.refine_starts);
        if (m == 2) {
            if (idx.size() > limit)
                idx.resize(limit);
            return idx;
        }
        // on S^2 and S^3 the lowest grid values tend to share one basin; keep starts a few
        // grid spacings apart so narrower valleys elsewhere still get refined
        const double area = m == 3 ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi * std::numbers::pi;
        const double spacing = std::pow(area / static_cast<double>(n), 1.0 / (m - 1));
        const double min_cos = std::cos(std::min(3.0 * spacing, 1.0));
        std::vector<std::size_t> chosen;
        for (const auto j : idx) {
            if (chosen.size() >= limit)
                break;
            const bool near = std::any_of(chosen.begin(), chosen.end(),
                                          [&](std::size_t c) { return grid[j].dot(grid[c]) > min_cos; });
            if (!near)
                chosen.push_back(j);
        }
        return chosen;
    }

    [[nodiscard]] MarginValue eval(const RealVector& x) const { return eval_(frame_.tangent_vector(x)); }

    [[nodiscard]] Refined refine(const std::vector<RealVector>& grid, std::size_t j, int m) const
    {
        Refined out;
        if (m == 2) {
            const double h = 2.0 * std::numbers::pi / static_cast<double>(grid.size());
            const double phi0 = std::atan2(grid[j](1), grid[j](0));
            const auto at = [](double phi) {
                RealVector x(2);
                x << std::cos(phi), std::sin(phi);
                return x;
            };
            const auto r = brent_minimize([&](double phi) { return eval(at(phi)).sine; }, phi0 - h, phi0 + h);
            out.x = at(r.x(0));
        } else {
            const RealVector k0 = grid[j];
            // orthonormal basis of k0^perp in R^m
            Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(m, m) - k0 * k0.transpose();
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeFullU);
            const Eigen::MatrixXd b = svd.matrixU().leftCols(m - 1);
            const auto chart = [&](const RealVector& y) {
                RealVector x = k0 + b * y;
                return RealVector(x / x.norm());
            };
            const double step = m == 3 ? 0.15 : 0.35;
            const auto r = nelder_mead([&](const RealVector& y) { return eval(chart(y)).sine; },
                                       RealVector::Zero(m - 1), step, 600);
            out.x = chart(r.x);
        }
        const auto mv = eval(out.x);
        out.sine = mv.sine;
        out.vector = mv.vector;
        return out;
    }

    const BoundaryFrame& frame_;
    Evaluator eval_;
    SampledOptions opt_;
};

} // namespace detail

/// Brute-force oracle: E_{-i}(a(k)) against Lambda over a direction grid with local refinement.
inline SLVerdict sl_check_sampled(const BoundaryCondition& bc, SampledOptions opt = {})
{
    const auto& frame = bc.frame;
    const detail::DirectionSearch search(
        frame, detail::avoid(bc.lambda, [&frame](const RealVector& k) { return e_minus_i(frame, k).frame; }), opt);
    auto verdict = search.run("sampled");
    if (2 * bc.lambda.dim() != frame.rank())
        verdict.warnings.insert(verdict.warnings.begin(), "dim Lambda != N/2");
    return verdict;
}

inline SLVerdict sl_check_sampled(const BoundaryCondition& bc, int samples, double tol = 1e-8)
{
    SampledOptions opt;
    opt.samples = samples;
    opt.tol = tol;
    return sl_check_sampled(bc, opt);
}

/// R_k = i C_nu^* C_k on S+.
inline Matrix boundary_clifford(const ChiralStructure& cs, const BoundaryFrame& frame, const RealVector& k)
{
    return I_unit * cs.block(frame.nu()).adjoint() * cs.block(k);
}

/// Exact chirality criterion: (F+ (+) F- (+) (1, iQ)F_perp) against G_{+1}(k) (+) G_{-1}(k) in S+ (+) S+.
inline SLVerdict sl_check_chiral(const ChiralStructure& cs, const BoundaryFrame& frame, const ChiralDecomposition& dec,
                                 SampledOptions opt = {})
{
    const Eigen::Index h = cs.half();
    Matrix lam(2 * h, h);
    lam.setZero();
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < dec.fplus.dim(); ++i, ++c)
        lam.block(0, c, h, 1) = dec.fplus.frame.col(i);
    for (Eigen::Index i = 0; i < dec.fminus.dim(); ++i, ++c)
        lam.block(h, c, h, 1) = dec.fminus.frame.col(i);
    for (Eigen::Index i = 0; i < dec.fperp.dim(); ++i, ++c) {
        const Vector v = dec.fperp.frame.col(i);
        lam.block(0, c, h, 1) = v;
        lam.block(h, c, h, 1) = I_unit * (dec.q * v);
    }
    const Subspace lambda = span(lam);

    const auto target = [&cs, &frame, h](const RealVector& k) {
        const Matrix r = boundary_clifford(cs, frame, k);
        const Matrix herm = (r + r.adjoint()) / 2.0;
        const Subspace gp = eigenspace(herm, 1.0), gm = eigenspace(herm, -1.0);
        Matrix t = Matrix::Zero(2 * h, gp.dim() + gm.dim());
        t.block(0, 0, h, gp.dim()) = gp.frame;
        t.block(h, gp.dim(), h, gm.dim()) = gm.frame;
        return t;
    };
    const detail::DirectionSearch search(frame, detail::avoid(lambda, target), opt);
    auto verdict = search.run("chiral");
    if (verdict.witness) {
        // (x, y) in S+ (+) S+ is the spinor (x, C_nu y); the map is unitary
        const Vector x = verdict.witness->vector.head(h), y = verdict.witness->vector.tail(h);
        const Matrix cnu = cs.block(frame.nu());
        Vector spinor = cs.embed(x, cnu * y);
        if (spinor.norm() > 0)
            spinor /= spinor.norm();
        verdict.witness->vector = spinor;
    }
    return verdict;
}

// Moebius criterion -----------------------------------------------------------

struct MobiusParams {
    double a = 0.0;
    double d = 0.0;
    Complex b{0.0, 0.0};

    [[nodiscard]] double det() const { return a * d - std::norm(b); }
};

struct MobiusResult {
    bool circle_solution = false;
    bool plane_solution = false;
};

/// Solutions of a|z|^2 + 2 Re(conj(b) z) + d = 0 on the unit circle and in the extended plane.
inline MobiusResult mobius_criterion(const MobiusParams& p)
{
    const double scale = std::max({std::abs(p.a), std::abs(p.d), std::abs(p.b), 1.0});
    if (std::abs(p.det()) <= 1e-14 * scale * scale)
        throw Error(ErrorCode::degenerate_mobius, "ad = |b|^2");
    MobiusResult r;
    const double half = (p.a + p.d) / 2.0;
    r.circle_solution = std::norm(p.b) >= half * half;
    r.plane_solution = std::norm(p.b) > p.a * p.d;
    return r;
}

/// Independent root computation: conj(b) z^2 + (a + d) z + b = 0 for the circle, a t^2 + 2|b| t + d = 0
/// for the plane (after rotating b to |b|); `grid` circle points back up the identically-zero case.
inline MobiusResult mobius_root_oracle(const MobiusParams& p, int grid = 64)
{
    MobiusResult r;
    const Complex qa = std::conj(p.b), qb = p.a + p.d, qc = p.b;
    const double coeff_scale = std::abs(qa) + std::abs(qb) + std::abs(qc);
    if (coeff_scale == 0.0) {
        for (int j = 0; j < grid && !r.circle_solution; ++j) {
            const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * j / grid);
            r.circle_solution = std::abs(p.a + p.d + 2.0 * (std::conj(p.b) * z).real()) <= 1e-10;
        }
    } else if (std::abs(qa) == 0.0) {
        // linear: (a + d) z = 0, root z = 0
        r.circle_solution = false;
    } else {
        const Complex disc = std::sqrt(qb * qb - 4.0 * qa * qc);
        const Complex z1 = (-qb + disc) / (2.0 * qa), z2 = (-qb - disc) / (2.0 * qa);
        r.circle_solution = std::abs(std::abs(z1) - 1.0) <= 1e-10 || std::abs(std::abs(z2) - 1.0) <= 1e-10;
    }

    const double bb = std::abs(p.b);
    if (p.a == 0.0) {
        r.plane_solution = bb != 0.0 || p.d == 0.0;
    } else {
        r.plane_solution = 4.0 * bb * bb - 4.0 * p.a * p.d >= 0.0;
    }
    return r;
}

// Closed-form classifiers ----------------------------------------------------------

enum class Certainty { exact, sufficient, unasserted };

constexpr std::string_view to_string(Certainty c) noexcept
{
    switch (c) {
    case Certainty::exact: return "exact";
    case Certainty::sufficient: return "sufficient";
    case Certainty::unasserted: return "unasserted";
    }
    return "unknown";
}

struct ClassifierResult {
    BoundaryCondition bc;
    bool self_adjoint = false;
    SLVerdict verdict;
    Certainty certainty = Certainty::exact;
};

namespace detail {

inline void require_rep(const BoundaryFrame& frame, int d, int n)
{
    if (frame.dim() != d || frame.rank() != n)
        throw Error(ErrorCode::family_rep_mismatch, "classifier needs the (" + std::to_string(d) + ", " +
                                                        std::to_string(n) + ") representation");
}

/// Closed-form verdicts carry a witness whenever the oracle produces one.
inline void attach_witness(ClassifierResult& r, int samples)
{
    if (r.verdict.regular != Regularity::not_regular)
        return;
    const auto oracle = sl_check_sampled(r.bc, samples);
    if (oracle.witness)
        r.verdict.witness = oracle.witness;
    else
        r.verdict.warnings.push_back("oracle found no witness for the closed-form failure");
}

inline ClassifierResult finish(const BoundaryFrame& frame, const Matrix& cols, Regularity reg, Certainty cert,
                               const std::string& method, int samples)
{
    ClassifierResult r;
    r.bc = BoundaryCondition(frame, span(cols));
    r.self_adjoint = is_self_adjoint(r.bc);
    r.verdict.regular = reg;
    r.verdict.method = method;
    r.certainty = cert;
    attach_witness(r, samples);
    return r;
}

} // namespace detail

/// d = 2, N = 2: Lambda = {(w, i B C_nu w)}, regular iff B != 0.
inline ClassifierResult classify_d2n2(double b, const BoundaryFrame& frame, double tol = default_tol, int samples = 512)
{
    detail::require_rep(frame, 2, 2);
    const auto cs = chirality(frame.rep());
    const Matrix cnu = cs.block(frame.nu());
    const Matrix cols = cs.plus_frame + cs.minus_frame * (I_unit * b * cnu);
    const auto reg = std::abs(b) > tol ? Regularity::regular : Regularity::not_regular;
    return detail::finish(frame, cols, reg, Certainty::exact, "closed_form_d2n2", samples);
}

inline ClassifierResult classify_d2n2(double b) { return classify_d2n2(b, canonical_frame(make_rep(2, 2))); }

/// d = 2, N = 4: Lambda = {(w, i C_nu A w)}, regular iff A Hermitian and invertible.
inline ClassifierResult classify_d2n4(const Matrix& a, const BoundaryFrame& frame, double tol = default_tol,
                                      int samples = 512)
{
    detail::require_rep(frame, 2, 4);
    if (a.rows() != 2 || a.cols() != 2)
        throw Error(ErrorCode::dimension_mismatch, "A must be 2x2");
    const auto cs = chirality(frame.rep());
    const Matrix cnu = cs.block(frame.nu());
    const Matrix cols = cs.plus_frame + cs.minus_frame * (I_unit * cnu * a);
    const bool herm = hermiticity_residual(a) <= tol;
    const auto reg = herm && std::abs(a.determinant()) > tol ? Regularity::regular : Regularity::not_regular;
    return detail::finish(frame, cols, reg, Certainty::exact, "closed_form_d2n4", samples);
}

inline ClassifierResult classify_d2n4(const Matrix& a) { return classify_d2n4(a, canonical_frame(make_rep(2, 4))); }

enum class D3Kind { case_a, case_a_singular, case_b };

struct D3Params {
    double a = 0.0;
    double d = 0.0;
    RealVector t = RealVector::Zero(2); // coordinates in the tangent basis
    double b = 0.0;
};

/// beta_+ = -i R_{tau_1} R_{tau_2} on S+.
inline Matrix boundary_beta(const ChiralStructure& cs, const BoundaryFrame& frame)
{
    const Matrix r1 = boundary_clifford(cs, frame, frame.tangent()[0]);
    const Matrix r2 = boundary_clifford(cs, frame, frame.tangent()[1]);
    return -I_unit * r1 * r2;
}

/// d = 3, N = 4. Case A: A = a Id + d beta_+ + R_t, Lambda = {(w, i C_nu A w)}, regular iff |t| < |a|
/// (case A singular uses {(A w, i C_nu w)}, same inequality). Case B: E+(b beta_+ + R_t) (+) C_nu E-(...)
/// with |t|^2 + b^2 = 1, regular iff b != 0.
inline ClassifierResult classify_d3n4(D3Kind kind, const D3Params& p, const BoundaryFrame& frame,
                                      double tol = default_tol, int samples = 512)
{
    detail::require_rep(frame, 3, 4);
    if (p.t.size() != 2)
        throw Error(ErrorCode::dimension_mismatch, "t needs two tangent coordinates");
    const auto cs = chirality(frame.rep());
    const Matrix cnu = cs.block(frame.nu());
    const Matrix beta = boundary_beta(cs, frame);
    const Matrix rt = boundary_clifford(cs, frame, frame.tangent_vector(p.t));
    const double tn = p.t.norm();

    if (kind == D3Kind::case_b) {
        if (std::abs(tn * tn + p.b * p.b - 1.0) > 1e-9)
            throw Error(ErrorCode::param_out_of_domain, "case B needs |t|^2 + b^2 = 1");
        const Matrix h = p.b * beta + rt;
        const Subspace ep = eigenspace((h + h.adjoint()) / 2.0, 1.0), em = eigenspace((h + h.adjoint()) / 2.0, -1.0);
        Matrix cols(4, ep.dim() + em.dim());
        cols << cs.plus_frame * ep.frame, cs.minus_frame * (cnu * em.frame);
        const auto reg = std::abs(p.b) > tol ? Regularity::regular : Regularity::not_regular;
        return detail::finish(frame, cols, reg, Certainty::exact, "closed_form_d3n4_b", samples);
    }

    const Matrix a = p.a * identity(2) + p.d * beta + rt;
    Matrix cols;
    if (kind == D3Kind::case_a)
        cols = cs.plus_frame + cs.minus_frame * (I_unit * cnu * a);
    else
        cols = cs.plus_frame * a + cs.minus_frame * (I_unit * cnu);
    Regularity reg = Regularity::regular;
    if (std::abs(tn - std::abs(p.a)) <= tol)
        reg = Regularity::boundary;
    else if (tn > std::abs(p.a))
        reg = Regularity::not_regular;
    return detail::finish(frame, cols, reg, Certainty::exact,
                          kind == D3Kind::case_a ? "closed_form_d3n4_a" : "closed_form_d3n4_a_singular", samples);
}

/// d = 4, N = 4: Lambda = {(i A w, C_nu w)}. det A > 0 (A definite) is the sufficient condition;
/// det A < 0 is reported as not regular without a closed-form guarantee, det A = 0 as boundary.
inline ClassifierResult classify_d4n4(const Matrix& a, const BoundaryFrame& frame, double tol = default_tol,
                                      int samples = 512)
{
    detail::require_rep(frame, 4, 4);
    if (a.rows() != 2 || a.cols() != 2)
        throw Error(ErrorCode::dimension_mismatch, "A must be 2x2");
    const auto cs = chirality(frame.rep());
    const Matrix cnu = cs.block(frame.nu());
    const Matrix cols = cs.plus_frame * (I_unit * a) + cs.minus_frame * cnu;
    if (hermiticity_residual(a) > tol)
        return detail::finish(frame, cols, Regularity::not_regular, Certainty::unasserted, "closed_form_d4n4", samples);
    const double det = a.determinant().real();
    if (det > tol)
        return detail::finish(frame, cols, Regularity::regular, Certainty::sufficient, "closed_form_d4n4", samples);
    if (det < -tol)
        return detail::finish(frame, cols, Regularity::not_regular, Certainty::unasserted, "closed_form_d4n4",
                              samples);
    return detail::finish(frame, cols, Regularity::boundary, Certainty::unasserted, "closed_form_d4n4", samples);
}

inline ClassifierResult classify_d4n4(const Matrix& a) { return classify_d4n4(a, canonical_frame(make_rep(4, 4))); }

/// d = 3, N = 2: Lambda = E+(c_t) for a unit tangent t; never regular.
inline ClassifierResult classify_d3n2_global(const RealVector& t, const BoundaryFrame& frame, int samples = 512)
{
    detail::require_rep(frame, 3, 2);
    if (t.size() != 3 || std::abs(t.dot(frame.nu())) > 1e-9 || std::abs(t.norm() - 1.0) > 1e-9)
        throw Error(ErrorCode::not_tangent, "t must be a unit tangent vector");
    const Subspace lam = eigenspace(clifford_mult(frame.rep(), t), 1.0);
    return detail::finish(frame, lam.frame, Regularity::not_regular, Certainty::exact, "closed_form_d3n2", samples);
}

/// Reads t off the projector onto a self-adjoint Lambda in rank 2: P = (Id + c_t)/2, t_j = tr(P gamma_j).
inline RealVector recover_tangent(const BoundaryCondition& bc)
{
    if (bc.frame.rank() != 2 || !is_self_adjoint(bc))
        throw Error(ErrorCode::family_rep_mismatch, "tangent recovery needs a self-adjoint condition in rank 2");
    const Matrix p = bc.lambda.projector();
    RealVector t(bc.frame.dim());
    for (int j = 0; j < bc.frame.dim(); ++j)
        t(j) = (p * bc.frame.rep().gamma(j)).trace().real();
    return t;
}

/// H = exp(i tau c_nu) c_t = cos(tau) c_t + i sin(tau) c_nu c_t.
inline Matrix d5_generator(const BoundaryFrame& frame, const RealVector& t, double tau)
{
    const Matrix ct = clifford_mult(frame.rep(), t);
    return std::cos(tau) * ct + I_unit * std::sin(tau) * frame.c_nu() * ct;
}

/// Failing direction k = sin(tau) t + cos(tau) k~ with k~ the first frame tangent orthogonal to t,
/// and the vector spanning E_{-i}(a(k)) meet Lambda there.
inline SLWitness d5_analytic_witness(const BoundaryFrame& frame, const RealVector& t, double tau)
{
    const Matrix h = d5_generator(frame, t, tau);
    const Subspace lam = eigenspace((h + h.adjoint()) / 2.0, 1.0);
    RealVector kt;
    for (const auto& e : frame.tangent()) {
        RealVector v = e - e.dot(t) * t;
        if (v.norm() > 0.5) {
            kt = v / v.norm();
            break;
        }
    }
    if (kt.size() == 0)
        throw Error(ErrorCode::not_tangent, "no tangent direction orthogonal to t");
    const Matrix perp = identity(frame.rank()) - lam.projector();
    SLWitness best;
    double best_val = INFINITY;
    for (const double sgn : {1.0, -1.0}) {
        RealVector k = std::sin(tau) * t + sgn * std::cos(tau) * kt;
        k /= k.norm();
        const auto mv = detail::margin_against(perp, e_minus_i(frame, k).frame);
        if (mv.sine < best_val) {
            best_val = mv.sine;
            best = SLWitness{k, mv.vector};
        }
    }
    return best;
}

/// d = 5, N = 4: Lambda = E+(exp(i tau c_nu) c_t); never regular, witness from the analytic direction.
inline ClassifierResult classify_d5n4_global(const RealVector& t, double tau, const BoundaryFrame& frame)
{
    detail::require_rep(frame, 5, 4);
    if (t.size() != 5 || std::abs(t.dot(frame.nu())) > 1e-9 || std::abs(t.norm() - 1.0) > 1e-9)
        throw Error(ErrorCode::not_tangent, "t must be a unit tangent vector");
    const Matrix h = d5_generator(frame, t, tau);
    ClassifierResult r;
    r.bc = BoundaryCondition(frame, eigenspace((h + h.adjoint()) / 2.0, 1.0));
    r.self_adjoint = is_self_adjoint(r.bc);
    r.verdict.regular = Regularity::not_regular;
    r.verdict.method = "closed_form_d5n4";
    r.verdict.witness = d5_analytic_witness(frame, t, tau);
    return r;
}

/// Residuals of a witness: |a(k) v + i v| and |(Id - P_Lambda) v|.
inline std::pair<double, double> witness_residuals(const BoundaryCondition& bc, const SLWitness& w)
{
    const Matrix a = principal_symbol(bc.frame, w.direction, 1e-9);
    const double eig = (a * w.vector + I_unit * w.vector).norm();
    const double mem = (w.vector - bc.lambda.projector() * w.vector).norm();
    return {eig, mem};
}

} // namespace diracbc
