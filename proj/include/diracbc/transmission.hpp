#pragma once
//
// Transmission conditions {(B1 phi, B2 phi)} across a hypersurface: symmetry,
// self-adjointness, the three regularity formulations and delta-shell potentials.
//

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diracbc/regularity.hpp"

namespace diracbc {

struct TransmissionPair {
    BoundaryFrame frame;
    Matrix b1;
    Matrix b2;

    TransmissionPair() = default;
    TransmissionPair(BoundaryFrame f, Matrix m1, Matrix m2) : frame(std::move(f)), b1(std::move(m1)), b2(std::move(m2))
    {
        const auto n = frame.rank();
        if (b1.rows() != n || b1.cols() != n || b2.rows() != n || b2.cols() != n)
            throw Error(ErrorCode::dimension_mismatch, "B1 and B2 must be N x N");
    }
};

struct DeltaShellParams {
    double eta = 0.0;
    double tau = 0.0;
    double omega = 0.0;
    double lambda = 0.0;
};

namespace detail {

inline double pair_scale(const TransmissionPair& tp)
{
    return std::max({1.0, tp.b1.squaredNorm(), tp.b2.squaredNorm()});
}

} // namespace detail

/// B1^* c_nu B1 = B2^* c_nu B2, relative to the size of the pair.
inline bool trans_symmetric(const TransmissionPair& tp, double tol = default_tol)
{
    const Matrix c = tp.frame.c_nu();
    const Matrix diff = tp.b1.adjoint() * c * tp.b1 - tp.b2.adjoint() * c * tp.b2;
    return diff.norm() <= tol * detail::pair_scale(tp);
}

inline bool trans_self_adjoint(const TransmissionPair& tp, double tol = default_tol)
{
    if (!trans_symmetric(tp, tol))
        return false;
    const auto n = tp.frame.rank();
    const Subspace k1(n, null_space(tp.b1)), k2(n, null_space(tp.b2));
    return intersect(k1, k2).empty();
}

/// Rank-2N representation for the doubled bundle: gamma~_j = diag(gamma_j, c_{R e_j}) with R the
/// reflection in nu^perp, so that c~_nu = diag(c_nu, -c_nu) and a~(k) = diag(a(k), -a(k)).
inline BoundaryFrame doubled_frame(const BoundaryFrame& frame)
{
    const auto& rep = frame.rep();
    const int d = rep.dim();
    const Eigen::MatrixXd refl = Eigen::MatrixXd::Identity(d, d) - 2.0 * frame.nu() * frame.nu().transpose();
    const auto n = rep.rank();
    std::vector<Matrix> g;
    for (int j = 0; j < d; ++j) {
        Matrix big = Matrix::Zero(2 * n, 2 * n);
        big.topLeftCorner(n, n) = rep.gamma(j);
        big.bottomRightCorner(n, n) = clifford_mult(rep, refl.col(j));
        g.push_back(big);
    }
    auto doubled = std::make_shared<const CliffordRep>(CliffordRep::from_gammas(std::move(g), 1e-12));
    return {doubled, frame.nu(), frame.tangent(), 1e-10};
}

/// Lambda = {(B1 phi, B2 phi)} in the doubled spinor space.
inline BoundaryCondition doubled_condition(const TransmissionPair& tp)
{
    Matrix stacked(2 * tp.frame.rank(), tp.frame.rank());
    stacked << tp.b1, tp.b2;
    return {doubled_frame(tp.frame), span(stacked)};
}

struct TransmissionOptions {
    SampledOptions sampled;
    bool alternatives = true; // also evaluate the two full-rank formulations
};

struct TransmissionVerdict {
    SLVerdict image; // image(c_nu B1, B2) against E_{+i} (+) E_{+i}
    bool full_rank = false;
    std::optional<SLVerdict> alt_kernel;   // Ker(a (B2 - B1) - i (B2 + B1))
    std::optional<SLVerdict> alt_subspace; // B2 B1^{-1} E_{-i} against E_{+i}
    bool forms_agree = true;

    [[nodiscard]] Regularity regular() const noexcept { return image.regular; }
};

inline bool full_rank(const Matrix& b, double tol = 1e-10)
{
    return null_space(b, tol).cols() == 0;
}

inline TransmissionVerdict trans_sl_check(const TransmissionPair& tp, const TransmissionOptions& opt = {})
{
    const auto& frame = tp.frame;
    const auto n = frame.rank();
    const Matrix cnu = frame.c_nu();
    TransmissionVerdict out;

    Matrix img(2 * n, n);
    img << cnu * tp.b1, tp.b2;
    const Subspace image = span(img);
    const auto plus_plus = [&frame, n](const RealVector& k) {
        const Matrix e = e_plus_i(frame, k).frame;
        Matrix t = Matrix::Zero(2 * n, 2 * e.cols());
        t.block(0, 0, n, e.cols()) = e;
        t.block(n, e.cols(), n, e.cols()) = e;
        return t;
    };
    out.image = detail::DirectionSearch(frame, detail::avoid(image, plus_plus), opt.sampled).run("transmission_image");

    out.full_rank = full_rank(tp.b1) && full_rank(tp.b2);
    if (!out.full_rank || !opt.alternatives)
        return out;

    const Matrix diff = tp.b2 - tp.b1, sum = tp.b2 + tp.b1;
    const auto kernel_eval = [&frame, diff, sum](const RealVector& k) {
        const Matrix m = principal_symbol(frame, k) * diff - I_unit * sum;
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        detail::MarginValue mv;
        mv.sine = sv(sv.size() - 1) / std::max(sv(0), 1e-300);
        mv.vector = svd.matrixV().col(sv.size() - 1);
        return mv;
    };
    out.alt_kernel = detail::DirectionSearch(frame, kernel_eval, opt.sampled).run("transmission_kernel");

    const Matrix g = tp.b2 * tp.b1.inverse();
    const auto sub_eval = [&frame, g](const RealVector& k) {
        const Subspace moved = span(g * e_minus_i(frame, k).frame);
        return detail::margin_against(identity(moved.ambient) - e_plus_i(frame, k).projector(), moved.frame);
    };
    out.alt_subspace = detail::DirectionSearch(frame, sub_eval, opt.sampled).run("transmission_subspace");

    // a boundary verdict is compatible with either answer
    const auto same = [](const SLVerdict& a, const SLVerdict& b) {
        return a.regular == b.regular || a.regular == Regularity::boundary || b.regular == Regularity::boundary;
    };
    out.forms_agree = same(out.image, *out.alt_kernel) && same(out.image, *out.alt_subspace);
    if (!out.forms_agree)
        out.image.warnings.push_back("the three transmission formulations disagree");
    return out;
}

inline TransmissionVerdict trans_sl_check(const TransmissionPair& tp, int samples)
{
    TransmissionOptions opt;
    opt.sampled.samples = samples;
    return trans_sl_check(tp, opt);
}

struct DeltaShellPair {
    TransmissionPair pair;
    Complex d_plus;
    Complex d_minus;
    bool invertible = true;
    Complex mit_plus{1.0, 0.0};  // f~ = a Id of the decoupled condition on the + side
    Complex mit_minus{1.0, 0.0};
    std::vector<std::string> warnings;
};

/// V = eta Id + tau beta + omega c_nu + i lambda c_nu beta.
inline Matrix delta_potential(const DeltaShellParams& p, const ChiralStructure& cs, const BoundaryFrame& frame)
{
    const Matrix cnu = frame.c_nu();
    const auto n = frame.rank();
    return p.eta * identity(n) + p.tau * cs.beta + p.omega * cnu + I_unit * p.lambda * cnu * cs.beta;
}

inline Complex delta_d(const DeltaShellParams& p, double sign)
{
    const Complex s = Complex(0.0, 2.0 * sign) - p.omega;
    return (-p.eta * p.eta + s * s + p.tau * p.tau + p.lambda * p.lambda) / 4.0;
}

/// A_+- = +-i c_nu - V/2; B1 = -A_+^{-1}, B2 = A_-^{-1} when invertible, kernel projectors otherwise.
inline DeltaShellPair delta_shell_pair(const DeltaShellParams& p, const ChiralStructure& cs, const BoundaryFrame& frame)
{
    const auto n = frame.rank();
    const Matrix cnu = frame.c_nu();
    const Matrix v = delta_potential(p, cs, frame);
    const Matrix ap = I_unit * cnu - v / 2.0, am = -I_unit * cnu - v / 2.0;

    DeltaShellPair out;
    out.d_plus = delta_d(p, 1.0);
    out.d_minus = delta_d(p, -1.0);
    const double thr =
        1e-10 * (1.0 + p.eta * p.eta + p.tau * p.tau + p.omega * p.omega + p.lambda * p.lambda);
    for (const double sign : {1.0, -1.0}) {
        const Complex num = Complex(0.0, sign * 2.0 - p.lambda) + (p.eta + p.tau);
        const Complex den = Complex(0.0, sign * 2.0 - p.lambda) - (p.eta + p.tau);
        (sign > 0 ? out.mit_plus : out.mit_minus) = std::abs(den) == 0.0 ? Complex(1.0, 0.0) : num / den;
    }

    if (std::abs(out.d_plus) > thr) {
        const Matrix cp = ap + p.eta * identity(n), cm = am + p.eta * identity(n);
        out.pair = TransmissionPair(frame, -cp / out.d_plus, cm / out.d_minus);
        return out;
    }

    out.invertible = false;
    if (std::abs(out.d_plus) != 0.0)
        out.warnings.push_back("d+ is below the singular threshold; using the projector branch");
    const Subspace ran_p = span(ap, 1e-8), ran_m = span(am, 1e-8);
    if (!intersect(ran_p, ran_m, 1e-8).empty())
        throw Error(ErrorCode::unsupported_transmission, "Ran A+ and Ran A- intersect; no projector recipe applies");
    const Subspace ker_p(n, null_space(ap, 1e-8)), ker_m(n, null_space(am, 1e-8));
    out.pair = TransmissionPair(frame, ker_p.projector(), ker_m.projector());
    return out;
}

/// Distance of eta^2 - tau^2 - omega^2 from the two values (lambda +- 2)^2.
inline double delta_shell_surface_distance(const DeltaShellParams& p)
{
    const double lhs = p.eta * p.eta - p.tau * p.tau - p.omega * p.omega;
    return std::min(std::abs(lhs - (p.lambda - 2.0) * (p.lambda - 2.0)),
                    std::abs(lhs - (p.lambda + 2.0) * (p.lambda + 2.0)));
}

inline bool delta_shell_regular(const DeltaShellParams& p, double tol = default_tol)
{
    return delta_shell_surface_distance(p) > tol;
}

} // namespace diracbc
