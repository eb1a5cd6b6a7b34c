#pragma once
//
// Pointwise boundary-condition algebra: frames, the b-form, symmetry,
// adjoint conditions, self-adjointness and the chirality parametrization.
//

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "diracbc/clifford.hpp"
#include "diracbc/linalg.hpp"

namespace diracbc {

/// Outward unit normal and an orthonormal basis of its orthogonal complement.
class BoundaryFrame {
public:
    BoundaryFrame() = default;

    BoundaryFrame(RepPtr rep, RealVector nu, std::vector<RealVector> tangent, double tol = 1e-12)
        : rep_(std::move(rep)), nu_(std::move(nu)), tangent_(std::move(tangent))
    {
        if (!rep_)
            throw Error(ErrorCode::invalid_frame, "frame needs a representation");
        const int d = rep_->dim();
        if (nu_.size() != d)
            throw Error(ErrorCode::dimension_mismatch, "normal has wrong number of components");
        if (static_cast<int>(tangent_.size()) != d - 1)
            throw Error(ErrorCode::invalid_frame, "need d - 1 tangent vectors");
        if (std::abs(nu_.norm() - 1.0) > tol)
            throw Error(ErrorCode::invalid_frame, "normal is not a unit vector");
        for (std::size_t i = 0; i < tangent_.size(); ++i) {
            if (tangent_[i].size() != d)
                throw Error(ErrorCode::dimension_mismatch, "tangent vector has wrong number of components");
            if (std::abs(tangent_[i].norm() - 1.0) > tol)
                throw Error(ErrorCode::invalid_frame, "tangent vector is not a unit vector");
            if (std::abs(tangent_[i].dot(nu_)) > tol)
                throw Error(ErrorCode::invalid_frame, "tangent vector is not orthogonal to the normal");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(tangent_[i].dot(tangent_[j])) > tol)
                    throw Error(ErrorCode::invalid_frame, "tangent vectors are not orthogonal");
        }
    }

    [[nodiscard]] const CliffordRep& rep() const { return *rep_; }
    [[nodiscard]] const RepPtr& rep_ptr() const noexcept { return rep_; }
    [[nodiscard]] const RealVector& nu() const noexcept { return nu_; }
    [[nodiscard]] const std::vector<RealVector>& tangent() const noexcept { return tangent_; }
    [[nodiscard]] int dim() const { return rep_->dim(); }
    [[nodiscard]] Eigen::Index rank() const { return rep_->rank(); }

    /// Covector sum_i x_i tangent_i for coordinates x in the tangent basis.
    [[nodiscard]] RealVector tangent_vector(const RealVector& x) const
    {
        RealVector k = RealVector::Zero(dim());
        for (std::size_t i = 0; i < tangent_.size(); ++i)
            k += x(static_cast<Eigen::Index>(i)) * tangent_[i];
        return k;
    }

    [[nodiscard]] Matrix c_nu() const { return clifford_mult(*rep_, nu_); }

private:
    RepPtr rep_;
    RealVector nu_;
    std::vector<RealVector> tangent_;
};

/// Frame with nu = e_d and tangents e_1, ..., e_{d-1}.
inline BoundaryFrame canonical_frame(RepPtr rep)
{
    const int d = rep->dim();
    std::vector<RealVector> t;
    for (int j = 0; j < d - 1; ++j)
        t.push_back(RealVector::Unit(d, j));
    return {std::move(rep), RealVector::Unit(d, d - 1), std::move(t)};
}

/// nu = e_normal, tangents the remaining unit vectors in increasing index order.
inline BoundaryFrame axis_frame(RepPtr rep, int normal)
{
    const int d = rep->dim();
    std::vector<RealVector> t;
    for (int j = 0; j < d; ++j)
        if (j != normal)
            t.push_back(RealVector::Unit(d, j));
    return {std::move(rep), RealVector::Unit(d, normal), std::move(t)};
}

/// Frame taken from the columns of a rotation: nu = last column, tangents the others.
inline BoundaryFrame rotated_frame(RepPtr rep, const Eigen::MatrixXd& rotation)
{
    const int d = rep->dim();
    std::vector<RealVector> t;
    for (int j = 0; j < d - 1; ++j)
        t.push_back(rotation.col(j));
    return {std::move(rep), rotation.col(d - 1), std::move(t), 1e-10};
}

inline RepPtr make_rep(int d, int n) { return std::make_shared<const CliffordRep>(build_rep(d, n)); }

struct BoundaryCondition {
    BoundaryFrame frame;
    Subspace lambda;

    BoundaryCondition() = default;
    BoundaryCondition(BoundaryFrame f, Subspace l) : frame(std::move(f)), lambda(std::move(l))
    {
        if (lambda.ambient != frame.rank())
            throw Error(ErrorCode::ambient_mismatch, "subspace does not live in the spinor space");
    }
};

/// b(u, v) = <c_nu u, v>, antilinear in v.
inline Complex b_form(const BoundaryFrame& frame, const Vector& u, const Vector& v)
{
    return inner(frame.c_nu() * u, v);
}

inline double symmetry_residual(const BoundaryCondition& bc)
{
    if (bc.lambda.empty())
        return 0.0;
    return (bc.lambda.frame.adjoint() * bc.frame.c_nu() * bc.lambda.frame).norm();
}

inline bool is_symmetric(const BoundaryCondition& bc, double tol = default_tol)
{
    return symmetry_residual(bc) <= tol;
}

/// Lambda* = (c_nu Lambda)^perp.
inline Subspace adjoint_bc(const BoundaryCondition& bc)
{
    return orthogonal_complement(map_subspace(bc.frame.c_nu(), bc.lambda));
}

inline Subspace eplus(const BoundaryFrame& frame) { return eigenspace(frame.c_nu(), 1.0); }
inline Subspace eminus(const BoundaryFrame& frame) { return eigenspace(frame.c_nu(), -1.0); }

/// Symmetric with dim Lambda = N/2, cross-checked against the unitary-graph description.
inline bool is_self_adjoint(const BoundaryCondition& bc, double tol = default_tol)
{
    const auto n = bc.frame.rank();
    const double sym = symmetry_residual(bc);
    const bool route_rank = sym <= tol && 2 * bc.lambda.dim() == n;

    bool route_graph = false;
    double graph_res = INFINITY;
    if (2 * bc.lambda.dim() == n) {
        try {
            const auto ex = extract_unitary(bc.lambda, eplus(bc.frame), eminus(bc.frame), tol);
            graph_res = ex.unitarity_residual;
            route_graph = graph_res <= tol;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::not_a_graph)
                throw;
        }
    }
    // Residuals are comparable (both measure X^*(Id - F^*F)X); only a clear split is a bug.
    if (route_rank != route_graph) {
        const double other = route_rank ? graph_res : sym;
        if (other > 1e3 * tol)
            throw Error(ErrorCode::inconsistent_check,
                        "rank/symmetry and unitary-graph routes disagree (residuals " + std::to_string(sym) + ", " +
                            std::to_string(graph_res) + ")");
    }
    return route_rank;
}

struct ChiralDecomposition {
    Matrix f_tilde;
    Subspace fplus;  // f~ = +1
    Subspace fminus; // f~ = -1
    Subspace fperp;
    Matrix q; // Cayley transform on F_perp, zero on F+ (+) F-
    std::vector<Complex> eigenvalues;
};

namespace detail {

inline void require_unitary(const Matrix& f, double tol)
{
    if (f.rows() != f.cols())
        throw Error(ErrorCode::dimension_mismatch, "f~ must be square");
    if (unitarity_residual(f) > tol)
        throw Error(ErrorCode::not_unitary, "f~ is not unitary");
}

} // namespace detail

/// Lambda = {((Id + f~)w, C_nu (Id - f~)w) | w in S+}.
inline BoundaryCondition from_chiral_unitary(const ChiralStructure& cs, const BoundaryFrame& frame,
                                             const Matrix& f_tilde, double tol = default_tol)
{
    detail::require_unitary(f_tilde, tol);
    if (f_tilde.rows() != cs.half())
        throw Error(ErrorCode::dimension_mismatch, "f~ must act on S+");
    const Matrix cnu = cs.block(frame.nu());
    const Eigen::Index h = cs.half();
    const Matrix upper = identity(h) + f_tilde;
    const Matrix lower = cnu * (identity(h) - f_tilde);
    const Matrix cols = (cs.plus_frame * upper + cs.minus_frame * lower) / 2.0;
    return {frame, Subspace(frame.rank(), cols)};
}

/// F+-1 eigenspaces of f~ and the Cayley transform Q = -i(Id + f~)^{-1}(Id - f~) on their complement.
inline ChiralDecomposition chiral_decompose(const Matrix& f_tilde, double tol = default_tol)
{
    detail::require_unitary(f_tilde, tol);
    const Eigen::Index h = f_tilde.rows();
    Eigen::ComplexSchur<Matrix> schur(f_tilde);
    const Matrix& t = schur.matrixT();
    const Matrix& z = schur.matrixU(); // columns are eigenvectors since f~ is normal

    ChiralDecomposition out;
    out.f_tilde = f_tilde;
    out.q = Matrix::Zero(h, h);
    Matrix plus(h, 0), minus(h, 0), perp(h, 0);
    const auto push = [](Matrix& m, const Vector& v) {
        m.conservativeResize(Eigen::NoChange, m.cols() + 1);
        m.col(m.cols() - 1) = v;
    };
    for (Eigen::Index i = 0; i < h; ++i) {
        const Complex lam = t(i, i);
        out.eigenvalues.push_back(lam);
        if (std::abs(lam - 1.0) <= 1e-8) {
            push(plus, z.col(i));
        } else if (std::abs(lam + 1.0) <= 1e-8) {
            push(minus, z.col(i));
        } else {
            push(perp, z.col(i));
            const double qi = (-I_unit * (1.0 - lam) / (1.0 + lam)).real();
            out.q += qi * z.col(i) * z.col(i).adjoint();
        }
    }
    out.fplus = Subspace(h, plus);
    out.fminus = Subspace(h, minus);
    out.fperp = Subspace(h, perp);
    return out;
}

/// Orthonormal frames of E+-(c_nu) adapted to the chirality: {(v, +-C_nu v)}/sqrt(2), v in S+.
inline std::pair<Subspace, Subspace> chiral_eframes(const ChiralStructure& cs, const BoundaryFrame& frame)
{
    const Matrix cnu = cs.block(frame.nu());
    const Matrix p = (cs.plus_frame + cs.minus_frame * cnu) / std::sqrt(2.0);
    const Matrix m = (cs.plus_frame - cs.minus_frame * cnu) / std::sqrt(2.0);
    return {Subspace(frame.rank(), p), Subspace(frame.rank(), m)};
}

/// Recovers f~ from a self-adjoint condition (inverse of from_chiral_unitary).
inline ExtractedMap chiral_unitary(const ChiralStructure& cs, const BoundaryCondition& bc, double tol = default_tol)
{
    const auto [ep, em] = chiral_eframes(cs, bc.frame);
    return extract_unitary(bc.lambda, ep, em, tol);
}

/// F+ (+) C_nu F- (+) {(v, i C_nu Q v) | v in F_perp}, the decomposed form of from_chiral_unitary.
inline Subspace decomposed_lambda(const ChiralStructure& cs, const BoundaryFrame& frame, const ChiralDecomposition& dec)
{
    const Matrix cnu = cs.block(frame.nu());
    const Eigen::Index n = frame.rank();
    Matrix cols(n, dec.fplus.dim() + dec.fminus.dim() + dec.fperp.dim());
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < dec.fplus.dim(); ++i)
        cols.col(c++) = cs.plus_frame * dec.fplus.frame.col(i);
    for (Eigen::Index i = 0; i < dec.fminus.dim(); ++i)
        cols.col(c++) = cs.minus_frame * (cnu * dec.fminus.frame.col(i));
    for (Eigen::Index i = 0; i < dec.fperp.dim(); ++i) {
        const Vector v = dec.fperp.frame.col(i);
        cols.col(c++) = cs.embed(v, I_unit * cnu * (dec.q * v));
    }
    return span(cols);
}

} // namespace diracbc
