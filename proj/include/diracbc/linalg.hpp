#pragma once
//
// Subspaces of C^N as orthonormal column frames: eigenspaces, intersections,
// principal angles and unitary graphs between two fixed subspaces.
//

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "diracbc/core.hpp"

namespace diracbc {

struct Subspace {
    Eigen::Index ambient = 0;
    Matrix frame; // ambient x r, orthonormal columns

    Subspace() = default;
    Subspace(Eigen::Index n, Matrix f) : ambient(n), frame(std::move(f))
    {
        if (frame.rows() != ambient)
            throw Error(ErrorCode::dimension_mismatch, "frame rows differ from ambient dimension");
    }

    static Subspace zero(Eigen::Index n) { return {n, Matrix(n, 0)}; }
    static Subspace whole(Eigen::Index n) { return {n, identity(n)}; }

    [[nodiscard]] Eigen::Index dim() const noexcept { return frame.cols(); }
    [[nodiscard]] bool empty() const noexcept { return frame.cols() == 0; }
    [[nodiscard]] Matrix projector() const { return frame * frame.adjoint(); }
};

struct UnitaryMap {
    Subspace source; // E+
    Subspace target; // E-
    Matrix matrix;   // target.dim() x source.dim(), in the two frames
};

struct ExtractedMap {
    UnitaryMap map;
    bool unitary = false;
    double unitarity_residual = 0.0;
};

namespace detail {

inline double rank_threshold(const Eigen::VectorXd& sv, double tol)
{
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    return tol * std::max(1.0, smax);
}

} // namespace detail

/// Orthonormal basis of the column span of m (singular values above tol * max(1, s_max)).
inline Matrix orth(const Matrix& m, double tol = 1e-10)
{
    if (m.cols() == 0 || m.rows() == 0)
        return Matrix(m.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double thr = detail::rank_threshold(sv, tol);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > thr)
        ++r;
    return svd.matrixU().leftCols(r);
}

inline Subspace span(const Matrix& m, double tol = 1e-10) { return {m.rows(), orth(m, tol)}; }

/// Orthonormal basis of ker m.
inline Matrix null_space(const Matrix& m, double tol = 1e-10)
{
    const Eigen::Index n = m.cols();
    if (m.rows() == 0)
        return identity(n);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thr = detail::rank_threshold(sv, tol);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > thr)
        ++r;
    return svd.matrixV().rightCols(n - r);
}

inline Subspace orthogonal_complement(const Subspace& s)
{
    if (s.empty())
        return Subspace::whole(s.ambient);
    return {s.ambient, null_space(s.frame.adjoint())};
}

/// Eigenvectors of Hermitian h whose eigenvalue lies in the cluster containing lambda.
///
/// Eigenvalues are grouped into clusters (neighbours closer than 1e-8 * max(|h|, 1)); the
/// cluster is selected if any member is within that distance of lambda.
inline Subspace eigenspace(const Matrix& h, double lambda, double tol = default_tol)
{
    const double scale = std::max(h.norm(), 1.0);
    if (h.rows() != h.cols())
        throw Error(ErrorCode::dimension_mismatch, "eigenspace needs a square matrix");
    if (hermiticity_residual(h) > tol * scale)
        throw Error(ErrorCode::not_hermitian, "matrix is not Hermitian");
    const double cluster_tol = 1e-8 * scale;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto& ev = es.eigenvalues(); // ascending
    const Eigen::Index n = ev.size();
    std::vector<Eigen::Index> chosen;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && ev(end) - ev(end - 1) <= cluster_tol)
            ++end;
        bool hit = false;
        for (Eigen::Index i = start; i < end; ++i)
            hit = hit || std::abs(ev(i) - lambda) <= cluster_tol;
        if (hit)
            for (Eigen::Index i = start; i < end; ++i)
                chosen.push_back(i);
        start = end;
    }
    Matrix f(h.rows(), static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t c = 0; c < chosen.size(); ++c)
        f.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(chosen[c]);
    return {h.rows(), f};
}

/// Eigenspace of a skew-Hermitian A with A^2 = -Id at mu = +i or -i.
inline Subspace skew_eigenspace(const Matrix& a, Complex mu, double tol = default_tol)
{
    const Eigen::Index n = a.rows();
    const double scale = std::max(a.norm(), 1.0);
    if ((a + a.adjoint()).norm() > tol * scale)
        throw Error(ErrorCode::not_skew, "matrix is not skew-Hermitian");
    if ((a * a + identity(n)).norm() > tol * scale)
        throw Error(ErrorCode::not_skew, "matrix does not square to -Id");
    if (std::abs(mu.real()) > tol || std::abs(std::abs(mu.imag()) - 1.0) > tol)
        throw Error(ErrorCode::not_skew, "eigenvalue must be +i or -i");
    const Matrix h = -I_unit * a;
    return eigenspace((h + h.adjoint()) / 2.0, mu.imag() > 0 ? 1.0 : -1.0, tol);
}

/// Principal angles between U and V, ascending, min(dim U, dim V) of them.
///
/// Sines come from (Id - P_V) applied to the smaller frame, cosines from U^* V; atan2 of the pair
/// is accurate at both ends of [0, pi/2].
inline std::vector<double> principal_angles(const Subspace& u, const Subspace& v)
{
    if (u.ambient != v.ambient)
        throw Error(ErrorCode::ambient_mismatch, "subspaces live in different spaces");
    const Subspace& small = u.dim() <= v.dim() ? u : v;
    const Subspace& large = u.dim() <= v.dim() ? v : u;
    const Eigen::Index r = small.dim();
    std::vector<double> out;
    if (r == 0)
        return out;
    const Matrix residual = small.frame - large.frame * (large.frame.adjoint() * small.frame);
    Eigen::JacobiSVD<Matrix> ssvd(residual);
    Eigen::JacobiSVD<Matrix> csvd(large.frame.adjoint() * small.frame);
    Eigen::VectorXd sines = ssvd.singularValues(); // descending
    Eigen::VectorXd cosines = Eigen::VectorXd::Zero(r);
    cosines.head(std::min<Eigen::Index>(r, csvd.singularValues().size())) =
        csvd.singularValues().head(std::min<Eigen::Index>(r, csvd.singularValues().size()));
    out.resize(static_cast<std::size_t>(r));
    for (Eigen::Index i = 0; i < r; ++i) {
        const double s = i < sines.size() ? sines(sines.size() - 1 - i) : 0.0; // ascending
        out[static_cast<std::size_t>(i)] = std::atan2(std::min(s, 1.0), std::min(cosines(i), 1.0));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Largest sine of the principal angles measuring how far U is from lying inside V.
inline double containment_gap(const Subspace& u, const Subspace& v)
{
    if (u.ambient != v.ambient)
        throw Error(ErrorCode::ambient_mismatch, "subspaces live in different spaces");
    if (u.empty())
        return 0.0;
    const Matrix residual = u.frame - v.frame * (v.frame.adjoint() * u.frame);
    return residual.operatorNorm();
}

inline bool contains(const Subspace& big, const Subspace& small, double tol = 1e-8)
{
    return containment_gap(small, big) < tol;
}

/// Subspace equality: same dimension and all principal angles below tol.
inline bool same_subspace(const Subspace& u, const Subspace& v, double tol = 1e-8)
{
    if (u.ambient != v.ambient)
        throw Error(ErrorCode::ambient_mismatch, "subspaces live in different spaces");
    return u.dim() == v.dim() && containment_gap(u, v) < tol;
}

/// U intersect V from the singular values of U^* V: sigma >= 1 - tol marks a shared direction.
inline Subspace intersect(const Subspace& u, const Subspace& v, double tol = default_tol)
{
    if (u.ambient != v.ambient)
        throw Error(ErrorCode::ambient_mismatch, "subspaces live in different spaces");
    if (u.empty() || v.empty())
        return Subspace::zero(u.ambient);
    Eigen::JacobiSVD<Matrix> svd(u.frame.adjoint() * v.frame, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) >= 1.0 - tol)
        ++r;
    if (r == 0)
        return Subspace::zero(u.ambient);
    // average the two representatives of each shared direction before re-orthonormalizing
    const Matrix from_u = u.frame * svd.matrixU().leftCols(r);
    const Matrix from_v = v.frame * svd.matrixV().leftCols(r);
    return {u.ambient, orth((from_u + from_v) / 2.0, 1e-6)};
}

inline Subspace sum(const Subspace& u, const Subspace& v, double tol = 1e-10)
{
    if (u.ambient != v.ambient)
        throw Error(ErrorCode::ambient_mismatch, "subspaces live in different spaces");
    Matrix m(u.ambient, u.dim() + v.dim());
    m << u.frame, v.frame;
    return span(m, tol);
}

/// Image of a subspace under a linear map, re-orthonormalized.
inline Subspace map_subspace(const Matrix& m, const Subspace& s, double tol = 1e-10)
{
    if (m.cols() != s.ambient)
        throw Error(ErrorCode::dimension_mismatch, "map does not act on the subspace's ambient space");
    return span(m * s.frame, tol);
}

/// Lambda_F = {u + F u | u in E+}, columns (u_i + F u_i)/sqrt(2) for unitary F.
inline Subspace graph_of(const UnitaryMap& f)
{
    const Matrix cols = f.source.frame + f.target.frame * f.matrix;
    if (unitarity_residual(f.matrix) <= 1e-12 && f.matrix.rows() == f.matrix.cols())
        return {f.source.ambient, cols / std::sqrt(2.0)};
    return span(cols);
}

/// Writes Lambda as the graph of F: E+ -> E-.
///
/// Throws NotAGraph when the projection of Lambda to E+ is singular (Lambda meets E-).
inline ExtractedMap extract_unitary(const Subspace& lambda, const Subspace& eplus, const Subspace& eminus,
                                    double tol = default_tol)
{
    if (lambda.ambient != eplus.ambient || lambda.ambient != eminus.ambient)
        throw Error(ErrorCode::ambient_mismatch, "subspaces live in different spaces");
    if (lambda.dim() != eplus.dim() || lambda.dim() != eminus.dim())
        throw Error(ErrorCode::dimension_mismatch, "Lambda, E+ and E- must have equal dimension");
    const Matrix x = eplus.frame.adjoint() * lambda.frame;
    const Matrix y = eminus.frame.adjoint() * lambda.frame;
    Eigen::JacobiSVD<Matrix> svd(x);
    const auto& sv = svd.singularValues();
    if (sv.size() > 0 && sv(sv.size() - 1) < 1e-8)
        throw Error(ErrorCode::not_a_graph, "Lambda meets E- nontrivially");
    ExtractedMap out;
    out.map.source = eplus;
    out.map.target = eminus;
    out.map.matrix = y * x.inverse();
    out.unitarity_residual = unitarity_residual(out.map.matrix);
    out.unitary = out.unitarity_residual <= tol * std::max(1.0, std::sqrt(static_cast<double>(lambda.dim())));
    return out;
}

} // namespace diracbc
