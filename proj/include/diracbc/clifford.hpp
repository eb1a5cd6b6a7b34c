#pragma once
//
// Finite-dimensional Clifford representations with Hermitian gamma matrices,
// Clifford multiplication by covectors and chirality operators.
//

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "diracbc/core.hpp"

namespace diracbc {

namespace pauli {

inline Matrix sigma(int j)
{
    Matrix s(2, 2);
    switch (j) {
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -I_unit, I_unit, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: s = Matrix::Identity(2, 2); break;
    }
    return s;
}

} // namespace pauli

inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// 2x2 block matrix [[a, b], [c, d]].
inline Matrix blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d)
{
    Matrix out(a.rows() + c.rows(), a.cols() + b.cols());
    out << a, b, c, d;
    return out;
}

struct RepReport {
    double max_hermiticity_residual = 0.0;
    double max_anticommutation_residual = 0.0;
    bool passes = false;
};

/// d Hermitian N x N matrices with gamma_j gamma_k + gamma_k gamma_j = 2 delta_jk.
class CliffordRep {
public:
    CliffordRep() = default;

    /// Wraps user-supplied gammas. Validation is left to verify_rep / from_gammas.
    CliffordRep(int d, std::vector<Matrix> gammas) : d_(d), gammas_(std::move(gammas))
    {
        n_ = gammas_.empty() ? 0 : static_cast<int>(gammas_.front().rows());
    }

    /// Validating constructor for external matrices.
    static CliffordRep from_gammas(std::vector<Matrix> gammas, double tol = default_tol);

    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] int rank() const noexcept { return n_; }
    [[nodiscard]] const std::vector<Matrix>& gammas() const noexcept { return gammas_; }
    [[nodiscard]] const Matrix& gamma(int j) const { return gammas_.at(static_cast<std::size_t>(j)); }

private:
    int d_ = 0;
    int n_ = 0;
    std::vector<Matrix> gammas_;
};

using RepPtr = std::shared_ptr<const CliffordRep>;

inline RepReport verify_rep(const CliffordRep& rep, double tol = default_tol)
{
    RepReport report;
    const auto& g = rep.gammas();
    const auto n = rep.rank();
    for (std::size_t j = 0; j < g.size(); ++j) {
        report.max_hermiticity_residual =
            std::max(report.max_hermiticity_residual, hermiticity_residual(g[j]));
        for (std::size_t k = j; k < g.size(); ++k) {
            Matrix ac = g[j] * g[k] + g[k] * g[j];
            if (j == k)
                ac -= 2.0 * identity(n);
            report.max_anticommutation_residual =
                std::max(report.max_anticommutation_residual, ac.norm());
        }
    }
    report.passes = report.max_hermiticity_residual <= tol && report.max_anticommutation_residual <= tol;
    return report;
}

inline CliffordRep CliffordRep::from_gammas(std::vector<Matrix> gammas, double tol)
{
    if (gammas.size() < 2)
        throw Error(ErrorCode::dimension_mismatch, "need at least two gamma matrices");
    const auto n = gammas.front().rows();
    for (const auto& g : gammas)
        if (g.rows() != n || g.cols() != n)
            throw Error(ErrorCode::dimension_mismatch, "gamma matrices must share one square shape");
    const int d = static_cast<int>(gammas.size());
    if (n % 2 != 0 || n < (Eigen::Index{1} << (d / 2)))
        throw Error(ErrorCode::unsupported_pair, "rank must be even and at least 2^floor(d/2)");
    CliffordRep rep(d, std::move(gammas));
    const auto report = verify_rep(rep, tol);
    if (!report.passes)
        throw Error(ErrorCode::not_hermitian,
                    "Clifford relations violated (hermiticity " + std::to_string(report.max_hermiticity_residual) +
                        ", anticommutation " + std::to_string(report.max_anticommutation_residual) + ")");
    return rep;
}

/// The pinned gamma conventions for the supported (d, N) table.
inline CliffordRep build_rep(int d, int n)
{
    using pauli::sigma;
    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix zero2 = Matrix::Zero(2, 2);
    const auto antidiag = [&](const Matrix& upper, const Matrix& lower) { return blocks(zero2, upper, lower, zero2); };

    std::vector<Matrix> g;
    if (d == 2 && n == 2) {
        g = {sigma(1), sigma(2)};
    } else if (d == 3 && n == 2) {
        g = {sigma(1), sigma(2), sigma(3)};
    } else if (d == 2 && n == 4) {
        g = {kron(sigma(1), id2), kron(sigma(2), id2)};
    } else if (d == 3 && n == 4) {
        g = {antidiag(sigma(1), sigma(1)), antidiag(sigma(2), sigma(2)), antidiag(sigma(3), sigma(3))};
    } else if (d == 4 && n == 4) {
        g = {antidiag(sigma(1), sigma(1)), antidiag(sigma(2), sigma(2)), antidiag(sigma(3), sigma(3)),
             blocks(id2, zero2, zero2, -id2)};
    } else if (d == 5 && n == 4) {
        g = {antidiag(sigma(1), sigma(1)), antidiag(sigma(2), sigma(2)), antidiag(sigma(3), sigma(3)),
             blocks(id2, zero2, zero2, -id2), antidiag(I_unit * id2, -I_unit * id2)};
    } else {
        throw Error(ErrorCode::unsupported_pair,
                    "(d, N) = (" + std::to_string(d) + ", " + std::to_string(n) + ") is not supported");
    }
    return CliffordRep(d, std::move(g));
}

/// c_k = sum_j k_j gamma_j.
inline Matrix clifford_mult(const CliffordRep& rep, const RealVector& k)
{
    if (k.size() != rep.dim())
        throw Error(ErrorCode::dimension_mismatch, "covector has " + std::to_string(k.size()) +
                                                       " components, rep dimension is " + std::to_string(rep.dim()));
    Matrix c = Matrix::Zero(rep.rank(), rep.rank());
    for (int j = 0; j < rep.dim(); ++j)
        c += k(j) * rep.gamma(j);
    return c;
}

struct ChiralStructure {
    Matrix beta;
    Matrix plus_frame;  // N x N/2, orthonormal basis of S+
    Matrix minus_frame; // N x N/2, orthonormal basis of S-
    std::vector<Matrix> cmap; // C_{e_j} = minus_frame^* c_{e_j} plus_frame
    std::string phase;        // how beta was obtained

    /// C_xi = sum_j xi_j C_{e_j}, the S+ -> S- block of c_xi.
    [[nodiscard]] Matrix block(const RealVector& xi) const
    {
        if (xi.size() != static_cast<Eigen::Index>(cmap.size()))
            throw Error(ErrorCode::dimension_mismatch, "covector/chirality dimension mismatch");
        Matrix c = Matrix::Zero(cmap.front().rows(), cmap.front().cols());
        for (std::size_t j = 0; j < cmap.size(); ++j)
            c += xi(static_cast<Eigen::Index>(j)) * cmap[j];
        return c;
    }

    [[nodiscard]] Eigen::Index half() const noexcept { return plus_frame.cols(); }

    /// Embeds (x in S+, y in S-) coordinates into C^N.
    [[nodiscard]] Vector embed(const Vector& x, const Vector& y) const { return plus_frame * x + minus_frame * y; }
};

namespace detail {

// Gram-Schmidt over the columns of the spectral projector (Id + s*beta)/2, in column order.
inline Matrix projector_frame(const Matrix& beta, double sign)
{
    const Eigen::Index n = beta.rows();
    const Matrix proj = (identity(n) + sign * beta) / 2.0;
    Matrix out(n, 0);
    for (Eigen::Index j = 0; j < n; ++j) {
        Vector v = proj.col(j);
        for (Eigen::Index c = 0; c < out.cols(); ++c)
            v -= out.col(c).dot(v) * out.col(c);
        const double nv = v.norm();
        if (nv > 1e-8) {
            out.conservativeResize(Eigen::NoChange, out.cols() + 1);
            out.col(out.cols() - 1) = v / nv;
        }
    }
    return out;
}

inline bool is_diagonal(const Matrix& m)
{
    return (m - Matrix(m.diagonal().asDiagonal())).norm() == 0.0;
}

} // namespace detail

/// Chirality operator beta and the induced splitting C^N = S+ (+) S-.
///
/// d odd, N = 4 (d = 3): beta = sigma_3 (x) Id. d even: beta = (-i)^{d/2} gamma_1 ... gamma_d,
/// the phase fixed so that beta^2 = Id. Ranks without an anticommuting involution throw NoChirality.
inline ChiralStructure chirality(const CliffordRep& rep)
{
    const int d = rep.dim();
    const int n = rep.rank();
    ChiralStructure cs;
    if (d == 3 && n == 4) {
        cs.beta = kron(pauli::sigma(3), Matrix::Identity(2, 2));
        cs.phase = "beta = sigma_3 (x) Id";
    } else if (d % 2 == 0 && (n == 2 || n == 4) && d <= 4 && n >= (1 << (d / 2))) {
        Matrix vol = identity(n);
        for (int j = 0; j < d; ++j)
            vol = vol * rep.gamma(j);
        Complex phase{1.0, 0.0};
        for (int j = 0; j < d / 2; ++j)
            phase *= -I_unit;
        cs.beta = phase * vol;
        cs.phase = "beta = (-i)^" + std::to_string(d / 2) + " gamma_1...gamma_" + std::to_string(d);
    } else {
        throw Error(ErrorCode::no_chirality, "no chirality operator for (d, N) = (" + std::to_string(d) + ", " +
                                                 std::to_string(n) + ")");
    }

    if (detail::is_diagonal(cs.beta)) {
        // keep the standard basis vectors so the splitting is the literal direct sum
        std::vector<Eigen::Index> plus, minus;
        for (Eigen::Index i = 0; i < n; ++i)
            (cs.beta(i, i).real() > 0 ? plus : minus).push_back(i);
        cs.plus_frame = Matrix::Zero(n, static_cast<Eigen::Index>(plus.size()));
        cs.minus_frame = Matrix::Zero(n, static_cast<Eigen::Index>(minus.size()));
        for (std::size_t c = 0; c < plus.size(); ++c)
            cs.plus_frame(plus[c], static_cast<Eigen::Index>(c)) = 1.0;
        for (std::size_t c = 0; c < minus.size(); ++c)
            cs.minus_frame(minus[c], static_cast<Eigen::Index>(c)) = 1.0;
    } else {
        cs.plus_frame = detail::projector_frame(cs.beta, 1.0);
        cs.minus_frame = detail::projector_frame(cs.beta, -1.0);
    }
    if (cs.plus_frame.cols() != n / 2 || cs.minus_frame.cols() != n / 2)
        throw Error(ErrorCode::no_chirality, "chirality eigenspaces are not balanced");

    for (int j = 0; j < d; ++j)
        cs.cmap.push_back(cs.minus_frame.adjoint() * rep.gamma(j) * cs.plus_frame);
    return cs;
}

inline bool has_chirality(const CliffordRep& rep)
{
    const int d = rep.dim(), n = rep.rank();
    return (d == 3 && n == 4) || (d == 2 && (n == 2 || n == 4)) || (d == 4 && n == 4);
}

} // namespace diracbc
