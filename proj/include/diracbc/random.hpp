#pragma once
//
// Seeded random draws for property tests and sweeps: Gaussian matrices,
// Haar unitaries, random subspaces and rotations.
//

#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "diracbc/core.hpp"
#include "diracbc/linalg.hpp"

namespace diracbc {

using Rng = std::mt19937_64;

inline Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = g(rng);
            const double im = g(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

inline Matrix random_hermitian(Eigen::Index n, Rng& rng)
{
    const Matrix g = random_gaussian(n, n, rng);
    return (g + g.adjoint()) / 2.0;
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of R's diagonal removed.
inline Matrix random_unitary(Eigen::Index n, Rng& rng)
{
    const Matrix g = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * identity(n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0)
            q.col(j) *= r(j, j) / a;
    }
    return q;
}

inline Subspace random_subspace(Eigen::Index n, Eigen::Index k, Rng& rng)
{
    if (k == 0)
        return Subspace::zero(n);
    return {n, random_unitary(n, rng).leftCols(k)};
}

inline RealVector random_unit(Eigen::Index d, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    RealVector v(d);
    do {
        for (Eigen::Index i = 0; i < d; ++i)
            v(i) = g(rng);
    } while (v.norm() < 1e-6);
    return v / v.norm();
}

/// Random rotation in SO(d) (QR of a Gaussian matrix, signs fixed, determinant +1).
inline Eigen::MatrixXd random_rotation(Eigen::Index d, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            m(i, j) = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j)
        if (r(j, j) < 0)
            q.col(j) *= -1.0;
    if (q.determinant() < 0)
        q.col(0) *= -1.0;
    return q;
}

inline double uniform(double lo, double hi, Rng& rng)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace diracbc
