#pragma once
// Shared fixtures for the unit and acceptance tests.

#include <functional>
#include <optional>

#include "diracbc/random.hpp"
#include "diracbc/regularity.hpp"

namespace diracbc::testing {

inline BoundaryFrame random_frame(int d, int n, Rng& rng)
{
    return rotated_frame(make_rep(d, n), random_rotation(d, rng));
}

inline RealVector random_tangent(const BoundaryFrame& f, Rng& rng)
{
    return f.tangent_vector(random_unit(f.dim() - 1, rng));
}

/// B1 = Id + (f - e)(e + f)^* sends a unit e in E_{+i}(k) to a unit f in E_{-i}(k), so with B2 = Id
/// the direction k fails. det B1 = 1.
inline Matrix failing_b1(const BoundaryFrame& frame, const RealVector& k)
{
    const Vector e = e_plus_i(frame, k).frame.col(0), f = e_minus_i(frame, k).frame.col(0);
    return identity(frame.rank()) + (f - e) * (e + f).adjoint();
}

inline Matrix random_full_rank(Eigen::Index n, Rng& rng)
{
    // Gaussian matrices are invertible almost surely; keep away from near-singular draws
    for (;;) {
        const Matrix m = random_gaussian(n, n, rng);
        Eigen::JacobiSVD<Matrix> svd(m);
        if (svd.singularValues()(n - 1) > 1e-3 * svd.singularValues()(0))
            return m;
    }
}

inline std::optional<ErrorCode> code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace diracbc::testing
