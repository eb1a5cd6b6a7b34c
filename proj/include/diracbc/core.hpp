#pragma once
//
// Common scalar/matrix aliases and the error type used across diracbc.
//

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace diracbc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex I_unit{0.0, 1.0};

/// Structural tolerance for user-supplied matrices (reps are exact).
inline constexpr double default_tol = 1e-9;

enum class ErrorCode {
    unsupported_pair,
    dimension_mismatch,
    no_chirality,
    not_hermitian,
    not_skew,
    ambient_mismatch,
    not_a_graph,
    not_unitary,
    not_tangent,
    invalid_frame,
    inconsistent_check,
    degenerate_mobius,
    no_witness,
    quadrature_not_converged,
    family_rep_mismatch,
    param_out_of_domain,
    unsupported_transmission,
    parse_error,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::unsupported_pair: return "UnsupportedPair";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::no_chirality: return "NoChirality";
    case ErrorCode::not_hermitian: return "NotHermitian";
    case ErrorCode::not_skew: return "NotSkew";
    case ErrorCode::ambient_mismatch: return "AmbientMismatch";
    case ErrorCode::not_a_graph: return "NotAGraph";
    case ErrorCode::not_unitary: return "NotUnitary";
    case ErrorCode::not_tangent: return "NotTangent";
    case ErrorCode::invalid_frame: return "InvalidFrame";
    case ErrorCode::inconsistent_check: return "InconsistentCheck";
    case ErrorCode::degenerate_mobius: return "DegenerateMobius";
    case ErrorCode::no_witness: return "NoWitness";
    case ErrorCode::quadrature_not_converged: return "QuadratureNotConverged";
    case ErrorCode::family_rep_mismatch: return "FamilyRepMismatch";
    case ErrorCode::param_out_of_domain: return "ParamOutOfDomain";
    case ErrorCode::unsupported_transmission: return "UnsupportedTransmission";
    case ErrorCode::parse_error: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Inner product antilinear in the second slot: <x, y> = sum x_i conj(y_i).
inline Complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

inline double hermiticity_residual(const Matrix& m) { return (m - m.adjoint()).norm(); }

inline double unitarity_residual(const Matrix& m)
{
    return (m.adjoint() * m - Matrix::Identity(m.cols(), m.cols())).norm();
}

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

} // namespace diracbc
