#pragma once
//
// Named boundary-condition families, buildable at a point from parameters, with
// the verdicts the theory asserts for them.
//

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "diracbc/transmission.hpp"

namespace diracbc {

struct FamilySpec {
    std::string name;
    std::map<std::string, double> scalars;
    std::map<std::string, RealVector> vectors;
    std::map<std::string, Matrix> matrices;

    [[nodiscard]] double scalar(const std::string& key) const
    {
        const auto it = scalars.find(key);
        if (it == scalars.end())
            throw Error(ErrorCode::param_out_of_domain, name + ": missing parameter '" + key + "'");
        return it->second;
    }

    [[nodiscard]] double scalar_or(const std::string& key, double fallback) const
    {
        const auto it = scalars.find(key);
        return it == scalars.end() ? fallback : it->second;
    }

    /// Vector parameter `key`, or assembled from scalars key1, key2, ... when given that way.
    [[nodiscard]] RealVector vector(const std::string& key) const
    {
        if (const auto it = vectors.find(key); it != vectors.end())
            return it->second;
        std::vector<double> parts;
        for (int i = 1; scalars.count(key + std::to_string(i)); ++i)
            parts.push_back(scalars.at(key + std::to_string(i)));
        if (parts.empty())
            throw Error(ErrorCode::param_out_of_domain, name + ": missing parameter '" + key + "'");
        return Eigen::Map<const RealVector>(parts.data(), static_cast<Eigen::Index>(parts.size()));
    }

    [[nodiscard]] bool has_vector(const std::string& key) const
    {
        return vectors.count(key) || scalars.count(key + "1");
    }

    /// Matrix parameter `key`, or the 2x2 Hermitian matrix [[a11, a12], [conj a12, a22]] with
    /// a12 = a12_re + i a12_im when given as scalars.
    [[nodiscard]] Matrix matrix(const std::string& key) const
    {
        if (const auto it = matrices.find(key); it != matrices.end())
            return it->second;
        if (key != "A" || !scalars.count("a11") || !scalars.count("a22"))
            throw Error(ErrorCode::param_out_of_domain, name + ": missing parameter '" + key + "'");
        const Complex off(scalar_or("a12_re", 0.0), scalar_or("a12_im", 0.0));
        Matrix a(2, 2);
        a << scalars.at("a11"), off, std::conj(off), scalars.at("a22");
        return a;
    }
};

inline const std::vector<std::string>& family_names()
{
    static const std::vector<std::string> names{
        "mit_bag",    "generalized_mit", "berry_mondragon", "d2n4",    "chiral_bag", "d5_family",
        "d3n4_caseA", "d3n4_caseA_singular", "d3n4_caseB", "d4n4", "delta_shell"};
    return names;
}

/// (d, N) used when a family is built without an explicit representation.
inline std::pair<int, int> family_default_rep(const std::string& name)
{
    if (name == "berry_mondragon")
        return {2, 2};
    if (name == "d2n4")
        return {2, 4};
    if (name == "chiral_bag")
        return {3, 2};
    if (name == "d5_family")
        return {5, 4};
    if (name == "d4n4")
        return {4, 4};
    if (name == "mit_bag" || name == "generalized_mit" || name.rfind("d3n4", 0) == 0 || name == "delta_shell")
        return {3, 4};
    throw Error(ErrorCode::param_out_of_domain, "unknown family '" + name + "'");
}

/// Frame used when none is given: nu = e_d, except d = 5 where nu = e_4 so that e_5 is tangent.
inline BoundaryFrame family_default_frame(RepPtr rep)
{
    if (rep->dim() == 5)
        return axis_frame(std::move(rep), 3);
    return canonical_frame(std::move(rep));
}

using FamilyObject = std::variant<BoundaryCondition, TransmissionPair>;

namespace detail {

inline void family_rep(const FamilySpec& spec, const BoundaryFrame& frame, int d, int n)
{
    if (frame.dim() != d || frame.rank() != n)
        throw Error(ErrorCode::family_rep_mismatch, spec.name + " needs the (" + std::to_string(d) + ", " +
                                                        std::to_string(n) + ") representation");
}

inline ChiralStructure family_chirality(const FamilySpec& spec, const BoundaryFrame& frame)
{
    if (!has_chirality(frame.rep()))
        throw Error(ErrorCode::family_rep_mismatch, spec.name + " needs a representation with chirality");
    return chirality(frame.rep());
}

inline D3Params d3_params(const FamilySpec& spec)
{
    D3Params p;
    p.a = spec.scalar_or("a", 0.0);
    p.d = spec.scalar_or("d", 0.0);
    p.b = spec.scalar_or("b", 0.0);
    p.t = spec.has_vector("t") ? spec.vector("t") : RealVector::Zero(2);
    return p;
}

} // namespace detail

inline FamilyObject build_family(const FamilySpec& spec, const BoundaryFrame& frame)
{
    const auto& name = spec.name;
    if (name == "mit_bag" || name == "generalized_mit") {
        const auto cs = detail::family_chirality(spec, frame);
        const double theta = name == "mit_bag" ? std::numbers::pi / 2.0 : spec.scalar("theta");
        return from_chiral_unitary(cs, frame, std::polar(1.0, theta) * identity(cs.half()));
    }
    if (name == "berry_mondragon") {
        detail::family_rep(spec, frame, 2, 2);
        return classify_d2n2(spec.scalar("B"), frame, default_tol, 2).bc;
    }
    if (name == "d2n4") {
        detail::family_rep(spec, frame, 2, 4);
        return classify_d2n4(spec.matrix("A"), frame, default_tol, 2).bc;
    }
    if (name == "chiral_bag") {
        detail::family_rep(spec, frame, 3, 2);
        const RealVector t = spec.vector("t");
        if (t.size() != 3 || std::abs(t.dot(frame.nu())) > 1e-9 || std::abs(t.norm() - 1.0) > 1e-9)
            throw Error(ErrorCode::param_out_of_domain, "chiral_bag: t must be a unit tangent vector");
        return BoundaryCondition(frame, eigenspace(clifford_mult(frame.rep(), t), 1.0));
    }
    if (name == "d5_family") {
        detail::family_rep(spec, frame, 5, 4);
        const RealVector t = spec.vector("t");
        if (t.size() != 5 || std::abs(t.dot(frame.nu())) > 1e-9 || std::abs(t.norm() - 1.0) > 1e-9)
            throw Error(ErrorCode::param_out_of_domain, "d5_family: t must be a unit tangent vector");
        const Matrix h = d5_generator(frame, t, spec.scalar("tau"));
        return BoundaryCondition(frame, eigenspace((h + h.adjoint()) / 2.0, 1.0));
    }
    if (name == "d3n4_caseA" || name == "d3n4_caseA_singular" || name == "d3n4_caseB") {
        detail::family_rep(spec, frame, 3, 4);
        const auto kind = name == "d3n4_caseA"   ? D3Kind::case_a
                          : name == "d3n4_caseB" ? D3Kind::case_b
                                                 : D3Kind::case_a_singular;
        const auto p = detail::d3_params(spec);
        if (p.t.size() != 2)
            throw Error(ErrorCode::param_out_of_domain, name + ": t needs two tangent coordinates");
        return classify_d3n4(kind, p, frame, default_tol, 2).bc;
    }
    if (name == "d4n4") {
        detail::family_rep(spec, frame, 4, 4);
        return classify_d4n4(spec.matrix("A"), frame, default_tol, 2).bc;
    }
    if (name == "delta_shell") {
        const auto cs = detail::family_chirality(spec, frame);
        const DeltaShellParams p{spec.scalar_or("eta", 0.0), spec.scalar_or("tau", 0.0), spec.scalar_or("omega", 0.0),
                                 spec.scalar_or("lambda", 0.0)};
        return delta_shell_pair(p, cs, frame).pair;
    }
    throw Error(ErrorCode::param_out_of_domain, "unknown family '" + name + "'");
}

enum class Expected { regular, not_regular, sufficient, boundary, unasserted };

constexpr std::string_view to_string(Expected e) noexcept
{
    switch (e) {
    case Expected::regular: return "regular";
    case Expected::not_regular: return "not_regular";
    case Expected::sufficient: return "sufficient";
    case Expected::boundary: return "boundary";
    case Expected::unasserted: return "unasserted";
    }
    return "unknown";
}

struct ExpectedVerdicts {
    bool self_adjoint = true;
    Expected regular = Expected::regular;
};

/// Asserted verdicts. Parameters closer than `band` to a criterion boundary (but not on it)
/// are reported as boundary.
inline ExpectedVerdicts expected_verdicts(const FamilySpec& spec, double band = 1e-6)
{
    const auto& name = spec.name;
    const auto graded = [band](double dist, bool fails_on_zero_side) {
        if (dist <= 1e-12)
            return fails_on_zero_side ? Expected::not_regular : Expected::regular;
        return dist < band ? Expected::boundary : Expected::regular;
    };
    if (name == "mit_bag")
        return {true, Expected::regular};
    if (name == "generalized_mit") {
        const double th = spec.scalar("theta");
        const double dist = std::abs(th - std::numbers::pi * std::round(th / std::numbers::pi));
        return {true, graded(dist, true)};
    }
    if (name == "berry_mondragon")
        return {true, graded(std::abs(spec.scalar("B")), true)};
    if (name == "d2n4") {
        const Matrix a = spec.matrix("A");
        const bool herm = hermiticity_residual(a) <= default_tol;
        if (!herm)
            return {false, Expected::unasserted};
        return {true, graded(std::abs(a.determinant()), true)};
    }
    if (name == "chiral_bag" || name == "d5_family")
        return {true, Expected::not_regular};
    if (name == "d3n4_caseA" || name == "d3n4_caseA_singular") {
        const auto p = detail::d3_params(spec);
        const double gap = std::abs(p.a) - p.t.norm();
        if (std::abs(gap) < band)
            return {true, Expected::boundary};
        return {true, gap > 0 ? Expected::regular : Expected::not_regular};
    }
    if (name == "d3n4_caseB")
        return {true, graded(std::abs(spec.scalar("b")), true)};
    if (name == "d4n4") {
        const Matrix a = spec.matrix("A");
        if (hermiticity_residual(a) > default_tol)
            return {false, Expected::unasserted};
        const double det = a.determinant().real();
        if (std::abs(det) < band)
            return {true, Expected::boundary};
        return {true, det > 0 ? Expected::sufficient : Expected::unasserted};
    }
    if (name == "delta_shell") {
        const DeltaShellParams p{spec.scalar_or("eta", 0.0), spec.scalar_or("tau", 0.0), spec.scalar_or("omega", 0.0),
                                 spec.scalar_or("lambda", 0.0)};
        const double dist = delta_shell_surface_distance(p);
        if (dist <= 1e-12)
            return {true, Expected::not_regular};
        return {true, dist < band ? Expected::boundary : Expected::regular};
    }
    throw Error(ErrorCode::param_out_of_domain, "unknown family '" + name + "'");
}

} // namespace diracbc
