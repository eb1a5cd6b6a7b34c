#pragma once
//
// Text I/O: boundary-condition spec files and reports as JSON, complex numbers as
// explicit [re, im] pairs, matrices row-major.
//

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "diracbc/catalog.hpp"

namespace diracbc {

using Json = nlohmann::ordered_json; // keys keep insertion order, so dumps are stable

// scalars, vectors, matrices -------------------------------------------------------

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const RealVector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

inline Json to_json(const Vector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(to_json(v(i)));
    return out;
}

inline Json to_json(const Matrix& m)
{
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what, const std::string& msg)
{
    throw Error(ErrorCode::parse_error, what + ": " + msg);
}

inline double parse_number(const Json& j, const std::string& what)
{
    if (!j.is_number())
        parse_fail(what, "expected a number");
    return j.get<double>();
}

inline int parse_int(const Json& j, const std::string& what)
{
    if (!j.is_number_integer())
        parse_fail(what, "expected an integer");
    return j.get<int>();
}

} // namespace detail

inline Complex parse_complex(const Json& j, const std::string& what)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        detail::parse_fail(what, "expected an [re, im] pair");
    return {detail::parse_number(j[0], what), detail::parse_number(j[1], what)};
}

inline RealVector parse_real_vector(const Json& j, const std::string& what)
{
    if (!j.is_array())
        detail::parse_fail(what, "expected an array of numbers");
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = detail::parse_number(j[i], what);
    return v;
}

inline Vector parse_vector(const Json& j, const std::string& what)
{
    if (!j.is_array())
        detail::parse_fail(what, "expected an array of [re, im] pairs");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], what);
    return v;
}

inline Matrix parse_matrix(const Json& j, const std::string& what)
{
    if (!j.is_array() || j.empty())
        detail::parse_fail(what, "expected a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            detail::parse_fail(what, "rows must be arrays of equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(j[r][c], what);
    }
    return m;
}

// spec files -------------------------------------------------------------------------

struct Tolerances {
    double tol = default_tol;
    int samples = 512;
};

struct RawPair {
    Matrix b1;
    Matrix b2;
};

/// Transmission input: an explicit pair or delta-shell parameters.
using TransmissionInput = std::variant<RawPair, DeltaShellParams>;

/// Condition as given: a column frame, a named family, or a transmission condition.
using ConditionInput = std::variant<Matrix, FamilySpec, TransmissionInput>;

struct SpecFile {
    int version = 1;
    int d = 0;
    int n = 0;
    std::optional<RealVector> nu;
    std::vector<RealVector> tangent;
    ConditionInput condition;
    Tolerances tolerances;
    Json source; // echoed into reports
};

inline constexpr int spec_version = 1;

namespace detail {

inline FamilySpec parse_family(const Json& j)
{
    FamilySpec spec;
    if (j.is_string()) {
        spec.name = j.get<std::string>();
        return spec;
    }
    if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
        parse_fail("family", "expected a name string or {name, params}");
    spec.name = j["name"].get<std::string>();
    if (!j.contains("params"))
        return spec;
    const Json& params = j["params"];
    if (!params.is_object())
        parse_fail("family.params", "expected an object");
    for (const auto& [key, value] : params.items()) {
        const std::string what = "family.params." + key;
        if (value.is_number())
            spec.scalars[key] = value.get<double>();
        else if (value.is_array() && !value.empty() && value[0].is_number())
            spec.vectors[key] = parse_real_vector(value, what);
        else if (value.is_array())
            spec.matrices[key] = parse_matrix(value, what);
        else
            parse_fail(what, "expected a number, a real vector or a complex matrix");
    }
    return spec;
}

inline DeltaShellParams parse_delta(const Json& j)
{
    if (!j.is_object())
        parse_fail("delta_shell", "expected an object of eta, tau, omega, lambda");
    DeltaShellParams p;
    for (const auto& [key, value] : j.items()) {
        const double x = parse_number(value, "delta_shell." + key);
        if (key == "eta")
            p.eta = x;
        else if (key == "tau")
            p.tau = x;
        else if (key == "omega")
            p.omega = x;
        else if (key == "lambda")
            p.lambda = x;
        else
            parse_fail("delta_shell", "unknown key '" + key + "'");
    }
    return p;
}

} // namespace detail

/// Checks the shape of a spec document. Mathematical validation (unit normal, Hermitian
/// parameters, ...) happens when the frame and condition are built.
inline SpecFile parse_spec(const Json& j)
{
    if (!j.is_object())
        detail::parse_fail("spec", "expected a JSON object");
    SpecFile s;
    s.source = j;
    s.version = j.contains("version") ? detail::parse_int(j["version"], "version") : spec_version;
    if (s.version != spec_version)
        detail::parse_fail("version", "unsupported version " + std::to_string(s.version));

    if (!j.contains("rep") || !j["rep"].is_object() || !j["rep"].contains("d") || !j["rep"].contains("N"))
        detail::parse_fail("rep", "expected {d, N}");
    s.d = detail::parse_int(j["rep"]["d"], "rep.d");
    s.n = detail::parse_int(j["rep"]["N"], "rep.N");

    if (j.contains("frame")) {
        const Json& f = j["frame"];
        if (!f.is_object() || !f.contains("nu") || !f.contains("tangent") || !f["tangent"].is_array())
            detail::parse_fail("frame", "expected {nu, tangent}");
        s.nu = parse_real_vector(f["nu"], "frame.nu");
        for (const auto& t : f["tangent"])
            s.tangent.push_back(parse_real_vector(t, "frame.tangent"));
    }

    if (!j.contains("condition") || !j["condition"].is_object())
        detail::parse_fail("condition", "expected an object");
    const Json& c = j["condition"];
    if (c.contains("subspace")) {
        s.condition = parse_matrix(c["subspace"], "condition.subspace");
    } else if (c.contains("family")) {
        FamilySpec fam = detail::parse_family(c["family"]);
        if (c.contains("params")) {
            Json merged{{"name", fam.name}, {"params", c["params"]}};
            fam = detail::parse_family(merged);
        }
        s.condition = std::move(fam);
    } else if (c.contains("transmission")) {
        const Json& t = c["transmission"];
        if (t.is_object() && t.contains("delta_shell"))
            s.condition = TransmissionInput{detail::parse_delta(t["delta_shell"])};
        else if (t.is_object() && t.contains("B1") && t.contains("B2"))
            s.condition = TransmissionInput{
                RawPair{parse_matrix(t["B1"], "transmission.B1"), parse_matrix(t["B2"], "transmission.B2")}};
        else
            detail::parse_fail("condition.transmission", "expected {B1, B2} or {delta_shell}");
    } else {
        detail::parse_fail("condition", "expected one of subspace, family, transmission");
    }

    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        if (!t.is_object())
            detail::parse_fail("tolerances", "expected an object");
        if (t.contains("tol"))
            s.tolerances.tol = detail::parse_number(t["tol"], "tolerances.tol");
        if (t.contains("samples"))
            s.tolerances.samples = detail::parse_int(t["samples"], "tolerances.samples");
    }
    return s;
}

inline SpecFile parse_spec_text(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("not valid JSON: ") + e.what());
    }
    return parse_spec(j);
}

inline SpecFile load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str());
}

/// Representation and frame described by a spec; the family default when no frame is given.
inline BoundaryFrame spec_frame(const SpecFile& s)
{
    RepPtr rep = make_rep(s.d, s.n);
    if (!s.nu)
        return family_default_frame(std::move(rep));
    return {std::move(rep), *s.nu, s.tangent};
}

// reports ------------------------------------------------------------------------------

struct CrossCheck {
    std::string method;
    Regularity regular = Regularity::regular;
    bool agree = true;

    bool operator==(const CrossCheck&) const = default;
};

struct Report {
    Json input;
    double tol = default_tol;
    int samples = 512;
    bool symmetric = false;
    bool self_adjoint = false;
    Regularity regular = Regularity::regular;
    std::string method;
    std::string certainty;
    std::optional<double> margin;
    std::optional<RealVector> witness_direction;
    std::optional<Vector> witness_vector;
    std::optional<std::string> chirality_phase;
    std::optional<CrossCheck> cross_check;
    std::vector<std::string> warnings;
    std::optional<double> timing_ms;
};

inline Json regularity_json(Regularity r)
{
    switch (r) {
    case Regularity::regular: return true;
    case Regularity::not_regular: return false;
    case Regularity::boundary: return "boundary";
    }
    return nullptr;
}

inline Regularity parse_regularity(const Json& j)
{
    if (j.is_boolean())
        return j.get<bool>() ? Regularity::regular : Regularity::not_regular;
    if (j.is_string() && j.get<std::string>() == "boundary")
        return Regularity::boundary;
    throw Error(ErrorCode::parse_error, "regular: expected true, false or \"boundary\"");
}

inline Json to_json(const Report& r)
{
    Json j;
    j["input"] = r.input;
    j["tolerances"] = {{"tol", r.tol}, {"samples", r.samples}};
    j["symmetric"] = r.symmetric;
    j["self_adjoint"] = r.self_adjoint;
    j["regular"] = regularity_json(r.regular);
    j["method"] = r.method;
    j["certainty"] = r.certainty;
    j["margin"] = r.margin ? Json(*r.margin) : Json(nullptr);
    j["witness_direction"] = r.witness_direction ? to_json(*r.witness_direction) : Json(nullptr);
    j["witness_vector"] = r.witness_vector ? to_json(*r.witness_vector) : Json(nullptr);
    j["chirality_phase"] = r.chirality_phase ? Json(*r.chirality_phase) : Json(nullptr);
    if (r.cross_check)
        j["cross_check"] = {{"method", r.cross_check->method},
                            {"regular", regularity_json(r.cross_check->regular)},
                            {"agree", r.cross_check->agree}};
    j["warnings"] = r.warnings;
    if (r.timing_ms)
        j["timing_ms"] = *r.timing_ms;
    return j;
}

inline Report parse_report(const Json& j)
{
    try {
        Report r;
        r.input = j.at("input");
        r.tol = j.at("tolerances").at("tol").get<double>();
        r.samples = j.at("tolerances").at("samples").get<int>();
        r.symmetric = j.at("symmetric").get<bool>();
        r.self_adjoint = j.at("self_adjoint").get<bool>();
        r.regular = parse_regularity(j.at("regular"));
        r.method = j.at("method").get<std::string>();
        r.certainty = j.at("certainty").get<std::string>();
        if (!j.at("margin").is_null())
            r.margin = j["margin"].get<double>();
        if (!j.at("witness_direction").is_null())
            r.witness_direction = parse_real_vector(j["witness_direction"], "witness_direction");
        if (!j.at("witness_vector").is_null())
            r.witness_vector = parse_vector(j["witness_vector"], "witness_vector");
        if (!j.at("chirality_phase").is_null())
            r.chirality_phase = j["chirality_phase"].get<std::string>();
        if (j.contains("cross_check")) {
            const Json& c = j["cross_check"];
            r.cross_check = CrossCheck{c.at("method").get<std::string>(), parse_regularity(c.at("regular")),
                                       c.at("agree").get<bool>()};
        }
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        if (j.contains("timing_ms"))
            r.timing_ms = j["timing_ms"].get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
    }
}

inline std::string format_number(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

/// Human-readable two-column rendering.
inline std::string format_table(const Report& r)
{
    std::ostringstream os;
    const auto row = [&os](const std::string& key, const std::string& value) {
        os << key << std::string(key.size() < 18 ? 18 - key.size() : 1, ' ') << value << '\n';
    };
    const auto yes = [](bool b) { return std::string(b ? "true" : "false"); };
    row("symmetric", yes(r.symmetric));
    row("self_adjoint", yes(r.self_adjoint));
    row("regular", r.regular == Regularity::boundary ? "boundary" : yes(r.regular == Regularity::regular));
    row("method", r.method);
    row("certainty", r.certainty);
    row("margin", r.margin ? format_number(*r.margin) : "-");
    if (r.witness_direction) {
        std::string s;
        for (Eigen::Index i = 0; i < r.witness_direction->size(); ++i)
            s += (i ? " " : "") + format_number((*r.witness_direction)(i));
        row("witness_direction", s);
    }
    if (r.witness_vector) {
        std::string s;
        for (Eigen::Index i = 0; i < r.witness_vector->size(); ++i) {
            const Complex z = (*r.witness_vector)(i);
            s += (i ? " " : "") + format_number(z.real()) + (z.imag() < 0 ? "-" : "+") +
                 format_number(std::abs(z.imag())) + "i";
        }
        row("witness_vector", s);
    }
    if (r.cross_check)
        row("cross_check", r.cross_check->method + " " + std::string(to_string(r.cross_check->regular)) +
                               (r.cross_check->agree ? " (agree)" : " (DISAGREE)"));
    row("tol", format_number(r.tol));
    row("samples", std::to_string(r.samples));
    for (const auto& w : r.warnings)
        row("warning", w);
    if (r.timing_ms)
        row("timing_ms", format_number(*r.timing_ms));
    return os.str();
}

} // namespace diracbc
