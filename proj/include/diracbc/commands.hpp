#pragma once
//
// check / sweep / witness drivers behind the command-line tool. Kept in the library so
// tests can run them without spawning a process.
//

#include <chrono>
#include <string>
#include <vector>

#include "diracbc/io.hpp"
#include "diracbc/witness.hpp"

namespace diracbc {

enum ExitCode : int { exit_ok = 0, exit_inconsistent = 1, exit_input = 2 };

inline int exit_code_for(ErrorCode code)
{
    return code == ErrorCode::inconsistent_check ? exit_inconsistent : exit_input;
}

struct CheckFlags {
    std::optional<double> tol;
    std::optional<int> samples;
    bool cross_check = false;
    bool timing = false;
};

struct CheckOutcome {
    Report report;
    int exit_code = exit_ok;
};

namespace detail {

inline SampledOptions oracle_options(int samples)
{
    SampledOptions opt;
    opt.samples = samples;
    return opt;
}

/// Boundary verdicts on either side are inconclusive, not a conflict.
inline bool verdicts_agree(Regularity a, Regularity b)
{
    return a == b || a == Regularity::boundary || b == Regularity::boundary;
}

inline void take_verdict(Report& r, const SLVerdict& v, bool sampled)
{
    r.regular = v.regular;
    r.method = v.method;
    if (sampled)
        r.margin = v.margin;
    if (v.witness) {
        r.witness_direction = v.witness->direction;
        r.witness_vector = v.witness->vector;
    }
    r.warnings.insert(r.warnings.end(), v.warnings.begin(), v.warnings.end());
}

inline void record_cross_check(CheckOutcome& out, const SLVerdict& oracle, bool conflict_is_error)
{
    const bool agree = verdicts_agree(out.report.regular, oracle.regular);
    out.report.cross_check = CrossCheck{oracle.method, oracle.regular, agree};
    if (agree)
        return;
    if (conflict_is_error) {
        out.exit_code = exit_inconsistent;
        out.report.warnings.push_back("closed-form verdict and oracle disagree");
    } else {
        out.report.warnings.push_back("oracle verdict differs outside the asserted condition (logged only)");
    }
}

inline std::optional<std::string> phase_of(const BoundaryFrame& frame)
{
    if (!has_chirality(frame.rep()))
        return std::nullopt;
    return chirality(frame.rep()).phase;
}

inline void check_local(CheckOutcome& out, const BoundaryCondition& bc, const CheckFlags& flags, double tol,
                        int samples)
{
    Report& r = out.report;
    r.symmetric = is_symmetric(bc, tol);
    r.self_adjoint = is_self_adjoint(bc, tol);
    take_verdict(r, sl_check_sampled(bc, oracle_options(samples)), true);
    r.certainty = "sampled";
    if (!flags.cross_check)
        return;
    if (!has_chirality(bc.frame.rep()) || !r.self_adjoint) {
        r.warnings.push_back("cross-check needs a self-adjoint condition in a representation with chirality");
        return;
    }
    const auto cs = chirality(bc.frame.rep());
    try {
        const auto ex = chiral_unitary(cs, bc, tol);
        const auto chiral = sl_check_chiral(cs, bc.frame, chiral_decompose(ex.map.matrix, 1e-6),
                                            oracle_options(samples));
        record_cross_check(out, chiral, true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::not_a_graph && e.code() != ErrorCode::not_unitary)
            throw;
        r.warnings.push_back(std::string("cross-check skipped: ") + e.what());
    }
}

inline void check_family(CheckOutcome& out, const FamilySpec& fam, const BoundaryFrame& frame,
                         const CheckFlags& flags, double tol, int samples)
{
    Report& r = out.report;
    const auto obj = build_family(fam, frame);
    if (std::holds_alternative<TransmissionPair>(obj)) {
        const auto& tp = std::get<TransmissionPair>(obj);
        const DeltaShellParams p{fam.scalar_or("eta", 0.0), fam.scalar_or("tau", 0.0), fam.scalar_or("omega", 0.0),
                                 fam.scalar_or("lambda", 0.0)};
        r.symmetric = trans_symmetric(tp, tol);
        r.self_adjoint = trans_self_adjoint(tp, tol);
        r.regular = delta_shell_regular(p, tol) ? Regularity::regular : Regularity::not_regular;
        r.method = "closed_form_delta_shell";
        r.certainty = "exact";
        if (r.regular == Regularity::not_regular || flags.cross_check) {
            TransmissionOptions opt;
            opt.sampled = oracle_options(samples);
            const auto tv = trans_sl_check(tp, opt);
            if (r.regular == Regularity::not_regular && tv.image.witness) {
                r.witness_direction = tv.image.witness->direction;
                r.witness_vector = tv.image.witness->vector;
            }
            if (flags.cross_check) {
                record_cross_check(out, tv.image, true);
                if (!tv.forms_agree) {
                    out.exit_code = exit_inconsistent;
                    r.warnings.push_back("the three transmission formulations disagree");
                }
            }
        }
        return;
    }

    const auto& bc = std::get<BoundaryCondition>(obj);
    r.symmetric = is_symmetric(bc, tol);
    r.self_adjoint = is_self_adjoint(bc, tol);

    const auto& name = fam.name;
    std::optional<ClassifierResult> cls;
    if (name == "berry_mondragon")
        cls = classify_d2n2(fam.scalar("B"), frame, tol, samples);
    else if (name == "d2n4")
        cls = classify_d2n4(fam.matrix("A"), frame, tol, samples);
    else if (name == "chiral_bag")
        cls = classify_d3n2_global(fam.vector("t"), frame, samples);
    else if (name == "d5_family")
        cls = classify_d5n4_global(fam.vector("t"), fam.scalar("tau"), frame);
    else if (name == "d3n4_caseA" || name == "d3n4_caseA_singular" || name == "d3n4_caseB") {
        const auto kind = name == "d3n4_caseA"   ? D3Kind::case_a
                          : name == "d3n4_caseB" ? D3Kind::case_b
                                                 : D3Kind::case_a_singular;
        cls = classify_d3n4(kind, detail::d3_params(fam), frame, tol, samples);
    } else if (name == "d4n4")
        cls = classify_d4n4(fam.matrix("A"), frame, tol, samples);

    if (cls) {
        take_verdict(r, cls->verdict, false);
        r.certainty = std::string(to_string(cls->certainty));
    } else {
        // mit_bag, generalized_mit: the chirality criterion on f~ = e^{i theta} Id
        const auto cs = chirality(frame.rep());
        const double theta = name == "mit_bag" ? std::numbers::pi / 2.0 : fam.scalar("theta");
        const auto dec = chiral_decompose(std::polar(1.0, theta) * identity(cs.half()), tol);
        take_verdict(r, sl_check_chiral(cs, frame, dec, oracle_options(samples)), true);
        r.certainty = "exact";
    }

    if (flags.cross_check) {
        const bool asserted = r.certainty != "unasserted";
        record_cross_check(out, sl_check_sampled(bc, oracle_options(samples)), asserted);
    }
}

inline void check_transmission(CheckOutcome& out, const TransmissionInput& input, const BoundaryFrame& frame,
                               const CheckFlags& flags, double tol, int samples)
{
    if (std::holds_alternative<DeltaShellParams>(input)) {
        const auto& p = std::get<DeltaShellParams>(input);
        FamilySpec fam{"delta_shell", {{"eta", p.eta}, {"tau", p.tau}, {"omega", p.omega}, {"lambda", p.lambda}}, {}, {}};
        check_family(out, fam, frame, flags, tol, samples);
        return;
    }
    const auto& raw = std::get<RawPair>(input);
    const TransmissionPair tp(frame, raw.b1, raw.b2);
    Report& r = out.report;
    r.symmetric = trans_symmetric(tp, tol);
    r.self_adjoint = trans_self_adjoint(tp, tol);
    TransmissionOptions opt;
    opt.sampled = oracle_options(samples);
    opt.alternatives = flags.cross_check;
    const auto tv = trans_sl_check(tp, opt);
    take_verdict(r, tv.image, true);
    r.certainty = "sampled";
    if (flags.cross_check && tv.alt_kernel) {
        record_cross_check(out, *tv.alt_kernel, true);
        if (!tv.forms_agree)
            out.exit_code = exit_inconsistent;
    }
}

} // namespace detail

/// Runs the checks for one spec. Errors propagate as Error; callers map them with exit_code_for.
inline CheckOutcome cmd_check(const SpecFile& spec, const CheckFlags& flags = {})
{
    const auto start = std::chrono::steady_clock::now();
    CheckOutcome out;
    Report& r = out.report;
    r.input = spec.source;
    r.tol = flags.tol.value_or(spec.tolerances.tol);
    r.samples = flags.samples.value_or(spec.tolerances.samples);
    if (!(r.tol > 0.0) || r.samples < 1)
        throw Error(ErrorCode::param_out_of_domain, "tol must be positive and samples at least 1");

    const BoundaryFrame frame = spec_frame(spec);
    r.chirality_phase = detail::phase_of(frame);

    if (const auto* m = std::get_if<Matrix>(&spec.condition)) {
        if (m->rows() != frame.rank())
            throw Error(ErrorCode::dimension_mismatch, "subspace rows must equal N");
        const BoundaryCondition bc(frame, span(*m));
        detail::check_local(out, bc, flags, r.tol, r.samples);
    } else if (const auto* fam = std::get_if<FamilySpec>(&spec.condition)) {
        detail::check_family(out, *fam, frame, flags, r.tol, r.samples);
    } else {
        detail::check_transmission(out, std::get<TransmissionInput>(spec.condition), frame, flags, r.tol, r.samples);
    }

    if (flags.timing)
        r.timing_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

// sweeps -------------------------------------------------------------------------------

struct GridAxis {
    std::string key;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    [[nodiscard]] double at(int i) const
    {
        if (count == 1)
            return start;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

/// key=start:stop:count, count points including both ends.
inline GridAxis parse_grid_axis(const std::string& text)
{
    const auto eq = text.find('=');
    const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq);
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (eq == std::string::npos || eq == 0 || c1 == std::string::npos || c2 == std::string::npos)
        throw Error(ErrorCode::parse_error, "grid axis '" + text + "': expected key=start:stop:count");
    GridAxis a;
    a.key = text.substr(0, eq);
    try {
        std::size_t used = 0;
        const std::string s0 = text.substr(eq + 1, c1 - eq - 1), s1 = text.substr(c1 + 1, c2 - c1 - 1),
                          s2 = text.substr(c2 + 1);
        a.start = std::stod(s0, &used);
        if (used != s0.size())
            throw std::invalid_argument(s0);
        a.stop = std::stod(s1, &used);
        if (used != s1.size())
            throw std::invalid_argument(s1);
        a.count = std::stoi(s2, &used);
        if (used != s2.size())
            throw std::invalid_argument(s2);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::parse_error, "grid axis '" + text + "': bad number");
    }
    if (a.count < 0)
        throw Error(ErrorCode::parse_error, "grid axis '" + text + "': negative count");
    return a;
}

struct SweepRequest {
    std::string family;
    std::vector<GridAxis> axes;           // last axis varies fastest
    std::map<std::string, double> fixed; // parameters held constant
    std::optional<std::pair<int, int>> rep;
};

struct SweepRow {
    std::map<std::string, double> params;
    std::optional<Report> report;
    std::optional<std::string> error;
    int exit_code = exit_ok;
};

struct SweepResult {
    std::vector<std::string> keys; // axis keys in grid order
    std::vector<SweepRow> rows;
    int regular = 0;
    int not_regular = 0;
    int boundary = 0;
    int errors = 0;
    int exit_code = exit_ok;
};

inline SweepResult cmd_sweep(const SweepRequest& req, const CheckFlags& flags = {})
{
    SweepResult out;
    family_default_rep(req.family); // rejects unknown names up front
    for (const auto& a : req.axes)
        out.keys.push_back(a.key);

    std::size_t total = req.axes.empty() ? 0 : 1;
    for (const auto& a : req.axes)
        total *= static_cast<std::size_t>(a.count);

    const auto [d, n] = req.rep.value_or(family_default_rep(req.family));
    for (std::size_t idx = 0; idx < total; ++idx) {
        SweepRow row;
        row.params = req.fixed;
        std::size_t rest = idx;
        for (std::size_t ai = req.axes.size(); ai-- > 0;) {
            const auto& a = req.axes[ai];
            const auto count = static_cast<std::size_t>(a.count);
            row.params[a.key] = a.at(static_cast<int>(rest % count));
            rest /= count;
        }
        SpecFile spec;
        spec.d = d;
        spec.n = n;
        FamilySpec fam{req.family, row.params, {}, {}};
        spec.condition = fam;
        Json params = Json::object();
        for (const auto& [k, v] : row.params)
            params[k] = v;
        spec.source = {{"version", spec_version},
                       {"rep", {{"d", d}, {"N", n}}},
                       {"condition", {{"family", {{"name", req.family}, {"params", params}}}}}};
        try {
            auto res = cmd_check(spec, flags);
            row.exit_code = res.exit_code;
            switch (res.report.regular) {
            case Regularity::regular: ++out.regular; break;
            case Regularity::not_regular: ++out.not_regular; break;
            case Regularity::boundary: ++out.boundary; break;
            }
            row.report = std::move(res.report);
        } catch (const Error& e) {
            row.error = e.what();
            row.exit_code = exit_code_for(e.code());
            ++out.errors;
        }
        out.exit_code = std::max(out.exit_code, row.exit_code);
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline Json to_json(const SweepResult& s)
{
    Json rows = Json::array();
    for (const auto& row : s.rows) {
        Json j;
        Json params = Json::object();
        for (const auto& [k, v] : row.params)
            params[k] = v;
        j["params"] = params;
        if (row.report) {
            const auto& r = *row.report;
            j["symmetric"] = r.symmetric;
            j["self_adjoint"] = r.self_adjoint;
            j["regular"] = regularity_json(r.regular);
            j["method"] = r.method;
            j["margin"] = r.margin ? Json(*r.margin) : Json(nullptr);
            j["witness_direction"] = r.witness_direction ? to_json(*r.witness_direction) : Json(nullptr);
            j["witness_vector"] = r.witness_vector ? to_json(*r.witness_vector) : Json(nullptr);
            if (r.cross_check)
                j["cross_check_agree"] = r.cross_check->agree;
            if (r.timing_ms)
                j["timing_ms"] = *r.timing_ms;
        } else {
            j["error"] = *row.error;
        }
        rows.push_back(std::move(j));
    }
    Json out;
    out["rows"] = rows;
    out["summary"] = {{"regular", s.regular},
                      {"not_regular", s.not_regular},
                      {"boundary", s.boundary},
                      {"errors", s.errors}};
    return out;
}

inline std::string format_table(const SweepResult& s)
{
    std::ostringstream os;
    const auto cell = [&os](const std::string& text, std::size_t width) {
        os << text << std::string(text.size() < width ? width - text.size() : 1, ' ');
    };
    if (!s.rows.empty()) {
        for (const auto& [k, v] : s.rows.front().params)
            cell(k, 14);
        cell("symmetric", 11);
        cell("self_adjoint", 14);
        cell("regular", 10);
        os << "margin\n";
    }
    for (const auto& row : s.rows) {
        for (const auto& [k, v] : row.params)
            cell(format_number(v), 14);
        if (!row.report) {
            os << "error: " << *row.error << '\n';
            continue;
        }
        const auto& r = *row.report;
        cell(r.symmetric ? "true" : "false", 11);
        cell(r.self_adjoint ? "true" : "false", 14);
        cell(r.regular == Regularity::boundary ? "boundary" : r.regular == Regularity::regular ? "true" : "false", 10);
        os << (r.margin ? format_number(*r.margin) : "-") << '\n';
    }
    os << "summary: regular " << s.regular << ", not regular " << s.not_regular << ", boundary " << s.boundary
       << ", errors " << s.errors << '\n';
    return os.str();
}

// witness ------------------------------------------------------------------------------

struct WitnessRequest {
    std::vector<int> n_list{4, 16, 64, 256};
    Cutoff cutoff = Cutoff::standard_bump;
};

/// Check the spec, then evaluate the concentrating sequence along its witness.
inline WitnessReport cmd_witness(const SpecFile& spec, const WitnessRequest& req, const CheckFlags& flags = {})
{
    if (std::holds_alternative<TransmissionInput>(spec.condition))
        throw Error(ErrorCode::no_witness, "witness sequences are built for local conditions only");
    const BoundaryFrame frame = spec_frame(spec);
    BoundaryCondition bc;
    if (const auto* m = std::get_if<Matrix>(&spec.condition)) {
        if (m->rows() != frame.rank())
            throw Error(ErrorCode::dimension_mismatch, "subspace rows must equal N");
        bc = BoundaryCondition(frame, span(*m));
    } else {
        const auto obj = build_family(std::get<FamilySpec>(spec.condition), frame);
        if (!std::holds_alternative<BoundaryCondition>(obj))
            throw Error(ErrorCode::no_witness, "witness sequences are built for local conditions only");
        bc = std::get<BoundaryCondition>(obj);
    }
    const auto verdict = sl_check_sampled(bc, detail::oracle_options(flags.samples.value_or(spec.tolerances.samples)));
    if (verdict.regular != Regularity::not_regular)
        throw Error(ErrorCode::no_witness, "the condition is " + std::string(to_string(verdict.regular)) +
                                               "; there is no failing direction to concentrate on");
    auto ws = witness_build(bc, verdict);
    ws.cutoff = req.cutoff;
    for (const int n : req.n_list)
        if (n < 1)
            throw Error(ErrorCode::param_out_of_domain, "n must be positive");
    return witness_report(ws, req.n_list);
}

inline Json to_json(const WitnessReport& w)
{
    Json rows = Json::array();
    for (const auto& r : w.rows)
        rows.push_back({{"n", r.n}, {"l2", r.l2}, {"graph", r.graph}, {"h1_t", r.h1_t}});
    Json out;
    out["rows"] = rows;
    out["l2_slope"] = w.l2_slope;
    out["ratio_slope"] = w.ratio_slope;
    out["graph_spread"] = w.graph_spread;
    return out;
}

inline std::string format_table(const WitnessReport& w)
{
    std::ostringstream os;
    os << "n        l2            graph         h1_t\n";
    for (const auto& r : w.rows) {
        const std::string n = std::to_string(r.n);
        os << n << std::string(n.size() < 9 ? 9 - n.size() : 1, ' ');
        for (const double x : {r.l2, r.graph}) {
            const std::string s = format_number(x);
            os << s << std::string(s.size() < 14 ? 14 - s.size() : 1, ' ');
        }
        os << format_number(r.h1_t) << '\n';
    }
    os << "l2 slope " << format_number(w.l2_slope) << ", h1_t/graph slope " << format_number(w.ratio_slope)
       << ", graph max/min " << format_number(w.graph_spread) << '\n';
    return os.str();
}

} // namespace diracbc
