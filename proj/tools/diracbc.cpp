// diracbc: check, sweep and witness runs for pointwise Dirac boundary conditions.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diracbc/commands.hpp"

namespace {

struct Common {
    std::optional<double> tol;
    std::optional<int> samples;
    bool cross_check = false;
    bool json = false;
    bool quiet = false;
    bool timing = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--tol", c.tol, "numerical tolerance (default 1e-9)");
    cmd->add_option("--samples", c.samples, "directions on the sphere grid (default 512)");
    cmd->add_flag("--cross-check", c.cross_check, "run the independent route as well and compare");
    cmd->add_flag("--json", c.json, "emit JSON instead of a table");
    cmd->add_flag("--quiet", c.quiet, "print nothing; report through the exit code");
    cmd->add_flag("--timing", c.timing, "include wall-clock timing (breaks byte-identical output)");
}

diracbc::CheckFlags flags_of(const Common& c)
{
    diracbc::CheckFlags f;
    f.tol = c.tol;
    f.samples = c.samples;
    f.cross_check = c.cross_check;
    f.timing = c.timing;
    return f;
}

std::vector<int> parse_n_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw diracbc::Error(diracbc::ErrorCode::parse_error, "--n expects comma-separated integers");
        }
    }
    return out;
}

std::pair<std::string, double> parse_param(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw diracbc::Error(diracbc::ErrorCode::parse_error, "--param expects key=value");
    try {
        std::size_t used = 0;
        const std::string v = text.substr(eq + 1);
        const double x = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return {text.substr(0, eq), x};
    } catch (const std::logic_error&) {
        throw diracbc::Error(diracbc::ErrorCode::parse_error, "--param '" + text + "': bad number");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Symmetry, self-adjointness and Shapiro-Lopatinski regularity of Dirac boundary conditions"};
    app.require_subcommand(1);

    Common common;
    std::string file;

    auto* check = app.add_subcommand("check", "classify the condition in a spec file");
    check->add_option("file", file, "spec file (JSON)")->required();
    add_common(check, common);

    std::string family;
    std::vector<std::string> grid, params;
    std::string rep;
    auto* sweep = app.add_subcommand("sweep", "classify a family over a parameter grid");
    sweep->add_option("--family", family, "family name")->required();
    sweep->add_option("--grid", grid, "axis key=start:stop:count; repeat for a product grid, last varies fastest");
    sweep->add_option("--param", params, "fixed parameter key=value");
    sweep->add_option("--rep", rep, "representation d,N (default: the family's)");
    add_common(sweep, common);

    std::string n_list = "4,16,64,256";
    std::string cutoff = "standard";
    auto* witness = app.add_subcommand("witness", "norms of the concentrating sequence along a failing direction");
    witness->add_option("file", file, "spec file (JSON)")->required();
    witness->add_option("--n", n_list, "comma-separated n values");
    witness->add_option("--cutoff", cutoff, "standard or flat bump")->check(CLI::IsMember({"standard", "flat"}));
    add_common(witness, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return diracbc::exit_input;
    }

    try {
        const auto flags = flags_of(common);
        if (check->parsed()) {
            const auto spec = diracbc::load_spec(file);
            const auto res = diracbc::cmd_check(spec, flags);
            if (!common.quiet)
                std::cout << (common.json ? diracbc::to_json(res.report).dump(2) + "\n"
                                          : diracbc::format_table(res.report));
            return res.exit_code;
        }
        if (sweep->parsed()) {
            diracbc::SweepRequest req;
            req.family = family;
            for (const auto& g : grid)
                req.axes.push_back(diracbc::parse_grid_axis(g));
            for (const auto& p : params)
                req.fixed.insert(parse_param(p));
            if (!rep.empty()) {
                int d = 0, n = 0;
                char comma = 0;
                std::stringstream ss(rep);
                if (!(ss >> d >> comma >> n) || comma != ',' || !ss.eof())
                    throw diracbc::Error(diracbc::ErrorCode::parse_error, "--rep expects d,N");
                req.rep = std::pair{d, n};
            }
            const auto res = diracbc::cmd_sweep(req, flags);
            if (!common.quiet)
                std::cout << (common.json ? diracbc::to_json(res).dump(2) + "\n" : diracbc::format_table(res));
            return res.exit_code;
        }
        const auto spec = diracbc::load_spec(file);
        diracbc::WitnessRequest req;
        req.n_list = parse_n_list(n_list);
        req.cutoff = cutoff == "flat" ? diracbc::Cutoff::flat_bump : diracbc::Cutoff::standard_bump;
        const auto res = diracbc::cmd_witness(spec, req, flags);
        if (!common.quiet)
            std::cout << (common.json ? diracbc::to_json(res).dump(2) + "\n" : diracbc::format_table(res));
        return diracbc::exit_ok;
    } catch (const diracbc::Error& e) {
        std::cerr << "diracbc: " << e.what() << '\n';
        return diracbc::exit_code_for(e.code());
    }
}
