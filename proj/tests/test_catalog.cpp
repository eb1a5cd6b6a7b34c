#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "diracbc/catalog.hpp"
#include "support.hpp"

using namespace diracbc;
using namespace diracbc::testing;
using std::numbers::pi;

namespace {

double lin(double lo, double hi, int count, int i) { return lo + (hi - lo) * i / (count - 1); }

struct Observed {
    bool self_adjoint = false;
    Regularity regular = Regularity::boundary;
};

Observed observe(const FamilySpec& spec)
{
    const auto [d, n] = family_default_rep(spec.name);
    const auto obj = build_family(spec, family_default_frame(make_rep(d, n)));
    if (const auto* bc = std::get_if<BoundaryCondition>(&obj))
        return {is_self_adjoint(*bc), sl_check_sampled(*bc).regular};
    const auto& tp = std::get<TransmissionPair>(obj);
    TransmissionOptions opt;
    opt.alternatives = false;
    return {trans_self_adjoint(tp), trans_sl_check(tp, opt).regular()};
}

/// Compares every point with an asserted verdict; returns how many were compared.
int check_points(const std::vector<FamilySpec>& specs)
{
    int compared = 0;
    for (const auto& spec : specs) {
        const auto want = expected_verdicts(spec);
        const auto got = observe(spec);
        std::string label = spec.name;
        for (const auto& [k, v] : spec.scalars)
            label += " " + k + "=" + std::to_string(v);
        EXPECT_EQ(got.self_adjoint, want.self_adjoint) << label;
        if (want.regular == Expected::boundary || want.regular == Expected::unasserted)
            continue;
        const bool regular = want.regular != Expected::not_regular;
        EXPECT_EQ(got.regular, regular ? Regularity::regular : Regularity::not_regular) << label;
        ++compared;
    }
    return compared;
}

FamilySpec named(std::string name, std::map<std::string, double> s = {})
{
    FamilySpec f;
    f.name = std::move(name);
    f.scalars = std::move(s);
    return f;
}

} // namespace

TEST(Catalog, NamesAndDefaults)
{
    EXPECT_EQ(family_names().size(), 11u);
    for (const auto& name : family_names()) {
        const auto [d, n] = family_default_rep(name);
        EXPECT_NO_THROW(family_default_frame(make_rep(d, n))) << name;
    }
    EXPECT_EQ(family_default_rep("d5_family"), std::make_pair(5, 4));
    EXPECT_EQ(code_of([] { family_default_rep("nope"); }), ErrorCode::param_out_of_domain);
    // d = 5 keeps e5 tangent
    const auto f5 = family_default_frame(make_rep(5, 4));
    EXPECT_NEAR(f5.nu().dot(RealVector::Unit(5, 4)), 0.0, 1e-15);
}

TEST(Catalog, Examples)
{
    EXPECT_EQ(expected_verdicts(named("mit_bag")).regular, Expected::regular);
    EXPECT_EQ(observe(named("mit_bag")).regular, Regularity::regular);
    EXPECT_EQ(observe(named("berry_mondragon", {{"B", 0.0}})).regular, Regularity::not_regular);
    EXPECT_EQ(observe(named("generalized_mit", {{"theta", pi}})).regular, Regularity::not_regular);
    EXPECT_EQ(expected_verdicts(named("d4n4", {{"a11", 1}, {"a22", -1}})).regular, Expected::unasserted);
    EXPECT_EQ(expected_verdicts(named("d4n4", {{"a11", 1}, {"a22", 2}})).regular, Expected::sufficient);
    EXPECT_EQ(expected_verdicts(named("delta_shell", {{"eta", 2}})).regular, Expected::not_regular);
    EXPECT_EQ(expected_verdicts(named("berry_mondragon", {{"B", 1e-8}})).regular, Expected::boundary);
}

TEST(Catalog, Errors)
{
    const auto f22 = canonical_frame(make_rep(2, 2));
    const auto f34 = canonical_frame(make_rep(3, 4));
    EXPECT_EQ(code_of([&] { build_family(named("berry_mondragon", {{"B", 1}}), f34); }), ErrorCode::family_rep_mismatch);
    EXPECT_EQ(code_of([&] { build_family(named("mit_bag"), canonical_frame(make_rep(3, 2))); }),
              ErrorCode::family_rep_mismatch);
    EXPECT_EQ(code_of([&] { build_family(named("berry_mondragon"), f22); }), ErrorCode::param_out_of_domain);
    EXPECT_EQ(code_of([&] { build_family(named("d3n4_caseB", {{"b", 0.5}, {"t1", 0.1}, {"t2", 0}}), f34); }),
              ErrorCode::param_out_of_domain);
    const auto f32 = canonical_frame(make_rep(3, 2));
    // t must be tangent and unit
    EXPECT_EQ(code_of([&] { build_family(named("chiral_bag", {{"t1", 0}, {"t2", 0}, {"t3", 1}}), f32); }),
              ErrorCode::param_out_of_domain);
    EXPECT_EQ(code_of([&] { build_family(named("chiral_bag", {{"t1", 2}, {"t2", 0}, {"t3", 0}}), f32); }),
              ErrorCode::param_out_of_domain);
    EXPECT_EQ(code_of([&] { build_family(named("unknown"), f22); }), ErrorCode::param_out_of_domain);
}

TEST(Catalog, ParameterFallbacks)
{
    auto f = named("d4n4", {{"a11", 1}, {"a22", 2}, {"a12_re", 0.5}, {"a12_im", -0.25}});
    const Matrix a = f.matrix("A");
    EXPECT_EQ(a(0, 1), Complex(0.5, -0.25));
    EXPECT_EQ(a(1, 0), Complex(0.5, 0.25));
    f.scalars = {{"t1", 0.3}, {"t2", 0.4}};
    EXPECT_TRUE(f.has_vector("t"));
    EXPECT_EQ(f.vector("t").size(), 2);
    EXPECT_FALSE(f.has_vector("u"));
}

TEST(CatalogGrid, GeneralizedMit)
{
    std::vector<FamilySpec> specs;
    for (int i = 0; i < 61; ++i)
        specs.push_back(named("generalized_mit", {{"theta", lin(0, 2 * pi, 61, i)}}));
    EXPECT_GE(check_points(specs), 50);
}

TEST(CatalogGrid, BerryMondragon)
{
    std::vector<FamilySpec> specs;
    for (int i = 0; i < 61; ++i)
        specs.push_back(named("berry_mondragon", {{"B", lin(-3, 3, 61, i)}}));
    EXPECT_GE(check_points(specs), 50);
}

TEST(CatalogGrid, D2N4)
{
    std::vector<FamilySpec> specs;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            specs.push_back(named("d2n4", {{"a11", lin(-2, 2, 8, i)}, {"a22", lin(-2, 2, 8, j)}, {"a12_re", 0.3}, {"a12_im", 0.2}}));
    specs.push_back(named("d2n4", {{"a11", 1}, {"a22", 0}}));
    specs.push_back(named("d2n4", {{"a11", 0}, {"a22", 0}}));
    EXPECT_GE(check_points(specs), 50);
}

TEST(CatalogGrid, ChiralBag)
{
    std::vector<FamilySpec> specs;
    for (int i = 0; i < 50; ++i) {
        const double phi = lin(0, 2 * pi, 51, i);
        specs.push_back(named("chiral_bag", {{"t1", std::cos(phi)}, {"t2", std::sin(phi)}, {"t3", 0}}));
    }
    EXPECT_GE(check_points(specs), 50);
}

TEST(CatalogGrid, FiveDimensional)
{
    Rng rng(51);
    std::vector<FamilySpec> specs;
    for (int i = 0; i < 50; ++i) {
        // nu = e4 in the default frame
        RealVector u = random_unit(4, rng);
        auto f = named("d5_family", {{"tau", lin(-pi, pi, 50, i)}});
        f.vectors["t"] = (RealVector(5) << u(0), u(1), u(2), 0.0, u(3)).finished();
        specs.push_back(f);
    }
    EXPECT_GE(check_points(specs), 50);
}

TEST(CatalogGrid, D3N4)
{
    std::vector<FamilySpec> specs;
    for (const auto* name : {"d3n4_caseA", "d3n4_caseA_singular"})
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 9; ++j) {
                const double phi = 0.7 * j;
                const double r = lin(0, 2, 9, j) + 0.05;
                specs.push_back(named(name, {{"a", lin(-2, 2, 7, i) + 0.1}, {"d", 0.4}, {"t1", r * std::cos(phi)}, {"t2", r * std::sin(phi)}}));
            }
    for (int i = 0; i < 60; ++i) {
        const double b = lin(-1, 1, 60, i), r = std::sqrt(std::max(0.0, 1.0 - b * b)), phi = 0.37 * i;
        specs.push_back(named("d3n4_caseB", {{"b", b}, {"t1", r * std::cos(phi)}, {"t2", r * std::sin(phi)}}));
    }
    specs.push_back(named("d3n4_caseB", {{"b", 0}, {"t1", 1}, {"t2", 0}}));
    EXPECT_GE(check_points(specs), 150);
}

TEST(CatalogGrid, D4N4)
{
    std::vector<FamilySpec> specs;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            specs.push_back(named("d4n4", {{"a11", lin(-2, 2, 8, i) + 0.1}, {"a22", lin(-2, 2, 8, j)}, {"a12_re", -0.2}, {"a12_im", 0.5}}));
    // only the sufficient side is asserted
    EXPECT_GE(check_points(specs), 25);
}

TEST(CatalogGrid, DeltaShell)
{
    std::vector<FamilySpec> specs;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            specs.push_back(named("delta_shell", {{"eta", lin(-3, 3, 9, i)}, {"lambda", lin(-3, 3, 9, j)}}));
    specs.push_back(named("delta_shell", {{"eta", 2}}));
    specs.push_back(named("delta_shell", {{"tau", 2}}));
    EXPECT_GE(check_points(specs), 50);
}
