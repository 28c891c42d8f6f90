#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "sdsim/compile.hpp"
#include "sdsim/errors.hpp"
#include "sdsim/frs.hpp"
#include "sdsim/parser.hpp"
#include "sdsim/simulate.hpp"
#include "sdsim/unitcheck.hpp"
#include "support/mutate.hpp"

using namespace sdsim;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const char* kBias = "Distribution of Bias in Data & Design";

}  // namespace

TEST_SUITE("frs") {

TEST_CASE("built-in model matches the shipped source file") {
    ParseResult res = parse_model(read_file("models/frs.sdl"));
    REQUIRE(res.ok());
    for (const auto& d : res.diagnostics) CHECK(d.severity != Severity::Error);
    CHECK(semantically_equal(*res.spec, build_frs_model()));
}

TEST_CASE("serialization round-trips the built-in model") {
    ModelSpec spec = build_frs_model();
    ParseResult res = parse_model(serialize(spec));
    REQUIRE(res.ok());
    CHECK(semantically_equal(*res.spec, spec));
}

TEST_CASE("definition census") {
    ModelSpec spec = build_frs_model();
    CHECK(spec.variables.size() == 45);
    int stocks = 0, constants = 0, auxes = 0, controls = 0;
    for (const auto& v : spec.variables) {
        switch (v.kind) {
            case VarKind::Stock: ++stocks; break;
            case VarKind::Constant: ++constants; break;
            case VarKind::Auxiliary: ++auxes; break;
            case VarKind::Control: ++controls; break;
        }
    }
    CHECK(stocks == 4);
    CHECK(constants == 20);
    CHECK(auxes == 17);
    CHECK(controls == 4);

    CHECK(spec.control.initial_time == 0.0);
    CHECK(spec.control.final_time == 100.0);
    CHECK(spec.control.dt == 0.0078125);
    CHECK(spec.control.saveper == 0.0078125);
    CHECK(spec.control.saveper_tracks_dt);
}

TEST_CASE("constant table") {
    auto consts = frs_constants();
    CHECK(consts.size() == 20);
    std::map<std::string, double> by_name(consts.begin(), consts.end());
    CHECK(by_name.at("Accuracy") == 1.0);
    CHECK(by_name.at("Avg Interaction Life") == 6760.0);
    CHECK(by_name.at("Avg. new recommendations") == 26000.0);
    CHECK(by_name.at("Avg. New Users per. Items") == 1.74);
    CHECK(by_name.at("Desired Interactions") == 26000.0);
    CHECK(by_name.at("Lifecycle") == 180.0);
    CHECK(by_name.at("Median Conversion Rate") == 2.4);
    CHECK(by_name.at("Rebalancing & Regularization") == 0.0);
    CHECK(by_name.at("Seed") == 1.0);
    CHECK(by_name.at("Time to Adjust Interactions") == 6760.0);

    // Names must agree with the model's own constant definitions.
    ModelSpec spec = build_frs_model();
    for (const auto& [name, value] : consts) {
        const VariableDef* def = spec.find(name);
        REQUIRE(def != nullptr);
        CHECK(def->kind == VarKind::Constant);
        CHECK(std::get<Expr::Number>(def->expr->node).value == value);
    }
}

TEST_CASE("stock initial values") {
    auto stocks = frs_initial_stocks();
    REQUIRE(stocks.size() == 4);
    CHECK(stocks[0].first == kBias);
    CHECK(stocks[0].second == 1.0);
    CHECK(stocks[1].first == "FRE");
    CHECK(stocks[1].second == 5.0);
    CHECK(stocks[2].first == "HCI");
    CHECK(stocks[2].second == 10.0);
    CHECK(stocks[3].first == "Performance");
    CHECK(stocks[3].second == 1.0);
}

TEST_CASE("presets") {
    auto names = preset_names();
    REQUIRE(names.size() == 10);
    CHECK(names[0] == "base");
    CHECK(names[3] == "all-bias-x5");
    CHECK(names[5] == "intervention-full");

    CHECK(preset("base").overrides.empty());
    CHECK(preset("inductive-x2").overrides ==
          std::vector<std::pair<std::string, double>>{{"Inductive Bias", 2}});
    CHECK(preset("user-x2").overrides ==
          std::vector<std::pair<std::string, double>>{{"User Bias", 2}});
    CHECK(preset("all-bias-x5").overrides.size() == 3);
    CHECK(preset("intervention-research").overrides.size() == 4);
    CHECK(preset("intervention-full").overrides.size() == 6);

    // Every preset override must target a real constant.
    CompiledModel m = compile(build_frs_model());
    for (const auto& name : names) {
        Preset p = preset(name);
        for (const auto& [target, value] : p.overrides) {
            CHECK(m.kinds[static_cast<std::size_t>(m.slot(target))] == VarKind::Constant);
        }
    }

    CHECK_THROWS_AS(preset("turbo"), UnknownPreset);
}

TEST_CASE("distribution presets give the expected skew coefficient") {
    CompiledModel m = compile(build_frs_model());
    const struct { const char* name; double coeff; } table[] = {
        {"dist-exponential", 65.28571428571428},
        {"dist-lognormal", 20.07142857142857},
        {"dist-gamma2", 14.789473684210526},
        {"dist-gamma4", 9.714285714285715},
    };
    SimControl c = m.spec.control;
    c.final_time = 0.0;
    RngPolicy off;
    off.mode = NoiseMode::NoiseOff;
    for (const auto& row : table) {
        RunResult run = simulate(m, off, preset(row.name).overrides, c);
        CHECK(run.at("Coefficient of Bias Distribution & Skewness")[0] ==
              doctest::Approx(row.coeff).epsilon(1e-12));
    }
}

TEST_CASE("initial-step values match hand computation") {
    CompiledModel m = compile(build_frs_model());
    SimControl c = m.spec.control;
    c.final_time = 2.0 * c.dt;
    RngPolicy off;
    off.mode = NoiseMode::NoiseOff;
    RunResult run = simulate(m, off, {}, c);

    CHECK(run.at("New Processing Rate")[0] == doctest::Approx(0.348).epsilon(1e-12));
    CHECK(run.at("Avg Interactions with Recommendations")[0] == 0.5);
    CHECK(run.at("Avg Quality")[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(run.at("Increased Recommendations")[0] == doctest::Approx(624000.0).epsilon(1e-12));
    CHECK(run.at("Interaction Increased Rate")[0] ==
          doctest::Approx(26000.0 / 6760.0).epsilon(1e-12));
    CHECK(run.at("Interaction Decrease Rate")[0] == doctest::Approx(10.0 / 6760.0).epsilon(1e-12));
    CHECK(run.at("Skewed Patterns in Model")[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(run.at("Quality of each new Recommendations")[0] == 1.0);  // clamp(0.2, 1, 5)

    CHECK(run.at(kBias)[1] == doctest::Approx(1.00271875).epsilon(1e-12));
    CHECK(std::abs(run.at("HCI")[1] - 10.0300365) < 1e-6);

    // The same anchors hold in the stochastic run: neither inflow reads the
    // noise draw at time zero.
    RunResult noisy = simulate(m, RngPolicy{}, {}, c);
    CHECK(noisy.at(kBias)[1] == run.at(kBias)[1]);
    CHECK(noisy.at("HCI")[1] == run.at("HCI")[1]);
}

TEST_CASE("declared units are internally consistent") {
    CHECK(check_model(build_frs_model()).empty());
}

TEST_CASE("single-operator mutations are caught and named") {
    ModelSpec spec = build_frs_model();
    int eligible = 0;
    for (const auto& v : spec.variables) {
        auto mutated = testsupport::mutate_equation(spec, v.name);
        if (!mutated) continue;
        ++eligible;
        CHECK((v.kind == VarKind::Auxiliary || v.kind == VarKind::Stock));
        auto mismatches = check_model(*mutated);
        REQUIRE(!mismatches.empty());
        bool named = false;
        for (const auto& mm : mismatches) named |= mm.variable == v.name;
        CHECK_MESSAGE(named, "mutation of ", v.name, " not attributed to it");
    }
    // Every stock and every auxiliary carries at least one mutable operator.
    CHECK(eligible == 21);
}

TEST_CASE("exactly one noise site") {
    CompiledModel m = compile(build_frs_model());
    REQUIRE(m.noise_sites.size() == 1);
    CHECK(m.noise_sites[0].first == m.slot("Quality of each new Recommendations"));
    CHECK(m.noise_sites[0].second == 0);
}

TEST_CASE("range annotations") {
    CHECK(range_warnings(build_frs_model()).empty());

    ModelSpec spec;
    VariableDef def;
    def.name = "Tank Cap";
    def.kind = VarKind::Constant;
    def.expr = num(7.0);
    def.units = UnitExpr::dimensionless();
    def.range = ValueRange{0.0, 5.0};
    spec.variables.push_back(def);
    auto warnings = range_warnings(spec);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("Tank Cap") != std::string::npos);
}

}  // TEST_SUITE
