#include <cmath>

#include "doctest.h"
#include "sdsim/compile.hpp"
#include "sdsim/errors.hpp"
#include "sdsim/parser.hpp"
#include "sdsim/simulate.hpp"

using namespace sdsim;

namespace {

VariableDef make_def(std::string name, ExprPtr e, const char* units = "Dmnl") {
    VariableDef def;
    def.name = std::move(name);
    def.expr = std::move(e);
    def.kind = classify(def.name, *def.expr);
    def.units = parse_units(units);
    return def;
}

ModelSpec make_spec(std::vector<VariableDef> defs, SimControl control = {}) {
    ModelSpec spec;
    spec.variables = std::move(defs);
    spec.control = control;
    return spec;
}

SimControl control(double t0, double t1, double dt) {
    SimControl c;
    c.initial_time = t0;
    c.final_time = t1;
    c.set_dt(dt);
    return c;
}

}  // namespace

TEST_SUITE("compile") {

TEST_CASE("slots follow definition order and kinds are counted") {
    ModelSpec spec = make_spec({
        make_def("Rate", num(2.0)),
        make_def("Level", integ(var("Rate"), num(1.0))),
        make_def("Twice", mul(var("Level"), num(2.0))),
    });
    CompiledModel m = compile(spec);
    CHECK(m.slot("Rate") == 0);
    CHECK(m.slot("Level") == 1);
    CHECK(m.slot("Twice") == 2);
    CHECK(m.count(VarKind::Constant) == 1);
    CHECK(m.count(VarKind::Stock) == 1);
    CHECK(m.count(VarKind::Auxiliary) == 1);
    CHECK_THROWS_AS(m.slot("Missing"), MissingVariable);
}

TEST_CASE("unresolved references are rejected") {
    ModelSpec spec = make_spec({make_def("A", var("Ghost"))});
    CHECK_THROWS_AS(compile(spec), UnresolvedReference);
    try {
        compile(spec);
    } catch (const UnresolvedReference& e) {
        CHECK(e.name == "Ghost");
    }
}

TEST_CASE("auxiliary cycles are named in order") {
    ModelSpec spec = make_spec({
        make_def("A", add(var("B"), num(1.0))),
        make_def("B", add(var("A"), num(1.0))),
    });
    try {
        compile(spec);
        FAIL("expected CyclicDependency");
    } catch (const CyclicDependency& e) {
        CHECK(std::string(e.what()).find("A") != std::string::npos);
        CHECK(std::string(e.what()).find("B") != std::string::npos);
    }
}

TEST_CASE("stocks break cycles but stock initials must not depend on stocks") {
    // Feedback through a stock is the normal case.
    ModelSpec fine = make_spec({
        make_def("Drain", divide(var("Tank"), num(4.0))),
        make_def("Tank", integ(sub(num(3.0), var("Drain")), num(10.0))),
    });
    CHECK_NOTHROW(compile(fine));

    // An initial value that reads a stock has no defined order.
    ModelSpec bad = make_spec({
        make_def("Echo", var("Tank")),
        make_def("Tank", integ(num(1.0), var("Echo"))),
    });
    CHECK_THROWS_AS(compile(bad), CyclicDependency);
}

TEST_CASE("INTEG below the root is malformed") {
    ModelSpec spec = make_spec({make_def("A", add(integ(num(1.0), num(0.0)), num(2.0)))});
    CHECK_THROWS_AS(compile(spec), MalformedIntegral);
}

TEST_CASE("hand-built constant with a non-literal body is rejected") {
    VariableDef def;
    def.name = "K";
    def.kind = VarKind::Constant;
    def.expr = add(num(1.0), num(1.0));
    def.units = UnitExpr::dimensionless();
    CHECK_THROWS_AS(compile(make_spec({def})), InvalidParameter);
}

TEST_CASE("duplicate names are rejected") {
    ModelSpec spec = make_spec({make_def("X", num(1.0)), make_def("X", num(2.0))});
    CHECK_THROWS_AS(compile(spec), InvalidParameter);
}

}  // TEST_SUITE

TEST_SUITE("simulate") {

TEST_CASE("constant-rate stock matches the closed form bitwise") {
    ModelSpec spec = make_spec(
        {
            make_def("Rate", num(2.0)),
            make_def("Level", integ(var("Rate"), num(1.0))),
        },
        control(0.0, 2.0, 0.25));
    RunResult run = simulate(compile(spec), RngPolicy{});
    REQUIRE(run.times.size() == 9);
    const auto& level = run.at("Level");
    for (std::size_t k = 0; k < run.times.size(); ++k) {
        CHECK(run.times[k] == 0.25 * static_cast<double>(k));
        CHECK(level[k] == 1.0 + 0.5 * static_cast<double>(k));
    }
}

TEST_CASE("flows read the pre-update state") {
    // Cross-coupled stocks advance simultaneously: after one unit step each
    // sees only the other's initial value.
    ModelSpec spec = make_spec(
        {
            make_def("A", integ(var("B"), num(0.0))),
            make_def("B", integ(var("A"), num(1.0))),
        },
        control(0.0, 1.0, 1.0));
    RunResult run = simulate(compile(spec), RngPolicy{});
    CHECK(run.at("A")[1] == 1.0);
    CHECK(run.at("B")[1] == 1.0);
}

TEST_CASE("auxiliaries chain in dependency order regardless of definition order") {
    ModelSpec spec = make_spec(
        {
            make_def("C", add(var("B"), num(1.0))),
            make_def("B", mul(var("A"), num(2.0))),
            make_def("A", num(3.0)),
        },
        control(0.0, 0.0, 1.0));
    RunResult run = simulate(compile(spec), RngPolicy{});
    CHECK(run.at("B")[0] == 6.0);
    CHECK(run.at("C")[0] == 7.0);
}

TEST_CASE("time is readable as a variable") {
    ModelSpec spec = make_spec({make_def("Clock", mul(var("Time"), num(2.0)))},
                               control(1.0, 3.0, 0.5));
    RunResult run = simulate(compile(spec), RngPolicy{});
    for (std::size_t k = 0; k < run.times.size(); ++k) {
        CHECK(run.at("Clock")[k] == 2.0 * run.times[k]);
    }
}

TEST_CASE("recording follows saveper and always includes the last step") {
    ModelSpec spec = make_spec({make_def("K", num(1.0))});
    SUBCASE("saveper at twice dt") {
        SimControl c = control(0.0, 1.0, 0.25);
        c.saveper = 0.5;
        c.saveper_tracks_dt = false;
        RunResult run = simulate(compile(spec), RngPolicy{}, {}, c);
        REQUIRE(run.times.size() == 3);
        CHECK(run.times[1] == 0.5);
        CHECK(run.times[2] == 1.0);
    }
    SUBCASE("final step recorded even off stride") {
        SimControl c = control(0.0, 0.5, 0.25);
        c.saveper = 1.0;
        c.saveper_tracks_dt = false;
        RunResult run = simulate(compile(spec), RngPolicy{}, {}, c);
        REQUIRE(run.times.size() == 2);
        CHECK(run.times[0] == 0.0);
        CHECK(run.times[1] == 0.5);
    }
    SUBCASE("zero-length horizon still records the initial point") {
        RunResult run = simulate(compile(spec), RngPolicy{}, {}, control(5.0, 5.0, 0.25));
        REQUIRE(run.times.size() == 1);
        CHECK(run.times[0] == 5.0);
    }
}

TEST_CASE("control validation") {
    ModelSpec spec = make_spec({make_def("K", num(1.0))});
    CompiledModel m = compile(spec);
    CHECK_THROWS_AS(simulate(m, RngPolicy{}, {}, control(0.0, 1.0, 0.0)), InvalidParameter);
    CHECK_THROWS_AS(simulate(m, RngPolicy{}, {}, control(0.0, 1.0, -0.5)), InvalidParameter);
    CHECK_THROWS_AS(simulate(m, RngPolicy{}, {}, control(2.0, 1.0, 0.5)), InvalidParameter);
    SimControl c = control(0.0, 1.0, 0.5);
    c.saveper = 0.0;
    c.saveper_tracks_dt = false;
    CHECK_THROWS_AS(simulate(m, RngPolicy{}, {}, c), InvalidParameter);
}

TEST_CASE("overrides") {
    ModelSpec spec = make_spec(
        {
            make_def("Gain", num(2.0)),
            make_def("Level", integ(var("Gain"), num(1.0))),
            make_def("View", mul(var("Level"), num(1.0))),
        },
        control(0.0, 1.0, 1.0));
    CompiledModel m = compile(spec);
    SUBCASE("constants can be replaced") {
        RunResult run = simulate(m, RngPolicy{}, {{"Gain", 5.0}});
        CHECK(run.at("Gain")[0] == 5.0);
        CHECK(run.at("Level")[1] == 6.0);
    }
    SUBCASE("stock initial values can be pinned") {
        RunResult run = simulate(m, RngPolicy{}, {{"Level", 10.0}});
        CHECK(run.at("Level")[0] == 10.0);
        CHECK(run.at("Level")[1] == 12.0);
    }
    SUBCASE("last override of a name wins") {
        RunResult run = simulate(m, RngPolicy{}, {{"Gain", 3.0}, {"Gain", 4.0}});
        CHECK(run.at("Gain")[0] == 4.0);
    }
    SUBCASE("auxiliaries and unknown names are rejected") {
        CHECK_THROWS_AS(simulate(m, RngPolicy{}, {{"View", 1.0}}), UnknownOverride);
        CHECK_THROWS_AS(simulate(m, RngPolicy{}, {{"Nobody", 1.0}}), UnknownOverride);
    }
}

TEST_CASE("seed resolution precedence") {
    ModelSpec with_seed = make_spec({make_def("Seed", num(42.0))});
    CompiledModel m = compile(with_seed);
    CHECK(resolve_seed(m, {}, std::nullopt) == 42);
    CHECK(resolve_seed(m, {{"Seed", 7.0}}, std::nullopt) == 7);
    CHECK(resolve_seed(m, {{"Seed", 7.0}, {"Seed", 9.0}}, std::nullopt) == 9);
    CHECK(resolve_seed(m, {{"Seed", 7.0}}, 3) == 3);

    ModelSpec without = make_spec({make_def("K", num(1.0))});
    CHECK(resolve_seed(compile(without), {}, std::nullopt) == 1);
}

TEST_CASE("runtime faults name the variable and time") {
    SUBCASE("division by zero") {
        ModelSpec spec = make_spec(
            {make_def("Denom", num(0.0)), make_def("Ratio", divide(num(1.0), var("Denom")))},
            control(0.0, 1.0, 1.0));
        try {
            simulate(compile(spec), RngPolicy{});
            FAIL("expected DivisionByZero");
        } catch (const DivisionByZero& e) {
            CHECK(e.variable == "Ratio");
            CHECK(e.time == 0.0);
        }
    }
    SUBCASE("overflow to infinity") {
        ModelSpec spec = make_spec(
            {make_def("Big", num(1e200)), make_def("Huge", mul(var("Big"), var("Big")))},
            control(0.0, 1.0, 1.0));
        CHECK_THROWS_AS(simulate(compile(spec), RngPolicy{}), NonFiniteResult);
    }
}

TEST_CASE("noise draws are stream-keyed and reproducible") {
    ModelSpec spec = make_spec(
        {
            make_def("Shock A",
                     call(Func::RandomNormal,
                          {num(0.0), num(10.0), num(5.0), num(2.0), num(1.0)})),
            make_def("Shock B",
                     call(Func::RandomNormal,
                          {num(0.0), num(10.0), num(5.0), num(2.0), num(1.0)})),
        },
        control(0.0, 5.0, 1.0));
    CompiledModel m = compile(spec);
    RngPolicy p1;
    RunResult r1 = simulate(m, p1);
    RunResult r2 = simulate(m, p1);
    CHECK(r1.at("Shock A") == r2.at("Shock A"));

    // Identical call sites in different variables draw from different
    // streams, and a different seed moves every draw.
    CHECK(r1.at("Shock A") != r1.at("Shock B"));
    RngPolicy p2;
    p2.seed = 2;
    CHECK(r1.at("Shock A") != simulate(m, p2).at("Shock A"));

    for (double v : r1.at("Shock A")) {
        CHECK(v >= 0.0);
        CHECK(v <= 10.0);
    }

    RngPolicy off;
    off.mode = NoiseMode::NoiseOff;
    RunResult flat = simulate(m, off);
    for (double v : flat.at("Shock A")) CHECK(v == 5.0);
}

TEST_CASE("eval_expr") {
    auto lookup = [](const std::string& name) -> std::optional<double> {
        if (name == "X") return 4.0;
        return std::nullopt;
    };
    CHECK(eval_expr(*add(var("X"), num(1.0)), lookup) == 5.0);
    CHECK(eval_expr(*call(Func::Max, {num(1.0), num(3.0)}), lookup) == 3.0);
    CHECK(eval_expr(*call(Func::Min, {num(1.0), num(3.0)}), lookup) == 1.0);
    CHECK_THROWS_AS(eval_expr(*var("Y"), lookup), UnresolvedReference);
    CHECK_THROWS_AS(eval_expr(*integ(num(1.0), num(0.0)), lookup), MalformedIntegral);
}

TEST_CASE("run result lookup") {
    ModelSpec spec = make_spec({make_def("K", num(1.0))});
    RunResult run = simulate(compile(spec), RngPolicy{}, {}, control(0.0, 0.0, 1.0));
    CHECK(run.has("K"));
    CHECK_FALSE(run.has("Nope"));
    CHECK_THROWS_AS(run.at("Nope"), MissingVariable);
}

}  // TEST_SUITE
