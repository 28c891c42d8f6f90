#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdsim/expr.hpp"
#include "sdsim/parser.hpp"
#include "sdsim/rng.hpp"

using namespace sdsim;

namespace {

// Hand-rolled spec generator for the serialize/parse round-trip property.
// Names arrive pre-normalized (single spaces, no edge whitespace) because
// that is the parser's canonical form.
struct SpecGen {
    CounterRng rng;
    std::vector<std::string> names;

    explicit SpecGen(std::uint64_t seed) : rng(seed) {}

    int pick(int n) { return static_cast<int>(rng.uniform() * n) % n; }

    std::string fresh_name(int serial) {
        static const char* plain[] = {"Alpha Rate", "Beta Load", "Stock Level", "Flow Gain",
                                      "Avg. Output", "Decay"};
        static const char* quoted[] = {"R&D Share", "Load, Peak", "2nd Stage", "A/B Split",
                                       "Gain (raw)"};
        std::string base = pick(4) == 0 ? quoted[pick(5)] : plain[pick(6)];
        return base + " " + std::to_string(serial);
    }

    double literal() {
        static const double pool[] = {0.0, 1.0, 2.5, 0.125, 26000.0, 0.1, 6760.0};
        return pool[pick(7)];
    }

    UnitExpr units() {
        static const char* pool[] = {"Dmnl", "Day", "widgets", "widgets/Day",
                                     "bias/(Day*interactions)"};
        return parse_units(pool[pick(5)]);
    }

    ExprPtr expr(int depth) {
        if (depth <= 0 || pick(3) == 0) {
            if (!names.empty() && pick(2) == 0) return var(names[pick((int)names.size())]);
            return num(literal());
        }
        switch (pick(6)) {
            case 0: return add(expr(depth - 1), expr(depth - 1));
            case 1: return sub(expr(depth - 1), expr(depth - 1));
            case 2: return mul(expr(depth - 1), expr(depth - 1));
            case 3: return divide(expr(depth - 1), expr(depth - 1));
            case 4:
                return call(pick(2) ? Func::Max : Func::Min, {expr(depth - 1), expr(depth - 1)});
            default:
                return call(Func::RandomNormal, {num(literal()), num(literal()), expr(depth - 1),
                                                 expr(depth - 1), num(1.0)});
        }
    }

    ModelSpec model(int n_vars) {
        ModelSpec spec;
        for (int i = 0; i < n_vars; ++i) {
            VariableDef def;
            def.name = fresh_name(i);
            ExprPtr e = pick(4) == 0 ? integ(expr(2), expr(1)) : expr(2);
            def.kind = classify(def.name, *e);
            def.expr = e;
            def.units = units();
            if (pick(3) == 0) def.range = ValueRange{0.0, std::nullopt};
            if (pick(3) == 0) def.doc = "plain descriptive text without special markers";
            spec.variables.push_back(def);
            names.push_back(def.name);
        }
        if (pick(2) == 0) {
            auto control = [&](const char* name, ExprPtr e) {
                VariableDef def;
                def.name = name;
                def.kind = VarKind::Control;
                def.expr = std::move(e);
                def.units = UnitExpr::base("Day");
                spec.variables.push_back(def);
            };
            control("INITIAL TIME", num(0));
            control("FINAL TIME", num(10));
            control("TIME STEP", num(0.25));
            control("SAVEPER", var("TIME STEP"));
            spec.control.initial_time = 0;
            spec.control.final_time = 10;
            spec.control.set_dt(0.25);
        }
        return spec;
    }
};

ParseResult parse_ok(const std::string& text) {
    ParseResult res = parse_model(text);
    CHECK(res.ok());
    for (const Diagnostic& d : res.diagnostics) {
        CAPTURE(d.message);
        CHECK(d.severity != Severity::Error);
    }
    return res;
}

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("single entry with all clauses") {
    ParseResult res = parse_ok(
        "(01) Water Level= INTEG (Inflow-Outflow, 50)\n"
        "Units: liters [0,?]\n"
        "How much is in the tank.\n"
        "Second doc line.\n"
        "\n"
        "(02) Inflow= 3\n"
        "Units: liters/Day\n"
        "\n"
        "(03) Outflow= Water Level/12\n"
        "Units: liters/Day\n");
    REQUIRE(res.spec->variables.size() == 3);
    const VariableDef& lvl = res.spec->variables[0];
    CHECK(lvl.name == "Water Level");
    CHECK(lvl.kind == VarKind::Stock);
    CHECK(lvl.index == 1);
    CHECK(lvl.units == parse_units("liters"));
    REQUIRE(lvl.range.has_value());
    CHECK(lvl.range->lo == 0.0);
    CHECK_FALSE(lvl.range->hi.has_value());
    REQUIRE(lvl.doc.has_value());
    CHECK(*lvl.doc == "How much is in the tank.\nSecond doc line.");
    REQUIRE(lvl.span.has_value());
    CHECK(lvl.span->first == 1);

    CHECK(res.spec->variables[1].kind == VarKind::Constant);
    CHECK(res.spec->variables[2].kind == VarKind::Auxiliary);
    CHECK(expr_text(*res.spec->variables[2].expr) == "Water Level/12");
}

TEST_CASE("expression continues across lines until Units") {
    ParseResult res = parse_ok(
        "Total= Part A+\n"
        "    Part B\n"
        "Units: Dmnl\n"
        "\n"
        "Part A= 1\n"
        "Units: Dmnl\n"
        "\n"
        "Part B= 2\n"
        "Units: Dmnl\n");
    CHECK(expr_text(*res.spec->variables[0].expr) == "Part A+Part B");
}

TEST_CASE("quoted names admit punctuation") {
    ParseResult res = parse_ok(
        "\"Rebalancing & Regularization\"= 0\n"
        "Units: bias\n"
        "\n"
        "\"2nd Wave\"= \"Rebalancing & Regularization\"+1\n"
        "Units: bias\n");
    CHECK(res.spec->variables[0].name == "Rebalancing & Regularization");
    CHECK(res.spec->variables[1].name == "2nd Wave");
}

TEST_CASE("interior whitespace collapses in names") {
    ParseResult res = parse_ok(
        "Big   Gap= 4\n"
        "Units: Dmnl\n"
        "\n"
        "Echo= Big  Gap\n"
        "Units: Dmnl\n");
    CHECK(res.spec->variables[0].name == "Big Gap");
    CHECK(expr_text(*res.spec->variables[1].expr) == "Big Gap");
}

TEST_CASE("control entries populate the control block") {
    ParseResult res = parse_ok(
        "X= 1\n"
        "Units: Dmnl\n"
        "\n"
        "INITIAL TIME= 2\n"
        "Units: Day\n"
        "\n"
        "FINAL TIME= 50\n"
        "Units: Day\n"
        "\n"
        "TIME STEP= 0.5\n"
        "Units: Day [0,?]\n"
        "\n"
        "SAVEPER= TIME STEP\n"
        "Units: Day [0,?]\n");
    CHECK(res.spec->control.initial_time == 2.0);
    CHECK(res.spec->control.final_time == 50.0);
    CHECK(res.spec->control.dt == 0.5);
    CHECK(res.spec->control.saveper == 0.5);
    CHECK(res.spec->control.saveper_tracks_dt);

    ParseResult fixed = parse_ok(
        "TIME STEP= 0.5\n"
        "Units: Day\n"
        "\n"
        "SAVEPER= 2\n"
        "Units: Day\n");
    CHECK(fixed.spec->control.saveper == 2.0);
    CHECK_FALSE(fixed.spec->control.saveper_tracks_dt);
}

TEST_CASE("diagnostics carry spans and leave no spec on errors") {
    SUBCASE("missing units") {
        ParseResult res = parse_model("Lonely= 1\n\nNext= 2\nUnits: Dmnl\n");
        CHECK(res.has_errors());
        CHECK_FALSE(res.ok());
        REQUIRE_FALSE(res.diagnostics.empty());
        CHECK(res.diagnostics[0].message.find("Lonely") != std::string::npos);
        CHECK(res.diagnostics[0].span.first == 1);
    }
    SUBCASE("duplicate name") {
        ParseResult res = parse_model(
            "Twin= 1\nUnits: Dmnl\n\nTwin= 2\nUnits: Dmnl\n");
        CHECK(res.has_errors());
        REQUIRE_FALSE(res.diagnostics.empty());
        CHECK(res.diagnostics[0].message.find("Twin") != std::string::npos);
        CHECK(res.diagnostics[0].span.first == 4);
    }
    SUBCASE("unknown function") {
        ParseResult res = parse_model("Z= SMOOTH(1,2)\nUnits: Dmnl\n");
        CHECK(res.has_errors());
    }
    SUBCASE("unterminated quote") {
        ParseResult res = parse_model("Q= \"half open\nUnits: Dmnl\n");
        CHECK(res.has_errors());
    }
    SUBCASE("bad units") {
        ParseResult res = parse_model("U= 1\nUnits: Day+*\n");
        CHECK(res.has_errors());
        CHECK(res.diagnostics[0].message.find("U") != std::string::npos);
    }
    SUBCASE("malformed range") {
        ParseResult res = parse_model("R= 1\nUnits: Dmnl [zero,ten]\n");
        CHECK(res.has_errors());
    }
    SUBCASE("empty source warns") {
        ParseResult res = parse_model("\n\n");
        CHECK(res.ok());
        CHECK_FALSE(res.has_errors());
        REQUIRE_FALSE(res.diagnostics.empty());
        CHECK(res.diagnostics[0].severity == Severity::Warning);
    }
}

TEST_CASE("expression grammar") {
    auto text_of = [](const std::string& src) {
        ParseResult res = parse_model("E= " + src + "\nUnits: Dmnl\n");
        REQUIRE(res.ok());
        return expr_text(*res.spec->variables[0].expr);
    };
    SUBCASE("left association") {
        CHECK(text_of("1-2-3") == "1-2-3");
        CHECK(text_of("1-(2-3)") == "1-(2-3)");
        CHECK(text_of("8/4/2") == "8/4/2");
        CHECK(text_of("8/(4/2)") == "8/(4/2)");
    }
    SUBCASE("precedence") {
        CHECK(text_of("1+2*3") == "1+2*3");
        CHECK(text_of("(1+2)*3") == "(1+2)*3");
    }
    SUBCASE("unary minus lowers to subtraction from zero") {
        ParseResult res = parse_model("N= -5\nUnits: Dmnl\n");
        REQUIRE(res.ok());
        CHECK(equal(res.spec->variables[0].expr, sub(num(0), num(5))));
        CHECK(text_of("-5*2") == "(0-5)*2");
    }
    SUBCASE("functions") {
        CHECK(text_of("MAX(1,2)") == "MAX(1,2)");
        CHECK(text_of("MIN(1,MAX(2,3))") == "MIN(1,MAX(2,3))");
        CHECK(text_of("RANDOM NORMAL(1,5,3,0.5,7)") == "RANDOM NORMAL(1,5,3,0.5,7)");
    }
    SUBCASE("wrong arity is an error") {
        CHECK(parse_model("E= MAX(1)\nUnits: Dmnl\n").has_errors());
        CHECK(parse_model("E= RANDOM NORMAL(1,2,3)\nUnits: Dmnl\n").has_errors());
    }
}

TEST_CASE("source entries capture the raw clauses") {
    ParseResult res = parse_ok(
        "(07) Thing= 1+\n"
        "    2\n"
        "Units: Dmnl\n"
        "doc here\n");
    REQUIRE(res.entries.size() == 1);
    CHECK(res.entries[0].index == 7);
    CHECK(res.entries[0].name == "Thing");
    CHECK(res.entries[0].raw_units == "Dmnl");
    REQUIRE(res.entries[0].comment.has_value());
    CHECK(*res.entries[0].comment == "doc here");
}

TEST_CASE("serialize then parse is the identity on semantics") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        SpecGen gen(seed);
        ModelSpec spec = gen.model(3 + gen.pick(7));
        std::string text = serialize(spec);
        CAPTURE(seed);
        CAPTURE(text);
        ParseResult res = parse_model(text);
        REQUIRE(res.ok());
        CHECK(semantically_equal(spec, *res.spec));

        // Serialization is canonical: a second round trip gives identical text.
        CHECK(serialize(*res.spec) == text);
    }
}

TEST_CASE("name_token quotes only when needed") {
    CHECK(name_token("Plain Name") == "Plain Name");
    CHECK(name_token("R&D") == "\"R&D\"");
    CHECK(name_token("2nd") == "\"2nd\"");
    CHECK(name_token("a,b") == "\"a,b\"");
}

}  // TEST_SUITE
