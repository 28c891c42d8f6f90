#include "doctest.h"
#include "sdsim/errors.hpp"
#include "sdsim/parser.hpp"
#include "sdsim/units.hpp"

using namespace sdsim;

TEST_SUITE("units") {

TEST_CASE("construction and accessors") {
    UnitExpr day = UnitExpr::base("Day");
    CHECK(day.exponent("Day") == 1);
    CHECK(day.exponent("bias") == 0);
    CHECK_FALSE(day.is_dimensionless());
    CHECK(UnitExpr::dimensionless().is_dimensionless());
    CHECK(UnitExpr::base("Day", 0).is_dimensionless());
}

TEST_CASE("algebra") {
    UnitExpr day = UnitExpr::base("Day");
    UnitExpr bias = UnitExpr::base("bias");
    UnitExpr inter = UnitExpr::base("interactions");

    CHECK(day * bias == bias * day);
    CHECK((day * bias) * inter == day * (bias * inter));
    CHECK(day / day == UnitExpr::dimensionless());
    CHECK((day * bias) / bias == day);
    CHECK(day / bias != bias / day);
    CHECK((day / bias) * bias == day);

    UnitExpr sq = day * day;
    CHECK(sq.exponent("Day") == 2);
    CHECK((sq / day).exponent("Day") == 1);
}

TEST_CASE("canonical rendering") {
    CHECK(UnitExpr::dimensionless().str() == "Dmnl");
    CHECK(UnitExpr::base("Day").str() == "Day");
    CHECK((UnitExpr::base("quality") / UnitExpr::base("recommendations")).str() ==
          "quality/recommendations");
    UnitExpr per_inter_day =
        UnitExpr::base("bias") / (UnitExpr::base("interactions") * UnitExpr::base("Day"));
    CHECK(per_inter_day.str() == "bias/(Day*interactions)");
    CHECK((UnitExpr::base("Day", 2)).str() == "Day*Day");
    CHECK((UnitExpr::base("Day", -1)).str() == "1/Day");
    CHECK((UnitExpr::base("Day", -2)).str() == "1/(Day*Day)");
}

TEST_CASE("parse_units") {
    CHECK(parse_units("Dmnl") == UnitExpr::dimensionless());
    CHECK(parse_units("1") == UnitExpr::dimensionless());
    CHECK(parse_units("Day") == UnitExpr::base("Day"));
    CHECK(parse_units("bias/interactions") ==
          UnitExpr::base("bias") / UnitExpr::base("interactions"));
    CHECK(parse_units("bias/(interactions*Day)") ==
          UnitExpr::base("bias") / UnitExpr::base("interactions") / UnitExpr::base("Day"));
    CHECK(parse_units("1/(Day*interactions)") ==
          UnitExpr::dimensionless() / UnitExpr::base("Day") / UnitExpr::base("interactions"));
    CHECK(parse_units("quality / recommendations") ==
          UnitExpr::base("quality") / UnitExpr::base("recommendations"));

    SUBCASE("operand order does not matter") {
        CHECK(parse_units("Day*bias") == parse_units("bias*Day"));
        CHECK(parse_units("bias/(interactions*Day)") == parse_units("bias/(Day*interactions)"));
    }
    SUBCASE("round trip through rendering") {
        for (const char* text : {"Dmnl", "Day", "bias/interactions", "quality/recommendations",
                                 "bias/(Day*interactions)", "interactions/(Day*bias)"}) {
            UnitExpr u = parse_units(text);
            CHECK(parse_units(u.str()) == u);
        }
    }
    SUBCASE("rejects malformed input") {
        CHECK_THROWS_AS(parse_units(""), InvalidParameter);
        CHECK_THROWS_AS(parse_units("Day*"), InvalidParameter);
        CHECK_THROWS_AS(parse_units("Day//bias"), InvalidParameter);
        CHECK_THROWS_AS(parse_units("(Day"), InvalidParameter);
        CHECK_THROWS_AS(parse_units("Day+bias"), InvalidParameter);
    }
}

}  // TEST_SUITE
