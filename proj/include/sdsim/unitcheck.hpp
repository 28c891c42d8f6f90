#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdsim/errors.hpp"
#include "sdsim/expr.hpp"
#include "sdsim/units.hpp"

namespace sdsim {

struct UnitMismatch {
    std::string variable;
    UnitExpr expected;
    UnitExpr inferred;
    LineSpan span;
};

// "VAR: expected <u1>, inferred <u2> at lines a-b"
std::string render(const UnitMismatch& m);

// Thrown by infer_units when operands disagree; check_model converts these
// into UnitMismatch records instead of propagating.
struct UnitError : SdError {
    UnitMismatch mismatch;
    explicit UnitError(UnitMismatch m) : SdError(render(m)), mismatch(std::move(m)) {}
};

using UnitEnv = std::map<std::string, UnitExpr>;

// Declared units of every variable, plus the time builtin in Day.
UnitEnv model_env(const ModelSpec& spec);

// Bottom-up dimensional inference. * and / combine exponents; + - MAX MIN
// need agreeing operands; INTEG(flow, init) yields units(flow)*Day with init
// required to match; RANDOM NORMAL unifies min/max/mean/sd and wants a
// dimensionless seed. Bare numeric literals are unit-polymorphic: they adopt
// the units of whatever they are combined with.
UnitExpr infer_units(const Expr& e, const UnitEnv& env);

// Checks every equation's inferred units against its declaration, using
// declared units for all references so one defect stays one finding. At most
// one mismatch is reported per equation; empty result means consistent.
std::vector<UnitMismatch> check_model(const ModelSpec& spec);

}  // namespace sdsim
