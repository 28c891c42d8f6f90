#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdsim/units.hpp"

namespace sdsim {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp { Add, Sub, Mul, Div };
enum class Func { Integ, Max, Min, RandomNormal };

/// Name a variable may use to read the current simulation time (unit: Day).
inline const std::string kTimeName = "Time";

/// Expression tree of the model language. Nodes are immutable and shared, so
/// copying specs and compiled plans is cheap.
struct Expr {
    struct Number {
        double value;
    };
    struct Var {
        std::string name;
    };
    struct Binary {
        BinaryOp op;
        ExprPtr left;
        ExprPtr right;
    };
    struct Call {
        Func fn;
        std::vector<ExprPtr> args;
    };

    std::variant<Number, Var, Binary, Call> node;
};

ExprPtr num(double value);
ExprPtr var(std::string name);
ExprPtr binary(BinaryOp op, ExprPtr left, ExprPtr right);
ExprPtr add(ExprPtr l, ExprPtr r);
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr mul(ExprPtr l, ExprPtr r);
ExprPtr divide(ExprPtr l, ExprPtr r);
ExprPtr call(Func fn, std::vector<ExprPtr> args);
ExprPtr integ(ExprPtr net_flow, ExprPtr initial);

bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

/// Pre-order visit of every node.
void visit(const Expr& e, const std::function<void(const Expr&)>& fn);

/// Number of arguments each function requires.
int arity(Func fn);
const char* func_name(Func fn);

// ---------------------------------------------------------------------------

enum class VarKind { Stock, Auxiliary, Constant, Control };

const char* kind_name(VarKind k);

/// Reserved control-entry names.
bool is_control_name(const std::string& name);

/// Kind classification: control names win, then INTEG-at-root makes a stock,
/// a bare number literal makes a constant, anything else is an auxiliary.
VarKind classify(const std::string& name, const Expr& expr);

/// Half-open value range annotation, e.g. "[0,?]"; absent bound = unbounded.
struct ValueRange {
    std::optional<double> lo;
    std::optional<double> hi;
    bool operator==(const ValueRange&) const = default;
};

struct LineSpan {
    int first = 0;
    int last = 0;
    bool operator==(const LineSpan&) const = default;
};

struct VariableDef {
    std::string name;
    VarKind kind = VarKind::Auxiliary;
    ExprPtr expr;
    UnitExpr units;
    std::optional<ValueRange> range;
    std::optional<std::string> doc;
    std::optional<int> index;      // "(NN)" tag; parsed but not semantic
    std::optional<LineSpan> span;  // source location when parsed from text
};

/// Simulation control values, all in the model's time base (Day for the
/// built-in model).
struct SimControl {
    double initial_time = 0.0;
    double final_time = 100.0;
    double dt = 1.0;
    double saveper = 1.0;
    /// True when the model declared SAVEPER = TIME STEP, so saveper follows
    /// a dt override.
    bool saveper_tracks_dt = true;

    void set_dt(double new_dt) {
        dt = new_dt;
        if (saveper_tracks_dt) saveper = new_dt;
    }
};

struct ModelSpec {
    std::vector<VariableDef> variables;
    SimControl control;

    const VariableDef* find(const std::string& name) const;
};

/// Equality on the semantic content: variable names, kinds, expression trees,
/// units, ranges, docs and the digested control block. Entry numbering and
/// source spans are presentation and do not participate.
bool semantically_equal(const ModelSpec& a, const ModelSpec& b);

/// Collects names of variables whose declared or overridden value falls
/// outside the declared range annotation; rendered as warnings by callers.
std::vector<std::string> range_warnings(const ModelSpec& spec);

}  // namespace sdsim
