#include "sdsim/jsonio.hpp"

namespace sdsim {
namespace {

using nlohmann::ordered_json;

const char* op_token(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
    }
    return "?";
}

}  // namespace

ordered_json expr_json(const Expr& e) {
    ordered_json out;
    if (const auto* n = std::get_if<Expr::Number>(&e.node)) {
        out["num"] = n->value;
    } else if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
        out["var"] = v->name;
    } else if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
        out["op"] = op_token(b->op);
        out["lhs"] = expr_json(*b->left);
        out["rhs"] = expr_json(*b->right);
    } else {
        const auto& c = std::get<Expr::Call>(e.node);
        out["fn"] = func_name(c.fn);
        ordered_json args = ordered_json::array();
        for (const auto& a : c.args) args.push_back(expr_json(*a));
        out["args"] = std::move(args);
    }
    return out;
}

ordered_json model_json(const ModelSpec& spec) {
    ordered_json out;
    ordered_json vars = ordered_json::array();
    for (const VariableDef& def : spec.variables) {
        ordered_json v;
        v["name"] = def.name;
        v["kind"] = kind_name(def.kind);
        v["units"] = def.units.str();
        v["expr"] = expr_text(*def.expr);
        v["ast"] = expr_json(*def.expr);
        if (def.range) {
            ordered_json r;
            r["lo"] = def.range->lo ? ordered_json(*def.range->lo) : ordered_json(nullptr);
            r["hi"] = def.range->hi ? ordered_json(*def.range->hi) : ordered_json(nullptr);
            v["range"] = std::move(r);
        }
        if (def.doc) v["doc"] = *def.doc;
        vars.push_back(std::move(v));
    }
    out["variables"] = std::move(vars);
    ordered_json ctl;
    ctl["initial_time"] = spec.control.initial_time;
    ctl["final_time"] = spec.control.final_time;
    ctl["dt"] = spec.control.dt;
    ctl["saveper"] = spec.control.saveper;
    ctl["saveper_tracks_dt"] = spec.control.saveper_tracks_dt;
    out["control"] = std::move(ctl);
    return out;
}

ordered_json diagnostics_json(const std::vector<Diagnostic>& diags) {
    ordered_json out = ordered_json::array();
    for (const Diagnostic& d : diags) {
        ordered_json row;
        row["severity"] = d.severity == Severity::Error ? "error" : "warning";
        row["message"] = d.message;
        row["lines"] = {d.span.first, d.span.last};
        out.push_back(std::move(row));
    }
    return out;
}

ordered_json mismatches_json(const std::vector<UnitMismatch>& mismatches) {
    ordered_json out = ordered_json::array();
    for (const UnitMismatch& m : mismatches) {
        ordered_json row;
        row["variable"] = m.variable;
        row["expected"] = m.expected.str();
        row["inferred"] = m.inferred.str();
        row["lines"] = {m.span.first, m.span.last};
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace sdsim
