#include "sdsim/expr.hpp"

#include <cmath>

namespace sdsim {

ExprPtr num(double value) { return std::make_shared<Expr>(Expr{Expr::Number{value}}); }

ExprPtr var(std::string name) { return std::make_shared<Expr>(Expr{Expr::Var{std::move(name)}}); }

ExprPtr binary(BinaryOp op, ExprPtr left, ExprPtr right) {
    return std::make_shared<Expr>(Expr{Expr::Binary{op, std::move(left), std::move(right)}});
}

ExprPtr add(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Add, std::move(l), std::move(r)); }
ExprPtr sub(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Sub, std::move(l), std::move(r)); }
ExprPtr mul(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Mul, std::move(l), std::move(r)); }
ExprPtr divide(ExprPtr l, ExprPtr r) { return binary(BinaryOp::Div, std::move(l), std::move(r)); }

ExprPtr call(Func fn, std::vector<ExprPtr> args) {
    return std::make_shared<Expr>(Expr{Expr::Call{fn, std::move(args)}});
}

ExprPtr integ(ExprPtr net_flow, ExprPtr initial) {
    return call(Func::Integ, {std::move(net_flow), std::move(initial)});
}

bool equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* an = std::get_if<Expr::Number>(&a.node)) {
        const auto& bn = std::get<Expr::Number>(b.node);
        // Bit-level equality; literals survive parse/serialize unchanged.
        return an->value == bn.value || (std::isnan(an->value) && std::isnan(bn.value));
    }
    if (const auto* av = std::get_if<Expr::Var>(&a.node)) {
        return av->name == std::get<Expr::Var>(b.node).name;
    }
    if (const auto* ab = std::get_if<Expr::Binary>(&a.node)) {
        const auto& bb = std::get<Expr::Binary>(b.node);
        return ab->op == bb.op && equal(ab->left, bb.left) && equal(ab->right, bb.right);
    }
    const auto& ac = std::get<Expr::Call>(a.node);
    const auto& bc = std::get<Expr::Call>(b.node);
    if (ac.fn != bc.fn || ac.args.size() != bc.args.size()) return false;
    for (std::size_t i = 0; i < ac.args.size(); ++i) {
        if (!equal(ac.args[i], bc.args[i])) return false;
    }
    return true;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    return equal(*a, *b);
}

void visit(const Expr& e, const std::function<void(const Expr&)>& fn) {
    fn(e);
    if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
        visit(*b->left, fn);
        visit(*b->right, fn);
    } else if (const auto* c = std::get_if<Expr::Call>(&e.node)) {
        for (const auto& a : c->args) visit(*a, fn);
    }
}

int arity(Func fn) {
    switch (fn) {
        case Func::Integ: return 2;
        case Func::Max: return 2;
        case Func::Min: return 2;
        case Func::RandomNormal: return 5;
    }
    return 0;
}

const char* func_name(Func fn) {
    switch (fn) {
        case Func::Integ: return "INTEG";
        case Func::Max: return "MAX";
        case Func::Min: return "MIN";
        case Func::RandomNormal: return "RANDOM NORMAL";
    }
    return "?";
}

const char* kind_name(VarKind k) {
    switch (k) {
        case VarKind::Stock: return "Stock";
        case VarKind::Auxiliary: return "Auxiliary";
        case VarKind::Constant: return "Constant";
        case VarKind::Control: return "Control";
    }
    return "?";
}

bool is_control_name(const std::string& name) {
    return name == "INITIAL TIME" || name == "FINAL TIME" || name == "TIME STEP" ||
           name == "SAVEPER";
}

VarKind classify(const std::string& name, const Expr& expr) {
    if (is_control_name(name)) return VarKind::Control;
    if (const auto* c = std::get_if<Expr::Call>(&expr.node); c && c->fn == Func::Integ) {
        return VarKind::Stock;
    }
    if (std::holds_alternative<Expr::Number>(expr.node)) return VarKind::Constant;
    return VarKind::Auxiliary;
}

const VariableDef* ModelSpec::find(const std::string& name) const {
    for (const auto& v : variables) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

bool semantically_equal(const ModelSpec& a, const ModelSpec& b) {
    if (a.variables.size() != b.variables.size()) return false;
    for (const auto& va : a.variables) {
        const VariableDef* vb = b.find(va.name);
        if (!vb) return false;
        if (va.kind != vb->kind) return false;
        if (!equal(va.expr, vb->expr)) return false;
        if (va.units != vb->units) return false;
        if (va.range != vb->range) return false;
        if (va.doc != vb->doc) return false;
    }
    return a.control.initial_time == b.control.initial_time &&
           a.control.final_time == b.control.final_time && a.control.dt == b.control.dt &&
           a.control.saveper == b.control.saveper &&
           a.control.saveper_tracks_dt == b.control.saveper_tracks_dt;
}

std::vector<std::string> range_warnings(const ModelSpec& spec) {
    std::vector<std::string> out;
    for (const auto& v : spec.variables) {
        if (!v.range) continue;
        const auto* n = std::get_if<Expr::Number>(&v.expr->node);
        if (!n) continue;
        if ((v.range->lo && n->value < *v.range->lo) || (v.range->hi && n->value > *v.range->hi)) {
            out.push_back(v.name);
        }
    }
    return out;
}

}  // namespace sdsim
