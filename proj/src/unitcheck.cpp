#include "sdsim/unitcheck.hpp"

namespace sdsim {

std::string render(const UnitMismatch& m) {
    std::string s = m.variable + ": expected " + m.expected.str() + ", inferred " +
                    m.inferred.str();
    if (m.span.first > 0) {
        s += " at lines " + std::to_string(m.span.first) + "-" + std::to_string(m.span.last);
    }
    return s;
}

namespace {

struct UVal {
    UnitExpr u;
    bool lit;  // subtree is built purely from numeric literals
};

struct Inferrer {
    const UnitEnv& env;

    [[noreturn]] static void clash(UnitExpr expected, UnitExpr inferred) {
        throw UnitError({std::string{}, std::move(expected), std::move(inferred), LineSpan{}});
    }

    // Shared rule for + - MAX MIN and the RANDOM NORMAL parameter group:
    // literals adopt the sibling's units, everything else must agree.
    static UVal unify(const UVal& l, const UVal& r) {
        if (l.lit && r.lit) return {UnitExpr::dimensionless(), true};
        if (l.lit) return {r.u, false};
        if (r.lit) return {l.u, false};
        if (l.u != r.u) clash(l.u, r.u);
        return {l.u, false};
    }

    UVal infer(const Expr& e) const {
        if (std::holds_alternative<Expr::Number>(e.node)) {
            return {UnitExpr::dimensionless(), true};
        }
        if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
            if (v->name == kTimeName) return {UnitExpr::base("Day"), false};
            auto it = env.find(v->name);
            if (it == env.end()) throw UnresolvedReference(v->name);
            return {it->second, false};
        }
        if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
            UVal l = infer(*b->left);
            UVal r = infer(*b->right);
            switch (b->op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return unify(l, r);
                case BinaryOp::Mul: return {l.u * r.u, l.lit && r.lit};
                case BinaryOp::Div: return {l.u / r.u, l.lit && r.lit};
            }
        }
        const auto& c = std::get<Expr::Call>(e.node);
        switch (c.fn) {
            case Func::Max:
            case Func::Min: return unify(infer(*c.args[0]), infer(*c.args[1]));
            case Func::Integ: {
                UVal flow = infer(*c.args[0]);
                UVal init = infer(*c.args[1]);
                if (flow.lit && init.lit) return {UnitExpr::dimensionless(), true};
                if (flow.lit) return {init.u, false};
                UnitExpr stock_u = flow.u * UnitExpr::base("Day");
                if (!init.lit && init.u != stock_u) clash(stock_u, init.u);
                return {stock_u, false};
            }
            case Func::RandomNormal: {
                UVal g = infer(*c.args[0]);
                for (int i = 1; i <= 3; ++i) g = unify(g, infer(*c.args[i]));
                UVal seed = infer(*c.args[4]);
                if (!seed.lit && !seed.u.is_dimensionless()) {
                    clash(UnitExpr::dimensionless(), seed.u);
                }
                return g;
            }
        }
        throw InvalidParameter("uninferable expression");
    }
};

}  // namespace

UnitEnv model_env(const ModelSpec& spec) {
    UnitEnv env;
    for (const auto& v : spec.variables) env[v.name] = v.units;
    env[kTimeName] = UnitExpr::base("Day");
    return env;
}

UnitExpr infer_units(const Expr& e, const UnitEnv& env) { return Inferrer{env}.infer(e).u; }

std::vector<UnitMismatch> check_model(const ModelSpec& spec) {
    std::vector<UnitMismatch> out;
    UnitEnv env = model_env(spec);
    Inferrer inf{env};
    for (const auto& v : spec.variables) {
        LineSpan span = v.span.value_or(LineSpan{});
        try {
            UVal got = inf.infer(*v.expr);
            if (!got.lit && got.u != v.units) out.push_back({v.name, v.units, got.u, span});
        } catch (UnitError& ue) {
            ue.mismatch.variable = v.name;
            if (ue.mismatch.span.first == 0) ue.mismatch.span = span;
            out.push_back(ue.mismatch);
        } catch (const UnresolvedReference&) {
            // dangling references are compile()'s finding, not a unit fault
        }
    }
    return out;
}

}  // namespace sdsim
