#include "sdsim/compile.hpp"

#include <algorithm>

#include "sdsim/errors.hpp"

namespace sdsim {

namespace {

// Lowers one equation body. INTEG is illegal anywhere a Lowerer runs; stock
// roots are peeled off before lowering their flow and init arguments.
struct Lowerer {
    const std::unordered_map<std::string, int>& slot_of;
    const std::string& owner;
    int owner_slot;
    int next_site = 0;
    std::vector<int>& refs;
    std::vector<std::pair<int, int>>& noise_sites;

    CExprPtr lower(const Expr& e) {
        if (const auto* n = std::get_if<Expr::Number>(&e.node)) {
            return std::make_shared<CExpr>(CExpr{CExpr::Number{n->value}});
        }
        if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
            if (v->name == kTimeName) {
                return std::make_shared<CExpr>(CExpr{CExpr::Time{}});
            }
            auto it = slot_of.find(v->name);
            if (it == slot_of.end()) throw UnresolvedReference(v->name);
            refs.push_back(it->second);
            return std::make_shared<CExpr>(CExpr{CExpr::Slot{it->second}});
        }
        if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
            auto l = lower(*b->left);
            auto r = lower(*b->right);
            return std::make_shared<CExpr>(CExpr{CExpr::Binary{b->op, std::move(l), std::move(r)}});
        }
        const auto& c = std::get<Expr::Call>(e.node);
        if (c.fn == Func::Integ) throw MalformedIntegral(owner);
        if (static_cast<int>(c.args.size()) != arity(c.fn)) {
            throw InvalidParameter(owner + ": " + func_name(c.fn) + " expects " +
                                   std::to_string(arity(c.fn)) + " arguments");
        }
        CExpr::Call out{c.fn, {}, -1};
        out.args.reserve(c.args.size());
        for (const auto& a : c.args) out.args.push_back(lower(*a));
        if (c.fn == Func::RandomNormal) {
            out.site = next_site++;
            noise_sites.emplace_back(owner_slot, out.site);
        }
        return std::make_shared<CExpr>(CExpr{std::move(out)});
    }
};

}  // namespace

int CompiledModel::slot(const std::string& name) const {
    auto it = slot_of.find(name);
    if (it == slot_of.end()) throw MissingVariable(name);
    return it->second;
}

int CompiledModel::count(VarKind k) const {
    return static_cast<int>(std::count(kinds.begin(), kinds.end(), k));
}

CompiledModel compile(const ModelSpec& spec) {
    CompiledModel m;
    m.spec = spec;

    const int n = static_cast<int>(spec.variables.size());
    m.names.reserve(n);
    m.kinds.reserve(n);
    for (int i = 0; i < n; ++i) {
        const auto& v = spec.variables[i];
        if (!m.slot_of.emplace(v.name, i).second) {
            throw InvalidParameter("duplicate definition of " + v.name);
        }
        m.names.push_back(v.name);
        m.kinds.push_back(v.kind);
    }
    m.const_values.assign(n, 0.0);

    // refs[i] lists every slot equation i mentions, flow and init included.
    std::vector<std::vector<int>> refs(n);
    std::vector<std::vector<int>> init_refs(n);

    for (int i = 0; i < n; ++i) {
        const auto& v = spec.variables[i];
        const auto* root_call = std::get_if<Expr::Call>(&v.expr->node);
        bool root_is_integ = root_call && root_call->fn == Func::Integ;

        if (v.kind == VarKind::Stock) {
            if (!root_is_integ) throw MalformedIntegral(v.name);
            if (root_call->args.size() != 2) {
                throw InvalidParameter(v.name + ": INTEG expects 2 arguments");
            }
            Lowerer flow{m.slot_of, v.name, i, 0, refs[i], m.noise_sites};
            auto net = flow.lower(*root_call->args[0]);
            Lowerer init{m.slot_of, v.name, i, flow.next_site, init_refs[i], m.noise_sites};
            auto iv = init.lower(*root_call->args[1]);
            m.stocks.push_back({i, std::move(net), std::move(iv)});
            continue;
        }
        if (root_is_integ) throw MalformedIntegral(v.name);

        Lowerer body{m.slot_of, v.name, i, 0, refs[i], m.noise_sites};
        auto lowered = body.lower(*v.expr);
        switch (v.kind) {
            case VarKind::Constant: {
                const auto* num = std::get_if<Expr::Number>(&v.expr->node);
                if (!num) throw InvalidParameter(v.name + ": constant needs a literal value");
                m.const_values[i] = num->value;
                break;
            }
            case VarKind::Auxiliary:
                m.aux_order.push_back({i, std::move(lowered)});
                break;
            case VarKind::Control:
            case VarKind::Stock:
                break;
        }
    }

    // Order auxiliaries so dependencies come first. Edges through stocks and
    // constants impose no ordering; only aux-to-aux references count.
    {
        std::vector<CompiledAux> by_slot(n);
        std::vector<bool> is_aux(n, false);
        for (auto& a : m.aux_order) {
            is_aux[a.slot] = true;
            by_slot[a.slot] = a;
        }
        std::vector<int> color(n, 0);  // 0 untouched, 1 on path, 2 done
        std::vector<int> path;
        std::vector<CompiledAux> ordered;
        ordered.reserve(m.aux_order.size());

        auto dfs = [&](auto&& self, int slot) -> void {
            color[slot] = 1;
            path.push_back(slot);
            for (int r : refs[slot]) {
                if (!is_aux[r]) continue;
                if (color[r] == 1) {
                    std::vector<std::string> cycle;
                    auto at = std::find(path.begin(), path.end(), r);
                    for (auto it = at; it != path.end(); ++it) cycle.push_back(m.names[*it]);
                    cycle.push_back(m.names[r]);
                    throw CyclicDependency(cycle);
                }
                if (color[r] == 0) self(self, r);
            }
            path.pop_back();
            color[slot] = 2;
            ordered.push_back(by_slot[slot]);
        };
        for (const auto& a : m.aux_order) {
            if (color[a.slot] == 0) dfs(dfs, a.slot);
        }
        m.aux_order = std::move(ordered);
    }

    // Initial values must be computable before any stock has a value, so the
    // cone of every init expression has to be free of stock references.
    {
        std::vector<bool> needed(n, false);
        std::vector<int> path;
        std::vector<int> state(n, 0);

        auto walk = [&](auto&& self, int slot) -> void {
            if (m.kinds[slot] == VarKind::Stock) {
                std::vector<std::string> cycle;
                for (int p : path) cycle.push_back(m.names[p]);
                cycle.push_back(m.names[slot]);
                throw CyclicDependency(cycle);
            }
            if (m.kinds[slot] != VarKind::Auxiliary || state[slot] == 2) return;
            state[slot] = 2;
            needed[slot] = true;
            path.push_back(slot);
            for (int r : refs[slot]) self(self, r);
            path.pop_back();
        };
        for (const auto& s : m.stocks) {
            path.assign(1, s.slot);
            for (int r : init_refs[s.slot]) walk(walk, r);
        }
        for (const auto& a : m.aux_order) {
            if (needed[a.slot]) m.init_aux_order.push_back(a.slot);
        }
    }

    for (int i = 0; i < n; ++i) {
        if (m.kinds[i] != VarKind::Control) m.saved_slots.push_back(i);
    }
    return m;
}

}  // namespace sdsim
