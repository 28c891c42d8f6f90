#include "sdsim/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "sdsim/errors.hpp"

namespace sdsim {

namespace {

struct EvalCtx {
    const CompiledModel& model;
    const std::vector<double>& state;
    double time;
    const RngPolicy& policy;
    std::uint64_t stream;
    std::uint64_t step;
    const std::string& owner;
};

double eval(const CExpr& e, const EvalCtx& ctx) {
    if (const auto* n = std::get_if<CExpr::Number>(&e.node)) return n->value;
    if (const auto* s = std::get_if<CExpr::Slot>(&e.node)) return ctx.state[s->slot];
    if (std::holds_alternative<CExpr::Time>(e.node)) return ctx.time;
    if (const auto* b = std::get_if<CExpr::Binary>(&e.node)) {
        double l = eval(*b->left, ctx);
        double r = eval(*b->right, ctx);
        switch (b->op) {
            case BinaryOp::Add: return l + r;
            case BinaryOp::Sub: return l - r;
            case BinaryOp::Mul: return l * r;
            case BinaryOp::Div:
                if (r == 0.0) throw DivisionByZero(ctx.owner, ctx.time);
                return l / r;
        }
    }
    const auto& c = std::get<CExpr::Call>(e.node);
    switch (c.fn) {
        case Func::Max: return std::max(eval(*c.args[0], ctx), eval(*c.args[1], ctx));
        case Func::Min: return std::min(eval(*c.args[0], ctx), eval(*c.args[1], ctx));
        case Func::RandomNormal: {
            double lo = eval(*c.args[0], ctx);
            double hi = eval(*c.args[1], ctx);
            double mean = eval(*c.args[2], ctx);
            double sd = eval(*c.args[3], ctx);
            eval(*c.args[4], ctx);  // stream seed comes from the policy instead
            return draw_normal(lo, hi, mean, sd, ctx.policy, ctx.stream,
                               static_cast<std::uint64_t>(c.site), ctx.step);
        }
        case Func::Integ: break;  // compile() rejects these
    }
    throw InvalidParameter(ctx.owner + ": unevaluable call");
}

void eval_auxes(const CompiledModel& m, std::vector<double>& state, double time,
                const RngPolicy& policy, std::uint64_t step_index) {
    for (const auto& a : m.aux_order) {
        EvalCtx ctx{m, state, time, policy, static_cast<std::uint64_t>(a.slot), step_index,
                    m.names[a.slot]};
        double v = eval(*a.expr, ctx);
        if (!std::isfinite(v)) throw NonFiniteResult(m.names[a.slot], time);
        state[a.slot] = v;
    }
}

void advance_stocks(const CompiledModel& m, std::vector<double>& state, double time, double dt,
                    const RngPolicy& policy, std::uint64_t step_index) {
    // All flows read the same pre-update state, then apply together.
    std::vector<double> flow(m.stocks.size());
    for (std::size_t i = 0; i < m.stocks.size(); ++i) {
        const auto& s = m.stocks[i];
        EvalCtx ctx{m, state, time, policy, static_cast<std::uint64_t>(s.slot), step_index,
                    m.names[s.slot]};
        flow[i] = eval(*s.net_flow, ctx);
    }
    for (std::size_t i = 0; i < m.stocks.size(); ++i) {
        const auto& s = m.stocks[i];
        state[s.slot] += dt * flow[i];
        if (!std::isfinite(state[s.slot])) throw NonFiniteResult(m.names[s.slot], time + dt);
    }
}

}  // namespace

const std::vector<double>& RunResult::at(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return values[i];
    }
    throw MissingVariable(name);
}

bool RunResult::has(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::uint64_t resolve_seed(const CompiledModel& m, const Overrides& overrides,
                           std::optional<std::uint64_t> explicit_seed) {
    if (explicit_seed) return *explicit_seed;
    for (auto it = overrides.rbegin(); it != overrides.rend(); ++it) {
        if (it->first == "Seed") return static_cast<std::uint64_t>(it->second);
    }
    auto slot = m.slot_of.find("Seed");
    if (slot != m.slot_of.end() && m.kinds[slot->second] == VarKind::Constant) {
        return static_cast<std::uint64_t>(m.const_values[slot->second]);
    }
    return 1;
}

void step(const CompiledModel& m, std::vector<double>& state, double time, double dt,
          const RngPolicy& policy, std::uint64_t step_index) {
    eval_auxes(m, state, time, policy, step_index);
    advance_stocks(m, state, time, dt, policy, step_index);
}

RunResult simulate(const CompiledModel& m, const RngPolicy& policy, const Overrides& overrides) {
    return simulate(m, policy, overrides, m.spec.control);
}

RunResult simulate(const CompiledModel& m, const RngPolicy& policy, const Overrides& overrides,
                   const SimControl& control) {
    if (!(control.dt > 0.0)) throw InvalidParameter("time step must be positive");
    if (!(control.final_time >= control.initial_time)) {
        throw InvalidParameter("final time must not precede initial time");
    }
    if (!(control.saveper > 0.0)) throw InvalidParameter("save interval must be positive");

    const int n = static_cast<int>(m.names.size());
    std::vector<double> state(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (m.kinds[i] == VarKind::Constant) state[i] = m.const_values[i];
    }

    std::vector<std::optional<double>> stock_init_override(n);
    for (const auto& [name, value] : overrides) {
        auto it = m.slot_of.find(name);
        if (it == m.slot_of.end()) throw UnknownOverride(name);
        switch (m.kinds[it->second]) {
            case VarKind::Constant: state[it->second] = value; break;
            case VarKind::Stock: stock_init_override[it->second] = value; break;
            default: throw UnknownOverride(name);
        }
    }

    for (int i = 0; i < n; ++i) {
        if (m.kinds[i] != VarKind::Control) continue;
        if (m.names[i] == "INITIAL TIME") state[i] = control.initial_time;
        else if (m.names[i] == "FINAL TIME") state[i] = control.final_time;
        else if (m.names[i] == "TIME STEP") state[i] = control.dt;
        else if (m.names[i] == "SAVEPER") state[i] = control.saveper;
    }

    // Seed the stocks: auxiliaries in their init cones first, then the init
    // expressions themselves, unless an override pins the starting value.
    double t0 = control.initial_time;
    for (int slot : m.init_aux_order) {
        for (const auto& a : m.aux_order) {
            if (a.slot != slot) continue;
            EvalCtx ctx{m, state, t0, policy, static_cast<std::uint64_t>(slot), 0,
                        m.names[slot]};
            state[slot] = eval(*a.expr, ctx);
            break;
        }
    }
    for (const auto& s : m.stocks) {
        if (stock_init_override[s.slot]) {
            state[s.slot] = *stock_init_override[s.slot];
            continue;
        }
        EvalCtx ctx{m, state, t0, policy, static_cast<std::uint64_t>(s.slot), 0,
                    m.names[s.slot]};
        state[s.slot] = eval(*s.init, ctx);
        if (!std::isfinite(state[s.slot])) throw NonFiniteResult(m.names[s.slot], t0);
    }

    auto n_steps = static_cast<std::int64_t>(
        std::llround((control.final_time - control.initial_time) / control.dt));
    auto stride =
        std::max<std::int64_t>(1, std::llround(control.saveper / control.dt));

    RunResult out;
    out.meta = {policy.seed, policy.mode,    control.initial_time, control.final_time,
                control.dt,  control.saveper, overrides};
    out.names.reserve(m.saved_slots.size());
    for (int s : m.saved_slots) out.names.push_back(m.names[s]);
    out.values.resize(m.saved_slots.size());
    auto rows = static_cast<std::size_t>(n_steps / stride + 2);
    out.times.reserve(rows);
    for (auto& v : out.values) v.reserve(rows);

    for (std::int64_t k = 0;; ++k) {
        double t = control.initial_time + static_cast<double>(k) * control.dt;
        eval_auxes(m, state, t, policy, static_cast<std::uint64_t>(k));
        if (k % stride == 0 || k == n_steps) {
            out.times.push_back(t);
            for (std::size_t i = 0; i < m.saved_slots.size(); ++i) {
                out.values[i].push_back(state[m.saved_slots[i]]);
            }
        }
        if (k == n_steps) break;
        advance_stocks(m, state, t, control.dt, policy, static_cast<std::uint64_t>(k));
    }
    return out;
}

double eval_expr(const Expr& e,
                 const std::function<std::optional<double>(const std::string&)>& lookup,
                 const RngPolicy& policy, std::uint64_t stream, std::uint64_t step) {
    struct Walker {
        const std::function<std::optional<double>(const std::string&)>& lookup;
        const RngPolicy& policy;
        std::uint64_t stream, step;
        int next_site = 0;

        double run(const Expr& e) {
            if (const auto* n = std::get_if<Expr::Number>(&e.node)) return n->value;
            if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
                auto got = lookup(v->name);
                if (!got) throw UnresolvedReference(v->name);
                return *got;
            }
            if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
                double l = run(*b->left);
                double r = run(*b->right);
                switch (b->op) {
                    case BinaryOp::Add: return l + r;
                    case BinaryOp::Sub: return l - r;
                    case BinaryOp::Mul: return l * r;
                    case BinaryOp::Div:
                        if (r == 0.0) throw DivisionByZero("<expression>", 0.0);
                        return l / r;
                }
            }
            const auto& c = std::get<Expr::Call>(e.node);
            if (c.fn == Func::Integ) throw MalformedIntegral("<expression>");
            if (static_cast<int>(c.args.size()) != arity(c.fn)) {
                throw InvalidParameter(std::string(func_name(c.fn)) + ": wrong arity");
            }
            if (c.fn == Func::Max) return std::max(run(*c.args[0]), run(*c.args[1]));
            if (c.fn == Func::Min) return std::min(run(*c.args[0]), run(*c.args[1]));
            double lo = run(*c.args[0]);
            double hi = run(*c.args[1]);
            double mean = run(*c.args[2]);
            double sd = run(*c.args[3]);
            run(*c.args[4]);
            int site = next_site++;
            return draw_normal(lo, hi, mean, sd, policy, stream,
                               static_cast<std::uint64_t>(site), step);
        }
    };
    Walker w{lookup, policy, stream, step};
    return w.run(e);
}

}  // namespace sdsim
