#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "sdsim/expr.hpp"

namespace sdsim {

// Expression with every name resolved to a state-vector slot. RANDOM NORMAL
// calls carry their per-variable site ordinal so draws are addressable.
struct CExpr;
using CExprPtr = std::shared_ptr<const CExpr>;

struct CExpr {
    struct Number { double value; };
    struct Slot { int slot; };
    struct Time {};
    struct Binary { BinaryOp op; CExprPtr left; CExprPtr right; };
    struct Call { Func fn; std::vector<CExprPtr> args; int site = -1; };
    std::variant<Number, Slot, Time, Binary, Call> node;
};

struct CompiledStock {
    int slot;
    CExprPtr net_flow;
    CExprPtr init;
};

struct CompiledAux {
    int slot;
    CExprPtr expr;
};

// Executable form of a model. Slots follow definition order, so slot indices
// double as stable stream ids for the noise generator.
struct CompiledModel {
    ModelSpec spec;

    std::vector<std::string> names;            // slot -> name
    std::unordered_map<std::string, int> slot_of;
    std::vector<VarKind> kinds;                // slot -> kind
    std::vector<double> const_values;          // slot -> literal, 0 elsewhere

    std::vector<CompiledStock> stocks;         // definition order
    std::vector<CompiledAux> aux_order;        // dependency order for stepping
    std::vector<int> init_aux_order;           // stock-free prefix needed by stock inits

    std::vector<int> saved_slots;              // everything but controls, definition order
    std::vector<std::pair<int, int>> noise_sites;  // (slot, site ordinal)

    int slot(const std::string& name) const;   // throws MissingVariable
    int count(VarKind k) const;
};

// Validates references, aux-to-aux cycles, and INTEG placement, then lowers
// every equation. Throws UnresolvedReference, CyclicDependency, or
// MalformedIntegral on the first defect found.
CompiledModel compile(const ModelSpec& spec);

}  // namespace sdsim
