#pragma once

#include "json.hpp"
#include "sdsim/expr.hpp"
#include "sdsim/parser.hpp"
#include "sdsim/unitcheck.hpp"

namespace sdsim {

nlohmann::ordered_json expr_json(const Expr& e);

// Full model dump: variables in definition order plus the control block.
nlohmann::ordered_json model_json(const ModelSpec& spec);

nlohmann::ordered_json diagnostics_json(const std::vector<Diagnostic>& diags);

nlohmann::ordered_json mismatches_json(const std::vector<UnitMismatch>& mismatches);

}  // namespace sdsim
