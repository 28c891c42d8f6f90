#include "sdsim/units.hpp"

#include <vector>

namespace sdsim {

std::string UnitExpr::str() const {
    if (exponents_.empty()) return "Dmnl";

    std::vector<std::string> pos;
    std::vector<std::string> neg;
    for (const auto& [name, exp] : exponents_) {
        // No '^' in the unit grammar; integer powers render as repetition.
        for (int i = 0; i < (exp > 0 ? exp : -exp); ++i) {
            (exp > 0 ? pos : neg).push_back(name);
        }
    }

    std::string out;
    if (pos.empty()) {
        out = "1";
    } else {
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (i > 0) out += '*';
            out += pos[i];
        }
    }
    if (!neg.empty()) {
        out += '/';
        if (neg.size() > 1) out += '(';
        for (std::size_t i = 0; i < neg.size(); ++i) {
            if (i > 0) out += '*';
            out += neg[i];
        }
        if (neg.size() > 1) out += ')';
    }
    return out;
}

}  // namespace sdsim
