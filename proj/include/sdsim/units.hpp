#pragma once

#include <map>
#include <string>

namespace sdsim {

/// Product of named base units with signed integer exponents.
/// The dimensionless unit ("Dmnl") is the empty product. Zero exponents are
/// never stored, so equality of the exponent maps is unit equality.
class UnitExpr {
  public:
    UnitExpr() = default;

    static UnitExpr base(const std::string& name, int exponent = 1) {
        UnitExpr u;
        if (exponent != 0) u.exponents_[name] = exponent;
        return u;
    }

    static UnitExpr dimensionless() { return UnitExpr{}; }

    bool is_dimensionless() const { return exponents_.empty(); }

    int exponent(const std::string& name) const {
        auto it = exponents_.find(name);
        return it == exponents_.end() ? 0 : it->second;
    }

    UnitExpr operator*(const UnitExpr& rhs) const { return combined(rhs, +1); }
    UnitExpr operator/(const UnitExpr& rhs) const { return combined(rhs, -1); }

    bool operator==(const UnitExpr& rhs) const { return exponents_ == rhs.exponents_; }
    bool operator!=(const UnitExpr& rhs) const { return !(*this == rhs); }

    const std::map<std::string, int>& exponents() const { return exponents_; }

    /// Canonical rendering: positive factors joined by '*', negative factors
    /// behind a single '/', e.g. "bias/(interactions*Day)"; "Dmnl" when empty.
    std::string str() const;

  private:
    UnitExpr combined(const UnitExpr& rhs, int sign) const {
        UnitExpr out = *this;
        for (const auto& [name, exp] : rhs.exponents_) {
            int& e = out.exponents_[name];
            e += sign * exp;
            if (e == 0) out.exponents_.erase(name);
        }
        return out;
    }

    std::map<std::string, int> exponents_;
};

}  // namespace sdsim
