#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sdsim {

// Base class for everything the toolkit throws on purpose.
struct SdError : std::runtime_error {
    explicit SdError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- compile-time model errors -------------------------------------------

struct UnresolvedReference : SdError {
    std::string name;
    explicit UnresolvedReference(std::string n)
        : SdError("unresolved reference: " + n), name(std::move(n)) {}
};

struct CyclicDependency : SdError {
    std::vector<std::string> cycle;
    explicit CyclicDependency(std::vector<std::string> c)
        : SdError(describe(c)), cycle(std::move(c)) {}

  private:
    static std::string describe(const std::vector<std::string>& c) {
        std::string s = "cyclic dependency:";
        for (const auto& n : c) s += " -> " + n;
        return s;
    }
};

struct MalformedIntegral : SdError {
    std::string name;
    explicit MalformedIntegral(std::string n)
        : SdError("INTEG call below the root of non-stock variable: " + n), name(std::move(n)) {}
};

// ---- run-time simulation errors ------------------------------------------

struct SimulationError : SdError {
    std::string variable;
    double time;
    SimulationError(const std::string& what, std::string var, double t)
        : SdError(what + " in '" + var + "' at t=" + std::to_string(t)),
          variable(std::move(var)), time(t) {}
};

struct DivisionByZero : SimulationError {
    DivisionByZero(std::string var, double t)
        : SimulationError("division by zero", std::move(var), t) {}
};

struct NonFiniteResult : SimulationError {
    NonFiniteResult(std::string var, double t)
        : SimulationError("non-finite result", std::move(var), t) {}
};

struct UnknownOverride : SdError {
    std::string name;
    explicit UnknownOverride(std::string n)
        : SdError("unknown override target: " + n +
                  " (only constants and stock initial values can be overridden)"),
          name(std::move(n)) {}
};

struct InvalidBounds : SdError {
    explicit InvalidBounds(const std::string& msg) : SdError(msg) {}
};

// ---- presets / stats / reporting -----------------------------------------

struct UnknownPreset : SdError {
    std::string name;
    explicit UnknownPreset(std::string n)
        : SdError("unknown preset: " + n), name(std::move(n)) {}
};

struct InvalidParameter : SdError {
    explicit InvalidParameter(const std::string& msg) : SdError(msg) {}
};

struct InsufficientData : SdError {
    explicit InsufficientData(const std::string& msg) : SdError(msg) {}
};

struct ZeroVariance : SdError {
    ZeroVariance() : SdError("sample has zero variance") {}
};

struct MissingVariable : SdError {
    std::string name;
    explicit MissingVariable(std::string n)
        : SdError("variable not present in run results: " + n), name(std::move(n)) {}
};

struct EmptySeries : SdError {
    explicit EmptySeries(const std::string& msg) : SdError(msg) {}
};

struct IoError : SdError {
    explicit IoError(const std::string& msg) : SdError(msg) {}
};

}  // namespace sdsim
