#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xcore/constraint.hpp"

namespace xcore {

struct Variable {
    VarId id = -1;
    std::string name;
    Domain domain;

    bool operator==(const Variable&) const = default;
};

enum class InstanceKind { Csp, Cop };
enum class ObjectiveSense { Minimize, Maximize };

struct WeightedSum {
    std::vector<VarId> scope;
    std::vector<Val> coeffs;
    bool operator==(const WeightedSum&) const = default;
};

struct Objective {
    ObjectiveSense sense = ObjectiveSense::Minimize;
    std::variant<Expr, WeightedSum> body;
    bool operator==(const Objective&) const = default;
};

// Total map from variable id to value.
using Assignment = std::vector<Val>;

// Immutable after construction; safe to share across concurrent solve jobs.
struct Instance {
    InstanceKind kind = InstanceKind::Csp;
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::optional<Objective> objective;

    int num_vars() const { return static_cast<int>(variables.size()); }

    // -1 when absent.
    VarId var_by_name(const std::string& name) const;

    bool operator==(const Instance&) const = default;
};

struct ValidationError {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    int constraint_id = -1;  // -1 for instance-level problems
    std::string rule;        // e.g. "ArityMismatch", "TupleArity"
    std::string message;
};

// Structural validation. No Error entries iff every type invariant holds;
// Warning entries flag legal-but-suspect shapes (duplicate variables inside
// an allDifferent scope).
std::vector<ValidationError> validate_instance(const Instance& inst);

inline bool has_errors(const std::vector<ValidationError>& errors) {
    for (const auto& e : errors)
        if (e.severity == ValidationError::Severity::Error) return true;
    return false;
}

}  // namespace xcore
