#pragma once

#include <optional>

#include "xcore/engine.hpp"

namespace xcore::detail {

struct LinTerm {
    Val coeff;
    VarId var;
};

// Bounds filtering of sum(coeff * var) <= / >= bound. Arithmetic is checked;
// when anything would overflow the filter simply does nothing (sound).
// Returns false only when the bound is proved unsatisfiable.
bool filter_linear_le(DomainStore& ds, const std::vector<LinTerm>& terms, Val bound);
bool filter_linear_ge(DomainStore& ds, const std::vector<LinTerm>& terms, Val bound);

// Snapshot of the store: fixed variables contribute their value, unfixed
// ones their minimum. Only meaningful to read at positions that are fixed.
Assignment fixed_assignment(const DomainStore& ds);

// Pattern with window-relative Var(k) rewritten to the concrete variables.
Expr rebind_window(const Expr& pattern, const std::vector<VarId>& window);

// Condition re-expressed as a boolean expression over lhs.
Expr condition_expr(const Condition& cond, Expr lhs);

// Evaluates a condition against a constant lhs when the rhs is itself
// constant; returns nothing when the rhs is a variable.
std::optional<bool> condition_on_constant(const Condition& cond, Val lhs);

Expr term_expr(const Term& t);

// Objective bound used during branch and bound. Inactive until the first
// incumbent sets a limit; then enforces obj <= limit (minimize) or
// obj >= limit (maximize).
class ObjectiveProp : public Propagator {
public:
    ObjectiveProp(int ctid, const Objective& obj, int num_vars);

    void set_limit(Val limit) { limit_ = limit; }

    bool propagate(DomainStore& ds) override;

private:
    ObjectiveSense sense_;
    std::optional<Val> limit_;
    bool linear_ = false;
    std::vector<LinTerm> terms_;  // when linear
    Expr expr_;                   // otherwise
};

int64_t luby(int64_t i);  // 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...

}  // namespace xcore::detail
