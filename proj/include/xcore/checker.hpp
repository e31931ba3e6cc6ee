#pragma once

#include "xcore/instance.hpp"

namespace xcore {

// Pseudo constraint id reported when an assignment leaves a declared domain.
inline constexpr int kDomainViolation = -1;

struct Verdict {
    bool satisfied = false;
    std::vector<int> violated;  // ascending; empty iff satisfied
};

// Exact satisfaction of one constraint under a total assignment. Never
// throws: an expression that fails to evaluate (division by zero,
// overflow) makes the constraint unsatisfied, as does an arithmetic
// overflow inside a weighted sum.
bool constraint_holds(const ConstraintKind& kind, const Assignment& a);

// Aggregates constraint_holds over the whole instance. Constraints whose
// scope touches an out-of-domain value are reported violated alongside the
// kDomainViolation pseudo-id.
Verdict check(const Instance& inst, const Assignment& a);

// Objective under a total assignment. Throws EvalError on overflow.
Val objective_value(const Instance& inst, const Assignment& a);

}  // namespace xcore
