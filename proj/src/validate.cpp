#include "xcore/instance.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace xcore {

VarId Instance::var_by_name(const std::string& name) const {
    for (const auto& v : variables)
        if (v.name == name) return v.id;
    return -1;
}

namespace {

class Validator {
public:
    explicit Validator(const Instance& inst) : inst_(inst) {}

    std::vector<ValidationError> run() {
        check_variables();
        check_objective();
        for (const auto& c : inst_.constraints) {
            cid_ = c.id;
            check_scope_vars(c.kind);
            std::visit([this](const auto& k) { check(k); }, c.kind);
        }
        return std::move(errors_);
    }

private:
    const Instance& inst_;
    std::vector<ValidationError> errors_;
    int cid_ = -1;

    void error(const std::string& rule, const std::string& message) {
        errors_.push_back({ValidationError::Severity::Error, cid_, rule, message});
    }
    void warning(const std::string& rule, const std::string& message) {
        errors_.push_back({ValidationError::Severity::Warning, cid_, rule, message});
    }

    bool var_ok(VarId v) const { return v >= 0 && v < inst_.num_vars(); }

    void check_variables() {
        cid_ = -1;
        std::unordered_set<std::string> names;
        for (size_t i = 0; i < inst_.variables.size(); ++i) {
            const auto& v = inst_.variables[i];
            if (v.id != static_cast<VarId>(i))
                error("VariableIds", "variable ids must be contiguous 0..n-1");
            if (!names.insert(v.name).second)
                error("DuplicateName", "duplicate variable name '" + v.name + "'");
            if (v.domain.ranges().empty())
                error("EmptyDomain", "variable '" + v.name + "' has an empty domain");
            else if (v.domain.contains(kStar))
                error("DomainStar", "domain of '" + v.name + "' contains the wildcard token");
        }
    }

    void check_objective() {
        cid_ = -1;
        const bool is_cop = inst_.kind == InstanceKind::Cop;
        if (is_cop != inst_.objective.has_value()) {
            error("ObjectivePresence", is_cop ? "COP instance without objective"
                                              : "CSP instance with objective");
        }
        if (!inst_.objective) return;
        if (const auto* e = std::get_if<Expr>(&inst_.objective->body)) {
            check_expr(*e);
        } else if (const auto* ws = std::get_if<WeightedSum>(&inst_.objective->body)) {
            if (ws->scope.size() != ws->coeffs.size())
                error("ArityMismatch", "objective weighted sum |coeffs| != |scope|");
            for (VarId v : ws->scope)
                if (!var_ok(v)) error("UnknownVariable", "objective references unknown variable");
        }
    }

    void check_scope_vars(const ConstraintKind& kind) {
        for (VarId v : constraint_scope(kind))
            if (!var_ok(v)) error("UnknownVariable", "constraint references unknown variable id");
    }

    void check_expr(const Expr& e) {
        if (auto msg = arity_error(e); !msg.empty()) error("ExprArity", msg);
        if (e.op == ExprOp::InSet && e.set_values.empty())
            warning("EmptySet", "in() over an empty set is always false");
        for (const auto& c : e.children) check_expr(c);
    }

    void check_condition(const Condition& cond) {
        const bool membership = cond.op == CondOp::In || cond.op == CondOp::NotIn;
        const bool has_set_rhs = std::holds_alternative<Condition::IntervalRhs>(cond.rhs) ||
                                 std::holds_alternative<Condition::SetRhs>(cond.rhs);
        if (membership != has_set_rhs)
            error("ConditionRhs", membership
                                      ? "in/notin require an interval or set operand"
                                      : "relational condition requires a value or variable");
        if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs))
            if (iv->lo > iv->hi) error("ConditionRhs", "condition interval with lo > hi");
        if (const auto* x = std::get_if<Condition::VarRhs>(&cond.rhs))
            if (!var_ok(x->var)) error("UnknownVariable", "condition references unknown variable");
    }

    void check_alldiff_duplicates(const std::vector<VarId>& scope,
                                  const std::vector<Val>& except) {
        std::set<VarId> seen;
        for (VarId v : scope) {
            if (!seen.insert(v).second && except.empty()) {
                warning("DuplicateInScope",
                        "duplicate variable in allDifferent scope is trivially unsatisfiable");
                return;
            }
        }
    }

    // --- per-kind checks -------------------------------------------------

    void check(const IntensionCt& c) { check_expr(c.expr); }

    void check(const ExtensionCt& c) {
        bool saw_star = false;
        for (const auto& t : c.tuples) {
            if (t.size() != c.scope.size()) {
                error("TupleArity", "extension tuple arity differs from scope");
                continue;
            }
            for (Val cell : t) saw_star |= cell == kStar;
        }
        if (saw_star != c.starred)
            error("StarFlag", "starred flag inconsistent with tuple contents");
        if (c.scope.empty()) error("EmptyScope", "extension with empty scope");
    }

    void check(const RegularCt& c) {
        if (c.start.empty()) error("Automaton", "regular with empty start state");
        if (c.scope.empty()) error("EmptyScope", "regular with empty scope");
    }

    void check(const MddCt& c) {
        if (c.edges.empty() || c.scope.empty()) {
            error("EmptyScope", "mdd needs a scope and at least one edge");
            return;
        }
        std::unordered_set<std::string> sources, targets;
        for (const auto& e : c.edges) {
            sources.insert(e.from);
            targets.insert(e.to);
        }
        int roots = 0, terminals = 0;
        for (const auto& s : sources)
            if (!targets.count(s)) ++roots;
        for (const auto& t : targets)
            if (!sources.count(t)) ++terminals;
        if (roots != 1) error("MddShape", "mdd must have exactly one root node");
        if (terminals != 1) error("MddShape", "mdd must have exactly one terminal node");
    }

    void check(const AllDifferentCt& c) { check_alldiff_duplicates(c.scope, c.except); }

    void check(const AllDifferentMatrixCt& c) {
        for (const auto& row : c.rows)
            if (row.size() != c.rows.front().size())
                error("MatrixShape", "allDifferent matrix rows of unequal length");
        for (const auto& row : c.rows) check_alldiff_duplicates(row, {});
    }

    void check(const AllDifferentListCt& c) {
        for (const auto& l : c.lists)
            if (l.size() != c.lists.front().size())
                error("ArityMismatch", "allDifferent lists of unequal length");
    }

    void check(const AllEqualCt&) {}

    void check(const OrderedCt& c) {
        if (!c.lengths.empty() && c.lengths.size() + 1 != c.scope.size())
            error("ArityMismatch", "ordered lengths must number |scope| - 1");
    }

    void check(const LexCt& c) {
        if (c.lists.empty()) {
            error("EmptyScope", "lex with no lists");
            return;
        }
        for (const auto& l : c.lists)
            if (l.size() != c.lists.front().size())
                error("ArityMismatch", "lex lists of unequal length");
    }

    void check(const PrecedenceCt& c) {
        if (c.values.size() < 2) warning("Degenerate", "precedence over fewer than two values");
    }

    void check(const SumCt& c) {
        if (c.coeffs.size() != c.scope.size())
            error("ArityMismatch", "sum |coeffs| != |scope|");
        check_condition(c.cond);
    }

    void check(const CountCt& c) { check_condition(c.cond); }

    void check(const NValuesCt& c) { check_condition(c.cond); }

    void check(const CardinalityCt& c) {
        if (c.values.size() != c.occurs.size())
            error("ArityMismatch", "cardinality |values| != |occurs|");
        for (const auto& o : c.occurs)
            if (o.lo > o.hi) error("OccursRange", "cardinality occurrence interval lo > hi");
    }

    void check(const MaximumCt& c) { check_condition(c.cond); }
    void check(const MinimumCt& c) { check_condition(c.cond); }

    void check(const ElementCt& c) {
        if (c.list.empty()) error("EmptyScope", "element with empty list");
        if (!var_ok(c.index)) error("UnknownVariable", "element index variable unknown");
        check_condition(c.cond);
    }

    void check(const ChannelCt& c) {
        if (!c.list2.empty() && c.list2.size() != c.list1.size())
            error("ArityMismatch", "channel lists of unequal length");
    }

    void check(const NoOverlapCt& c) {
        if (c.origins.size() != c.lengths.size()) {
            error("ArityMismatch", "noOverlap |origins| != |lengths|");
            return;
        }
        for (size_t i = 0; i < c.origins.size(); ++i) {
            if (c.origins[i].size() != c.origins.front().size() ||
                c.lengths[i].size() != c.origins[i].size())
                error("ArityMismatch", "noOverlap dimension mismatch");
        }
    }

    void check(const CumulativeCt& c) {
        if (c.lengths.size() != c.origins.size() || c.heights.size() != c.origins.size())
            error("ArityMismatch", "cumulative |origins| != |lengths| != |heights|");
        check_condition(c.cond);
    }

    void check(const BinPackingCt& c) {
        if (c.sizes.size() != c.scope.size())
            error("ArityMismatch", "binPacking |sizes| != |scope|");
        check_condition(c.cond);
    }

    void check(const KnapsackCt& c) {
        if (c.weights.size() != c.scope.size() || c.profits.size() != c.scope.size())
            error("ArityMismatch", "knapsack |weights| and |profits| must equal |scope|");
        check_condition(c.wcond);
        check_condition(c.pcond);
    }

    void check(const CircuitCt& c) {
        if (c.scope.empty()) error("EmptyScope", "circuit with empty scope");
    }

    void check(const InstantiationCt& c) {
        if (c.values.size() != c.scope.size())
            error("ArityMismatch", "instantiation |values| != |scope|");
    }

    void check(const SlideCt& c) {
        if (c.window < 1 || c.offset < 1 ||
            static_cast<size_t>(c.window) > c.scope.size()) {
            error("SlideShape", "slide window/offset out of range");
            return;
        }
        check_expr(c.pattern);
        std::vector<VarId> params;
        collect_vars(c.pattern, params);
        for (VarId p : params)
            if (p < 0 || p >= c.window)
                error("SlideShape", "slide pattern placeholder outside the window");
    }
};

}  // namespace

std::vector<ValidationError> validate_instance(const Instance& inst) {
    return Validator(inst).run();
}

}  // namespace xcore
