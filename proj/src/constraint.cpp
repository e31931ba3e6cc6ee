#include "xcore/constraint.hpp"

#include <algorithm>

namespace xcore {

bool condition_holds(const Condition& cond, Val lhs, const std::vector<Val>& a) {
    if (cond.op == CondOp::In || cond.op == CondOp::NotIn) {
        bool inside = false;
        if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
            inside = lhs >= iv->lo && lhs <= iv->hi;
        } else if (const auto* st = std::get_if<Condition::SetRhs>(&cond.rhs)) {
            inside = std::find(st->values.begin(), st->values.end(), lhs) != st->values.end();
        }
        return cond.op == CondOp::In ? inside : !inside;
    }
    Val rhs = 0;
    if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs)) {
        rhs = v->value;
    } else if (const auto* x = std::get_if<Condition::VarRhs>(&cond.rhs)) {
        rhs = a.at(static_cast<size_t>(x->var));
    }
    switch (cond.op) {
        case CondOp::Lt: return lhs < rhs;
        case CondOp::Le: return lhs <= rhs;
        case CondOp::Gt: return lhs > rhs;
        case CondOp::Ge: return lhs >= rhs;
        case CondOp::Eq: return lhs == rhs;
        case CondOp::Ne: return lhs != rhs;
        default: return false;
    }
}

namespace {

void add_condition_vars(const Condition& cond, std::vector<VarId>& out) {
    if (const auto* x = std::get_if<Condition::VarRhs>(&cond.rhs)) out.push_back(x->var);
}

void add_terms(const std::vector<Term>& terms, std::vector<VarId>& out) {
    for (const auto& t : terms)
        if (t.is_var) out.push_back(t.var);
}

struct ScopeVisitor {
    std::vector<VarId> out;

    void operator()(const IntensionCt& c) { collect_vars(c.expr, out); }
    void operator()(const ExtensionCt& c) { out = c.scope; }
    void operator()(const RegularCt& c) { out = c.scope; }
    void operator()(const MddCt& c) { out = c.scope; }
    void operator()(const AllDifferentCt& c) { out = c.scope; }
    void operator()(const AllDifferentMatrixCt& c) {
        for (const auto& row : c.rows) out.insert(out.end(), row.begin(), row.end());
    }
    void operator()(const AllDifferentListCt& c) {
        for (const auto& l : c.lists) out.insert(out.end(), l.begin(), l.end());
    }
    void operator()(const AllEqualCt& c) { out = c.scope; }
    void operator()(const OrderedCt& c) { out = c.scope; }
    void operator()(const LexCt& c) {
        for (const auto& l : c.lists) out.insert(out.end(), l.begin(), l.end());
    }
    void operator()(const PrecedenceCt& c) { out = c.scope; }
    void operator()(const SumCt& c) {
        out = c.scope;
        add_condition_vars(c.cond, out);
    }
    void operator()(const CountCt& c) {
        out = c.scope;
        add_condition_vars(c.cond, out);
    }
    void operator()(const NValuesCt& c) {
        out = c.scope;
        add_condition_vars(c.cond, out);
    }
    void operator()(const CardinalityCt& c) { out = c.scope; }
    void operator()(const MaximumCt& c) {
        out = c.scope;
        add_condition_vars(c.cond, out);
    }
    void operator()(const MinimumCt& c) {
        out = c.scope;
        add_condition_vars(c.cond, out);
    }
    void operator()(const ElementCt& c) {
        add_terms(c.list, out);
        out.push_back(c.index);
        add_condition_vars(c.cond, out);
    }
    void operator()(const ChannelCt& c) {
        out = c.list1;
        out.insert(out.end(), c.list2.begin(), c.list2.end());
    }
    void operator()(const NoOverlapCt& c) {
        for (const auto& o : c.origins) out.insert(out.end(), o.begin(), o.end());
        for (const auto& l : c.lengths) add_terms(l, out);
    }
    void operator()(const CumulativeCt& c) {
        out = c.origins;
        add_terms(c.lengths, out);
        add_terms(c.heights, out);
        add_condition_vars(c.cond, out);
    }
    void operator()(const BinPackingCt& c) {
        out = c.scope;
        add_condition_vars(c.cond, out);
    }
    void operator()(const KnapsackCt& c) {
        out = c.scope;
        add_condition_vars(c.wcond, out);
        add_condition_vars(c.pcond, out);
    }
    void operator()(const CircuitCt& c) { out = c.scope; }
    void operator()(const InstantiationCt& c) { out = c.scope; }
    void operator()(const SlideCt& c) { out = c.scope; }
};

}  // namespace

std::vector<VarId> constraint_scope(const ConstraintKind& kind) {
    ScopeVisitor v;
    std::visit(v, kind);
    return std::move(v.out);
}

const char* constraint_kind_name(const ConstraintKind& kind) {
    struct Namer {
        const char* operator()(const IntensionCt&) { return "intension"; }
        const char* operator()(const ExtensionCt&) { return "extension"; }
        const char* operator()(const RegularCt&) { return "regular"; }
        const char* operator()(const MddCt&) { return "mdd"; }
        const char* operator()(const AllDifferentCt&) { return "allDifferent"; }
        const char* operator()(const AllDifferentMatrixCt&) { return "allDifferent:matrix"; }
        const char* operator()(const AllDifferentListCt&) { return "allDifferent:list"; }
        const char* operator()(const AllEqualCt&) { return "allEqual"; }
        const char* operator()(const OrderedCt&) { return "ordered"; }
        const char* operator()(const LexCt&) { return "lex"; }
        const char* operator()(const PrecedenceCt&) { return "precedence"; }
        const char* operator()(const SumCt&) { return "sum"; }
        const char* operator()(const CountCt&) { return "count"; }
        const char* operator()(const NValuesCt&) { return "nValues"; }
        const char* operator()(const CardinalityCt&) { return "cardinality"; }
        const char* operator()(const MaximumCt&) { return "maximum"; }
        const char* operator()(const MinimumCt&) { return "minimum"; }
        const char* operator()(const ElementCt&) { return "element"; }
        const char* operator()(const ChannelCt&) { return "channel"; }
        const char* operator()(const NoOverlapCt&) { return "noOverlap"; }
        const char* operator()(const CumulativeCt&) { return "cumulative"; }
        const char* operator()(const BinPackingCt&) { return "binPacking"; }
        const char* operator()(const KnapsackCt&) { return "knapsack"; }
        const char* operator()(const CircuitCt&) { return "circuit"; }
        const char* operator()(const InstantiationCt&) { return "instantiation"; }
        const char* operator()(const SlideCt&) { return "slide"; }
    };
    return std::visit(Namer{}, kind);
}

}  // namespace xcore
