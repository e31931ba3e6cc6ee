#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "xcore/expr.hpp"

namespace xcore {

// Wildcard cell in extension tuples. Distinguished token, never a domain value.
inline constexpr Val kStar = std::numeric_limits<Val>::min();

enum class CondOp { Lt, Le, Gt, Ge, Eq, Ne, In, NotIn };

// Right-hand side of a comparison attached to sum/count/nValues/maximum/
// minimum/element/cumulative/binPacking. In/NotIn take Interval or Set;
// the six relational ops take Value or Var.
struct Condition {
    struct ValueRhs { Val value; bool operator==(const ValueRhs&) const = default; };
    struct VarRhs { VarId var; bool operator==(const VarRhs&) const = default; };
    struct IntervalRhs { Val lo; Val hi; bool operator==(const IntervalRhs&) const = default; };
    struct SetRhs { std::vector<Val> values; bool operator==(const SetRhs&) const = default; };

    CondOp op = CondOp::Eq;
    std::variant<ValueRhs, VarRhs, IntervalRhs, SetRhs> rhs = ValueRhs{0};

    static Condition value(CondOp op, Val v) { return {op, ValueRhs{v}}; }
    static Condition variable(CondOp op, VarId x) { return {op, VarRhs{x}}; }
    static Condition interval(CondOp op, Val lo, Val hi) { return {op, IntervalRhs{lo, hi}}; }
    static Condition set(CondOp op, std::vector<Val> vs) { return {op, SetRhs{std::move(vs)}}; }

    bool operator==(const Condition&) const = default;
};

// Holds the comparison `lhs <op> rhs` for a fixed integer lhs; rhs Var is
// resolved through the given assignment.
bool condition_holds(const Condition& cond, Val lhs, const std::vector<Val>& assignment);

// Relation used by ordered/lex.
enum class RelOp { Lt, Le, Gt, Ge };

// An integer-or-variable term (element lists, lengths, heights).
struct Term {
    bool is_var = false;
    VarId var = -1;
    Val value = 0;

    static Term of_var(VarId v) { return {true, v, 0}; }
    static Term of_val(Val v) { return {false, -1, v}; }
    Val resolve(const std::vector<Val>& assignment) const {
        return is_var ? assignment.at(static_cast<size_t>(var)) : value;
    }

    bool operator==(const Term&) const = default;
};

// ---------------------------------------------------------------------------
// Constraint payloads, one per supported kind
// ---------------------------------------------------------------------------

struct IntensionCt {
    Expr expr;
    bool operator==(const IntensionCt&) const = default;
};

struct ExtensionCt {
    std::vector<VarId> scope;
    std::vector<std::vector<Val>> tuples;  // kStar cells are wildcards
    bool positive = true;
    bool starred = false;
    bool operator==(const ExtensionCt&) const = default;
};

struct RegularCt {
    struct Transition {
        std::string from;
        Val symbol;
        std::string to;
        bool operator==(const Transition&) const = default;
    };
    std::vector<VarId> scope;
    std::vector<Transition> transitions;
    std::string start;
    std::vector<std::string> finals;
    bool operator==(const RegularCt&) const = default;
};

struct MddCt {
    struct Edge {
        std::string from;
        Val symbol;
        std::string to;
        bool operator==(const Edge&) const = default;
    };
    std::vector<VarId> scope;
    std::vector<Edge> edges;  // layered: root has in-degree 0, terminal out-degree 0
    bool operator==(const MddCt&) const = default;
};

struct AllDifferentCt {
    std::vector<VarId> scope;
    std::vector<Val> except;
    bool operator==(const AllDifferentCt&) const = default;
};

struct AllDifferentMatrixCt {
    std::vector<std::vector<VarId>> rows;  // rectangular
    bool operator==(const AllDifferentMatrixCt&) const = default;
};

struct AllDifferentListCt {
    std::vector<std::vector<VarId>> lists;  // equal lengths
    bool operator==(const AllDifferentListCt&) const = default;
};

struct AllEqualCt {
    std::vector<VarId> scope;
    bool operator==(const AllEqualCt&) const = default;
};

struct OrderedCt {
    std::vector<VarId> scope;
    RelOp rel = RelOp::Le;
    std::vector<Val> lengths;  // empty, or |scope|-1 separations
    bool operator==(const OrderedCt&) const = default;
};

struct LexCt {
    std::vector<std::vector<VarId>> lists;
    RelOp rel = RelOp::Le;
    bool matrix = false;  // matrix form also orders columns
    bool operator==(const LexCt&) const = default;
};

struct PrecedenceCt {
    std::vector<VarId> scope;
    std::vector<Val> values;
    bool operator==(const PrecedenceCt&) const = default;
};

struct SumCt {
    std::vector<VarId> scope;
    std::vector<Val> coeffs;
    Condition cond;
    bool operator==(const SumCt&) const = default;
};

struct CountCt {
    std::vector<VarId> scope;
    std::vector<Val> values;
    Condition cond;
    bool operator==(const CountCt&) const = default;
};

struct NValuesCt {
    std::vector<VarId> scope;
    Condition cond;
    bool operator==(const NValuesCt&) const = default;
};

struct CardinalityCt {
    struct Occur {
        Val lo;
        Val hi;  // exact count when lo == hi
        bool operator==(const Occur&) const = default;
    };
    std::vector<VarId> scope;
    std::vector<Val> values;
    std::vector<Occur> occurs;
    bool operator==(const CardinalityCt&) const = default;
};

struct MaximumCt {
    std::vector<VarId> scope;
    Condition cond;
    bool operator==(const MaximumCt&) const = default;
};

struct MinimumCt {
    std::vector<VarId> scope;
    Condition cond;
    bool operator==(const MinimumCt&) const = default;
};

struct ElementCt {
    std::vector<Term> list;
    VarId index = -1;  // 0-based into list
    Condition cond;
    bool operator==(const ElementCt&) const = default;
};

struct ChannelCt {
    std::vector<VarId> list1;
    std::vector<VarId> list2;  // empty for the single-list form
    bool operator==(const ChannelCt&) const = default;
};

struct NoOverlapCt {
    std::vector<std::vector<VarId>> origins;  // one entry per task, |dims| coords
    std::vector<std::vector<Term>> lengths;
    bool operator==(const NoOverlapCt&) const = default;
};

struct CumulativeCt {
    std::vector<VarId> origins;
    std::vector<Term> lengths;
    std::vector<Term> heights;
    Condition cond;
    bool operator==(const CumulativeCt&) const = default;
};

struct BinPackingCt {
    std::vector<VarId> scope;  // item -> bin
    std::vector<Val> sizes;
    Condition cond;  // applies to the load of every used bin
    bool operator==(const BinPackingCt&) const = default;
};

struct KnapsackCt {
    std::vector<VarId> scope;
    std::vector<Val> weights;
    std::vector<Val> profits;
    Condition wcond;
    Condition pcond;
    bool operator==(const KnapsackCt&) const = default;
};

struct CircuitCt {
    std::vector<VarId> scope;  // successor array; self-loop = outside the cycle
    bool operator==(const CircuitCt&) const = default;
};

struct InstantiationCt {
    std::vector<VarId> scope;
    std::vector<Val> values;
    bool operator==(const InstantiationCt&) const = default;
};

struct SlideCt {
    std::vector<VarId> scope;
    int window = 0;   // pattern arity
    int offset = 1;
    Expr pattern;     // Var(k) refers to window position k
    bool operator==(const SlideCt&) const = default;
};

using ConstraintKind =
    std::variant<IntensionCt, ExtensionCt, RegularCt, MddCt, AllDifferentCt,
                 AllDifferentMatrixCt, AllDifferentListCt, AllEqualCt, OrderedCt, LexCt,
                 PrecedenceCt, SumCt, CountCt, NValuesCt, CardinalityCt, MaximumCt,
                 MinimumCt, ElementCt, ChannelCt, NoOverlapCt, CumulativeCt, BinPackingCt,
                 KnapsackCt, CircuitCt, InstantiationCt, SlideCt>;

struct Constraint {
    int id = -1;
    ConstraintKind kind;
    std::vector<std::string> tags;  // e.g. "symmetry-breaking", "redundant"

    bool operator==(const Constraint&) const = default;
};

// Every variable id mentioned by the payload, with repeats, in payload order.
std::vector<VarId> constraint_scope(const ConstraintKind& kind);

const char* constraint_kind_name(const ConstraintKind& kind);

}  // namespace xcore
