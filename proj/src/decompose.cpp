#include <set>
#include <string>

#include "engine_detail.hpp"

namespace xcore {

namespace detail {

Expr term_expr(const Term& t) { return t.is_var ? var(t.var) : val(t.value); }

}  // namespace detail

namespace {

// cardinality: one count per tracked value, bounded by its occurrence range.
Decomposition rewrite(const CardinalityCt& c) {
    Decomposition d;
    for (size_t j = 0; j < c.values.size(); ++j)
        d.parts.push_back(CountCt{c.scope,
                                  {c.values[j]},
                                  Condition::interval(CondOp::In, c.occurs[j].lo,
                                                      c.occurs[j].hi)});
    return d;
}

// knapsack: independent weight and profit sums over the same scope.
Decomposition rewrite(const KnapsackCt& c) {
    Decomposition d;
    d.parts.push_back(SumCt{c.scope, c.weights, c.wcond});
    d.parts.push_back(SumCt{c.scope, c.profits, c.pcond});
    return d;
}

// slide: the pattern instantiated on every window.
Decomposition rewrite(const SlideCt& c) {
    Decomposition d;
    size_t n = c.scope.size();
    size_t window = static_cast<size_t>(c.window);
    size_t offset = static_cast<size_t>(c.offset);
    for (size_t base = 0; base + window <= n; base += offset) {
        std::vector<VarId> slice(c.scope.begin() + static_cast<std::ptrdiff_t>(base),
                                 c.scope.begin() +
                                     static_cast<std::ptrdiff_t>(base + window));
        d.parts.push_back(IntensionCt{detail::rebind_window(c.pattern, slice)});
    }
    return d;
}

// alldifferent over lists: every pair of lists differs somewhere.
Decomposition rewrite(const AllDifferentListCt& c) {
    Decomposition d;
    for (size_t i = 0; i < c.lists.size(); ++i) {
        for (size_t j = i + 1; j < c.lists.size(); ++j) {
            std::vector<Expr> diffs;
            for (size_t p = 0; p < c.lists[i].size(); ++p)
                diffs.push_back(ne(var(c.lists[i][p]), var(c.lists[j][p])));
            d.parts.push_back(IntensionCt{
                diffs.size() == 1 ? std::move(diffs.front()) : lor(std::move(diffs))});
        }
    }
    return d;
}

// channel: range restrictions plus pairwise linking equivalences.
Decomposition rewrite(const ChannelCt& c) {
    Decomposition d;
    if (c.list2.empty()) {
        Val n = static_cast<Val>(c.list1.size());
        for (VarId x : c.list1)
            d.parts.push_back(
                IntensionCt{land({ge(var(x), val(0)), le(var(x), val(n - 1))})});
        for (size_t i = 0; i < c.list1.size(); ++i)
            for (size_t j = i + 1; j < c.list1.size(); ++j)
                d.parts.push_back(IntensionCt{
                    iff({eq(var(c.list1[i]), val(static_cast<Val>(j))),
                         eq(var(c.list1[j]), val(static_cast<Val>(i)))})});
        return d;
    }
    Val n1 = static_cast<Val>(c.list1.size());
    Val n2 = static_cast<Val>(c.list2.size());
    for (VarId x : c.list1)
        d.parts.push_back(
            IntensionCt{land({ge(var(x), val(0)), le(var(x), val(n2 - 1))})});
    for (VarId y : c.list2)
        d.parts.push_back(
            IntensionCt{land({ge(var(y), val(0)), le(var(y), val(n1 - 1))})});
    for (size_t i = 0; i < c.list1.size(); ++i)
        for (size_t j = 0; j < c.list2.size(); ++j)
            d.parts.push_back(
                IntensionCt{iff({eq(var(c.list1[i]), val(static_cast<Val>(j))),
                                 eq(var(c.list2[j]), val(static_cast<Val>(i)))})});
    return d;
}

// noOverlap: each task pair is separated in at least one dimension.
// Separation in dimension d is max(o1,o2) >= min(o1+l1, o2+l2), the exact
// complement of interval intersection (a zero-length task strictly inside
// another does not count as overlapping).
Decomposition rewrite(const NoOverlapCt& c) {
    Decomposition d;
    size_t n = c.origins.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            std::vector<Expr> separated;
            for (size_t dim = 0; dim < c.origins[i].size(); ++dim) {
                Expr o1 = var(c.origins[i][dim]);
                Expr o2 = var(c.origins[j][dim]);
                Expr e1 = add({o1, detail::term_expr(c.lengths[i][dim])});
                Expr e2 = add({o2, detail::term_expr(c.lengths[j][dim])});
                separated.push_back(
                    ge(emax({std::move(o1), std::move(o2)}),
                       emin({std::move(e1), std::move(e2)})));
            }
            d.parts.push_back(IntensionCt{separated.size() == 1
                                              ? std::move(separated.front())
                                              : lor(std::move(separated))});
        }
    }
    return d;
}

// binPacking: 0/1 membership helpers channel items into bins; each bin's
// load is a plain sum. When the empty-bin load (zero) already satisfies the
// condition every bin can be constrained directly; otherwise the condition
// is guarded so that it only applies to bins holding at least one item.
Decomposition rewrite(const BinPackingCt& c, const Instance& inst,
                      int first_helper_id) {
    Decomposition d;
    std::set<Val> bin_set;
    for (VarId x : c.scope)
        for (Val b : inst.variables[static_cast<size_t>(x)].domain.values())
            bin_set.insert(b);
    std::optional<bool> empty_ok = detail::condition_on_constant(c.cond, 0);
    int next = first_helper_id;
    for (Val b : bin_set) {
        std::vector<VarId> members;
        for (VarId x : c.scope) {
            VarId y = next++;
            d.helper_vars.push_back(
                Variable{y, "#aux" + std::to_string(y), Domain(0, 1)});
            d.parts.push_back(IntensionCt{eq(var(y), eq(var(x), val(b)))});
            members.push_back(y);
        }
        if (empty_ok && *empty_ok) {
            d.parts.push_back(SumCt{members, c.sizes, c.cond});
            continue;
        }
        std::vector<Expr> load_terms, used_terms;
        for (size_t i = 0; i < members.size(); ++i) {
            load_terms.push_back(mul({val(c.sizes[i]), var(members[i])}));
            used_terms.push_back(var(members[i]));
        }
        Expr unused = eq(add(std::move(used_terms)), val(0));
        Expr load_ok = detail::condition_expr(c.cond, add(std::move(load_terms)));
        d.parts.push_back(IntensionCt{lor({std::move(unused), std::move(load_ok)})});
    }
    return d;
}

}  // namespace

bool is_decomposed_kind(const ConstraintKind& kind) {
    return std::holds_alternative<CardinalityCt>(kind) ||
           std::holds_alternative<KnapsackCt>(kind) ||
           std::holds_alternative<SlideCt>(kind) ||
           std::holds_alternative<AllDifferentListCt>(kind) ||
           std::holds_alternative<ChannelCt>(kind) ||
           std::holds_alternative<NoOverlapCt>(kind) ||
           std::holds_alternative<BinPackingCt>(kind);
}

Decomposition decompose(const ConstraintKind& kind, const Instance& inst,
                        int first_helper_id) {
    if (const auto* c = std::get_if<CardinalityCt>(&kind)) return rewrite(*c);
    if (const auto* c = std::get_if<KnapsackCt>(&kind)) return rewrite(*c);
    if (const auto* c = std::get_if<SlideCt>(&kind)) return rewrite(*c);
    if (const auto* c = std::get_if<AllDifferentListCt>(&kind)) return rewrite(*c);
    if (const auto* c = std::get_if<ChannelCt>(&kind)) return rewrite(*c);
    if (const auto* c = std::get_if<NoOverlapCt>(&kind)) return rewrite(*c);
    if (const auto* c = std::get_if<BinPackingCt>(&kind))
        return rewrite(*c, inst, first_helper_id);
    throw std::logic_error("decompose: kind has a dedicated propagator");
}

}  // namespace xcore
