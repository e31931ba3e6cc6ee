#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "engine_detail.hpp"

namespace xcore {

namespace detail {

namespace {

bool add_ok(Val a, Val b, Val& out) { return !__builtin_add_overflow(a, b, &out); }
bool mul_ok(Val a, Val b, Val& out) { return !__builtin_mul_overflow(a, b, &out); }

// Floor division for any sign of divisor (b != 0).
Val floor_div(Val a, Val b) {
    Val q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

bool filter_linear_le(DomainStore& ds, const std::vector<LinTerm>& terms, Val bound) {
    Val lmin = 0;
    for (const LinTerm& t : terms) {
        Val x = t.coeff > 0 ? ds.min(t.var) : ds.max(t.var);
        Val m;
        if (!mul_ok(t.coeff, x, m) || !add_ok(lmin, m, lmin)) return true;
    }
    if (lmin > bound) return false;
    Val slack = bound - lmin;
    for (const LinTerm& t : terms) {
        if (t.coeff == 0) continue;
        if (t.coeff > 0) {
            Val hi;
            if (!add_ok(ds.min(t.var), floor_div(slack, t.coeff), hi)) continue;
            if (!ds.remove_above(t.var, hi)) return false;
        } else {
            Val lo;
            if (!add_ok(ds.max(t.var), -floor_div(slack, -t.coeff), lo)) continue;
            if (!ds.remove_below(t.var, lo)) return false;
        }
    }
    return true;
}

bool filter_linear_ge(DomainStore& ds, const std::vector<LinTerm>& terms, Val bound) {
    Val lmax = 0;
    for (const LinTerm& t : terms) {
        Val x = t.coeff > 0 ? ds.max(t.var) : ds.min(t.var);
        Val m;
        if (!mul_ok(t.coeff, x, m) || !add_ok(lmax, m, lmax)) return true;
    }
    if (lmax < bound) return false;
    Val slack = lmax - bound;
    for (const LinTerm& t : terms) {
        if (t.coeff == 0) continue;
        if (t.coeff > 0) {
            Val lo;
            if (!add_ok(ds.max(t.var), -floor_div(slack, t.coeff), lo)) continue;
            if (!ds.remove_below(t.var, lo)) return false;
        } else {
            Val hi;
            if (!add_ok(ds.min(t.var), floor_div(slack, -t.coeff), hi)) continue;
            if (!ds.remove_above(t.var, hi)) return false;
        }
    }
    return true;
}

Assignment fixed_assignment(const DomainStore& ds) {
    Assignment a(static_cast<size_t>(ds.num_vars()));
    for (int v = 0; v < ds.num_vars(); ++v) a[static_cast<size_t>(v)] = ds.min(v);
    return a;
}

Expr rebind_window(const Expr& pattern, const std::vector<VarId>& window) {
    Expr out = pattern;
    if (out.op == ExprOp::Var) out.var = window[static_cast<size_t>(out.var)];
    for (auto& child : out.children) child = rebind_window(child, window);
    return out;
}

namespace {

Expr rel_expr(CondOp op, Expr lhs, Expr rhs) {
    switch (op) {
        case CondOp::Lt: return lt(std::move(lhs), std::move(rhs));
        case CondOp::Le: return le(std::move(lhs), std::move(rhs));
        case CondOp::Gt: return gt(std::move(lhs), std::move(rhs));
        case CondOp::Ge: return ge(std::move(lhs), std::move(rhs));
        case CondOp::Eq: return eq(std::move(lhs), std::move(rhs));
        case CondOp::Ne: return ne(std::move(lhs), std::move(rhs));
        default: throw std::logic_error("membership op in rel_expr");
    }
}

}  // namespace

Expr condition_expr(const Condition& cond, Expr lhs) {
    if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs))
        return rel_expr(cond.op, std::move(lhs), val(v->value));
    if (const auto* x = std::get_if<Condition::VarRhs>(&cond.rhs))
        return rel_expr(cond.op, std::move(lhs), var(x->var));
    if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
        Expr inside = land({ge(lhs, val(iv->lo)), le(lhs, val(iv->hi))});
        return cond.op == CondOp::In ? inside : lnot(std::move(inside));
    }
    const auto& s = std::get<Condition::SetRhs>(cond.rhs).values;
    Expr inside = in_set(std::move(lhs), s);
    return cond.op == CondOp::In ? inside : lnot(std::move(inside));
}

std::optional<bool> condition_on_constant(const Condition& cond, Val lhs) {
    if (std::holds_alternative<Condition::VarRhs>(cond.rhs)) return std::nullopt;
    return condition_holds(cond, lhs, {});
}

int64_t luby(int64_t i) {
    for (int64_t k = 1;; ++k) {
        int64_t block = (int64_t{1} << k) - 1;
        if (i == block) return int64_t{1} << (k - 1);
        if (i < block) return luby(i - (block >> 1));
    }
}

}  // namespace detail

namespace {

using detail::LinTerm;

constexpr Val kEnumCap = 1024;   // max domain size enumerated by a filter
constexpr Val kSweepCap = 4096;  // max assignment combinations swept

// Writes the current domain minimum of each scope variable into the store's
// scratch assignment and returns it. Positions outside `scope` are stale, so
// the result may only feed evaluations confined to `scope` (constraint
// checkers and intension expressions read nothing else).
Assignment& scope_mins(DomainStore& ds, const std::vector<VarId>& scope) {
    Assignment& a = ds.scratch();
    for (VarId v : scope) a[static_cast<size_t>(v)] = ds.min(v);
    return a;
}

// Shared base: holds the payload both as its concrete type and as the
// variant the checker consumes. An all-fixed scope short-circuits to the
// exact satisfaction test, so every propagator is exact at leaves.
template <typename Payload>
class PayloadProp : public Propagator {
public:
    PayloadProp(int ctid, const Payload& payload, Strength strength)
        : Propagator(ctid, constraint_scope(ConstraintKind{payload}), strength),
          kind_(payload) {}

protected:
    const Payload& ct() const { return std::get<Payload>(kind_); }

    bool scope_fixed(const DomainStore& ds) const {
        for (VarId v : watched())
            if (!ds.fixed(v)) return false;
        return true;
    }

    bool holds_now(DomainStore& ds) const {
        return constraint_holds(kind_, scope_mins(ds, watched()));
    }

private:
    ConstraintKind kind_;
};

// ---------------------------------------------------------------------------
// Fallback: wait until the whole scope is fixed, then test exactly.
// ---------------------------------------------------------------------------
class CheckOnlyProp : public Propagator {
public:
    CheckOnlyProp(int ctid, ConstraintKind kind)
        : Propagator(ctid, constraint_scope(kind), Strength::CheckOnly),
          kind_(std::move(kind)) {}

    bool propagate(DomainStore& ds) override {
        for (VarId v : watched())
            if (!ds.fixed(v)) return true;
        return constraint_holds(kind_, scope_mins(ds, watched()));
    }

private:
    ConstraintKind kind_;
};

// ---------------------------------------------------------------------------
// Intension: forward checking with one unfixed variable; per-value support
// search with residual supports when the arity is at most 3. Removals during
// one pass may leave stale candidates for later positions; the fixpoint loop
// re-runs the propagator until the filtering is arc consistent.
// ---------------------------------------------------------------------------
class IntensionProp : public PayloadProp<IntensionCt> {
public:
    IntensionProp(int ctid, const IntensionCt& c)
        : PayloadProp(ctid, c, arity_of(c) <= 3 ? Strength::Gac : Strength::Fc),
          flat_(c.expr) {}

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const auto& scope = watched();
        int unfixed_count = 0;
        VarId unfixed = -1;
        for (VarId v : scope)
            if (!ds.fixed(v)) {
                ++unfixed_count;
                unfixed = v;
            }

        Assignment& a = scope_mins(ds, scope);
        if (unfixed_count == 1) {
            VarId u = unfixed;
            if (ds.size(u) > kEnumCap) return true;
            for (Val v = ds.min(u), hi = ds.max(u);; v = ds.next_value(u, v + 1)) {
                a[static_cast<size_t>(u)] = v;
                if (!sat(a) && !ds.remove(u, v)) return false;
                if (v == hi) break;
            }
            a[static_cast<size_t>(u)] = ds.min(u);
            return true;
        }
        const size_t n = scope.size();
        if (n > 3) return true;
        Val product = 1;
        for (VarId v : scope) {
            product *= ds.size(v);
            if (product > kSweepCap) return true;
        }
        for (size_t i = 0; i < n; ++i) {
            others_.clear();
            for (size_t j = 0; j < n; ++j)
                if (j != i) others_.push_back(j);
            VarId x = scope[i];
            for (Val v = ds.min(x), hi = ds.max(x);; v = ds.next_value(x, v + 1)) {
                auto res = residue_[i].find(v);
                if (res == residue_[i].end() || !tuple_live(res->second, ds, n)) {
                    a[static_cast<size_t>(x)] = v;
                    if (!find_support(ds, a, i, v)) {
                        if (!ds.remove(x, v)) return false;
                    }
                }
                if (v == hi) break;
            }
            a[static_cast<size_t>(x)] = ds.min(x);
        }
        return true;
    }

private:
    static size_t arity_of(const IntensionCt& c) {
        return constraint_scope(ConstraintKind{c}).size();
    }

    bool sat(const Assignment& a) const {
        try {
            return flat_.eval(a) != 0;
        } catch (const EvalError&) {
            return false;
        }
    }

    bool tuple_live(const std::array<Val, 3>& t, const DomainStore& ds, size_t n) const {
        const auto& scope = watched();
        for (size_t j = 0; j < n; ++j)
            if (!ds.contains(scope[j], t[j])) return false;
        return true;
    }

    void record(const Assignment& a, size_t i, Val v, size_t n) {
        const auto& scope = watched();
        std::array<Val, 3> t{0, 0, 0};
        for (size_t j = 0; j < n; ++j) t[j] = a[static_cast<size_t>(scope[j])];
        residue_[i][v] = t;
    }

    // Sweeps assignments of the (at most two) other positions for a tuple
    // satisfying the expression, leaving `a` with the candidate value at
    // position i.
    bool find_support(const DomainStore& ds, Assignment& a, size_t i, Val v) {
        const auto& scope = watched();
        const size_t n = scope.size();
        if (others_.empty()) return sat(a);
        VarId o0 = scope[others_[0]];
        if (others_.size() == 1) {
            for (Val w = ds.min(o0), hi = ds.max(o0);; w = ds.next_value(o0, w + 1)) {
                a[static_cast<size_t>(o0)] = w;
                if (sat(a)) {
                    record(a, i, v, n);
                    return true;
                }
                if (w == hi) break;
            }
            return false;
        }
        VarId o1 = scope[others_[1]];
        for (Val w0 = ds.min(o0), h0 = ds.max(o0);; w0 = ds.next_value(o0, w0 + 1)) {
            a[static_cast<size_t>(o0)] = w0;
            for (Val w1 = ds.min(o1), h1 = ds.max(o1);; w1 = ds.next_value(o1, w1 + 1)) {
                a[static_cast<size_t>(o1)] = w1;
                if (sat(a)) {
                    record(a, i, v, n);
                    return true;
                }
                if (w1 == h1) break;
            }
            if (w0 == h0) break;
        }
        return false;
    }

    std::vector<size_t> others_;
    std::array<std::unordered_map<Val, std::array<Val, 3>>, 3> residue_;
    FlatExpr flat_;
};

// ---------------------------------------------------------------------------
// Extension: support filtering with residues for positive tables
// (star-aware); forward checking for negative tables.
// ---------------------------------------------------------------------------
class ExtensionProp : public PayloadProp<ExtensionCt> {
public:
    ExtensionProp(int ctid, const ExtensionCt& c)
        : PayloadProp(ctid, c, c.positive ? Strength::Gac : Strength::Fc) {
        residue_.resize(ct().scope.size());
    }

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        return ct().positive ? filter_positive(ds) : filter_negative(ds);
    }

private:
    bool tuple_live(const std::vector<Val>& t, const DomainStore& ds) const {
        const auto& scope = ct().scope;
        for (size_t j = 0; j < scope.size(); ++j)
            if (t[j] != kStar && !ds.contains(scope[j], t[j])) return false;
        return true;
    }

    bool filter_positive(DomainStore& ds) {
        const auto& scope = ct().scope;
        const auto& tuples = ct().tuples;
        for (size_t i = 0; i < scope.size(); ++i) {
            if (ds.size(scope[i]) > kEnumCap) continue;
            for (Val v : ds.values(scope[i])) {
                auto res = residue_[i].find(v);
                if (res != residue_[i].end()) {
                    const auto& t = tuples[res->second];
                    if ((t[i] == kStar || t[i] == v) && tuple_live(t, ds)) continue;
                }
                bool supported = false;
                for (size_t k = 0; k < tuples.size(); ++k) {
                    const auto& t = tuples[k];
                    if ((t[i] == kStar || t[i] == v) && tuple_live(t, ds)) {
                        residue_[i][v] = k;
                        supported = true;
                        break;
                    }
                }
                if (!supported && !ds.remove(scope[i], v)) return false;
            }
        }
        return true;
    }

    bool filter_negative(DomainStore& ds) {
        const auto& scope = ct().scope;
        std::vector<size_t> unfixed;
        for (size_t i = 0; i < scope.size(); ++i)
            if (!ds.fixed(scope[i])) unfixed.push_back(i);
        if (unfixed.size() != 1) return true;
        size_t u = unfixed.front();
        if (ds.size(scope[u]) > kEnumCap) return true;
        for (Val v : ds.values(scope[u])) {
            bool forbidden = false;
            for (const auto& t : ct().tuples) {
                bool match = t[u] == kStar || t[u] == v;
                for (size_t j = 0; match && j < scope.size(); ++j)
                    if (j != u && t[j] != kStar && t[j] != ds.value(scope[j]))
                        match = false;
                if (match) {
                    forbidden = true;
                    break;
                }
            }
            if (forbidden && !ds.remove(scope[u], v)) return false;
        }
        return true;
    }

    std::vector<std::unordered_map<Val, size_t>> residue_;
};

// ---------------------------------------------------------------------------
// Regular / Mdd: forward-backward reachability over the layered unrolling;
// removes values carried by no live edge. Exact for fixed scopes too.
// ---------------------------------------------------------------------------
struct LabeledEdge {
    int from;
    Val symbol;
    int to;
};

class LayeredGraphProp : public Propagator {
public:
    LayeredGraphProp(int ctid, std::vector<VarId> scope, std::vector<LabeledEdge> edges,
                     std::vector<int> starts, std::vector<int> finals, int num_states)
        : Propagator(ctid, scope, Strength::Gac),
          scope_(std::move(scope)),
          edges_(std::move(edges)),
          starts_(std::move(starts)),
          finals_(std::move(finals)),
          num_states_(num_states) {}

    bool propagate(DomainStore& ds) override {
        size_t n = scope_.size();
        std::vector<std::vector<char>> fwd(n + 1, std::vector<char>(
                                                      static_cast<size_t>(num_states_), 0));
        for (int s : starts_) fwd[0][static_cast<size_t>(s)] = 1;
        for (size_t i = 0; i < n; ++i) {
            bool any = false;
            for (const auto& e : edges_)
                if (fwd[i][static_cast<size_t>(e.from)] &&
                    ds.contains(scope_[i], e.symbol)) {
                    fwd[i + 1][static_cast<size_t>(e.to)] = 1;
                    any = true;
                }
            if (!any) return false;
        }
        std::vector<std::vector<char>> bwd(n + 1, std::vector<char>(
                                                      static_cast<size_t>(num_states_), 0));
        bool accepting = false;
        for (int f : finals_)
            if (fwd[n][static_cast<size_t>(f)]) {
                bwd[n][static_cast<size_t>(f)] = 1;
                accepting = true;
            }
        if (!accepting) return false;
        for (size_t i = n; i-- > 0;)
            for (const auto& e : edges_)
                if (bwd[i + 1][static_cast<size_t>(e.to)] &&
                    ds.contains(scope_[i], e.symbol))
                    bwd[i][static_cast<size_t>(e.from)] = 1;
        for (size_t i = 0; i < n; ++i) {
            if (ds.size(scope_[i]) > kEnumCap) continue;
            std::set<Val> supported;
            for (const auto& e : edges_)
                if (fwd[i][static_cast<size_t>(e.from)] &&
                    bwd[i + 1][static_cast<size_t>(e.to)] &&
                    ds.contains(scope_[i], e.symbol))
                    supported.insert(e.symbol);
            for (Val v : ds.values(scope_[i]))
                if (!supported.count(v) && !ds.remove(scope_[i], v)) return false;
        }
        return true;
    }

private:
    std::vector<VarId> scope_;
    std::vector<LabeledEdge> edges_;
    std::vector<int> starts_;
    std::vector<int> finals_;
    int num_states_;
};

std::unique_ptr<Propagator> make_regular(int ctid, const RegularCt& c) {
    std::unordered_map<std::string, int> id;
    auto intern = [&](const std::string& s) {
        auto [it, inserted] = id.emplace(s, static_cast<int>(id.size()));
        (void)inserted;
        return it->second;
    };
    std::vector<LabeledEdge> edges;
    for (const auto& t : c.transitions)
        edges.push_back({intern(t.from), t.symbol, intern(t.to)});
    std::vector<int> starts = {intern(c.start)};
    std::vector<int> finals;
    for (const auto& f : c.finals) finals.push_back(intern(f));
    return std::make_unique<LayeredGraphProp>(ctid, c.scope, std::move(edges),
                                              std::move(starts), std::move(finals),
                                              static_cast<int>(id.size()));
}

std::unique_ptr<Propagator> make_mdd(int ctid, const MddCt& c) {
    std::unordered_map<std::string, int> id;
    auto intern = [&](const std::string& s) {
        auto [it, inserted] = id.emplace(s, static_cast<int>(id.size()));
        (void)inserted;
        return it->second;
    };
    std::vector<LabeledEdge> edges;
    std::set<std::string> sources, targets;
    for (const auto& e : c.edges) {
        edges.push_back({intern(e.from), e.symbol, intern(e.to)});
        sources.insert(e.from);
        targets.insert(e.to);
    }
    std::vector<int> starts, finals;
    for (const auto& s : sources)
        if (!targets.count(s)) starts.push_back(id[s]);
    for (const auto& t : targets)
        if (!sources.count(t)) finals.push_back(id[t]);
    return std::make_unique<LayeredGraphProp>(ctid, c.scope, std::move(edges),
                                              std::move(starts), std::move(finals),
                                              static_cast<int>(id.size()));
}

// ---------------------------------------------------------------------------
// AllDifferent: fixed-value pruning plus Hall-interval bounds filtering.
// ---------------------------------------------------------------------------
class AllDifferentProp : public PayloadProp<AllDifferentCt> {
public:
    AllDifferentProp(int ctid, const AllDifferentCt& c)
        : PayloadProp(ctid, c, Strength::Bounds) {
        std::set<VarId> seen;
        for (VarId v : ct().scope)
            if (!seen.insert(v).second) duplicates_.push_back(v);
    }

    bool propagate(DomainStore& ds) override {
        const auto& c = ct();
        // A variable listed twice can only take an excepted value.
        for (VarId v : duplicates_) {
            if (c.except.empty()) return false;
            if (ds.size(v) <= kEnumCap)
                for (Val x : ds.values(v))
                    if (std::find(c.except.begin(), c.except.end(), x) ==
                            c.except.end() &&
                        !ds.remove(v, x))
                        return false;
        }
        for (size_t i = 0; i < c.scope.size(); ++i) {
            if (!ds.fixed(c.scope[i])) continue;
            Val v = ds.value(c.scope[i]);
            if (std::find(c.except.begin(), c.except.end(), v) != c.except.end())
                continue;
            for (size_t j = 0; j < c.scope.size(); ++j)
                if (j != i && c.scope[j] != c.scope[i] && !ds.remove(c.scope[j], v))
                    return false;
        }
        if (!c.except.empty()) return true;
        return hall_intervals(ds);
    }

private:
    bool hall_intervals(DomainStore& ds) {
        const auto& scope = ct().scope;
        size_t n = scope.size();
        std::vector<Val> lo(n), hi(n);
        for (size_t i = 0; i < n; ++i) {
            lo[i] = ds.min(scope[i]);
            hi[i] = ds.max(scope[i]);
        }
        for (size_t ai = 0; ai < n; ++ai) {
            for (size_t bi = 0; bi < n; ++bi) {
                Val a = lo[ai], b = hi[bi];
                if (a > b) continue;
                Val width;
                if (__builtin_sub_overflow(b, a, &width) ||
                    width >= static_cast<Val>(n))
                    continue;  // wider than the scope: nothing to conclude
                width += 1;
                Val inside = 0;
                for (size_t i = 0; i < n; ++i)
                    if (lo[i] >= a && hi[i] <= b) ++inside;
                if (inside > width) return false;
                if (inside != width) continue;
                // [a, b] is saturated: other variables avoid its endpoints.
                for (size_t i = 0; i < n; ++i) {
                    if (lo[i] >= a && hi[i] <= b) continue;
                    if (lo[i] >= a && lo[i] <= b && !ds.remove_below(scope[i], b + 1))
                        return false;
                    if (hi[i] >= a && hi[i] <= b && !ds.remove_above(scope[i], a - 1))
                        return false;
                }
            }
        }
        return true;
    }

    std::vector<VarId> duplicates_;
};

// ---------------------------------------------------------------------------
// AllEqual: shared bounds; any fixed variable fixes the rest.
// ---------------------------------------------------------------------------
class AllEqualProp : public PayloadProp<AllEqualCt> {
public:
    AllEqualProp(int ctid, const AllEqualCt& c) : PayloadProp(ctid, c, Strength::Bounds) {}

    bool propagate(DomainStore& ds) override {
        const auto& scope = ct().scope;
        if (scope.empty()) return true;
        Val glo = ds.min(scope[0]), ghi = ds.max(scope[0]);
        for (VarId v : scope) {
            glo = std::max(glo, ds.min(v));
            ghi = std::min(ghi, ds.max(v));
        }
        for (VarId v : scope)
            if (!ds.remove_below(v, glo) || !ds.remove_above(v, ghi)) return false;
        for (VarId v : scope)
            if (ds.fixed(v)) {
                Val x = ds.value(v);
                for (VarId w : scope)
                    if (!ds.assign(w, x)) return false;
                return true;
            }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Ordered: chain bounds with optional separations.
// ---------------------------------------------------------------------------
class OrderedProp : public PayloadProp<OrderedCt> {
public:
    OrderedProp(int ctid, const OrderedCt& c) : PayloadProp(ctid, c, Strength::Bounds) {}

    bool propagate(DomainStore& ds) override {
        const auto& c = ct();
        size_t n = c.scope.size();
        if (n < 2) return true;
        bool asc = c.rel == RelOp::Lt || c.rel == RelOp::Le;
        Val extra = (c.rel == RelOp::Lt || c.rel == RelOp::Gt) ? 1 : 0;
        // Neighbour constraint: x[i] + L[i] rel x[i+1]. Ascending variants
        // mean x[i+1] >= x[i] + L[i] + extra; descending ones mean
        // x[i+1] <= x[i] + L[i] - extra.
        auto filter_pair = [&](size_t i) -> bool {
            Val len = c.lengths.empty() ? 0 : c.lengths[i];
            Val shift;
            if (asc ? __builtin_add_overflow(len, extra, &shift)
                    : __builtin_sub_overflow(len, extra, &shift))
                return true;
            VarId x = c.scope[i], y = c.scope[i + 1];
            Val b;
            if (asc) {
                if (!__builtin_add_overflow(ds.min(x), shift, &b) &&
                    !ds.remove_below(y, b))
                    return false;
                if (!__builtin_sub_overflow(ds.max(y), shift, &b) &&
                    !ds.remove_above(x, b))
                    return false;
            } else {
                if (!__builtin_add_overflow(ds.max(x), shift, &b) &&
                    !ds.remove_above(y, b))
                    return false;
                if (!__builtin_sub_overflow(ds.min(y), shift, &b) &&
                    !ds.remove_below(x, b))
                    return false;
            }
            return true;
        };
        for (size_t i = 0; i + 1 < n; ++i)
            if (!filter_pair(i)) return false;
        for (size_t i = n - 1; i-- > 0;)
            if (!filter_pair(i)) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Lex: prefix walk; bounds coupling at the first undecided position.
// ---------------------------------------------------------------------------
class LexProp : public PayloadProp<LexCt> {
public:
    LexProp(int ctid, const LexCt& c) : PayloadProp(ctid, c, Strength::Fc) {
        const auto& lists = ct().lists;
        for (size_t i = 0; i + 1 < lists.size(); ++i)
            pairs_.push_back({lists[i], lists[i + 1]});
        if (ct().matrix && !lists.empty()) {
            size_t cols = lists.front().size();
            for (size_t j = 0; j + 1 < cols; ++j) {
                std::vector<VarId> c1, c2;
                for (const auto& row : lists) {
                    c1.push_back(row[j]);
                    c2.push_back(row[j + 1]);
                }
                pairs_.push_back({std::move(c1), std::move(c2)});
            }
        }
    }

    bool propagate(DomainStore& ds) override {
        bool strict = ct().rel == RelOp::Lt || ct().rel == RelOp::Gt;
        bool fwd = ct().rel == RelOp::Lt || ct().rel == RelOp::Le;
        for (const auto& [a, b] : pairs_) {
            const auto& x = fwd ? a : b;
            const auto& y = fwd ? b : a;
            // Enforce x <=lex y (strict when required).
            size_t p = 0;
            while (p < x.size() && ds.fixed(x[p]) && ds.fixed(y[p]) &&
                   ds.value(x[p]) == ds.value(y[p]))
                ++p;
            if (p == x.size()) {
                if (strict) return false;  // equal vectors
                continue;
            }
            if (ds.fixed(x[p]) && ds.fixed(y[p]) && ds.value(x[p]) < ds.value(y[p]))
                continue;  // already strictly ordered here
            bool last = p + 1 == x.size();
            Val gap = (strict && last) ? 1 : 0;
            Val xcap, yfloor;
            if (!__builtin_sub_overflow(ds.max(y[p]), gap, &xcap) &&
                !ds.remove_above(x[p], xcap))
                return false;
            if (!__builtin_add_overflow(ds.min(x[p]), gap, &yfloor) &&
                !ds.remove_below(y[p], yfloor))
                return false;
        }
        return true;
    }

private:
    std::vector<std::pair<std::vector<VarId>, std::vector<VarId>>> pairs_;
};

// ---------------------------------------------------------------------------
// Precedence: occurrences of values[j] are impossible at or before the
// earliest feasible position of values[j-1].
// ---------------------------------------------------------------------------
class PrecedenceProp : public PayloadProp<PrecedenceCt> {
public:
    PrecedenceProp(int ctid, const PrecedenceCt& c) : PayloadProp(ctid, c, Strength::Fc) {}

    bool propagate(DomainStore& ds) override {
        const auto& c = ct();
        constexpr std::ptrdiff_t kNowhere = -2;
        std::ptrdiff_t prev_earliest = -1;  // j = 0 is unconstrained
        for (size_t j = 0; j < c.values.size(); ++j) {
            Val v = c.values[j];
            if (j > 0) {
                std::ptrdiff_t limit =
                    prev_earliest == kNowhere
                        ? static_cast<std::ptrdiff_t>(c.scope.size()) - 1
                        : prev_earliest;
                for (std::ptrdiff_t p = 0; p <= limit; ++p)
                    if (!ds.remove(c.scope[static_cast<size_t>(p)], v)) return false;
            }
            prev_earliest = kNowhere;
            for (size_t p = 0; p < c.scope.size(); ++p)
                if (ds.contains(c.scope[p], v)) {
                    prev_earliest = static_cast<std::ptrdiff_t>(p);
                    break;
                }
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Sum: bounds filtering through the linear helpers; exact at leaves.
// ---------------------------------------------------------------------------
class SumProp : public PayloadProp<SumCt> {
public:
    SumProp(int ctid, const SumCt& c) : PayloadProp(ctid, c, Strength::Bounds) {
        for (size_t i = 0; i < ct().scope.size(); ++i)
            terms_.push_back({ct().coeffs[i], ct().scope[i]});
        if (const auto* y = std::get_if<Condition::VarRhs>(&ct().cond.rhs))
            terms_.push_back({-1, y->var});  // sum - rhs compared against 0
    }

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const Condition& cond = ct().cond;
        Val k = 0;  // VarRhs is folded into terms_, comparing against 0
        if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs)) k = v->value;
        switch (cond.op) {
            case CondOp::Lt:
                return k > INT64_MIN && filter_le(ds, k - 1);
            case CondOp::Le:
                return filter_le(ds, k);
            case CondOp::Gt:
                return k < INT64_MAX && filter_ge(ds, k + 1);
            case CondOp::Ge:
                return filter_ge(ds, k);
            case CondOp::Eq:
                return filter_le(ds, k) && filter_ge(ds, k);
            case CondOp::Ne:
                return filter_ne(ds, k);
            case CondOp::In:
            case CondOp::NotIn: {
                Val lo, hi;
                if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
                    lo = iv->lo;
                    hi = iv->hi;
                } else {
                    const auto& s = std::get<Condition::SetRhs>(cond.rhs).values;
                    if (s.empty()) return cond.op == CondOp::NotIn;
                    lo = s.front();
                    hi = s.back();
                }
                if (cond.op == CondOp::In)
                    return filter_ge(ds, lo) && filter_le(ds, hi);
                return true;  // complement needs value-level reasoning; leaf-checked
            }
        }
        return true;
    }

private:
    bool filter_le(DomainStore& ds, Val bound) {
        return detail::filter_linear_le(ds, terms_, bound);
    }
    bool filter_ge(DomainStore& ds, Val bound) {
        return detail::filter_linear_ge(ds, terms_, bound);
    }

    // Disequality only bites when a single variable is undecided.
    bool filter_ne(DomainStore& ds, Val k) {
        std::optional<size_t> open;
        for (size_t i = 0; i < terms_.size(); ++i)
            if (!ds.fixed(terms_[i].var)) {
                if (open) return true;
                open = i;
            }
        if (!open) return true;  // fully fixed scopes never reach here
        Val rest = 0;
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (i == *open) continue;
            Val m;
            if (!detail_mul(terms_[i].coeff, ds.value(terms_[i].var), m) ||
                !detail_add(rest, m, rest))
                return true;
        }
        Val c = terms_[*open].coeff;
        if (c == 0) return rest != k;
        Val need;
        if (__builtin_sub_overflow(k, rest, &need)) return true;
        if (need % c != 0) return true;
        return ds.remove(terms_[*open].var, need / c);
    }

    static bool detail_add(Val a, Val b, Val& out) {
        return !__builtin_add_overflow(a, b, &out);
    }
    static bool detail_mul(Val a, Val b, Val& out) {
        return !__builtin_mul_overflow(a, b, &out);
    }

    std::vector<LinTerm> terms_;
};

// ---------------------------------------------------------------------------
// Count: tallies of certain/possible members drive bounds and forcing.
// ---------------------------------------------------------------------------
class CountProp : public PayloadProp<CountCt> {
public:
    CountProp(int ctid, const CountCt& c) : PayloadProp(ctid, c, Strength::Bounds) {}

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const auto& c = ct();
        Val certain = 0, possible = 0;
        std::vector<char> intersects(c.scope.size(), 0), subset(c.scope.size(), 0);
        for (size_t i = 0; i < c.scope.size(); ++i) {
            VarId v = c.scope[i];
            bool inter = false;
            for (Val x : c.values)
                if (ds.contains(v, x)) {
                    inter = true;
                    break;
                }
            intersects[i] = inter;
            if (!inter) continue;
            ++possible;
            bool sub = ds.size(v) <= static_cast<Val>(c.values.size());
            if (sub)
                for (Val x : ds.values(v))
                    if (std::find(c.values.begin(), c.values.end(), x) ==
                        c.values.end()) {
                        sub = false;
                        break;
                    }
            subset[i] = sub;
            if (sub) ++certain;
        }

        const Condition& cond = c.cond;
        if (const auto* y = std::get_if<Condition::VarRhs>(&cond.rhs)) {
            switch (cond.op) {
                case CondOp::Eq:
                    if (!ds.remove_below(y->var, certain) ||
                        !ds.remove_above(y->var, possible))
                        return false;
                    break;
                case CondOp::Le:
                case CondOp::Lt:
                    if (!ds.remove_below(y->var,
                                         certain + (cond.op == CondOp::Lt ? 1 : 0)))
                        return false;
                    break;
                case CondOp::Ge:
                case CondOp::Gt:
                    if (!ds.remove_above(y->var,
                                         possible - (cond.op == CondOp::Gt ? 1 : 0)))
                        return false;
                    break;
                default:
                    break;
            }
            if (!ds.fixed(y->var)) return true;
            return apply_value(ds, cond.op, ds.value(y->var), certain, possible,
                               intersects, subset);
        }
        if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs))
            return apply_value(ds, cond.op, v->value, certain, possible, intersects,
                               subset);
        Val lo, hi;
        if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
            lo = iv->lo;
            hi = iv->hi;
        } else {
            const auto& s = std::get<Condition::SetRhs>(cond.rhs).values;
            if (s.empty()) return cond.op == CondOp::NotIn;
            lo = s.front();
            hi = s.back();
        }
        if (cond.op == CondOp::In)
            return apply_value(ds, CondOp::Ge, lo, certain, possible, intersects,
                               subset) &&
                   apply_value(ds, CondOp::Le, hi, certain, possible, intersects,
                               subset);
        return true;  // NotIn: leaf-checked
    }

private:
    bool force_out(DomainStore& ds, const std::vector<char>& intersects,
                   const std::vector<char>& subset) {
        const auto& c = ct();
        for (size_t i = 0; i < c.scope.size(); ++i) {
            if (!intersects[i] || subset[i]) continue;
            for (Val x : c.values)
                if (!ds.remove(c.scope[i], x)) return false;
        }
        return true;
    }

    bool force_in(DomainStore& ds, const std::vector<char>& intersects,
                  const std::vector<char>& subset) {
        const auto& c = ct();
        for (size_t i = 0; i < c.scope.size(); ++i) {
            if (!intersects[i] || subset[i]) continue;
            VarId v = c.scope[i];
            if (ds.size(v) > kEnumCap) continue;
            for (Val x : ds.values(v))
                if (std::find(c.values.begin(), c.values.end(), x) == c.values.end() &&
                    !ds.remove(v, x))
                    return false;
        }
        return true;
    }

    bool apply_value(DomainStore& ds, CondOp op, Val k, Val certain, Val possible,
                     const std::vector<char>& intersects,
                     const std::vector<char>& subset) {
        switch (op) {
            case CondOp::Lt:
                return k > INT64_MIN && apply_value(ds, CondOp::Le, k - 1, certain,
                                                    possible, intersects, subset);
            case CondOp::Gt:
                return k < INT64_MAX && apply_value(ds, CondOp::Ge, k + 1, certain,
                                                    possible, intersects, subset);
            case CondOp::Le:
                if (certain > k) return false;
                if (certain == k) return force_out(ds, intersects, subset);
                return true;
            case CondOp::Ge:
                if (possible < k) return false;
                if (possible == k) return force_in(ds, intersects, subset);
                return true;
            case CondOp::Eq:
                return apply_value(ds, CondOp::Le, k, certain, possible, intersects,
                                   subset) &&
                       apply_value(ds, CondOp::Ge, k, certain, possible, intersects,
                                   subset);
            case CondOp::Ne:
                return certain != possible || certain != k;
            default:
                return true;
        }
    }
};

// ---------------------------------------------------------------------------
// NValues: coarse feasibility plus the forced-all-equal special case.
// ---------------------------------------------------------------------------
class NValuesProp : public PayloadProp<NValuesCt> {
public:
    NValuesProp(int ctid, const NValuesCt& c)
        : PayloadProp(ctid, c, Strength::CheckOnly) {}

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const auto& c = ct();
        Val n = static_cast<Val>(c.scope.size());
        Val cap = n;
        std::set<Val> pool;
        bool pool_exact = true;
        for (VarId v : c.scope) {
            if (ds.size(v) > kEnumCap) {
                pool_exact = false;
                break;
            }
            for (Val x : ds.values(v)) pool.insert(x);
        }
        if (pool_exact) cap = std::min<Val>(n, static_cast<Val>(pool.size()));
        Val floor = n == 0 ? 0 : 1;

        const Condition& cond = c.cond;
        if (const auto* y = std::get_if<Condition::VarRhs>(&cond.rhs)) {
            if (cond.op == CondOp::Eq &&
                (!ds.remove_below(y->var, floor) || !ds.remove_above(y->var, cap)))
                return false;
            if (!ds.fixed(y->var)) return true;
            return feasible(ds, cond.op, ds.value(y->var), floor, cap);
        }
        if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs))
            return feasible(ds, cond.op, v->value, floor, cap);
        if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
            if (cond.op == CondOp::In && (iv->hi < floor || iv->lo > cap)) return false;
            return true;
        }
        return true;
    }

private:
    bool feasible(DomainStore& ds, CondOp op, Val k, Val floor, Val cap) {
        switch (op) {
            case CondOp::Lt:
                return k > INT64_MIN && feasible(ds, CondOp::Le, k - 1, floor, cap);
            case CondOp::Gt:
                return k < INT64_MAX && feasible(ds, CondOp::Ge, k + 1, floor, cap);
            case CondOp::Le:
                if (k < floor) return false;
                if (k == 1) return all_equal(ds);
                return true;
            case CondOp::Ge:
                return k <= cap;
            case CondOp::Eq:
                if (k < floor || k > cap) return false;
                if (k == 1) return all_equal(ds);
                return true;
            default:
                return true;
        }
    }

    bool all_equal(DomainStore& ds) {
        const auto& scope = ct().scope;
        Val glo = ds.min(scope[0]), ghi = ds.max(scope[0]);
        for (VarId v : scope) {
            glo = std::max(glo, ds.min(v));
            ghi = std::min(ghi, ds.max(v));
        }
        for (VarId v : scope)
            if (!ds.remove_below(v, glo) || !ds.remove_above(v, ghi)) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Maximum: bounds in both directions; when only one variable can reach a
// required level it is forced up.
// ---------------------------------------------------------------------------
class MaximumProp : public PayloadProp<MaximumCt> {
public:
    MaximumProp(int ctid, const MaximumCt& c) : PayloadProp(ctid, c, Strength::Bounds) {}

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const auto& c = ct();
        Val max_lb = ds.min(c.scope[0]), max_ub = ds.max(c.scope[0]);
        for (VarId v : c.scope) {
            max_lb = std::max(max_lb, ds.min(v));
            max_ub = std::max(max_ub, ds.max(v));
        }
        const Condition& cond = c.cond;
        if (const auto* y = std::get_if<Condition::VarRhs>(&cond.rhs)) {
            switch (cond.op) {
                case CondOp::Le:
                case CondOp::Lt: {
                    Val gap = cond.op == CondOp::Lt ? 1 : 0;
                    Val yfloor, xcap;
                    if (!__builtin_add_overflow(max_lb, gap, &yfloor) &&
                        !ds.remove_below(y->var, yfloor))
                        return false;
                    if (!__builtin_sub_overflow(ds.max(y->var), gap, &xcap))
                        for (VarId v : c.scope)
                            if (!ds.remove_above(v, xcap)) return false;
                    return true;
                }
                case CondOp::Ge:
                case CondOp::Gt: {
                    Val gap = cond.op == CondOp::Gt ? 1 : 0;
                    Val ycap;
                    if (!__builtin_sub_overflow(max_ub, gap, &ycap) &&
                        !ds.remove_above(y->var, ycap))
                        return false;
                    return true;
                }
                case CondOp::Eq: {
                    if (!ds.remove_below(y->var, max_lb)) return false;
                    if (!ds.remove_above(y->var, max_ub)) return false;
                    for (VarId v : c.scope)
                        if (!ds.remove_above(v, ds.max(y->var))) return false;
                    if (ds.fixed(y->var)) return reach_at_least(ds, ds.value(y->var));
                    return true;
                }
                default:
                    return true;
            }
        }
        Val k;
        if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs)) {
            k = v->value;
        } else if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
            if (cond.op != CondOp::In) return true;
            return apply(ds, CondOp::Le, iv->hi) && apply(ds, CondOp::Ge, iv->lo);
        } else {
            const auto& s = std::get<Condition::SetRhs>(cond.rhs).values;
            if (cond.op != CondOp::In) return true;
            if (s.empty()) return false;
            return apply(ds, CondOp::Le, s.back()) && apply(ds, CondOp::Ge, s.front());
        }
        return apply(ds, cond.op, k);
    }

private:
    bool apply(DomainStore& ds, CondOp op, Val k) {
        const auto& c = ct();
        switch (op) {
            case CondOp::Lt:
                return k > INT64_MIN && apply(ds, CondOp::Le, k - 1);
            case CondOp::Gt:
                return k < INT64_MAX && apply(ds, CondOp::Ge, k + 1);
            case CondOp::Le:
                for (VarId v : c.scope)
                    if (!ds.remove_above(v, k)) return false;
                return true;
            case CondOp::Ge:
                return reach_at_least(ds, k);
            case CondOp::Eq:
                return apply(ds, CondOp::Le, k) && apply(ds, CondOp::Ge, k);
            case CondOp::Ne: {
                Val lb = ds.min(c.scope[0]), ub = ds.max(c.scope[0]);
                for (VarId v : c.scope) {
                    lb = std::max(lb, ds.min(v));
                    ub = std::max(ub, ds.max(v));
                }
                return !(lb == ub && lb == k);
            }
            default:
                return true;
        }
    }

    // The maximum must be >= k: some variable has to reach k.
    bool reach_at_least(DomainStore& ds, Val k) {
        const auto& c = ct();
        std::optional<VarId> only;
        for (VarId v : c.scope)
            if (ds.max(v) >= k) {
                if (only) return true;
                only = v;
            }
        if (!only) return false;
        return ds.remove_below(*only, k);
    }
};

// ---------------------------------------------------------------------------
// Minimum: the mirror image of Maximum, written out explicitly.
// ---------------------------------------------------------------------------
class MinimumProp : public PayloadProp<MinimumCt> {
public:
    MinimumProp(int ctid, const MinimumCt& c) : PayloadProp(ctid, c, Strength::Bounds) {}

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const auto& c = ct();
        Val min_lb = ds.min(c.scope[0]), min_ub = ds.max(c.scope[0]);
        for (VarId v : c.scope) {
            min_lb = std::min(min_lb, ds.min(v));
            min_ub = std::min(min_ub, ds.max(v));
        }
        const Condition& cond = c.cond;
        if (const auto* y = std::get_if<Condition::VarRhs>(&cond.rhs)) {
            switch (cond.op) {
                case CondOp::Ge:
                case CondOp::Gt: {
                    // min >= y (or >): y <= min_ub - gap; every var >= min(y) + gap.
                    Val gap = cond.op == CondOp::Gt ? 1 : 0;
                    Val ycap, xfloor;
                    if (!__builtin_sub_overflow(min_ub, gap, &ycap) &&
                        !ds.remove_above(y->var, ycap))
                        return false;
                    if (!__builtin_add_overflow(ds.min(y->var), gap, &xfloor))
                        for (VarId v : c.scope)
                            if (!ds.remove_below(v, xfloor)) return false;
                    return true;
                }
                case CondOp::Le:
                case CondOp::Lt: {
                    Val gap = cond.op == CondOp::Lt ? 1 : 0;
                    Val yfloor;
                    if (!__builtin_add_overflow(min_lb, gap, &yfloor) &&
                        !ds.remove_below(y->var, yfloor))
                        return false;
                    return true;
                }
                case CondOp::Eq: {
                    if (!ds.remove_below(y->var, min_lb)) return false;
                    if (!ds.remove_above(y->var, min_ub)) return false;
                    for (VarId v : c.scope)
                        if (!ds.remove_below(v, ds.min(y->var))) return false;
                    if (ds.fixed(y->var)) return reach_at_most(ds, ds.value(y->var));
                    return true;
                }
                default:
                    return true;
            }
        }
        Val k;
        if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs)) {
            k = v->value;
        } else if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
            if (cond.op != CondOp::In) return true;
            return apply(ds, CondOp::Ge, iv->lo) && apply(ds, CondOp::Le, iv->hi);
        } else {
            const auto& s = std::get<Condition::SetRhs>(cond.rhs).values;
            if (cond.op != CondOp::In) return true;
            if (s.empty()) return false;
            return apply(ds, CondOp::Ge, s.front()) && apply(ds, CondOp::Le, s.back());
        }
        return apply(ds, cond.op, k);
    }

private:
    bool apply(DomainStore& ds, CondOp op, Val k) {
        const auto& c = ct();
        switch (op) {
            case CondOp::Gt:
                return k < INT64_MAX && apply(ds, CondOp::Ge, k + 1);
            case CondOp::Lt:
                return k > INT64_MIN && apply(ds, CondOp::Le, k - 1);
            case CondOp::Ge:
                for (VarId v : c.scope)
                    if (!ds.remove_below(v, k)) return false;
                return true;
            case CondOp::Le:
                return reach_at_most(ds, k);
            case CondOp::Eq:
                return apply(ds, CondOp::Ge, k) && apply(ds, CondOp::Le, k);
            case CondOp::Ne: {
                Val lb = ds.min(c.scope[0]), ub = ds.max(c.scope[0]);
                for (VarId v : c.scope) {
                    lb = std::min(lb, ds.min(v));
                    ub = std::min(ub, ds.max(v));
                }
                return !(lb == ub && lb == k);
            }
            default:
                return true;
        }
    }

    // The minimum must be <= k: some variable has to go down to k.
    bool reach_at_most(DomainStore& ds, Val k) {
        const auto& c = ct();
        std::optional<VarId> only;
        for (VarId v : c.scope)
            if (ds.min(v) <= k) {
                if (only) return true;
                only = v;
            }
        if (!only) return false;
        return ds.remove_above(*only, k);
    }
};

// ---------------------------------------------------------------------------
// Element: index range pruning, per-index feasibility, and unary filtering
// of the selected cell once the index is fixed.
// ---------------------------------------------------------------------------
class ElementProp : public PayloadProp<ElementCt> {
public:
    ElementProp(int ctid, const ElementCt& c) : PayloadProp(ctid, c, Strength::Fc) {}

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const auto& c = ct();
        if (!ds.remove_below(c.index, 0)) return false;
        if (!ds.remove_above(c.index, static_cast<Val>(c.list.size()) - 1)) return false;
        if (ds.size(c.index) <= kEnumCap)
            for (Val i : ds.values(c.index))
                if (!may_satisfy(ds, c.list[static_cast<size_t>(i)]) &&
                    !ds.remove(c.index, i))
                    return false;
        if (ds.fixed(c.index)) {
            const Term& t = c.list[static_cast<size_t>(ds.value(c.index))];
            if (t.is_var && !filter_selected(ds, t.var)) return false;
        }
        return true;
    }

private:
    Val term_min(DomainStore& ds, const Term& t) const {
        return t.is_var ? ds.min(t.var) : t.value;
    }
    Val term_max(DomainStore& ds, const Term& t) const {
        return t.is_var ? ds.max(t.var) : t.value;
    }
    bool term_contains(DomainStore& ds, const Term& t, Val v) const {
        return t.is_var ? ds.contains(t.var, v) : t.value == v;
    }

    // Can list[i] still satisfy the condition? Conservative: never answers
    // no when the true answer is yes.
    bool may_satisfy(DomainStore& ds, const Term& t) {
        const Condition& cond = ct().cond;
        Val tlo = term_min(ds, t), thi = term_max(ds, t);
        if (const auto* y = std::get_if<Condition::VarRhs>(&cond.rhs)) {
            Val ylo = ds.min(y->var), yhi = ds.max(y->var);
            switch (cond.op) {
                case CondOp::Lt: return tlo < yhi;
                case CondOp::Le: return tlo <= yhi;
                case CondOp::Gt: return thi > ylo;
                case CondOp::Ge: return thi >= ylo;
                case CondOp::Eq: return tlo <= yhi && thi >= ylo;
                case CondOp::Ne: return !(tlo == thi && ylo == yhi && tlo == ylo);
                default: return true;
            }
        }
        if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs)) {
            switch (cond.op) {
                case CondOp::Lt: return tlo < v->value;
                case CondOp::Le: return tlo <= v->value;
                case CondOp::Gt: return thi > v->value;
                case CondOp::Ge: return thi >= v->value;
                case CondOp::Eq: return term_contains(ds, t, v->value);
                case CondOp::Ne: return !(tlo == thi && tlo == v->value);
                default: return true;
            }
        }
        if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
            bool overlap = thi >= iv->lo && tlo <= iv->hi;
            if (cond.op == CondOp::In) return overlap;
            return !(tlo >= iv->lo && thi <= iv->hi);  // a subset cannot avoid it
        }
        const auto& s = std::get<Condition::SetRhs>(cond.rhs).values;
        if (cond.op == CondOp::In) {
            for (Val x : s)
                if (term_contains(ds, t, x)) return true;
            return false;
        }
        if (!t.is_var) return std::find(s.begin(), s.end(), t.value) == s.end();
        if (ds.size(t.var) > static_cast<Val>(s.size())) return true;
        for (Val x : ds.values(t.var))
            if (std::find(s.begin(), s.end(), x) == s.end()) return true;
        return false;
    }

    // The selected cell is variable x: push the condition into its domain.
    bool filter_selected(DomainStore& ds, VarId x) {
        const Condition& cond = ct().cond;
        if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs)) {
            switch (cond.op) {
                case CondOp::Lt:
                    return v->value > INT64_MIN && ds.remove_above(x, v->value - 1);
                case CondOp::Le: return ds.remove_above(x, v->value);
                case CondOp::Gt:
                    return v->value < INT64_MAX && ds.remove_below(x, v->value + 1);
                case CondOp::Ge: return ds.remove_below(x, v->value);
                case CondOp::Eq: return ds.assign(x, v->value);
                case CondOp::Ne: return ds.remove(x, v->value);
                default: break;
            }
        }
        if (const auto* y = std::get_if<Condition::VarRhs>(&cond.rhs)) {
            switch (cond.op) {
                case CondOp::Lt:
                    return ds.remove_above(x, ds.max(y->var) - 1) &&
                           ds.remove_below(y->var, ds.min(x) + 1);
                case CondOp::Le:
                    return ds.remove_above(x, ds.max(y->var)) &&
                           ds.remove_below(y->var, ds.min(x));
                case CondOp::Gt:
                    return ds.remove_below(x, ds.min(y->var) + 1) &&
                           ds.remove_above(y->var, ds.max(x) - 1);
                case CondOp::Ge:
                    return ds.remove_below(x, ds.min(y->var)) &&
                           ds.remove_above(y->var, ds.max(x));
                case CondOp::Eq: {
                    if (!ds.remove_above(x, ds.max(y->var)) ||
                        !ds.remove_below(x, ds.min(y->var)) ||
                        !ds.remove_above(y->var, ds.max(x)) ||
                        !ds.remove_below(y->var, ds.min(x)))
                        return false;
                    if (ds.size(x) <= kEnumCap)
                        for (Val v : ds.values(x))
                            if (!ds.contains(y->var, v) && !ds.remove(x, v))
                                return false;
                    if (ds.size(y->var) <= kEnumCap)
                        for (Val v : ds.values(y->var))
                            if (!ds.contains(x, v) && !ds.remove(y->var, v))
                                return false;
                    return true;
                }
                case CondOp::Ne:
                    if (ds.fixed(y->var) && !ds.remove(x, ds.value(y->var)))
                        return false;
                    if (ds.fixed(x) && !ds.remove(y->var, ds.value(x))) return false;
                    return true;
                default:
                    break;
            }
        }
        if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
            if (cond.op == CondOp::In)
                return ds.remove_below(x, iv->lo) && ds.remove_above(x, iv->hi);
            if (ds.size(x) <= kEnumCap)
                for (Val v : ds.values(x))
                    if (v >= iv->lo && v <= iv->hi && !ds.remove(x, v)) return false;
            return true;
        }
        if (const auto* sr = std::get_if<Condition::SetRhs>(&cond.rhs)) {
            const auto& s = sr->values;
            if (cond.op == CondOp::In) {
                if (ds.size(x) <= kEnumCap)
                    for (Val v : ds.values(x))
                        if (std::find(s.begin(), s.end(), v) == s.end() &&
                            !ds.remove(x, v))
                            return false;
                return true;
            }
            for (Val v : s)
                if (!ds.remove(x, v)) return false;
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Cumulative: time-table reasoning from compulsory parts for le capacities.
// ---------------------------------------------------------------------------
class CumulativeProp : public PayloadProp<CumulativeCt> {
public:
    CumulativeProp(int ctid, const CumulativeCt& c)
        : PayloadProp(ctid, c, Strength::Bounds) {}

    bool propagate(DomainStore& ds) override {
        if (scope_fixed(ds)) return holds_now(ds);
        const auto& c = ct();
        const auto* v = std::get_if<Condition::ValueRhs>(&c.cond.rhs);
        if (!v || (c.cond.op != CondOp::Le && c.cond.op != CondOp::Lt)) return true;
        if (c.cond.op == CondOp::Lt && v->value == INT64_MIN) return true;
        Val cap = v->value - (c.cond.op == CondOp::Lt ? 1 : 0);
        // A possibly-negative height could offset any apparent overload.
        for (const Term& h : c.heights)
            if (term_lo(ds, h) < 0) return true;

        size_t n = c.origins.size();
        struct Part {
            Val s, e, h;  // compulsory occupation [s, e) at height h
        };
        std::vector<Part> parts(n);
        for (size_t i = 0; i < n; ++i) {
            Val l = term_lo(ds, c.lengths[i]);
            Val h = term_lo(ds, c.heights[i]);
            parts[i] = {ds.max(c.origins[i]), ds.min(c.origins[i]) + l, h};
        }
        auto load_at = [&](Val t, size_t skip) {
            Val sum = 0;
            for (size_t q = 0; q < n; ++q)
                if (q != skip && parts[q].s < parts[q].e && parts[q].h > 0 &&
                    parts[q].s <= t && t < parts[q].e)
                    sum += parts[q].h;
            return sum;
        };
        for (size_t i = 0; i < n; ++i) {
            if (parts[i].s >= parts[i].e || parts[i].h <= 0) continue;
            if (load_at(parts[i].s, n) > cap) return false;
        }
        // Prune origin candidates against the other tasks' profile.
        for (size_t i = 0; i < n; ++i) {
            if (ds.size(c.origins[i]) > 256) continue;
            Val l = term_lo(ds, c.lengths[i]);
            Val h = term_lo(ds, c.heights[i]);
            if (l <= 0 || h <= 0) continue;
            for (Val o : ds.values(c.origins[i])) {
                bool bad = load_at(o, i) + h > cap;
                for (size_t q = 0; !bad && q < n; ++q)
                    if (q != i && parts[q].s > o && parts[q].s < o + l &&
                        load_at(parts[q].s, i) + h > cap)
                        bad = true;
                if (bad && !ds.remove(c.origins[i], o)) return false;
            }
        }
        return true;
    }

private:
    static Val term_lo(DomainStore& ds, const Term& t) {
        return t.is_var ? ds.min(t.var) : t.value;
    }
};

// ---------------------------------------------------------------------------
// Circuit: range restriction and subtour closing over the fixed prefix. The
// distinct-successors relaxation runs as a companion propagator.
// ---------------------------------------------------------------------------
class CircuitProp : public PayloadProp<CircuitCt> {
public:
    CircuitProp(int ctid, const CircuitCt& c) : PayloadProp(ctid, c, Strength::Fc) {}

    bool propagate(DomainStore& ds) override {
        const auto& scope = ct().scope;
        Val n = static_cast<Val>(scope.size());
        for (VarId v : scope)
            if (!ds.remove_below(v, 0) || !ds.remove_above(v, n - 1)) return false;
        if (scope_fixed(ds)) return holds_now(ds);
        // A closed cycle in the fixed prefix forces everyone else to self-loop.
        for (size_t start = 0; start < scope.size(); ++start) {
            if (!ds.fixed(scope[start])) continue;
            if (ds.value(scope[start]) == static_cast<Val>(start)) continue;
            std::set<size_t> chain;
            size_t cur = start;
            while (ds.fixed(scope[cur]) &&
                   ds.value(scope[cur]) != static_cast<Val>(cur) && !chain.count(cur)) {
                chain.insert(cur);
                cur = static_cast<size_t>(ds.value(scope[cur]));
            }
            if (cur != start || !chain.count(start)) continue;
            for (size_t j = 0; j < scope.size(); ++j)
                if (!chain.count(j) && !ds.assign(scope[j], static_cast<Val>(j)))
                    return false;
            return true;
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Instantiation: direct assignment.
// ---------------------------------------------------------------------------
class InstantiationProp : public PayloadProp<InstantiationCt> {
public:
    InstantiationProp(int ctid, const InstantiationCt& c)
        : PayloadProp(ctid, c, Strength::Gac) {}

    bool propagate(DomainStore& ds) override {
        const auto& c = ct();
        for (size_t i = 0; i < c.scope.size(); ++i)
            if (!ds.assign(c.scope[i], c.values[i])) return false;
        return true;
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Objective bound (branch and bound).
// ---------------------------------------------------------------------------

namespace detail {

namespace {

std::vector<VarId> objective_scope(const Objective& obj) {
    std::vector<VarId> scope;
    if (const auto* ws = std::get_if<WeightedSum>(&obj.body)) {
        scope = ws->scope;
    } else {
        collect_vars(std::get<Expr>(obj.body), scope);
    }
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    return scope;
}

}  // namespace

ObjectiveProp::ObjectiveProp(int ctid, const Objective& obj, int /*num_vars*/)
    : Propagator(ctid, objective_scope(obj), Strength::Bounds), sense_(obj.sense) {
    if (const auto* ws = std::get_if<WeightedSum>(&obj.body)) {
        linear_ = true;
        for (size_t i = 0; i < ws->scope.size(); ++i)
            terms_.push_back({ws->coeffs[i], ws->scope[i]});
    } else {
        expr_ = std::get<Expr>(obj.body);
    }
}

bool ObjectiveProp::propagate(DomainStore& ds) {
    if (!limit_) return true;
    if (linear_) {
        return sense_ == ObjectiveSense::Minimize
                   ? filter_linear_le(ds, terms_, *limit_)
                   : filter_linear_ge(ds, terms_, *limit_);
    }
    for (VarId v : watched())
        if (!ds.fixed(v)) return true;
    try {
        Val obj = eval_expr(expr_, scope_mins(ds, watched()));
        return sense_ == ObjectiveSense::Minimize ? obj <= *limit_ : obj >= *limit_;
    } catch (const EvalError&) {
        return false;
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Compilation and the fixpoint loop.
// ---------------------------------------------------------------------------

namespace {

std::vector<std::unique_ptr<Propagator>> build_propagators(int ctid,
                                                           const ConstraintKind& kind) {
    std::vector<std::unique_ptr<Propagator>> out;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, IntensionCt>) {
                out.push_back(std::make_unique<IntensionProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, ExtensionCt>) {
                out.push_back(std::make_unique<ExtensionProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, RegularCt>) {
                out.push_back(make_regular(ctid, c));
            } else if constexpr (std::is_same_v<T, MddCt>) {
                out.push_back(make_mdd(ctid, c));
            } else if constexpr (std::is_same_v<T, AllDifferentCt>) {
                out.push_back(std::make_unique<AllDifferentProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, AllDifferentMatrixCt>) {
                for (const auto& row : c.rows)
                    out.push_back(std::make_unique<AllDifferentProp>(
                        ctid, AllDifferentCt{row, {}}));
                if (!c.rows.empty())
                    for (size_t j = 0; j < c.rows.front().size(); ++j) {
                        std::vector<VarId> col;
                        for (const auto& row : c.rows) col.push_back(row[j]);
                        out.push_back(std::make_unique<AllDifferentProp>(
                            ctid, AllDifferentCt{std::move(col), {}}));
                    }
            } else if constexpr (std::is_same_v<T, AllEqualCt>) {
                out.push_back(std::make_unique<AllEqualProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, OrderedCt>) {
                out.push_back(std::make_unique<OrderedProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, LexCt>) {
                out.push_back(std::make_unique<LexProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, PrecedenceCt>) {
                out.push_back(std::make_unique<PrecedenceProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, SumCt>) {
                out.push_back(std::make_unique<SumProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, CountCt>) {
                out.push_back(std::make_unique<CountProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, NValuesCt>) {
                out.push_back(std::make_unique<NValuesProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, MaximumCt>) {
                out.push_back(std::make_unique<MaximumProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, MinimumCt>) {
                out.push_back(std::make_unique<MinimumProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, ElementCt>) {
                out.push_back(std::make_unique<ElementProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, CumulativeCt>) {
                out.push_back(std::make_unique<CumulativeProp>(ctid, c));
            } else if constexpr (std::is_same_v<T, CircuitCt>) {
                out.push_back(std::make_unique<CircuitProp>(ctid, c));
                out.push_back(std::make_unique<AllDifferentProp>(
                    ctid, AllDifferentCt{c.scope, {}}));
            } else if constexpr (std::is_same_v<T, InstantiationCt>) {
                out.push_back(std::make_unique<InstantiationProp>(ctid, c));
            } else {
                out.push_back(std::make_unique<CheckOnlyProp>(ctid, ConstraintKind{c}));
            }
        },
        kind);
    return out;
}

}  // namespace

CompiledModel compile_model(const Instance& inst) {
    CompiledModel m;
    m.inst = inst;
    m.original_vars = inst.num_vars();
    std::deque<std::pair<int, ConstraintKind>> work;
    for (const auto& ct : inst.constraints) work.push_back({ct.id, ct.kind});
    while (!work.empty()) {
        auto [ctid, kind] = std::move(work.front());
        work.pop_front();
        if (is_decomposed_kind(kind)) {
            Decomposition d =
                decompose(kind, m.inst, static_cast<int>(m.inst.variables.size()));
            for (auto& v : d.helper_vars) m.inst.variables.push_back(std::move(v));
            for (auto& part : d.parts) work.push_back({ctid, std::move(part)});
            continue;
        }
        for (auto& p : build_propagators(ctid, kind))
            m.propagators.push_back(std::move(p));
    }
    m.watchers.assign(m.inst.variables.size(), {});
    for (size_t p = 0; p < m.propagators.size(); ++p)
        for (VarId v : m.propagators[p]->watched())
            m.watchers[static_cast<size_t>(v)].push_back(static_cast<int>(p));
    return m;
}

PropagationResult propagate_to_fixpoint(CompiledModel& model, DomainStore& ds,
                                        bool seed_all,
                                        const std::vector<int>& always_run,
                                        int64_t* propagation_count) {
    std::deque<int> queue;
    std::vector<char> queued(model.propagators.size(), 0);
    auto enqueue = [&](int p) {
        if (!queued[static_cast<size_t>(p)]) {
            queued[static_cast<size_t>(p)] = 1;
            queue.push_back(p);
        }
    };
    std::vector<VarId> changed = ds.drain_changes();
    if (seed_all) {
        for (size_t p = 0; p < model.propagators.size(); ++p)
            enqueue(static_cast<int>(p));
    } else {
        for (VarId v : changed)
            for (int p : model.watchers[static_cast<size_t>(v)]) enqueue(p);
    }
    for (int p : always_run) enqueue(p);
    while (!queue.empty()) {
        int p = queue.front();
        queue.pop_front();
        queued[static_cast<size_t>(p)] = 0;
        if (propagation_count) ++*propagation_count;
        bool ok = model.propagators[static_cast<size_t>(p)]->propagate(ds);
        for (VarId v : ds.drain_changes())
            for (int q : model.watchers[static_cast<size_t>(v)]) enqueue(q);
        if (!ok) return {false, model.propagators[static_cast<size_t>(p)]->ctid()};
    }
    return {true, -1};
}

std::optional<Decision> pick_branch(const DomainStore& ds) {
    std::optional<Decision> best;
    Val best_size = 0;
    for (int v = 0; v < ds.num_vars(); ++v) {
        Val s = ds.size(v);
        if (s < 2) continue;
        if (!best || s < best_size) {
            best = Decision{v, ds.min(v)};
            best_size = s;
        }
    }
    return best;
}

}  // namespace xcore
