#include "xcore/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_set>

#include "xcore/expr.hpp"

namespace xcore {

namespace {

bool checked_mul_add(Val acc, Val coeff, Val x, Val& out) {
    Val prod;
    if (__builtin_mul_overflow(coeff, x, &prod)) return false;
    if (__builtin_add_overflow(acc, prod, &out)) return false;
    return true;
}

// Σ coeffs[i]·a[scope[i]]; false on overflow.
bool weighted_sum(const std::vector<VarId>& scope, const std::vector<Val>& coeffs,
                  const Assignment& a, Val& out) {
    out = 0;
    for (size_t i = 0; i < scope.size(); ++i)
        if (!checked_mul_add(out, coeffs[i], a[static_cast<size_t>(scope[i])], out))
            return false;
    return true;
}

bool rel_holds(RelOp rel, Val lhs, Val rhs) {
    switch (rel) {
        case RelOp::Lt: return lhs < rhs;
        case RelOp::Le: return lhs <= rhs;
        case RelOp::Gt: return lhs > rhs;
        case RelOp::Ge: return lhs >= rhs;
    }
    return false;
}

std::vector<Val> values_of(const std::vector<VarId>& scope, const Assignment& a) {
    std::vector<Val> out;
    out.reserve(scope.size());
    for (VarId v : scope) out.push_back(a[static_cast<size_t>(v)]);
    return out;
}

// Pairwise distinct ignoring excepted values.
bool all_different(const std::vector<Val>& vals, const std::vector<Val>& except) {
    std::unordered_set<Val> seen;
    for (Val v : vals) {
        if (std::find(except.begin(), except.end(), v) != except.end()) continue;
        if (!seen.insert(v).second) return false;
    }
    return true;
}

// Strict or weak lexicographic order between two value vectors.
bool lex_holds(const std::vector<Val>& x, const std::vector<Val>& y, RelOp rel) {
    size_t i = 0;
    while (i < x.size() && x[i] == y[i]) ++i;
    bool lt = i < x.size() ? x[i] < y[i] : false;
    bool eq = i == x.size();
    switch (rel) {
        case RelOp::Lt: return lt;
        case RelOp::Le: return lt || eq;
        case RelOp::Gt: return !lt && !eq;
        case RelOp::Ge: return !lt;
    }
    return false;
}

struct Holds {
    const Assignment& a;

    Val at(VarId v) const { return a[static_cast<size_t>(v)]; }

    bool operator()(const IntensionCt& c) const {
        try {
            return eval_expr(c.expr, a) != 0;
        } catch (const EvalError&) {
            return false;
        }
    }

    bool operator()(const ExtensionCt& c) const {
        auto matches = [&](const std::vector<Val>& tuple) {
            for (size_t i = 0; i < c.scope.size(); ++i)
                if (tuple[i] != kStar && tuple[i] != at(c.scope[i])) return false;
            return true;
        };
        bool any = std::any_of(c.tuples.begin(), c.tuples.end(), matches);
        return c.positive ? any : !any;
    }

    bool operator()(const RegularCt& c) const {
        std::set<std::string> states = {c.start};
        for (VarId v : c.scope) {
            std::set<std::string> next;
            for (const auto& t : c.transitions)
                if (t.symbol == at(v) && states.count(t.from)) next.insert(t.to);
            states = std::move(next);
            if (states.empty()) return false;
        }
        for (const auto& f : c.finals)
            if (states.count(f)) return true;
        return false;
    }

    bool operator()(const MddCt& c) const {
        std::set<std::string> sources, targets;
        for (const auto& e : c.edges) {
            sources.insert(e.from);
            targets.insert(e.to);
        }
        std::set<std::string> states;
        for (const auto& s : sources)
            if (!targets.count(s)) states.insert(s);  // root
        for (VarId v : c.scope) {
            std::set<std::string> next;
            for (const auto& e : c.edges)
                if (e.symbol == at(v) && states.count(e.from)) next.insert(e.to);
            states = std::move(next);
            if (states.empty()) return false;
        }
        for (const auto& s : states)
            if (!sources.count(s)) return true;  // reached the terminal
        return false;
    }

    bool operator()(const AllDifferentCt& c) const {
        return all_different(values_of(c.scope, a), c.except);
    }

    bool operator()(const AllDifferentMatrixCt& c) const {
        for (const auto& row : c.rows)
            if (!all_different(values_of(row, a), {})) return false;
        if (c.rows.empty()) return true;
        for (size_t j = 0; j < c.rows.front().size(); ++j) {
            std::vector<Val> col;
            for (const auto& row : c.rows) col.push_back(at(row[j]));
            if (!all_different(col, {})) return false;
        }
        return true;
    }

    bool operator()(const AllDifferentListCt& c) const {
        for (size_t i = 0; i < c.lists.size(); ++i)
            for (size_t j = i + 1; j < c.lists.size(); ++j)
                if (values_of(c.lists[i], a) == values_of(c.lists[j], a)) return false;
        return true;
    }

    bool operator()(const AllEqualCt& c) const {
        for (size_t i = 1; i < c.scope.size(); ++i)
            if (at(c.scope[i]) != at(c.scope[0])) return false;
        return true;
    }

    bool operator()(const OrderedCt& c) const {
        for (size_t i = 0; i + 1 < c.scope.size(); ++i) {
            Val lhs = at(c.scope[i]);
            if (!c.lengths.empty()) {
                if (__builtin_add_overflow(lhs, c.lengths[i], &lhs)) return false;
            }
            if (!rel_holds(c.rel, lhs, at(c.scope[i + 1]))) return false;
        }
        return true;
    }

    bool operator()(const LexCt& c) const {
        for (size_t i = 0; i + 1 < c.lists.size(); ++i)
            if (!lex_holds(values_of(c.lists[i], a), values_of(c.lists[i + 1], a), c.rel))
                return false;
        if (c.matrix && !c.lists.empty()) {
            for (size_t j = 0; j + 1 < c.lists.front().size(); ++j) {
                std::vector<Val> col1, col2;
                for (const auto& row : c.lists) {
                    col1.push_back(at(row[j]));
                    col2.push_back(at(row[j + 1]));
                }
                if (!lex_holds(col1, col2, c.rel)) return false;
            }
        }
        return true;
    }

    bool operator()(const PrecedenceCt& c) const {
        // first(values[i]) < first(values[i+1]) whenever values[i+1] occurs.
        auto first_of = [&](Val v) -> std::ptrdiff_t {
            for (size_t i = 0; i < c.scope.size(); ++i)
                if (at(c.scope[i]) == v) return static_cast<std::ptrdiff_t>(i);
            return -1;
        };
        for (size_t k = 0; k + 1 < c.values.size(); ++k) {
            std::ptrdiff_t later = first_of(c.values[k + 1]);
            if (later < 0) continue;
            std::ptrdiff_t earlier = first_of(c.values[k]);
            if (earlier < 0 || earlier >= later) return false;
        }
        return true;
    }

    bool operator()(const SumCt& c) const {
        Val total;
        if (!weighted_sum(c.scope, c.coeffs, a, total)) return false;
        return condition_holds(c.cond, total, a);
    }

    bool operator()(const CountCt& c) const {
        Val hits = 0;
        for (VarId v : c.scope)
            if (std::find(c.values.begin(), c.values.end(), at(v)) != c.values.end()) ++hits;
        return condition_holds(c.cond, hits, a);
    }

    bool operator()(const NValuesCt& c) const {
        std::unordered_set<Val> distinct;
        for (VarId v : c.scope) distinct.insert(at(v));
        return condition_holds(c.cond, static_cast<Val>(distinct.size()), a);
    }

    bool operator()(const CardinalityCt& c) const {
        for (size_t k = 0; k < c.values.size(); ++k) {
            Val cnt = 0;
            for (VarId v : c.scope)
                if (at(v) == c.values[k]) ++cnt;
            if (cnt < c.occurs[k].lo || cnt > c.occurs[k].hi) return false;
        }
        return true;
    }

    bool operator()(const MaximumCt& c) const {
        Val best = at(c.scope.front());
        for (VarId v : c.scope) best = std::max(best, at(v));
        return condition_holds(c.cond, best, a);
    }

    bool operator()(const MinimumCt& c) const {
        Val best = at(c.scope.front());
        for (VarId v : c.scope) best = std::min(best, at(v));
        return condition_holds(c.cond, best, a);
    }

    bool operator()(const ElementCt& c) const {
        Val idx = at(c.index);
        if (idx < 0 || idx >= static_cast<Val>(c.list.size())) return false;
        return condition_holds(c.cond, c.list[static_cast<size_t>(idx)].resolve(a), a);
    }

    bool operator()(const ChannelCt& c) const {
        if (c.list2.empty()) {
            // x[i] = j ⇔ x[j] = i over one list.
            Val n = static_cast<Val>(c.list1.size());
            for (size_t i = 0; i < c.list1.size(); ++i) {
                Val j = at(c.list1[i]);
                if (j < 0 || j >= n) return false;
                if (at(c.list1[static_cast<size_t>(j)]) != static_cast<Val>(i)) return false;
            }
            return true;
        }
        Val n1 = static_cast<Val>(c.list1.size());
        Val n2 = static_cast<Val>(c.list2.size());
        for (size_t i = 0; i < c.list1.size(); ++i) {
            Val j = at(c.list1[i]);
            if (j < 0 || j >= n2) return false;
            if (at(c.list2[static_cast<size_t>(j)]) != static_cast<Val>(i)) return false;
        }
        for (size_t j = 0; j < c.list2.size(); ++j) {
            Val i = at(c.list2[j]);
            if (i < 0 || i >= n1) return false;
            if (at(c.list1[static_cast<size_t>(i)]) != static_cast<Val>(j)) return false;
        }
        return true;
    }

    bool operator()(const NoOverlapCt& c) const {
        size_t n = c.origins.size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                bool overlap_all = true;
                for (size_t d = 0; d < c.origins[i].size() && overlap_all; ++d) {
                    Val o1 = at(c.origins[i][d]), o2 = at(c.origins[j][d]);
                    Val l1 = c.lengths[i][d].resolve(a), l2 = c.lengths[j][d].resolve(a);
                    // [o1,o1+l1) ∩ [o2,o2+l2) nonempty?
                    overlap_all = std::max(o1, o2) < std::min(o1 + l1, o2 + l2);
                }
                if (overlap_all) return false;
            }
        }
        return true;
    }

    bool operator()(const CumulativeCt& c) const {
        // The condition must hold at every instant of the active span
        // [min origin, max origin+length); an empty span holds vacuously.
        // The load only changes at task starts and ends, so sweeping those
        // event points is exact.
        if (c.origins.empty()) return true;
        Val lo = at(c.origins.front()), hi = lo;
        std::vector<Val> starts(c.origins.size()), ends(c.origins.size()),
            heights(c.origins.size());
        std::set<Val> events;
        for (size_t i = 0; i < c.origins.size(); ++i) {
            starts[i] = at(c.origins[i]);
            ends[i] = starts[i] + c.lengths[i].resolve(a);
            heights[i] = c.heights[i].resolve(a);
            lo = std::min(lo, starts[i]);
            hi = std::max(hi, ends[i]);
            events.insert(starts[i]);
            events.insert(ends[i]);
        }
        for (Val t : events) {
            if (t < lo || t >= hi) continue;
            Val load = 0;
            for (size_t i = 0; i < starts.size(); ++i)
                if (starts[i] <= t && t < ends[i]) load += heights[i];
            if (!condition_holds(c.cond, load, a)) return false;
        }
        return true;
    }

    bool operator()(const BinPackingCt& c) const {
        // The condition applies to the load of every used bin.
        std::map<Val, Val> loads;
        for (size_t i = 0; i < c.scope.size(); ++i) loads[at(c.scope[i])] += c.sizes[i];
        for (const auto& [bin, load] : loads)
            if (!condition_holds(c.cond, load, a)) return false;
        return true;
    }

    bool operator()(const KnapsackCt& c) const {
        Val w, p;
        if (!weighted_sum(c.scope, c.weights, a, w)) return false;
        if (!weighted_sum(c.scope, c.profits, a, p)) return false;
        return condition_holds(c.wcond, w, a) && condition_holds(c.pcond, p, a);
    }

    bool operator()(const CircuitCt& c) const {
        // Self-loops are outside the cycle; the rest must form one cycle.
        Val n = static_cast<Val>(c.scope.size());
        std::vector<bool> on_cycle(c.scope.size(), false);
        Val start = -1, members = 0;
        for (size_t i = 0; i < c.scope.size(); ++i) {
            Val succ = at(c.scope[i]);
            if (succ < 0 || succ >= n) return false;
            if (succ != static_cast<Val>(i)) {
                on_cycle[i] = true;
                ++members;
                start = static_cast<Val>(i);
            }
        }
        if (members == 0) return false;  // an empty cycle is not a circuit
        Val cur = start, visited = 0;
        do {
            if (!on_cycle[static_cast<size_t>(cur)]) return false;
            on_cycle[static_cast<size_t>(cur)] = false;  // marks visit
            cur = at(c.scope[static_cast<size_t>(cur)]);
            ++visited;
        } while (cur != start && visited <= members);
        return cur == start && visited == members;
    }

    bool operator()(const InstantiationCt& c) const {
        for (size_t i = 0; i < c.scope.size(); ++i)
            if (at(c.scope[i]) != c.values[i]) return false;
        return true;
    }

    bool operator()(const SlideCt& c) const {
        size_t n = c.scope.size();
        size_t window = static_cast<size_t>(c.window);
        for (size_t base = 0; base + window <= n;
             base += static_cast<size_t>(c.offset)) {
            Assignment local(window);
            for (size_t j = 0; j < window; ++j) local[j] = at(c.scope[base + j]);
            try {
                if (eval_expr(c.pattern, local) == 0) return false;
            } catch (const EvalError&) {
                return false;
            }
        }
        return true;
    }
};

}  // namespace

bool constraint_holds(const ConstraintKind& kind, const Assignment& a) {
    return std::visit(Holds{a}, kind);
}

Verdict check(const Instance& inst, const Assignment& a) {
    std::vector<bool> out_of_domain(inst.variables.size(), false);
    bool any_bad = false;
    for (const auto& v : inst.variables) {
        if (!v.domain.contains(a[static_cast<size_t>(v.id)])) {
            out_of_domain[static_cast<size_t>(v.id)] = true;
            any_bad = true;
        }
    }
    Verdict verdict;
    if (any_bad) verdict.violated.push_back(kDomainViolation);
    for (const auto& c : inst.constraints) {
        bool touches_bad = false;
        if (any_bad)
            for (VarId v : constraint_scope(c.kind))
                if (out_of_domain[static_cast<size_t>(v)]) {
                    touches_bad = true;
                    break;
                }
        if (touches_bad || !constraint_holds(c.kind, a)) verdict.violated.push_back(c.id);
    }
    std::sort(verdict.violated.begin(), verdict.violated.end());
    verdict.violated.erase(std::unique(verdict.violated.begin(), verdict.violated.end()),
                           verdict.violated.end());
    verdict.satisfied = verdict.violated.empty();
    return verdict;
}

Val objective_value(const Instance& inst, const Assignment& a) {
    const Objective& obj = inst.objective.value();
    if (const auto* e = std::get_if<Expr>(&obj.body)) return eval_expr(*e, a);
    const auto& ws = std::get<WeightedSum>(obj.body);
    Val total;
    if (!weighted_sum(ws.scope, ws.coeffs, a, total))
        throw EvalError(EvalErrorKind::Overflow, "objective overflow");
    return total;
}

}  // namespace xcore
