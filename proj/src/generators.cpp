#include "xcore/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "xcore/checker.hpp"

namespace xcore {

Val ProblemSpec::param(const std::string& key) const {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    throw InvalidParams(name + ": missing parameter '" + key + "'");
}

std::vector<Val> ProblemSpec::param_series(const std::string& key) const {
    std::vector<Val> out;
    for (const auto& [k, v] : params)
        if (k == key) out.push_back(v);
    return out;
}

bool ProblemSpec::has_param(const std::string& key) const {
    for (const auto& [k, v] : params) {
        (void)v;
        if (k == key) return true;
    }
    return false;
}

namespace {

[[noreturn]] void bad(const std::string& rule) { throw InvalidParams(rule); }

Val need(const ProblemSpec& spec, const std::string& key, Val lo) {
    Val v = spec.param(key);
    if (v < lo)
        bad(spec.name + ": parameter '" + key + "' must be at least " +
            std::to_string(lo) + " (got " + std::to_string(v) + ")");
    return v;
}

std::string nm(const char* base, Val i) { return std::string(base) + std::to_string(i); }
std::string nm(const char* base, Val i, Val j) {
    return std::string(base) + std::to_string(i) + "_" + std::to_string(j);
}
std::string nm(const char* base, Val i, Val j, Val k) {
    return std::string(base) + std::to_string(i) + "_" + std::to_string(j) + "_" +
           std::to_string(k);
}

// Accumulates variables and constraints with contiguous ids.
struct Builder {
    Instance inst;

    VarId add_var(std::string name, Domain dom) {
        VarId id = static_cast<VarId>(inst.variables.size());
        inst.variables.push_back({id, std::move(name), std::move(dom)});
        return id;
    }

    void add(ConstraintKind kind, std::vector<std::string> tags = {}) {
        int id = static_cast<int>(inst.constraints.size());
        inst.constraints.push_back({id, std::move(kind), std::move(tags)});
    }

    void objective(ObjectiveSense sense, std::variant<Expr, WeightedSum> body) {
        inst.kind = InstanceKind::Cop;
        inst.objective = Objective{sense, std::move(body)};
    }

    Instance finish() {
        auto errors = validate_instance(inst);
        for (const auto& e : errors)
            if (e.severity == ValidationError::Severity::Error)
                throw std::logic_error("generated instance failed validation: " + e.rule +
                                       ": " + e.message);
        return std::move(inst);
    }
};

SumCt unit_sum(std::vector<VarId> scope, Condition cond) {
    std::vector<Val> coeffs(scope.size(), 1);
    return SumCt{std::move(scope), std::move(coeffs), std::move(cond)};
}

WeightedSum unit_weighted(std::vector<VarId> scope) {
    std::vector<Val> coeffs(scope.size(), 1);
    return WeightedSum{std::move(scope), std::move(coeffs)};
}

const std::string kSymmetry = "symmetry-breaking";
const std::string kRedundant = "redundant";

// ---------------------------------------------------------------------------
// average-avoiding: permutation of 0..n-1 where no value sitting between two
// positions equals their average; the head is pinned to the minimum.
// ---------------------------------------------------------------------------
Instance gen_average_avoiding(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 1);
    Builder b;
    std::vector<VarId> x;
    for (Val i = 0; i < n; ++i) x.push_back(b.add_var(nm("x", i), Domain(0, n - 1)));

    for (Val i = 0; i < n; ++i)
        for (Val j = i + 2; j < n; ++j)
            for (Val k = i + 1; k < j; ++k)
                b.add(IntensionCt{ne(mul({val(2), var(x[k])}),
                                     add({var(x[i]), var(x[j])}))});

    b.add(AllDifferentCt{x, {}});
    b.add(MinimumCt{x, Condition::variable(CondOp::Eq, x[0])}, {kSymmetry});
    return b.finish();
}

// ---------------------------------------------------------------------------
// hamming: n vectors of length m over [0,d) that pairwise differ in at least
// k positions; per pair a 0/1 indicator per position feeds a count, and rows
// are ordered lexicographically.
// ---------------------------------------------------------------------------
Instance gen_hamming(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 1);
    const Val m = need(spec, "m", 1);
    const Val d = need(spec, "d", 1);
    const Val k = need(spec, "k", 0);

    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n));
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < m; ++j)
            x[static_cast<size_t>(i)].push_back(b.add_var(nm("x", i, j), Domain(0, d - 1)));

    for (Val i1 = 0; i1 < n; ++i1)
        for (Val i2 = i1 + 1; i2 < n; ++i2) {
            std::vector<Expr> diffs;
            for (Val p = 0; p < m; ++p)
                diffs.push_back(ne(var(x[static_cast<size_t>(i1)][static_cast<size_t>(p)]),
                                   var(x[static_cast<size_t>(i2)][static_cast<size_t>(p)])));
            Expr distance = diffs.size() == 1 ? std::move(diffs[0]) : add(std::move(diffs));
            b.add(IntensionCt{ge(std::move(distance), val(k))});
        }

    b.add(LexCt{x, RelOp::Le, false}, {kSymmetry});
    return b.finish();
}

// ---------------------------------------------------------------------------
// hyper-sudoku: base^2 x base^2 grid, distinct rows/columns/blocks plus the
// extra shaded blocks offset one cell inside each band.
// ---------------------------------------------------------------------------
Instance gen_hyper_sudoku(const ProblemSpec& spec) {
    const Val base = need(spec, "base", 1);
    const Val n = base * base;
    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n));
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < n; ++j)
            x[static_cast<size_t>(i)].push_back(b.add_var(nm("x", i, j), Domain(1, n)));

    auto block = [&](Val i0, Val j0) {
        std::vector<VarId> cells;
        for (Val i = i0; i < i0 + base; ++i)
            for (Val j = j0; j < j0 + base; ++j)
                cells.push_back(x[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        return cells;
    };

    b.add(AllDifferentMatrixCt{x});
    for (Val i = 0; i < n; i += base)
        for (Val j = 0; j < n; j += base)
            b.add(AllDifferentCt{block(i, j), {}});
    for (Val i = 1; i < n - base; i += base + 1)
        for (Val j = 1; j < n - base; j += base + 1)
            b.add(AllDifferentCt{block(i, j), {}});
    return b.finish();
}

// ---------------------------------------------------------------------------
// takuzu: balanced 0/1 grid, no three equal cells in a line, all rows and all
// columns pairwise distinct. n must be even.
// ---------------------------------------------------------------------------
Instance gen_takuzu(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 2);
    if (n % 2 != 0) bad("takuzu: parameter 'n' must be even (got " + std::to_string(n) + ")");
    const Val m = n / 2;

    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n));
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < n; ++j)
            x[static_cast<size_t>(i)].push_back(b.add_var(nm("x", i, j), Domain(0, 1)));

    auto col = [&](Val j) {
        std::vector<VarId> c;
        for (Val i = 0; i < n; ++i) c.push_back(x[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        return c;
    };

    for (Val i = 0; i < n; ++i)
        b.add(unit_sum(x[static_cast<size_t>(i)], Condition::value(CondOp::Eq, m)));
    for (Val j = 0; j < n; ++j)
        b.add(unit_sum(col(j), Condition::value(CondOp::Eq, m)));

    auto cell = [&](Val i, Val j) { return x[static_cast<size_t>(i)][static_cast<size_t>(j)]; };
    for (Val i = 1; i + 1 < n; ++i)
        for (Val j = 0; j < n; ++j)
            b.add(IntensionCt{lor({ne(var(cell(i, j)), var(cell(i - 1, j))),
                                   ne(var(cell(i, j)), var(cell(i + 1, j)))})});
    for (Val j = 1; j + 1 < n; ++j)
        for (Val i = 0; i < n; ++i)
            b.add(IntensionCt{lor({ne(var(cell(i, j)), var(cell(i, j - 1))),
                                   ne(var(cell(i, j)), var(cell(i, j + 1)))})});

    b.add(AllDifferentListCt{x});
    std::vector<std::vector<VarId>> cols;
    for (Val j = 0; j < n; ++j) cols.push_back(col(j));
    b.add(AllDifferentListCt{std::move(cols)});
    return b.finish();
}

// ---------------------------------------------------------------------------
// poolball-triangle: distinct balls 1..n(n+1)/2 in a triangle where each ball
// equals the absolute difference of the two above; one comparison breaks the
// mirror symmetry.
// ---------------------------------------------------------------------------
Instance gen_poolball(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 2);
    const Val balls = n * (n + 1) / 2;

    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n));
    std::vector<VarId> all;
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < n - i; ++j) {
            VarId v = b.add_var(nm("x", i, j), Domain(1, balls));
            x[static_cast<size_t>(i)].push_back(v);
            all.push_back(v);
        }

    b.add(AllDifferentCt{all, {}});
    for (Val i = 1; i < n; ++i)
        for (Val j = 0; j < n - i; ++j)
            b.add(IntensionCt{eq(var(x[static_cast<size_t>(i)][static_cast<size_t>(j)]),
                                 abs(sub(var(x[static_cast<size_t>(i - 1)][static_cast<size_t>(j)]),
                                         var(x[static_cast<size_t>(i - 1)][static_cast<size_t>(j + 1)]))))});
    b.add(IntensionCt{lt(var(x[static_cast<size_t>(n - 2)][0]),
                         var(x[static_cast<size_t>(n - 2)][1]))},
          {kSymmetry});
    return b.finish();
}

// ---------------------------------------------------------------------------
// lit-puzzle: clicking a cell toggles it and its orthogonal neighbours; every
// cross must receive an odd number of clicks (1, 3 or 5); minimize clicks.
// ---------------------------------------------------------------------------
Instance gen_lit_puzzle(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 1);
    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n));
    std::vector<VarId> all;
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < n; ++j) {
            VarId v = b.add_var(nm("x", i, j), Domain(0, 1));
            x[static_cast<size_t>(i)].push_back(v);
            all.push_back(v);
        }

    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < n; ++j) {
            std::vector<VarId> cross;
            auto push = [&](Val a, Val c) {
                if (a >= 0 && a < n && c >= 0 && c < n)
                    cross.push_back(x[static_cast<size_t>(a)][static_cast<size_t>(c)]);
            };
            push(i, j);
            push(i - 1, j);
            push(i + 1, j);
            push(i, j - 1);
            push(i, j + 1);
            b.add(unit_sum(std::move(cross), Condition::set(CondOp::In, {1, 3, 5})));
        }

    b.objective(ObjectiveSense::Minimize, unit_weighted(all));
    return b.finish();
}

// ---------------------------------------------------------------------------
// pyramid: downward triangle where every cell is the sum of its two children,
// all values distinct in [0,k], root nonzero; minimize the root.
// ---------------------------------------------------------------------------
Instance gen_pyramid(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 1);
    const Val k = need(spec, "k", 0);

    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n));
    std::vector<VarId> all;
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j <= i; ++j) {
            VarId v = b.add_var(nm("x", i, j), Domain(0, k));
            x[static_cast<size_t>(i)].push_back(v);
            all.push_back(v);
        }

    b.add(IntensionCt{ne(var(x[0][0]), val(0))});
    b.add(AllDifferentCt{all, {}});
    for (Val i = 0; i + 1 < n; ++i)
        for (Val j = 0; j <= i; ++j)
            b.add(IntensionCt{eq(var(x[static_cast<size_t>(i)][static_cast<size_t>(j)]),
                                 add({var(x[static_cast<size_t>(i + 1)][static_cast<size_t>(j)]),
                                      var(x[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)])}))});

    b.objective(ObjectiveSense::Minimize, var(x[0][0]));
    return b.finish();
}

// ---------------------------------------------------------------------------
// drinking: 0/1 drink decisions over n minutes; y[t] counts drinks in the 8
// minutes before t, and at multiples of 5 or 7 one drinks exactly when that
// window is empty; minimize total drinks.
// ---------------------------------------------------------------------------
Instance gen_drinking(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 1);
    Builder b;
    std::vector<VarId> x, y;
    for (Val t = 0; t < n; ++t) x.push_back(b.add_var(nm("x", t), Domain(0, 1)));
    for (Val t = 0; t < n; ++t) y.push_back(b.add_var(nm("y", t), Domain(0, 8)));

    for (Val t = 1; t < n; ++t) {
        std::vector<VarId> window;
        for (Val u = std::max<Val>(t - 8, 0); u < t; ++u)
            window.push_back(x[static_cast<size_t>(u)]);
        b.add(unit_sum(std::move(window),
                       Condition::variable(CondOp::Eq, y[static_cast<size_t>(t)])));
    }
    for (Val t = 1; t < n; ++t)
        if (t % 5 == 0 || t % 7 == 0)
            b.add(IntensionCt{iff({eq(var(y[static_cast<size_t>(t)]), val(0)),
                                   eq(var(x[static_cast<size_t>(t)]), val(1))})});

    b.objective(ObjectiveSense::Minimize, unit_weighted(x));
    return b.finish();
}

// ---------------------------------------------------------------------------
// same-queens-knights: place queens (1) and knights (2) on an n x n board so
// no piece attacks another; q and k count the pieces; per cell, holding a
// piece forces the summed occupancy of its attack squares to zero. Maximize
// q + k.
// ---------------------------------------------------------------------------
Instance gen_same_queens_knights(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 1);
    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n));
    std::vector<VarId> cells;
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < n; ++j) {
            VarId v = b.add_var(nm("x", i, j), Domain(0, 2));
            x[static_cast<size_t>(i)].push_back(v);
            cells.push_back(v);
        }
    VarId q = b.add_var("q", Domain(0, n));
    VarId kn = b.add_var("k", Domain(0, n));

    b.add(CountCt{cells, {1}, Condition::variable(CondOp::Eq, q)});
    b.add(CountCt{cells, {2}, Condition::variable(CondOp::Eq, kn)});

    auto iabs = [](Val v) { return v < 0 ? -v : v; };
    auto queen_attack = [&](Val i, Val j) {
        std::vector<VarId> out;
        for (Val a = 0; a < n; ++a)
            for (Val c = 0; c < n; ++c)
                if (!(a == i && c == j) &&
                    (a == i || c == j || iabs(i - a) == iabs(j - c)))
                    out.push_back(x[static_cast<size_t>(a)][static_cast<size_t>(c)]);
        return out;
    };
    auto knight_attack = [&](Val i, Val j) {
        std::vector<VarId> out;
        for (Val a = 0; a < n; ++a)
            for (Val c = 0; c < n; ++c)
                if (a != i && c != j && iabs(i - a) + iabs(j - c) == 3)
                    out.push_back(x[static_cast<size_t>(a)][static_cast<size_t>(c)]);
        return out;
    };

    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < n; ++j) {
            VarId cell = x[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (auto qa = queen_attack(i, j); !qa.empty()) {
                VarId aq = b.add_var(nm("aq", i, j), Domain(0, 2 * static_cast<Val>(qa.size())));
                b.add(unit_sum(std::move(qa), Condition::variable(CondOp::Eq, aq)));
                b.add(IntensionCt{lor({ne(var(cell), val(1)), eq(var(aq), val(0))})});
            }
            if (auto ka = knight_attack(i, j); !ka.empty()) {
                VarId ak = b.add_var(nm("ak", i, j), Domain(0, 2 * static_cast<Val>(ka.size())));
                b.add(unit_sum(std::move(ka), Condition::variable(CondOp::Eq, ak)));
                b.add(IntensionCt{lor({ne(var(cell), val(2)), eq(var(ak), val(0))})});
            }
        }

    b.objective(ObjectiveSense::Maximize, WeightedSum{{q, kn}, {1, 1}});
    return b.finish();
}

// ---------------------------------------------------------------------------
// bin packing, shared arithmetic: greedy sequential bin count, prefix count
// of items fitting one bin, and the half-capacity lower bound on used bins.
// ---------------------------------------------------------------------------
struct PackingData {
    Val capacity = 0;
    std::vector<Val> weights;  // ascending
    Val n_bins = 0;
    Val max_per_bin = -1;
    Val lb2 = 0;
};

Val ceil_div(Val a, Val b) { return (a + b - 1) / b; }  // a >= 0, b > 0

PackingData packing_data(const ProblemSpec& spec) {
    PackingData d;
    d.capacity = need(spec, "capacity", 1);
    d.weights = spec.param_series("w");
    if (d.weights.empty()) bad(spec.name + ": at least one weight 'w' is required");
    for (Val w : d.weights)
        if (w < 1 || w > d.capacity)
            bad(spec.name + ": weights must lie in [1, capacity] (got " + std::to_string(w) + ")");
    std::sort(d.weights.begin(), d.weights.end());

    Val load = 0;
    for (Val w : d.weights) {
        load += w;
        if (load > d.capacity) {
            ++d.n_bins;
            load = w;
        }
    }

    Val prefix = 0;
    for (size_t i = 0; i < d.weights.size(); ++i) {
        prefix += d.weights[i];
        if (prefix > d.capacity) {
            d.max_per_bin = static_cast<Val>(i);
            break;
        }
    }

    // Index sets by weight range: (a, b] by default, [a, b] when closed.
    auto in_range = [&](Val a, Val b, bool closed) {
        std::vector<size_t> idx;
        for (size_t i = 0; i < d.weights.size(); ++i) {
            Val w = d.weights[i];
            if ((closed ? w >= a : w > a) && w <= b) idx.push_back(i);
        }
        return idx;
    };
    const Val half_count = static_cast<Val>(in_range(d.capacity / 2, d.capacity, false).size());
    Val best = 0;
    for (Val v = 0; v <= d.capacity / 2; ++v) {
        Val sum_mid = 0;
        for (size_t i : in_range(v, d.capacity - v, true)) sum_mid += d.weights[i];
        Val upper = static_cast<Val>(in_range(d.capacity / 2, d.capacity - v, false).size());
        Val cand = half_count + std::max<Val>(0, ceil_div(sum_mid, d.capacity) - upper);
        best = std::max(best, cand);
    }
    d.lb2 = best;

    if (d.n_bins < 1)
        bad(spec.name + ": total weight must exceed the capacity (the slot layout needs"
                        " an overflow to size itself)");
    if (d.lb2 > d.n_bins)
        bad(spec.name + ": the lower bound on used bins (" + std::to_string(d.lb2) +
            ") exceeds the sized bin count (" + std::to_string(d.n_bins) + ")");
    return d;
}

// ---------------------------------------------------------------------------
// bin-packing-v1: slot model. x[i][j] is the weight in slot j of bin i (0 =
// empty); bins respect capacity, store weights decreasingly, a count ties z
// to the bins with a nonempty first slot, a cardinality places every item,
// and rows are ordered decreasingly. Minimize z.
// ---------------------------------------------------------------------------
Instance gen_bin_packing_v1(const ProblemSpec& spec) {
    PackingData d = packing_data(spec);
    const Val nItems = static_cast<Val>(d.weights.size());

    std::vector<Val> dom_vals = d.weights;
    dom_vals.push_back(0);
    std::sort(dom_vals.begin(), dom_vals.end());
    dom_vals.erase(std::unique(dom_vals.begin(), dom_vals.end()), dom_vals.end());
    Domain slot = Domain::from_values(dom_vals);

    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(d.n_bins));
    for (Val i = 0; i < d.n_bins; ++i)
        for (Val j = 0; j < d.max_per_bin; ++j)
            x[static_cast<size_t>(i)].push_back(b.add_var(nm("x", i, j), slot));
    VarId z = b.add_var("z", Domain(d.lb2, d.n_bins));

    for (Val i = 0; i < d.n_bins; ++i)
        b.add(unit_sum(x[static_cast<size_t>(i)], Condition::value(CondOp::Le, d.capacity)));
    for (Val i = 0; i < d.n_bins; ++i)
        b.add(OrderedCt{x[static_cast<size_t>(i)], RelOp::Ge, {}});

    std::vector<VarId> firsts;
    for (Val i = 0; i < d.n_bins; ++i) firsts.push_back(x[static_cast<size_t>(i)][0]);
    std::vector<Val> nonzero;
    for (Val v : dom_vals)
        if (v != 0) nonzero.push_back(v);
    b.add(CountCt{std::move(firsts), nonzero, Condition::variable(CondOp::Eq, z)});

    std::vector<VarId> flat;
    for (const auto& row : x) flat.insert(flat.end(), row.begin(), row.end());
    std::vector<Val> card_values{0};
    std::vector<CardinalityCt::Occur> occurs{
        {d.n_bins * d.max_per_bin - nItems, d.n_bins * d.max_per_bin - nItems}};
    for (size_t i = 0; i < d.weights.size();) {
        size_t j = i;
        while (j < d.weights.size() && d.weights[j] == d.weights[i]) ++j;
        card_values.push_back(d.weights[i]);
        occurs.push_back({static_cast<Val>(j - i), static_cast<Val>(j - i)});
        i = j;
    }
    b.add(CardinalityCt{std::move(flat), std::move(card_values), std::move(occurs)});

    b.add(LexCt{x, RelOp::Ge, false}, {kSymmetry});
    b.objective(ObjectiveSense::Minimize, var(z));
    return b.finish();
}

// ---------------------------------------------------------------------------
// bin-packing-v2: assignment model. x[i] is the bin of item i, bin loads obey
// the capacity, z equals the number of distinct bins used; runs of equal
// weights are ordered and every item heavier than half the capacity gets its
// own fixed bin. Minimize z.
// ---------------------------------------------------------------------------
Instance gen_bin_packing_v2(const ProblemSpec& spec) {
    PackingData d = packing_data(spec);
    const Val nItems = static_cast<Val>(d.weights.size());

    Builder b;
    std::vector<VarId> x;
    for (Val i = 0; i < nItems; ++i) x.push_back(b.add_var(nm("x", i), Domain(0, d.n_bins - 1)));
    VarId z = b.add_var("z", Domain(d.lb2, d.n_bins));

    b.add(BinPackingCt{x, d.weights, Condition::value(CondOp::Le, d.capacity)});
    b.add(NValuesCt{x, Condition::variable(CondOp::Eq, z)});

    // Runs of equal weights, recorded only when another value follows the run
    // and the run has length >= 2.
    size_t start = 0;
    for (size_t i = 0; i < d.weights.size(); ++i) {
        if (d.weights[i] == d.weights[start]) continue;
        if (start < i - 1) {
            std::vector<VarId> run(x.begin() + static_cast<std::ptrdiff_t>(start),
                                   x.begin() + static_cast<std::ptrdiff_t>(i));
            b.add(OrderedCt{std::move(run), RelOp::Le, {}}, {kSymmetry});
        }
        start = i;
    }

    Val exceeding = 0;
    for (Val w : d.weights)
        if (w > d.capacity / 2) ++exceeding;
    if (exceeding > 0) {
        std::vector<VarId> fixed;
        std::vector<Val> values;
        for (Val i = 0; i < exceeding; ++i) {
            fixed.push_back(x[static_cast<size_t>(nItems - exceeding + i)]);
            values.push_back(i);
        }
        b.add(InstantiationCt{std::move(fixed), std::move(values)}, {kSymmetry});
    }

    b.objective(ObjectiveSense::Minimize, var(z));
    return b.finish();
}

// ---------------------------------------------------------------------------
// social-golfers: g[w][p] is the group of player p in week w. Any two players
// share a group at most once (counted via per-week meet indicators); each
// week fills every group exactly to size; lexicographic matrix ordering plus
// first-week and first-players fixings break symmetry; per-group distinctness
// in later weeks is implied and tagged as such.
// ---------------------------------------------------------------------------
Instance gen_social_golfers(const ProblemSpec& spec) {
    const Val groups = need(spec, "groups", 1);
    const Val size = need(spec, "size", 1);
    const Val weeks = need(spec, "weeks", 1);
    const Val players = groups * size;

    Builder b;
    std::vector<std::vector<VarId>> g(static_cast<size_t>(weeks));
    for (Val w = 0; w < weeks; ++w)
        for (Val p = 0; p < players; ++p)
            g[static_cast<size_t>(w)].push_back(b.add_var(nm("g", w, p), Domain(0, groups - 1)));

    for (Val p1 = 0; p1 < players; ++p1)
        for (Val p2 = p1 + 1; p2 < players; ++p2) {
            std::vector<VarId> meets;
            for (Val w = 0; w < weeks; ++w) {
                VarId mv = b.add_var(nm("m", p1, p2, w), Domain(0, 1));
                meets.push_back(mv);
                b.add(IntensionCt{eq(var(mv), eq(var(g[static_cast<size_t>(w)][static_cast<size_t>(p1)]),
                                                 var(g[static_cast<size_t>(w)][static_cast<size_t>(p2)])))});
            }
            b.add(CountCt{std::move(meets), {1}, Condition::value(CondOp::Le, 1)});
        }

    for (Val w = 0; w < weeks; ++w) {
        std::vector<Val> values;
        std::vector<CardinalityCt::Occur> occurs;
        for (Val i = 0; i < groups; ++i) {
            values.push_back(i);
            occurs.push_back({size, size});
        }
        b.add(CardinalityCt{g[static_cast<size_t>(w)], std::move(values), std::move(occurs)});
    }

    b.add(LexCt{g, RelOp::Le, true}, {kSymmetry});
    {
        std::vector<Val> week0;
        for (Val p = 0; p < players; ++p) week0.push_back(p / size);
        b.add(InstantiationCt{g[0], std::move(week0)}, {kSymmetry});
    }
    for (Val w = 1; w < weeks; ++w) {
        std::vector<VarId> head(g[static_cast<size_t>(w)].begin(),
                                g[static_cast<size_t>(w)].begin() + static_cast<std::ptrdiff_t>(size));
        std::vector<Val> values;
        for (Val kk = 0; kk < size; ++kk) values.push_back(kk);
        b.add(InstantiationCt{std::move(head), std::move(values)}, {kSymmetry});
    }

    if (groups == size && weeks == groups + 1) {
        for (Val p = 1; p < groups; ++p) {
            std::vector<std::vector<VarId>> rows;
            for (Val w = 1; w < weeks; ++w) {
                std::vector<VarId> row;
                for (Val c = 0; c < size; ++c)
                    row.push_back(g[static_cast<size_t>(w)][static_cast<size_t>(p * size + c)]);
                rows.push_back(std::move(row));
            }
            b.add(AllDifferentMatrixCt{std::move(rows)}, {kRedundant});
        }
    } else {
        for (Val w = 1; w < weeks; ++w)
            for (Val p = 1; p < groups; ++p) {
                std::vector<VarId> slice;
                for (Val c = 0; c < size; ++c)
                    slice.push_back(g[static_cast<size_t>(w)][static_cast<size_t>(p * size + c)]);
                b.add(AllDifferentCt{std::move(slice), {}}, {kRedundant});
            }
    }
    return b.finish();
}

// ---------------------------------------------------------------------------
// still-life: a stable pattern of the two-dimensional cellular automaton on a
// bounded board. a[i][j] counts live neighbours, a table links the count to
// the cell state, border triples keep the outside dead, and on square boards
// two corner comparisons break symmetry. Maximize live cells.
// ---------------------------------------------------------------------------
Instance gen_still_life(const ProblemSpec& spec) {
    const Val n = need(spec, "n", 1);
    const Val m = need(spec, "m", 1);
    if (n * m < 2) bad("still-life: the board needs at least two cells");

    Builder b;
    std::vector<std::vector<VarId>> x(static_cast<size_t>(n)), a(static_cast<size_t>(n));
    std::vector<VarId> live;
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < m; ++j) {
            VarId v = b.add_var(nm("x", i, j), Domain(0, 1));
            x[static_cast<size_t>(i)].push_back(v);
            live.push_back(v);
        }
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < m; ++j)
            a[static_cast<size_t>(i)].push_back(b.add_var(nm("a", i, j), Domain(0, 8)));

    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < m; ++j) {
            std::vector<VarId> around;
            for (Val di = -1; di <= 1; ++di)
                for (Val dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    Val ai = i + di, aj = j + dj;
                    if (ai >= 0 && ai < n && aj >= 0 && aj < m)
                        around.push_back(x[static_cast<size_t>(ai)][static_cast<size_t>(aj)]);
                }
            b.add(unit_sum(std::move(around),
                           Condition::variable(CondOp::Eq, a[static_cast<size_t>(i)][static_cast<size_t>(j)])));
        }

    // (count, state) pairs of the stability rule: a live cell needs two or
    // three live neighbours, a dead cell anything but exactly three.
    std::vector<std::vector<Val>> table;
    for (Val v = 0; v <= 8; ++v)
        if (v != 3) table.push_back({v, 0});
    table.push_back({2, 1});
    table.push_back({3, 1});
    std::sort(table.begin(), table.end());
    for (Val i = 0; i < n; ++i)
        for (Val j = 0; j < m; ++j)
            b.add(ExtensionCt{{a[static_cast<size_t>(i)][static_cast<size_t>(j)],
                               x[static_cast<size_t>(i)][static_cast<size_t>(j)]},
                              table,
                              true,
                              false});

    auto forbid_triple = [&](VarId u, VarId v, VarId w) {
        b.add(ExtensionCt{{u, v, w}, {{1, 1, 1}}, false, false});
    };
    for (Val j = 0; j + 2 < m; ++j)
        forbid_triple(x[0][static_cast<size_t>(j)], x[0][static_cast<size_t>(j + 1)],
                      x[0][static_cast<size_t>(j + 2)]);
    for (Val j = 0; j + 2 < m; ++j)
        forbid_triple(x[static_cast<size_t>(n - 1)][static_cast<size_t>(j)],
                      x[static_cast<size_t>(n - 1)][static_cast<size_t>(j + 1)],
                      x[static_cast<size_t>(n - 1)][static_cast<size_t>(j + 2)]);
    for (Val i = 0; i + 2 < n; ++i)
        forbid_triple(x[static_cast<size_t>(i)][0], x[static_cast<size_t>(i + 1)][0],
                      x[static_cast<size_t>(i + 2)][0]);
    for (Val i = 0; i + 2 < n; ++i)
        forbid_triple(x[static_cast<size_t>(i)][static_cast<size_t>(m - 1)],
                      x[static_cast<size_t>(i + 1)][static_cast<size_t>(m - 1)],
                      x[static_cast<size_t>(i + 2)][static_cast<size_t>(m - 1)]);

    if (n == m) {
        b.add(IntensionCt{ge(var(x[0][0]),
                             var(x[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)]))},
              {kSymmetry});
        b.add(IntensionCt{ge(var(x[0][static_cast<size_t>(n - 1)]),
                             var(x[static_cast<size_t>(n - 1)][0]))},
              {kSymmetry});
    }

    b.objective(ObjectiveSense::Maximize, unit_weighted(live));
    return b.finish();
}

using GenFn = Instance (*)(const ProblemSpec&);

const std::map<std::string, GenFn>& registry() {
    static const std::map<std::string, GenFn> reg = {
        {"average-avoiding", gen_average_avoiding},
        {"hamming", gen_hamming},
        {"hyper-sudoku", gen_hyper_sudoku},
        {"takuzu", gen_takuzu},
        {"poolball-triangle", gen_poolball},
        {"lit-puzzle", gen_lit_puzzle},
        {"pyramid", gen_pyramid},
        {"drinking", gen_drinking},
        {"same-queens-knights", gen_same_queens_knights},
        {"bin-packing-v1", gen_bin_packing_v1},
        {"bin-packing-v2", gen_bin_packing_v2},
        {"social-golfers", gen_social_golfers},
        {"still-life", gen_still_life},
    };
    return reg;
}

}  // namespace

const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names = {
        "average-avoiding", "hamming",  "hyper-sudoku",        "takuzu",
        "poolball-triangle", "lit-puzzle", "pyramid",          "drinking",
        "same-queens-knights", "bin-packing-v1", "bin-packing-v2", "social-golfers",
        "still-life",
    };
    return names;
}

ParamShape param_shape(const std::string& problem) {
    if (problem == "average-avoiding" || problem == "takuzu" ||
        problem == "poolball-triangle" || problem == "lit-puzzle" ||
        problem == "drinking" || problem == "same-queens-knights")
        return {{"n"}, false};
    if (problem == "hamming") return {{"n", "m", "d", "k"}, false};
    if (problem == "hyper-sudoku") return {{"base"}, false};
    if (problem == "pyramid") return {{"n", "k"}, false};
    if (problem == "bin-packing-v1" || problem == "bin-packing-v2")
        return {{"capacity", "w"}, true};
    if (problem == "social-golfers") return {{"groups", "size", "weeks"}, false};
    if (problem == "still-life") return {{"n", "m"}, false};
    throw InvalidParams("unknown problem '" + problem + "'");
}

ProblemSpec make_spec(const std::string& problem, const std::vector<Val>& values,
                      std::optional<uint64_t> seed) {
    ParamShape shape = param_shape(problem);
    ProblemSpec spec;
    spec.name = problem;
    spec.seed = seed;
    if (shape.last_repeats) {
        if (values.size() < shape.names.size())
            bad(problem + ": expects at least " + std::to_string(shape.names.size()) +
                " parameters, got " + std::to_string(values.size()));
    } else if (values.size() != shape.names.size()) {
        bad(problem + ": expects exactly " + std::to_string(shape.names.size()) +
            " parameters, got " + std::to_string(values.size()));
    }
    for (size_t i = 0; i < values.size(); ++i) {
        const std::string& key =
            i < shape.names.size() ? shape.names[i] : shape.names.back();
        spec.params.emplace_back(key, values[i]);
    }
    return spec;
}

Instance generate(const ProblemSpec& spec) {
    auto it = registry().find(spec.name);
    if (it == registry().end()) throw InvalidParams("unknown problem '" + spec.name + "'");
    return it->second(spec);
}

const std::vector<Preset>& presets(const std::string& problem) {
    static const std::map<std::string, std::vector<Preset>> all = [] {
        std::map<std::string, std::vector<Preset>> p;
        auto tuples = [](std::vector<std::vector<Val>> rows) {
            std::vector<Preset> out;
            for (auto& r : rows) {
                std::string label;
                for (size_t i = 0; i < r.size(); ++i) {
                    if (i) label += ',';
                    label += std::to_string(r[i]);
                }
                out.push_back({std::move(label), std::move(r)});
            }
            return out;
        };
        p["average-avoiding"] = tuples({{20}, {25}, {30}, {35}, {40}, {45}, {50}, {55}, {60}, {65}});
        p["hamming"] = tuples({{20, 10, 3, 5},
                               {20, 10, 3, 6},
                               {20, 10, 3, 7},
                               {20, 10, 3, 8},
                               {20, 10, 5, 7},
                               {20, 10, 5, 8},
                               {20, 10, 5, 9},
                               {20, 10, 5, 10},
                               {30, 15, 7, 12},
                               {30, 15, 7, 13},
                               {30, 15, 7, 14},
                               {30, 15, 7, 15}});
        p["hyper-sudoku"] = tuples({{3}, {4}, {5}, {6}, {7}, {8}, {9}, {10}});
        p["takuzu"] = tuples(
            {{30}, {40}, {50}, {60}, {70}, {80}, {90}, {100}, {110}, {120}, {150}, {200}});
        p["poolball-triangle"] =
            tuples({{5}, {7}, {10}, {11}, {12}, {13}, {14}, {15}, {16}, {18}, {20}});
        p["lit-puzzle"] =
            tuples({{10}, {15}, {16}, {17}, {18}, {20}, {25}, {30}, {40}, {50}});
        p["pyramid"] = tuples({{7, 500},
                               {8, 800},
                               {9, 1300},
                               {10, 2500},
                               {11, 5000},
                               {12, 10000},
                               {13, 20000},
                               {14, 45000},
                               {15, 80000},
                               {16, 200000}});
        p["drinking"] = tuples({{50},
                                {100},
                                {200},
                                {400},
                                {700},
                                {10000},
                                {20000},
                                {50000},
                                {100000},
                                {200000}});
        p["same-queens-knights"] = tuples({{5},
                                           {10},
                                           {15},
                                           {20},
                                           {25},
                                           {30},
                                           {35},
                                           {40},
                                           {45},
                                           {50},
                                           {55},
                                           {60},
                                           {65},
                                           {70},
                                           {75}});
        {
            std::vector<Val> bpp{100};
            for (Val w = 30; w <= 99; ++w) bpp.push_back(w);
            auto one = tuples({bpp});
            one.front().label = "100,30..99";
            p["bin-packing-v1"] = one;
            p["bin-packing-v2"] = one;
        }
        p["social-golfers"] = tuples({{5, 5, 6},
                                      {6, 6, 7},
                                      {7, 7, 8},
                                      {8, 8, 9},
                                      {9, 9, 10},
                                      {8, 4, 7},
                                      {8, 4, 8},
                                      {8, 4, 9},
                                      {8, 4, 10},
                                      {8, 4, 11}});
        p["still-life"] = tuples({{5, 5},
                                  {8, 8},
                                  {8, 10},
                                  {9, 9},
                                  {9, 12},
                                  {10, 10},
                                  {10, 14},
                                  {12, 12},
                                  {12, 18}});
        return p;
    }();
    auto it = all.find(problem);
    if (it == all.end()) throw InvalidParams("unknown problem '" + problem + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

OracleResult enumerate_exact(const Instance& inst, long long max_nodes) {
    if (has_errors(validate_instance(inst)))
        throw std::invalid_argument("enumerate_exact requires a structurally valid instance");

    const int n = inst.num_vars();
    std::vector<std::vector<Val>> vals(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (inst.variables[static_cast<size_t>(i)].domain.size() > max_nodes)
            throw SpaceTooLarge("a single domain already exceeds the enumeration budget");
        vals[static_cast<size_t>(i)] = inst.variables[static_cast<size_t>(i)].domain.values();
    }

    // Constraints become checkable once the deepest variable of their scope
    // is assigned.
    std::vector<std::vector<const ConstraintKind*>> due(static_cast<size_t>(n));
    Assignment a(static_cast<size_t>(n), 0);
    for (const auto& c : inst.constraints) {
        auto sc = constraint_scope(c.kind);
        if (sc.empty()) {
            if (!constraint_holds(c.kind, a)) return {};
            continue;
        }
        VarId last = *std::max_element(sc.begin(), sc.end());
        due[static_cast<size_t>(last)].push_back(&c.kind);
    }

    OracleResult out;
    const bool cop = inst.kind == InstanceKind::Cop && inst.objective.has_value();
    const bool minimize = cop && inst.objective->sense == ObjectiveSense::Minimize;
    long long nodes = 0;

    std::function<void(int)> walk = [&](int d) {
        if (d == n) {
            ++out.count;
            if (cop) {
                try {
                    Val v = objective_value(inst, a);
                    if (!out.optimum || (minimize ? v < *out.optimum : v > *out.optimum))
                        out.optimum = v;
                } catch (const EvalError&) {
                    // An assignment whose objective cannot be evaluated is
                    // counted as satisfying but never becomes the optimum.
                }
            }
            return;
        }
        for (Val v : vals[static_cast<size_t>(d)]) {
            if (++nodes > max_nodes)
                throw SpaceTooLarge("exhaustive enumeration exceeded " +
                                    std::to_string(max_nodes) + " visited values");
            a[static_cast<size_t>(d)] = v;
            bool ok = true;
            for (const auto* k : due[static_cast<size_t>(d)])
                if (!constraint_holds(*k, a)) {
                    ok = false;
                    break;
                }
            if (ok) walk(d + 1);
        }
    };

    if (n == 0) {
        out.count = 1;
        return out;
    }
    walk(0);
    return out;
}

OracleResult reference_oracle(const ProblemSpec& spec, long long max_nodes) {
    return enumerate_exact(generate(spec), max_nodes);
}

}  // namespace xcore
