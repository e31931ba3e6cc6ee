#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <random>

#include "xcore/instance.hpp"

using namespace xcore;

namespace {

EvalErrorKind eval_error_kind(const Expr& e, const Assignment& a) {
    try {
        eval_expr(e, a);
    } catch (const EvalError& err) {
        return err.kind();
    }
    throw std::logic_error("expected evaluation to fail");
}

Instance small_instance(int n = 3) {
    Instance inst;
    inst.kind = InstanceKind::Csp;
    for (int i = 0; i < n; ++i)
        inst.variables.push_back({i, "x" + std::to_string(i), Domain(0, 4)});
    return inst;
}

std::vector<std::string> rule_names(const std::vector<ValidationError>& errors) {
    std::vector<std::string> out;
    for (const auto& e : errors) out.push_back(e.rule);
    return out;
}

}  // namespace

TEST_CASE("domain construction normalizes to disjoint non-adjacent intervals") {
    auto d = Domain::from_values({3, 5, 6, 7, 9});
    REQUIRE(d.ranges() == std::vector<Interval>{{3, 3}, {5, 7}, {9, 9}});
    REQUIRE(d.size() == 5);
    REQUIRE(d.min() == 3);
    REQUIRE(d.max() == 9);
    REQUIRE(d.contains(6));
    REQUIRE_FALSE(d.contains(4));
    REQUIRE_FALSE(d.contains(8));
    REQUIRE(d.values() == std::vector<Val>{3, 5, 6, 7, 9});

    REQUIRE(Domain(0, 4).size() == 5);
    REQUIRE_FALSE(Domain::from_intervals({{0, 2}, {5, 5}}).contains(3));
    REQUIRE(Domain(-1, 1).min() == -1);

    // Adjacent and overlapping pieces merge regardless of input order.
    auto merged = Domain::from_intervals({{5, 7}, {1, 2}, {3, 3}});
    REQUIRE(merged.ranges() == std::vector<Interval>{{1, 3}, {5, 7}});

    REQUIRE(Domain::from_values({4, 4, 4}).ranges() == std::vector<Interval>{{4, 4}});

    REQUIRE_THROWS_AS(Domain::from_values({}), std::invalid_argument);
    REQUIRE_THROWS_AS(Domain(3, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(Domain::from_intervals({{0, 5}, {7, 6}}), std::invalid_argument);
}

TEST_CASE("interval normalization is idempotent on random inputs") {
    std::mt19937 rng(20240814);
    std::uniform_int_distribution<Val> point(-50, 50);
    std::uniform_int_distribution<int> count(1, 12);
    for (int round = 0; round < 500; ++round) {
        std::vector<Interval> raw;
        int n = count(rng);
        for (int i = 0; i < n; ++i) {
            Val a = point(rng), b = point(rng);
            raw.push_back({std::min(a, b), std::max(a, b)});
        }
        auto once = normalize_intervals(raw);
        auto twice = normalize_intervals(once);
        REQUIRE(once == twice);
        for (size_t i = 0; i + 1 < once.size(); ++i) {
            REQUIRE(once[i].lo <= once[i].hi);
            REQUIRE(once[i + 1].lo - once[i].hi >= 2);
        }
    }
}

TEST_CASE("expression evaluation follows integer semantics") {
    Assignment a = {1, 2, 3};
    REQUIRE(eval_expr(add({val(2), val(3)}), {}) == 5);
    REQUIRE(eval_expr(eq(add({var(0), var(1)}), var(2)), a) == 1);
    REQUIRE(eval_expr(dist(var(0), var(1)), {7, 10}) == 3);

    // Division and modulo truncate toward zero.
    REQUIRE(eval_expr(div(val(7), val(2)), {}) == 3);
    REQUIRE(eval_expr(div(val(-7), val(2)), {}) == -3);
    REQUIRE(eval_expr(mod(val(-7), val(2)), {}) == -1);
    REQUIRE(eval_expr(mod(val(7), val(-2)), {}) == 1);

    REQUIRE(eval_expr(emin({val(4), val(-2), val(9)}), {}) == -2);
    REQUIRE(eval_expr(emax({val(4), val(-2), val(9)}), {}) == 9);
    REQUIRE(eval_expr(xcore::abs(val(-11)), {}) == 11);
    REQUIRE(eval_expr(neg(val(6)), {}) == -6);
    REQUIRE(eval_expr(sub(val(6), val(10)), {}) == -4);
    REQUIRE(eval_expr(mul({val(3), val(-4), val(2)}), {}) == -24);

    REQUIRE(eval_expr(ite(le(val(1), val(2)), val(10), val(20)), {}) == 10);
    REQUIRE(eval_expr(ite(gt(val(1), val(2)), val(10), val(20)), {}) == 20);
    REQUIRE(eval_expr(in_set(val(3), {1, 3, 5}), {}) == 1);
    REQUIRE(eval_expr(in_set(val(4), {1, 3, 5}), {}) == 0);

    // xor = odd parity; iff = all equal as booleans.
    REQUIRE(eval_expr(lxor({val(1), val(1), val(1)}), {}) == 1);
    REQUIRE(eval_expr(lxor({val(1), val(1), val(0)}), {}) == 0);
    REQUIRE(eval_expr(iff({val(0), val(0), val(0)}), {}) == 1);
    REQUIRE(eval_expr(iff({val(1), val(0)}), {}) == 0);
    REQUIRE(eval_expr(lnot(val(0)), {}) == 1);

    // Nonzero integers count as true in boolean contexts.
    REQUIRE(eval_expr(land({val(5), val(-3)}), {}) == 1);
    REQUIRE(eval_expr(lor({val(0), val(7)}), {}) == 1);
}

TEST_CASE("evaluation errors are typed and and/or short-circuit") {
    const Val big = std::numeric_limits<Val>::max();
    REQUIRE(eval_error_kind(div(val(1), val(0)), {}) == EvalErrorKind::DivisionByZero);
    REQUIRE(eval_error_kind(mod(val(1), val(0)), {}) == EvalErrorKind::DivisionByZero);
    REQUIRE(eval_error_kind(add({val(big), val(1)}), {}) == EvalErrorKind::Overflow);
    REQUIRE(eval_error_kind(mul({val(big), val(2)}), {}) == EvalErrorKind::Overflow);
    REQUIRE(eval_error_kind(neg(val(std::numeric_limits<Val>::min())), {}) ==
            EvalErrorKind::Overflow);
    REQUIRE(eval_error_kind(div(val(std::numeric_limits<Val>::min()), val(-1)), {}) ==
            EvalErrorKind::Overflow);

    // A decided and/or never evaluates the remaining children.
    REQUIRE(eval_expr(land({val(0), div(val(1), val(0))}), {}) == 0);
    REQUIRE(eval_expr(lor({val(1), div(val(1), val(0))}), {}) == 1);
}

namespace {

Expr random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 24);
    std::uniform_int_distribution<Val> constant(-9, 9);
    std::uniform_int_distribution<VarId> variable(0, 3);
    auto sub1 = [&] { return random_expr(rng, depth - 1); };
    auto subn = [&](int n) {
        std::vector<Expr> xs;
        for (int i = 0; i < n; ++i) xs.push_back(sub1());
        return xs;
    };
    std::uniform_int_distribution<int> width(2, 3);
    switch (pick(rng)) {
        case 0: return val(constant(rng));
        case 1: return var(variable(rng));
        case 2: return add(subn(width(rng)));
        case 3: return sub(sub1(), sub1());
        case 4: return mul(subn(width(rng)));
        case 5: return div(sub1(), sub1());
        case 6: return mod(sub1(), sub1());
        case 7: return xcore::abs(sub1());
        case 8: return neg(sub1());
        case 9: return dist(sub1(), sub1());
        case 10: return emin(subn(width(rng)));
        case 11: return emax(subn(width(rng)));
        case 12: return eq(sub1(), sub1());
        case 13: return ne(sub1(), sub1());
        case 14: return lt(sub1(), sub1());
        case 15: return le(sub1(), sub1());
        case 16: return gt(sub1(), sub1());
        case 17: return ge(sub1(), sub1());
        case 18: return land(subn(width(rng)));
        case 19: return lor(subn(width(rng)));
        case 20: return lnot(sub1());
        case 21: return lxor(subn(width(rng)));
        case 22: return iff(subn(width(rng)));
        case 23: return ite(sub1(), sub1(), sub1());
    }
    return in_set(sub1(), {constant(rng), constant(rng)});
}

}  // namespace

TEST_CASE("flat compilation evaluates exactly like the tree walk") {
    std::mt19937 rng(20240815);
    std::uniform_int_distribution<Val> value(-9, 9);
    for (int round = 0; round < 3000; ++round) {
        Expr e = random_expr(rng, 3);
        FlatExpr flat(e);
        for (int trial = 0; trial < 4; ++trial) {
            Assignment a = {value(rng), value(rng), value(rng), value(rng)};
            Val expected = 0;
            bool tree_throws = false;
            try {
                expected = eval_expr(e, a);
            } catch (const EvalError&) {
                tree_throws = true;
            }
            // On error both evaluators raise, though possibly from a
            // different checked operation when several would fail.
            if (tree_throws) {
                REQUIRE_THROWS_AS(flat.eval(a), EvalError);
            } else {
                REQUIRE(flat.eval(a) == expected);
            }
        }
    }

    // Short-circuits skip unevaluated subtrees in both forms.
    FlatExpr guarded_and(land({val(0), div(val(1), val(0))}));
    FlatExpr guarded_or(lor({val(1), div(val(1), val(0))}));
    FlatExpr guarded_ite(ite(val(1), val(42), div(val(1), val(0))));
    REQUIRE(guarded_and.eval({}) == 0);
    REQUIRE(guarded_or.eval({}) == 1);
    REQUIRE(guarded_ite.eval({}) == 42);
}

TEST_CASE("boolean-rooted expressions always evaluate to 0 or 1") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<Val> value(-9, 9);
    std::vector<Expr> roots = {
        eq(var(0), var(1)),
        ne(add({var(0), var(1)}), var(2)),
        land({le(var(0), var(1)), ge(var(1), var(2))}),
        lor({lt(var(0), val(0)), gt(var(2), val(0))}),
        lxor({eq(var(0), val(1)), eq(var(1), val(1)), eq(var(2), val(1))}),
        iff({le(var(0), var(1)), le(var(1), var(2))}),
        lnot(in_set(var(0), {-2, 0, 2})),
    };
    for (int round = 0; round < 2000; ++round) {
        Assignment a = {value(rng), value(rng), value(rng)};
        for (const auto& e : roots) {
            Val v = eval_expr(e, a);
            REQUIRE((v == 0 || v == 1));
            // Determinism: repeated evaluation yields the same value.
            REQUIRE(eval_expr(e, a) == v);
        }
    }
}

TEST_CASE("condition comparisons resolve value, variable, and set operands") {
    Assignment a = {3};
    REQUIRE(condition_holds(Condition::value(CondOp::Le, 5), 4, {}));
    REQUIRE_FALSE(condition_holds(Condition::value(CondOp::Lt, 4), 4, {}));
    REQUIRE(condition_holds(Condition::variable(CondOp::Gt, 0), 7, a));
    REQUIRE_FALSE(condition_holds(Condition::variable(CondOp::Eq, 0), 7, a));
    REQUIRE(condition_holds(Condition::interval(CondOp::In, 2, 4), 3, {}));
    REQUIRE_FALSE(condition_holds(Condition::interval(CondOp::In, 2, 4), 5, {}));
    REQUIRE(condition_holds(Condition::set(CondOp::NotIn, {1, 3, 5}), 4, {}));
    REQUIRE_FALSE(condition_holds(Condition::set(CondOp::NotIn, {1, 3, 5}), 3, {}));
    REQUIRE(condition_holds(Condition::value(CondOp::Ne, 2), 4, {}));
    REQUIRE(condition_holds(Condition::value(CondOp::Ge, 4), 4, {}));
}

TEST_CASE("constraint scopes cover payload and condition variables") {
    ElementCt elem;
    elem.list = {Term::of_var(4), Term::of_val(9), Term::of_var(6)};
    elem.index = 2;
    elem.cond = Condition::variable(CondOp::Eq, 8);
    auto scope = constraint_scope(ConstraintKind{elem});
    std::sort(scope.begin(), scope.end());
    REQUIRE(scope == std::vector<VarId>{2, 4, 6, 8});

    SumCt sum;
    sum.scope = {0, 1};
    sum.coeffs = {2, -1};
    sum.cond = Condition::value(CondOp::Le, 10);
    REQUIRE(constraint_scope(ConstraintKind{sum}) == std::vector<VarId>{0, 1});
    REQUIRE(constraint_kind_name(ConstraintKind{sum}) == std::string("sum"));
}

TEST_CASE("structural validation accepts a well-formed instance") {
    Instance inst = small_instance();
    inst.constraints.push_back({0, AllDifferentCt{{0, 1, 2}, {}}, {}});
    SumCt sum;
    sum.scope = {0, 1, 2};
    sum.coeffs = {1, 1, 1};
    sum.cond = Condition::value(CondOp::Eq, 6);
    inst.constraints.push_back({1, sum, {}});
    REQUIRE(validate_instance(inst).empty());
}

TEST_CASE("structural validation reports offending constraints and rules") {
    SECTION("sum with mismatched coefficient count") {
        Instance inst = small_instance();
        SumCt sum;
        sum.scope = {0, 1, 2};
        sum.coeffs = {1, 1};
        sum.cond = Condition::value(CondOp::Eq, 6);
        inst.constraints.push_back({7, sum, {}});
        auto errors = validate_instance(inst);
        REQUIRE(errors.size() == 1);
        REQUIRE(errors[0].rule == "ArityMismatch");
        REQUIRE(errors[0].constraint_id == 7);
        REQUIRE(has_errors(errors));
    }

    SECTION("extension tuple of wrong arity") {
        Instance inst = small_instance();
        ExtensionCt ext;
        ext.scope = {0, 1};
        ext.tuples = {{0, 0}, {1, 2, 3}};
        inst.constraints.push_back({0, ext, {}});
        auto rules = rule_names(validate_instance(inst));
        REQUIRE(std::count(rules.begin(), rules.end(), "TupleArity") == 1);
    }

    SECTION("starred flag must match tuple contents") {
        Instance inst = small_instance();
        ExtensionCt ext;
        ext.scope = {0, 1};
        ext.tuples = {{kStar, 1}};
        ext.starred = false;
        inst.constraints.push_back({0, ext, {}});
        auto rules = rule_names(validate_instance(inst));
        REQUIRE(std::count(rules.begin(), rules.end(), "StarFlag") == 1);
    }

    SECTION("objective presence must match instance kind") {
        Instance inst = small_instance();
        inst.kind = InstanceKind::Cop;
        auto errors = validate_instance(inst);
        REQUIRE(errors.size() == 1);
        REQUIRE(errors[0].rule == "ObjectivePresence");
        REQUIRE(errors[0].constraint_id == -1);

        inst.kind = InstanceKind::Csp;
        inst.objective = Objective{ObjectiveSense::Minimize, var(0)};
        REQUIRE(rule_names(validate_instance(inst)) ==
                std::vector<std::string>{"ObjectivePresence"});
    }

    SECTION("references to unknown variables") {
        Instance inst = small_instance();
        inst.constraints.push_back({0, AllDifferentCt{{0, 1, 9}, {}}, {}});
        auto rules = rule_names(validate_instance(inst));
        REQUIRE(std::count(rules.begin(), rules.end(), "UnknownVariable") == 1);
    }

    SECTION("condition operand kind must match the operator") {
        Instance inst = small_instance();
        CountCt count;
        count.scope = {0, 1};
        count.values = {1};
        count.cond = Condition::value(CondOp::In, 3);  // in() needs interval/set
        inst.constraints.push_back({0, count, {}});
        auto rules = rule_names(validate_instance(inst));
        REQUIRE(std::count(rules.begin(), rules.end(), "ConditionRhs") == 1);
    }

    SECTION("malformed expression arity") {
        Instance inst = small_instance();
        Expr bad;
        bad.op = ExprOp::Abs;  // no children
        inst.constraints.push_back({0, IntensionCt{bad}, {}});
        auto rules = rule_names(validate_instance(inst));
        REQUIRE(std::count(rules.begin(), rules.end(), "ExprArity") == 1);
    }

    SECTION("duplicate variable in allDifferent is a warning, not an error") {
        Instance inst = small_instance();
        inst.constraints.push_back({0, AllDifferentCt{{0, 1, 0}, {}}, {}});
        auto errors = validate_instance(inst);
        REQUIRE(errors.size() == 1);
        REQUIRE(errors[0].severity == ValidationError::Severity::Warning);
        REQUIRE_FALSE(has_errors(errors));

        // Excepting values lift the warning: both duplicates may take the
        // excepted value simultaneously.
        inst.constraints[0].kind = AllDifferentCt{{0, 1, 0}, {0}};
        REQUIRE(validate_instance(inst).empty());
    }

    SECTION("instantiation and cardinality length mismatches") {
        Instance inst = small_instance();
        inst.constraints.push_back({0, InstantiationCt{{0, 1}, {3}}, {}});
        CardinalityCt card;
        card.scope = {0, 1, 2};
        card.values = {0, 1};
        card.occurs = {{1, 1}};
        inst.constraints.push_back({1, card, {}});
        auto rules = rule_names(validate_instance(inst));
        REQUIRE(std::count(rules.begin(), rules.end(), "ArityMismatch") == 2);
    }

    SECTION("slide pattern placeholders must stay inside the window") {
        Instance inst = small_instance();
        SlideCt slide;
        slide.scope = {0, 1, 2};
        slide.window = 2;
        slide.offset = 1;
        slide.pattern = lt(var(0), var(2));  // placeholder 2 out of window
        inst.constraints.push_back({0, slide, {}});
        auto rules = rule_names(validate_instance(inst));
        REQUIRE(std::count(rules.begin(), rules.end(), "SlideShape") == 1);
    }
}

TEST_CASE("instances resolve variables by name") {
    Instance inst = small_instance();
    REQUIRE(inst.var_by_name("x1") == 1);
    REQUIRE(inst.var_by_name("missing") == -1);
    REQUIRE(inst.num_vars() == 3);
}
