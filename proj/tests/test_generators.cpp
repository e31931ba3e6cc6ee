// Instance generator tests: structural shape of every family, agreement
// between exhaustive enumeration and the search engine at desk scale,
// invariants of tagged constraints (symmetry breakers shrink the solution
// set without emptying it, redundant constraints change nothing),
// determinism of emitted bytes, round-trips, and parameter validation.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "xcore/checker.hpp"
#include "xcore/engine.hpp"
#include "xcore/generators.hpp"
#include "xcore/xcsp.hpp"

using namespace xcore;

namespace {

Instance gen(const std::string& problem, std::vector<Val> values) {
    return generate(make_spec(problem, values));
}

OracleResult oracle(const std::string& problem, std::vector<Val> values,
                    long long max_nodes = 10'000'000) {
    return enumerate_exact(gen(problem, std::move(values)), max_nodes);
}

bool has_tag(const Constraint& c, const std::string& tag) {
    return std::find(c.tags.begin(), c.tags.end(), tag) != c.tags.end();
}

// Copy of the instance without constraints carrying the tag.
Instance strip_tag(const Instance& inst, const std::string& tag) {
    Instance out = inst;
    out.constraints.clear();
    for (const auto& c : inst.constraints)
        if (!has_tag(c, tag)) out.constraints.push_back(c);
    for (size_t i = 0; i < out.constraints.size(); ++i)
        out.constraints[i].id = static_cast<int>(i);
    return out;
}

size_t count_tagged(const Instance& inst, const std::string& tag) {
    size_t n = 0;
    for (const auto& c : inst.constraints)
        if (has_tag(c, tag)) ++n;
    return n;
}

// Engine agreement for a satisfiability instance.
void check_csp_agreement(const Instance& inst, const OracleResult& exact) {
    SolveResult r = solve_csp(inst);
    if (exact.count > 0) {
        REQUIRE(r.status == SolveStatus::Sat);
        REQUIRE(r.solution.has_value());
        REQUIRE(check(inst, *r.solution).satisfied);
    } else {
        REQUIRE(r.status == SolveStatus::Unsat);
    }
}

// Engine agreement for an optimization instance.
void check_cop_agreement(const Instance& inst, const OracleResult& exact) {
    CopResult r = solve_cop(inst);
    if (exact.optimum.has_value()) {
        REQUIRE(r.status == SolveStatus::Sat);
        REQUIRE(r.proved_optimal);
        REQUIRE(r.best.has_value());
        REQUIRE(r.best->bound == *exact.optimum);
        REQUIRE(check(inst, r.best->assignment).satisfied);
        REQUIRE(objective_value(inst, r.best->assignment) == r.best->bound);
    } else {
        REQUIRE(r.status == SolveStatus::Unsat);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalogue and parameter plumbing
// ---------------------------------------------------------------------------

TEST_CASE("problem catalogue is fixed and complete") {
    const auto& names = problem_names();
    REQUIRE(names.size() == 13);
    std::set<std::string> set(names.begin(), names.end());
    REQUIRE(set.size() == names.size());
    for (const auto& n : names) {
        REQUIRE_FALSE(param_shape(n).names.empty());
        REQUIRE_FALSE(presets(n).empty());
    }
    REQUIRE_THROWS_AS(param_shape("no-such-problem"), InvalidParams);
    REQUIRE_THROWS_AS(presets("no-such-problem"), InvalidParams);
    ProblemSpec bogus;
    bogus.name = "no-such-problem";
    REQUIRE_THROWS_AS(generate(bogus), InvalidParams);
}

TEST_CASE("make_spec binds positional values to named parameters") {
    ProblemSpec s = make_spec("hamming", {20, 10, 3, 5});
    REQUIRE(s.param("n") == 20);
    REQUIRE(s.param("m") == 10);
    REQUIRE(s.param("d") == 3);
    REQUIRE(s.param("k") == 5);
    REQUIRE_FALSE(s.has_param("q"));
    REQUIRE_THROWS_AS(s.param("q"), InvalidParams);
    REQUIRE_THROWS_AS(make_spec("hamming", {20, 10, 3}), InvalidParams);
    REQUIRE_THROWS_AS(make_spec("hamming", {20, 10, 3, 5, 6}), InvalidParams);

    ProblemSpec b = make_spec("bin-packing-v1", {10, 3, 4, 5, 6});
    REQUIRE(b.param("capacity") == 10);
    REQUIRE(b.param_series("w") == std::vector<Val>{3, 4, 5, 6});
    REQUIRE_THROWS_AS(make_spec("bin-packing-v1", {10}), InvalidParams);
}

TEST_CASE("parameter validation rejects out-of-range tuples") {
    REQUIRE_THROWS_AS(gen("takuzu", {5}), InvalidParams);      // odd
    REQUIRE_THROWS_AS(gen("takuzu", {0}), InvalidParams);      // too small
    REQUIRE_THROWS_AS(gen("hamming", {3, 2, 0, 1}), InvalidParams);
    REQUIRE_THROWS_AS(gen("pyramid", {3, -1}), InvalidParams);
    REQUIRE_THROWS_AS(gen("pyramid", {0, 20}), InvalidParams);
    REQUIRE_THROWS_AS(gen("poolball-triangle", {1}), InvalidParams);
    REQUIRE_THROWS_AS(gen("still-life", {1, 1}), InvalidParams);
    REQUIRE_THROWS_AS(gen("social-golfers", {0, 1, 1}), InvalidParams);
    // every item fits one bin: the slot layout cannot be sized
    REQUIRE_THROWS_AS(gen("bin-packing-v1", {100, 1, 2, 3}), InvalidParams);
    REQUIRE_THROWS_AS(gen("bin-packing-v2", {100, 1, 2, 3}), InvalidParams);
    REQUIRE_THROWS_AS(gen("bin-packing-v1", {10, 11}), InvalidParams);   // w > capacity
    REQUIRE_THROWS_AS(gen("bin-packing-v1", {10, 0, 9, 9}), InvalidParams);  // w < 1
}

TEST_CASE("every generated instance passes structural validation") {
    const std::vector<std::pair<std::string, std::vector<Val>>> desk = {
        {"average-avoiding", {6}},
        {"hamming", {3, 2, 2, 1}},
        {"hyper-sudoku", {2}},
        {"takuzu", {4}},
        {"poolball-triangle", {3}},
        {"lit-puzzle", {3}},
        {"pyramid", {3, 20}},
        {"drinking", {10}},
        {"same-queens-knights", {3}},
        {"bin-packing-v1", {10, 3, 4, 5, 6}},
        {"bin-packing-v2", {10, 3, 4, 5, 6}},
        {"social-golfers", {2, 2, 3}},
        {"still-life", {3, 3}},
    };
    for (const auto& [name, values] : desk) {
        INFO(name);
        Instance inst = gen(name, values);
        REQUIRE_FALSE(has_errors(validate_instance(inst)));
        REQUIRE((inst.kind == InstanceKind::Cop) == inst.objective.has_value());
    }
}

TEST_CASE("equal specs produce byte-identical documents") {
    for (const auto& name : problem_names()) {
        INFO(name);
        const auto& pre = presets(name);
        // use a small tuple instead of the presets for the heavy families
        std::vector<Val> values = pre.front().values;
        if (name == "hamming") values = {3, 2, 2, 1};
        if (name == "drinking") values = {15};
        if (name == "same-queens-knights") values = {3};
        if (name == "takuzu") values = {4};
        if (name == "hyper-sudoku") values = {2};
        if (name == "average-avoiding") values = {6};
        if (name == "poolball-triangle") values = {4};
        if (name == "lit-puzzle") values = {4};
        if (name == "pyramid") values = {4, 30};
        if (name == "bin-packing-v1" || name == "bin-packing-v2") values = {10, 3, 4, 5, 6};
        if (name == "social-golfers") values = {2, 2, 3};
        if (name == "still-life") values = {3, 4};
        Instance a = gen(name, values);
        Instance b = gen(name, values);
        REQUIRE(a == b);
        REQUIRE(emit_instance(a) == emit_instance(b));

        ParseResult back = parse_instance(emit_instance(a));
        REQUIRE(back.ok());
        REQUIRE(*back.instance == a);
    }
}

// ---------------------------------------------------------------------------
// Family shapes
// ---------------------------------------------------------------------------

TEST_CASE("average-avoiding shape") {
    Instance inst = gen("average-avoiding", {20});
    REQUIRE(inst.num_vars() == 20);
    for (const auto& v : inst.variables) {
        REQUIRE(v.domain.min() == 0);
        REQUIRE(v.domain.max() == 19);
    }
    size_t intensions = 0, alldiff = 0, minimum = 0;
    for (const auto& c : inst.constraints) {
        if (std::holds_alternative<IntensionCt>(c.kind)) ++intensions;
        if (std::holds_alternative<AllDifferentCt>(c.kind)) ++alldiff;
        if (std::holds_alternative<MinimumCt>(c.kind)) {
            ++minimum;
            REQUIRE(has_tag(c, "symmetry-breaking"));
        }
    }
    REQUIRE(intensions == 1140);  // one per i < k < j triple of 20 positions
    REQUIRE(alldiff == 1);
    REQUIRE(minimum == 1);
    REQUIRE(inst.kind == InstanceKind::Csp);
}

TEST_CASE("hamming shape") {
    Instance inst = gen("hamming", {20, 10, 3, 5});
    // one cell per word position, nothing else
    REQUIRE(inst.num_vars() == 200);
    for (int i = 0; i < 200; ++i) {
        REQUIRE(inst.variables[i].domain.min() == 0);
        REQUIRE(inst.variables[i].domain.max() == 2);
    }
    size_t distances = 0, lex = 0;
    for (const auto& c : inst.constraints) {
        if (auto* ct = std::get_if<IntensionCt>(&c.kind)) {
            ++distances;
            // sum of the ten per-position mismatches on one side, the
            // distance bound on the other
            REQUIRE(ct->expr.op == ExprOp::Ge);
            REQUIRE(ct->expr.children[0].op == ExprOp::Add);
            REQUIRE(ct->expr.children[0].children.size() == 10);
            REQUIRE(ct->expr.children[1] == val(5));
            std::vector<VarId> scope = constraint_scope(c.kind);
            REQUIRE(scope.size() == 20);
        }
        if (std::holds_alternative<LexCt>(c.kind)) {
            ++lex;
            REQUIRE(has_tag(c, "symmetry-breaking"));
        }
    }
    REQUIRE(distances == 190);
    REQUIRE(lex == 1);
}

TEST_CASE("hyper-sudoku shape") {
    Instance inst = gen("hyper-sudoku", {3});
    REQUIRE(inst.num_vars() == 81);
    size_t matrix = 0, blocks = 0;
    for (const auto& c : inst.constraints) {
        if (std::holds_alternative<AllDifferentMatrixCt>(c.kind)) ++matrix;
        if (std::holds_alternative<AllDifferentCt>(c.kind)) ++blocks;
    }
    REQUIRE(matrix == 1);
    REQUIRE(blocks == 9 + 4);  // base blocks plus the four shaded ones
}

TEST_CASE("takuzu shape") {
    Instance inst = gen("takuzu", {4});
    REQUIRE(inst.num_vars() == 16);
    size_t sums = 0, lists = 0, triples = 0;
    for (const auto& c : inst.constraints) {
        if (auto* s = std::get_if<SumCt>(&c.kind)) {
            ++sums;
            REQUIRE(s->cond.op == CondOp::Eq);
            REQUIRE(std::get<Condition::ValueRhs>(s->cond.rhs).value == 2);
        }
        if (std::holds_alternative<AllDifferentListCt>(c.kind)) ++lists;
        if (std::holds_alternative<IntensionCt>(c.kind)) ++triples;
    }
    REQUIRE(sums == 8);
    REQUIRE(lists == 2);
    REQUIRE(triples == 2 * 4 * 2);  // interior lines in both directions
}

TEST_CASE("bin packing arithmetic on hand-checked weight lists") {
    // capacity 10, weights {3,4,5,6}: two bins of two slots, z pinned to 2
    Instance v1 = gen("bin-packing-v1", {10, 3, 4, 5, 6});
    REQUIRE(v1.num_vars() == 2 * 2 + 1);
    const Variable& z1 = v1.variables.back();
    REQUIRE(z1.name == "z");
    REQUIRE(z1.domain.min() == 2);  // half-capacity lower bound
    REQUIRE(z1.domain.max() == 2);  // sequential fill bin count

    // capacity 10, weights {3,4,5,5,6,7}: three bins, lower bound three
    Instance v2 = gen("bin-packing-v2", {10, 3, 4, 5, 5, 6, 7});
    const Variable& z2 = v2.variables.back();
    REQUIRE(z2.domain.min() == 3);
    REQUIRE(z2.domain.max() == 3);
    REQUIRE(v2.num_vars() == 6 + 1);
    for (int i = 0; i < 6; ++i) REQUIRE(v2.variables[i].domain.max() == 2);

    // slot domains carry 0 plus each distinct weight
    const Domain& slot = v1.variables[0].domain;
    REQUIRE(slot.values() == std::vector<Val>{0, 3, 4, 5, 6});

    // the two weights above half the capacity get consecutive fixed bins
    bool found_fixing = false;
    for (const auto& c : v2.constraints)
        if (auto* fix = std::get_if<InstantiationCt>(&c.kind)) {
            found_fixing = true;
            REQUIRE(has_tag(c, "symmetry-breaking"));
            REQUIRE(fix->values == std::vector<Val>{0, 1});
        }
    REQUIRE(found_fixing);
}

TEST_CASE("bin packing v2 orders runs of equal weights") {
    Instance inst = gen("bin-packing-v2", {10, 4, 4, 5, 6, 7});
    size_t ordered = 0;
    for (const auto& c : inst.constraints)
        if (auto* o = std::get_if<OrderedCt>(&c.kind)) {
            ++ordered;
            REQUIRE(o->rel == RelOp::Le);
            REQUIRE(o->scope.size() == 2);  // the run of two fours
            REQUIRE(has_tag(c, "symmetry-breaking"));
        }
    REQUIRE(ordered == 1);

    // a trailing run is never recorded
    Instance tail = gen("bin-packing-v2", {10, 3, 4, 5, 6, 6});
    for (const auto& c : tail.constraints)
        REQUIRE_FALSE(std::holds_alternative<OrderedCt>(c.kind));

    // a weight list whose greedy bin count undershoots the lower bound is
    // rejected rather than given an empty bin-count window
    REQUIRE_THROWS_AS(gen("bin-packing-v2", {10, 5, 5, 5, 6, 7}), InvalidParams);
}

TEST_CASE("social golfers fixes the first week and first players") {
    Instance inst = gen("social-golfers", {2, 2, 3});
    size_t inst_ct = 0, card = 0, lex = 0, red = 0;
    for (const auto& c : inst.constraints) {
        if (std::holds_alternative<InstantiationCt>(c.kind)) ++inst_ct;
        if (std::holds_alternative<CardinalityCt>(c.kind)) ++card;
        if (auto* l = std::get_if<LexCt>(&c.kind)) {
            ++lex;
            REQUIRE(l->matrix);
        }
        if (has_tag(c, "redundant")) {
            ++red;
            REQUIRE(std::holds_alternative<AllDifferentMatrixCt>(c.kind));
        }
    }
    REQUIRE(inst_ct == 1 + 2);  // whole first week, then two later-week heads
    REQUIRE(card == 3);
    REQUIRE(lex == 1);
    REQUIRE(red == 1);  // square layout with one extra week

    // non-square layout uses plain distinct groups instead
    Instance other = gen("social-golfers", {3, 2, 2});
    for (const auto& c : other.constraints)
        if (has_tag(c, "redundant"))
            REQUIRE(std::holds_alternative<AllDifferentCt>(c.kind));
}

TEST_CASE("still life links neighbour counts through a table") {
    Instance inst = gen("still-life", {3, 3});
    REQUIRE(inst.num_vars() == 9 + 9);
    size_t tables = 0, neg = 0, sym = 0;
    for (const auto& c : inst.constraints) {
        if (auto* e = std::get_if<ExtensionCt>(&c.kind)) {
            if (e->positive) {
                ++tables;
                REQUIRE(e->tuples.size() == 10);  // 8 dead rows + 2 live rows
            } else {
                ++neg;
                REQUIRE(e->tuples == std::vector<std::vector<Val>>{{1, 1, 1}});
            }
        }
        if (has_tag(c, "symmetry-breaking")) ++sym;
    }
    REQUIRE(tables == 9);
    REQUIRE(neg == 4);  // one full-row triple per border side
    REQUIRE(sym == 2);  // corner comparisons on square boards
    REQUIRE(count_tagged(gen("still-life", {3, 4}), "symmetry-breaking") == 0);
}

TEST_CASE("same queens knights skips empty attack sets") {
    // on a 2x2 board no knight move exists, so no knight auxiliaries appear
    Instance small = gen("same-queens-knights", {2});
    for (const auto& v : small.variables) REQUIRE(v.name.substr(0, 2) != "ak");
    // on 3x3 both kinds of auxiliaries exist
    Instance bigger = gen("same-queens-knights", {3});
    bool found_ak = false, found_aq = false;
    for (const auto& v : bigger.variables) {
        if (v.name.substr(0, 2) == "ak") found_ak = true;
        if (v.name.substr(0, 2) == "aq") found_aq = true;
    }
    REQUIRE(found_ak);
    REQUIRE(found_aq);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration vs the search engine (desk scale)
// ---------------------------------------------------------------------------

TEST_CASE("average-avoiding: enumeration agrees with search") {
    OracleResult r4 = oracle("average-avoiding", {4});
    REQUIRE(r4.count > 0);
    check_csp_agreement(gen("average-avoiding", {4}), r4);
    OracleResult r5 = oracle("average-avoiding", {5});
    check_csp_agreement(gen("average-avoiding", {5}), r5);
}

TEST_CASE("hamming: four strictly increasing binary words") {
    OracleResult r = oracle("hamming", {3, 2, 2, 1});
    // distance >= 1 makes rows pairwise distinct; the row ordering then
    // leaves exactly C(4,3) choices of three words from {0,1}^2
    REQUIRE(r.count == 4);
    check_csp_agreement(gen("hamming", {3, 2, 2, 1}), r);
}

TEST_CASE("hyper-sudoku: degenerate board has one solution") {
    OracleResult r = oracle("hyper-sudoku", {1});
    REQUIRE(r.count == 1);
    // the 4x4 board is too wide for enumeration but fine for search
    Instance inst = gen("hyper-sudoku", {2});
    SolveResult sr = solve_csp(inst);
    REQUIRE(sr.status == SolveStatus::Sat);
    REQUIRE(check(inst, *sr.solution).satisfied);
}

TEST_CASE("takuzu: the 2x2 board has its two chequerboards") {
    OracleResult r = oracle("takuzu", {2});
    REQUIRE(r.count == 2);
    check_csp_agreement(gen("takuzu", {2}), r);
    OracleResult r4 = oracle("takuzu", {4});
    REQUIRE(r4.count > 0);
    check_csp_agreement(gen("takuzu", {4}), r4);
}

TEST_CASE("poolball: two orderings of the three balls") {
    OracleResult r = oracle("poolball-triangle", {2});
    REQUIRE(r.count == 2);
    check_csp_agreement(gen("poolball-triangle", {2}), r);
    OracleResult r3 = oracle("poolball-triangle", {3});
    check_csp_agreement(gen("poolball-triangle", {3}), r3);
}

TEST_CASE("lit-puzzle: the 3x3 cross pattern needs five presses") {
    Instance inst = gen("lit-puzzle", {3});
    OracleResult r = enumerate_exact(inst);
    REQUIRE(r.count >= 1);
    REQUIRE(r.optimum.has_value());
    REQUIRE(*r.optimum == 5);
    check_cop_agreement(inst, r);
}

TEST_CASE("pyramid: smallest nonzero root on three rows is eight") {
    Instance inst = gen("pyramid", {3, 20});
    OracleResult r = enumerate_exact(inst);
    REQUIRE(r.count > 0);
    REQUIRE(r.optimum.has_value());
    REQUIRE(*r.optimum == 8);
    check_cop_agreement(inst, r);
}

TEST_CASE("drinking: one drink covers the first two forced minutes") {
    Instance inst = gen("drinking", {10});
    OracleResult r = enumerate_exact(inst);
    REQUIRE(r.optimum.has_value());
    REQUIRE(*r.optimum == 1);
    check_cop_agreement(inst, r);
}

TEST_CASE("same queens knights: two pieces fit on a 2x2 board") {
    Instance inst = gen("same-queens-knights", {2});
    OracleResult r = enumerate_exact(inst);
    REQUIRE(r.optimum.has_value());
    REQUIRE(*r.optimum == 2);
    check_cop_agreement(inst, r);
}

TEST_CASE("bin packing: both formulations reach the same optimum") {
    for (const std::vector<Val>& params :
         {std::vector<Val>{10, 3, 4, 5, 6}, std::vector<Val>{10, 3, 4, 5, 5, 6, 7}}) {
        INFO("capacity " << params[0]);
        Instance v1 = gen("bin-packing-v1", params);
        Instance v2 = gen("bin-packing-v2", params);
        OracleResult r1 = enumerate_exact(v1);
        OracleResult r2 = enumerate_exact(v2);
        REQUIRE(r1.optimum.has_value());
        REQUIRE(r2.optimum.has_value());
        REQUIRE(*r1.optimum == *r2.optimum);
        check_cop_agreement(v1, r1);
        check_cop_agreement(v2, r2);
    }
}

TEST_CASE("social golfers: tiny rounds enumerate as expected") {
    OracleResult tiny = oracle("social-golfers", {2, 1, 2});
    REQUIRE(tiny.count == 1);
    check_csp_agreement(gen("social-golfers", {2, 1, 2}), tiny);

    OracleResult square = oracle("social-golfers", {2, 2, 3});
    REQUIRE(square.count == 1);
    check_csp_agreement(gen("social-golfers", {2, 2, 3}), square);
}

TEST_CASE("still life: empty and full 2x2 boards are the stable ones") {
    Instance inst = gen("still-life", {2, 2});
    OracleResult r = enumerate_exact(inst);
    REQUIRE(r.count == 2);
    REQUIRE(r.optimum.has_value());
    REQUIRE(*r.optimum == 4);
    check_cop_agreement(inst, r);

    Instance wide = gen("still-life", {2, 3});
    OracleResult rw = enumerate_exact(wide);
    REQUIRE(rw.optimum.has_value());
    REQUIRE(*rw.optimum == 4);  // a 2x2 block in the corner
    check_cop_agreement(wide, rw);
}

// ---------------------------------------------------------------------------
// Tag semantics
// ---------------------------------------------------------------------------

TEST_CASE("symmetry breakers shrink the solution set but keep a witness") {
    const std::vector<std::pair<std::string, std::vector<Val>>> cases = {
        {"average-avoiding", {4}},
        {"poolball-triangle", {2}},
        {"hamming", {3, 2, 2, 1}},
        {"still-life", {2, 2}},
        {"social-golfers", {2, 2, 3}},
    };
    for (const auto& [name, values] : cases) {
        INFO(name);
        Instance tagged = gen(name, values);
        Instance bare = strip_tag(tagged, "symmetry-breaking");
        OracleResult with = enumerate_exact(tagged);
        OracleResult without = enumerate_exact(bare);
        REQUIRE(with.count <= without.count);
        if (without.count > 0) REQUIRE(with.count > 0);
        if (without.optimum.has_value()) {
            REQUIRE(with.optimum.has_value());
            REQUIRE(*with.optimum == *without.optimum);
        }
    }
    // the poolball mirror symmetry halves the count exactly
    Instance pool = gen("poolball-triangle", {2});
    REQUIRE(enumerate_exact(strip_tag(pool, "symmetry-breaking")).count == 4);
    REQUIRE(enumerate_exact(pool).count == 2);
}

TEST_CASE("redundant constraints never change the solution set") {
    for (const auto& params :
         {std::vector<Val>{2, 2, 3}, std::vector<Val>{2, 1, 2}, std::vector<Val>{3, 1, 2}}) {
        INFO("golfers " << params[0] << "," << params[1] << "," << params[2]);
        Instance tagged = gen("social-golfers", params);
        Instance bare = strip_tag(tagged, "redundant");
        REQUIRE(enumerate_exact(tagged).count == enumerate_exact(bare).count);
    }
}

// ---------------------------------------------------------------------------
// Enumeration oracle behaviour
// ---------------------------------------------------------------------------

TEST_CASE("enumeration raises once the walk exceeds its budget") {
    Instance inst = gen("takuzu", {4});
    REQUIRE_THROWS_AS(enumerate_exact(inst, 10), SpaceTooLarge);
    // hyper-sudoku at base 2 cannot prune early enough under a tiny budget
    REQUIRE_THROWS_AS(enumerate_exact(gen("hyper-sudoku", {2}), 100000), SpaceTooLarge);
}

TEST_CASE("reference oracle is enumeration over the generated instance") {
    OracleResult a = reference_oracle(make_spec("takuzu", {2}));
    OracleResult b = enumerate_exact(gen("takuzu", {2}));
    REQUIRE(a.count == b.count);
}

TEST_CASE("enumeration rejects malformed instances") {
    Instance broken;
    broken.variables.push_back({0, "x", Domain(0, 1)});
    broken.variables.push_back({7, "y", Domain(0, 1)});  // non-contiguous id
    REQUIRE_THROWS_AS(enumerate_exact(broken), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

TEST_CASE("presets parse through make_spec and respect each family's rules") {
    for (const auto& name : problem_names()) {
        INFO(name);
        for (const auto& preset : presets(name)) {
            INFO(preset.label);
            ProblemSpec spec = make_spec(name, preset.values);
            REQUIRE(spec.name == name);
        }
    }
}

TEST_CASE("competition-scale presets generate valid instances",
          "[presets][!benchmark]") {
    // generation only; solving these is the harness's job
    for (const auto& name : problem_names()) {
        for (const auto& preset : presets(name)) {
            INFO(name << " " << preset.label);
            Instance inst = generate(make_spec(name, preset.values));
            REQUIRE_FALSE(has_errors(validate_instance(inst)));
        }
    }
}
