#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "xcore/xcsp.hpp"

using namespace xcore;

namespace {

Instance parse_ok(const std::string& doc, FormatProfile profile = FormatProfile::main()) {
    ParseResult r = parse_instance(doc, profile);
    for (const auto& d : r.diagnostics) {
        if (d.severity == ParseDiagnostic::Severity::Error) {
            UNSCOPED_INFO("diagnostic: " << d.path << ": " << d.message);
        }
    }
    REQUIRE(r.ok());
    return *r.instance;
}

std::vector<std::string> parse_errors(const std::string& doc,
                                      FormatProfile profile = FormatProfile::main()) {
    ParseResult r = parse_instance(doc, profile);
    REQUIRE_FALSE(r.ok());
    std::vector<std::string> msgs;
    for (const auto& d : r.diagnostics)
        if (d.severity == ParseDiagnostic::Severity::Error) msgs.push_back(d.message);
    REQUIRE_FALSE(msgs.empty());
    return msgs;
}

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
    return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) {
        return m.find(needle) != std::string::npos;
    });
}

// One document exercising every supported constraint element plus groups,
// blocks, arrays, and slices.
const char* kFullDoc = R"(
<instance format="XCSP3" type="COP">
  <variables>
    <var id="x0"> 0..4 </var>
    <var id="x1"> 0..4 </var>
    <var id="x2"> 0..4 </var>
    <var id="x3"> 0..4 </var>
    <array id="y" size="[2][2]"> 0..9 </array>
    <var id="idx"> 0..3 </var>
    <var id="w"> 1 3 5..7 </var>
  </variables>
  <constraints>
    <intension> eq(add(x0,x1),x2) </intension>
    <extension>
      <list> x0 x1 </list>
      <supports> (0,1)(1,*)(2,3) </supports>
    </extension>
    <extension>
      <list> x2 x3 </list>
      <conflicts> (4,4) </conflicts>
    </extension>
    <regular>
      <list> x0 x1 x2 </list>
      <transitions> (a,0,a)(a,1,b)(b,0,b) </transitions>
      <start> a </start>
      <final> b </final>
    </regular>
    <mdd>
      <list> x0 x1 </list>
      <transitions> (r,0,n1)(r,1,n2)(n1,2,t)(n2,3,t) </transitions>
    </mdd>
    <allDifferent> x0 x1 x2 </allDifferent>
    <allDifferent>
      <list> x0 x1 x2 </list>
      <except> 0 </except>
    </allDifferent>
    <allDifferent>
      <matrix> (y[0][0],y[0][1])(y[1][0],y[1][1]) </matrix>
    </allDifferent>
    <allDifferent>
      <list> x0 x1 </list>
      <list> x2 x3 </list>
    </allDifferent>
    <allEqual> y[0] </allEqual>
    <ordered>
      <list> x0 x1 x2 </list>
      <lengths> 1 1 </lengths>
      <operator> lt </operator>
    </ordered>
    <lex>
      <list> x0 x1 </list>
      <list> x2 x3 </list>
      <operator> le </operator>
    </lex>
    <lex>
      <matrix> (x0,x1)(x2,x3) </matrix>
      <operator> ge </operator>
    </lex>
    <precedence>
      <list> x0 x1 x2 x3 </list>
      <values> 1 2 </values>
    </precedence>
    <sum>
      <list> x0 x1 x2 </list>
      <coeffs> 1 2 3 </coeffs>
      <condition> (le,10) </condition>
    </sum>
    <count>
      <list> x0 x1 x2 </list>
      <values> 2 </values>
      <condition> (eq,idx) </condition>
    </count>
    <nValues>
      <list> x0 x1 x2 </list>
      <condition> (ge,2) </condition>
    </nValues>
    <cardinality>
      <list> x0 x1 x2 x3 </list>
      <values> 0 1 </values>
      <occurs> 1 1..2 </occurs>
    </cardinality>
    <maximum>
      <list> x0 x1 </list>
      <condition> (eq,x2) </condition>
    </maximum>
    <minimum>
      <list> x0 x1 </list>
      <condition> (ne,0) </condition>
    </minimum>
    <element>
      <list> y[] </list>
      <index> idx </index>
      <condition> (eq,w) </condition>
    </element>
    <channel>
      <list> x0 x1 x2 x3 </list>
    </channel>
    <noOverlap>
      <origins> x0 x1 </origins>
      <lengths> 2 x2 </lengths>
    </noOverlap>
    <noOverlap>
      <origins> (x0,x1)(x2,x3) </origins>
      <lengths> (1,2)(2,1) </lengths>
    </noOverlap>
    <cumulative>
      <origins> x0 x1 </origins>
      <lengths> 2 2 </lengths>
      <heights> 1 w </heights>
      <condition> (le,3) </condition>
    </cumulative>
    <binPacking>
      <list> x0 x1 x2 </list>
      <sizes> 3 4 5 </sizes>
      <condition> (le,10) </condition>
    </binPacking>
    <knapsack>
      <list> x0 x1 </list>
      <weights> 3 4 </weights>
      <profits> 5 6 </profits>
      <condition> (le,10) </condition>
      <condition> (ge,7) </condition>
    </knapsack>
    <circuit> x0 x1 x2 x3 </circuit>
    <instantiation>
      <list> x0 x1 </list>
      <values> 2 3 </values>
    </instantiation>
    <slide offset="1">
      <list> x0 x1 x2 x3 </list>
      <intension> le(%0,%1) </intension>
    </slide>
    <block class="symmetry-breaking">
      <intension> le(x0,x1) </intension>
    </block>
    <group>
      <sum>
        <list> %0 %1 </list>
        <coeffs> 1 1 </coeffs>
        <condition> (le,%2) </condition>
      </sum>
      <args> x0 x1 5 </args>
      <args> x2 x3 6 </args>
    </group>
  </constraints>
  <objectives>
    <minimize type="sum">
      <list> x0 x1 x2 </list>
      <coeffs> 1 2 1 </coeffs>
    </minimize>
  </objectives>
</instance>
)";

}  // namespace

TEST_CASE("variable declarations map ranges, value lists, and arrays") {
    Instance inst = parse_ok(R"(
<instance format="XCSP3" type="CSP">
  <variables>
    <var id="x"> 0..9 </var>
    <var id="mixed"> -3 1 4..6 </var>
    <array id="a" size="[2][3]"> 0..1 </array>
  </variables>
</instance>)");
    REQUIRE(inst.num_vars() == 8);
    REQUIRE(inst.variables[0].name == "x");
    REQUIRE(inst.variables[0].domain == Domain(0, 9));
    REQUIRE(inst.variables[1].domain ==
            Domain::from_intervals({{-3, -3}, {1, 1}, {4, 6}}));
    REQUIRE(inst.var_by_name("a[0][0]") == 2);
    REQUIRE(inst.var_by_name("a[1][2]") == 7);
    REQUIRE(inst.variables[5].name == "a[1][0]");
}

TEST_CASE("starred support tables parse into wildcard tuples") {
    Instance inst = parse_ok(R"(
<instance format="XCSP3" type="CSP">
  <variables>
    <var id="x"> 0..3 </var>
    <var id="y"> 0..3 </var>
  </variables>
  <constraints>
    <extension>
      <list> x y </list>
      <supports> (1,*)(2,3) </supports>
    </extension>
  </constraints>
</instance>)");
    const auto& ext = std::get<ExtensionCt>(inst.constraints.at(0).kind);
    REQUIRE(ext.positive);
    REQUIRE(ext.starred);
    REQUIRE(ext.tuples == std::vector<std::vector<Val>>{{1, kStar}, {2, 3}});
}

TEST_CASE("the full catalogue document parses and survives a round trip") {
    Instance first = parse_ok(kFullDoc);
    REQUIRE(first.num_vars() == 10);
    REQUIRE(first.constraints.size() == 33);
    REQUIRE(first.kind == InstanceKind::Cop);

    // Spot-checks on payload mapping.
    const auto& ext = std::get<ExtensionCt>(first.constraints.at(1).kind);
    REQUIRE(ext.starred);
    REQUIRE(ext.tuples.at(1) == std::vector<Val>{1, kStar});
    const auto& neg = std::get<ExtensionCt>(first.constraints.at(2).kind);
    REQUIRE_FALSE(neg.positive);

    const auto& reg = std::get<RegularCt>(first.constraints.at(3).kind);
    REQUIRE(reg.start == "a");
    REQUIRE(reg.transitions.size() == 3);
    REQUIRE(reg.transitions[1] == RegularCt::Transition{"a", 1, "b"});

    const auto& alleq = std::get<AllEqualCt>(first.constraints.at(9).kind);
    REQUIRE(alleq.scope.size() == 2);  // y[0] row slice

    const auto& slide = std::get<SlideCt>(first.constraints.at(29).kind);
    REQUIRE(slide.window == 2);
    REQUIRE(slide.offset == 1);
    REQUIRE(slide.pattern == le(var(0), var(1)));

    REQUIRE(first.constraints.at(30).tags == std::vector<std::string>{"symmetry-breaking"});

    // Group expansion yields one sum per argument row.
    const auto& g1 = std::get<SumCt>(first.constraints.at(31).kind);
    const auto& g2 = std::get<SumCt>(first.constraints.at(32).kind);
    REQUIRE(g1.scope == std::vector<VarId>{0, 1});
    REQUIRE(g1.cond == Condition::value(CondOp::Le, 5));
    REQUIRE(g2.scope == std::vector<VarId>{2, 3});
    REQUIRE(g2.cond == Condition::value(CondOp::Le, 6));

    REQUIRE(first.objective.has_value());
    const auto& ws = std::get<WeightedSum>(first.objective->body);
    REQUIRE(ws.coeffs == std::vector<Val>{1, 2, 1});

    // Round trip: emitted text parses back to an equal instance.
    std::string emitted = emit_instance(first);
    Instance second = parse_ok(emitted);
    REQUIRE(first == second);
    // And emitting again is byte-stable.
    REQUIRE(emit_instance(second) == emitted);

    // Parse determinism on identical bytes.
    REQUIRE(parse_ok(kFullDoc) == first);
}

TEST_CASE("csp documents emit without an objectives element") {
    Instance inst = parse_ok(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..1 </var> </variables>
  <constraints> <intension> eq(x,1) </intension> </constraints>
</instance>)");
    std::string emitted = emit_instance(inst);
    REQUIRE(emitted.find("<objectives>") == std::string::npos);
    REQUIRE(parse_ok(emitted) == inst);
}

TEST_CASE("expression objectives and unary tables round-trip") {
    Instance inst = parse_ok(R"(
<instance format="XCSP3" type="COP">
  <variables>
    <var id="x"> 0..9 </var>
    <var id="y"> 0..9 </var>
  </variables>
  <constraints>
    <extension> <list> x </list> <supports> 1 3 5..7 </supports> </extension>
  </constraints>
  <objectives>
    <maximize> add(x,mul(2,y)) </maximize>
  </objectives>
</instance>)");
    const auto& ext = std::get<ExtensionCt>(inst.constraints.at(0).kind);
    REQUIRE(ext.tuples == std::vector<std::vector<Val>>{{1}, {3}, {5}, {6}, {7}});
    REQUIRE(inst.objective->sense == ObjectiveSense::Maximize);
    REQUIRE(std::get<Expr>(inst.objective->body) ==
            add({var(0), mul({val(2), var(1)})}));
    REQUIRE(parse_ok(emit_instance(inst)) == inst);
}

TEST_CASE("element value sugar and knapsack limit sugar normalize to conditions") {
    Instance inst = parse_ok(R"(
<instance format="XCSP3" type="CSP">
  <variables>
    <var id="a"> 0..5 </var>
    <var id="b"> 0..5 </var>
    <var id="i"> 0..1 </var>
  </variables>
  <constraints>
    <element> <list> a b </list> <index> i </index> <value> 3 </value> </element>
    <element> <list> a b </list> <index> i </index> <value> b </value> </element>
    <knapsack>
      <list> a b </list>
      <weights> 2 3 </weights>
      <profits> 4 5 </profits>
      <limit> 9 </limit>
      <condition> (ge,6) </condition>
    </knapsack>
    <sum> <list> a b </list> <condition> (eq,7) </condition> </sum>
  </constraints>
</instance>)");
    const auto& e1 = std::get<ElementCt>(inst.constraints.at(0).kind);
    REQUIRE(e1.cond == Condition::value(CondOp::Eq, 3));
    const auto& e2 = std::get<ElementCt>(inst.constraints.at(1).kind);
    REQUIRE(e2.cond == Condition::variable(CondOp::Eq, 1));
    const auto& k = std::get<KnapsackCt>(inst.constraints.at(2).kind);
    REQUIRE(k.wcond == Condition::value(CondOp::Le, 9));
    REQUIRE(k.pcond == Condition::value(CondOp::Ge, 6));
    // Missing coeffs default to ones.
    const auto& s = std::get<SumCt>(inst.constraints.at(3).kind);
    REQUIRE(s.coeffs == std::vector<Val>{1, 1});
    REQUIRE(parse_ok(emit_instance(inst)) == inst);
}

TEST_CASE("functional expression parsing covers the operator set") {
    Instance inst;
    inst.variables = {{0, "x", Domain(0, 9)}, {1, "y", Domain(0, 9)},
                      {2, "z", Domain(0, 9)}};
    REQUIRE(parse_intension("eq(add(x,y),z)", inst) ==
            eq(add({var(0), var(1)}), var(2)));
    REQUIRE(parse_intension("ne(mul(2,x),add(y,z))", inst) ==
            ne(mul({val(2), var(0)}), add({var(1), var(2)})));
    REQUIRE(parse_intension("dist(x,y)", inst) == dist(var(0), var(1)));
    REQUIRE(parse_intension("if(le(x,1),y,z)", inst) ==
            ite(le(var(0), val(1)), var(1), var(2)));
    REQUIRE(parse_intension("in(x,set(1,3,5))", inst) == in_set(var(0), {1, 3, 5}));
    REQUIRE(parse_intension("not(xor(eq(x,1),eq(y,1)))", inst) ==
            lnot(lxor({eq(var(0), val(1)), eq(var(1), val(1))})));
    REQUIRE(parse_intension(" neg( -3 ) ", inst) == neg(val(-3)));

    REQUIRE_THROWS_AS(parse_intension("foo(x)", inst), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_intension("abs(x,y)", inst), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_intension("eq(x,unknown)", inst), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_intension("add(x,)", inst), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_intension("x y", inst), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_intension("in(x,{1,2})", inst), std::invalid_argument);
}

TEST_CASE("condition strings parse into typed operands") {
    NameResolver resolve = [](const std::string& name) -> VarId {
        return name == "z" ? 5 : -1;
    };
    REQUIRE(parse_condition("(le,100)", resolve) == Condition::value(CondOp::Le, 100));
    REQUIRE(parse_condition("(eq,z)", resolve) == Condition::variable(CondOp::Eq, 5));
    REQUIRE(parse_condition("(in,1..3)", resolve) == Condition::interval(CondOp::In, 1, 3));
    REQUIRE(parse_condition("(notin, {1,3,5})", resolve) ==
            Condition::set(CondOp::NotIn, {1, 3, 5}));
    REQUIRE(parse_condition(" ( ge , -2 ) ", resolve) == Condition::value(CondOp::Ge, -2));

    REQUIRE_THROWS_AS(parse_condition("(foo,1)", resolve), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_condition("(le,1..3)", resolve), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_condition("(in,7)", resolve), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_condition("(eq,missing)", resolve), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_condition("le,1", resolve), std::invalid_argument);
}

TEST_CASE("the mini profile is a strict subset of main") {
    std::string mini_doc = R"(
<instance format="XCSP3" type="CSP">
  <variables>
    <var id="x"> 0..3 </var>
    <var id="y"> 0..3 </var>
  </variables>
  <constraints>
    <intension> ne(x,y) </intension>
    <allDifferent> x y </allDifferent>
    <sum> <list> x y </list> <condition> (le,4) </condition> </sum>
  </constraints>
</instance>)";
    Instance under_mini = parse_ok(mini_doc, FormatProfile::mini());
    Instance under_main = parse_ok(mini_doc, FormatProfile::main());
    REQUIRE(under_mini == under_main);

    // Elements outside the mini set are rejected with a profile diagnostic.
    auto msgs = parse_errors(kFullDoc, FormatProfile::mini());
    REQUIRE(mentions(msgs, "mini profile"));
}

TEST_CASE("malformed documents produce diagnostics instead of instances") {
    REQUIRE(mentions(parse_errors("not xml at all"), "expected"));
    REQUIRE(mentions(parse_errors("<instance format=\"XCSP3\"><variables/></instance>"),
                     "type"));
    REQUIRE(mentions(parse_errors(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..z </var> </variables>
</instance>)"),
                     "domain token"));
    REQUIRE(mentions(parse_errors(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> </variables>
  <constraints> <frobnicate> x </frobnicate> </constraints>
</instance>)"),
                     "frobnicate"));
    REQUIRE(mentions(parse_errors(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> </variables>
  <constraints> <allDifferent> x ghost </allDifferent> </constraints>
</instance>)"),
                     "ghost"));
    REQUIRE(mentions(parse_errors(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> <var id="i"> 0..0 </var> </variables>
  <constraints>
    <element startIndex="1"> <list> x </list> <index> i </index>
      <value> 1 </value> </element>
  </constraints>
</instance>)"),
                     "startIndex"));
    REQUIRE(mentions(parse_errors(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> <var id="y"> 0..3 </var> </variables>
  <constraints>
    <sum> <list> x y </list> <coeffs> 1 </coeffs> <condition> (le,3) </condition> </sum>
  </constraints>
</instance>)"),
                     "ArityMismatch"));
    REQUIRE(mentions(parse_errors(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> <var id="x"> 0..3 </var> </variables>
</instance>)"),
                     "duplicate"));

    // Errors carry a location: byte offset or element path.
    ParseResult r = parse_instance(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> </variables>
  <constraints> <frobnicate> x </frobnicate> </constraints>
</instance>)");
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.diagnostics.at(0).offset > 0);
    REQUIRE(r.diagnostics.at(0).path == "/instance/constraints/frobnicate");
}

TEST_CASE("group substitution handles placeholder arity errors") {
    auto msgs = parse_errors(R"(
<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> </variables>
  <constraints>
    <group>
      <intension> le(%0,%1) </intension>
      <args> x </args>
    </group>
  </constraints>
</instance>)");
    REQUIRE(mentions(msgs, "%1"));
}
