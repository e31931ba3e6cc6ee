#include <string>

#include "xcore/xcsp.hpp"
#include "xcore/xml.hpp"

namespace xcore {

namespace {

using VarNamer = std::function<std::string(VarId)>;

std::string join_vals(const std::vector<Val>& vals) {
    std::string out;
    for (size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(vals[i]);
    }
    return out;
}

std::string join_names(const std::vector<VarId>& scope, const VarNamer& name) {
    std::string out;
    for (size_t i = 0; i < scope.size(); ++i) {
        if (i) out += ' ';
        out += name(scope[i]);
    }
    return out;
}

std::string term_text(const Term& t, const VarNamer& name) {
    return t.is_var ? name(t.var) : std::to_string(t.value);
}

std::string join_terms(const std::vector<Term>& terms, const VarNamer& name) {
    std::string out;
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ' ';
        out += term_text(terms[i], name);
    }
    return out;
}

std::string domain_text(const Domain& d) {
    std::string out;
    for (size_t i = 0; i < d.ranges().size(); ++i) {
        const Interval& iv = d.ranges()[i];
        if (i) out += ' ';
        out += std::to_string(iv.lo);
        if (iv.hi != iv.lo) out += ".." + std::to_string(iv.hi);
    }
    return out;
}

const char* rel_text(RelOp rel) {
    switch (rel) {
        case RelOp::Lt: return "lt";
        case RelOp::Le: return "le";
        case RelOp::Gt: return "gt";
        case RelOp::Ge: return "ge";
    }
    return "le";
}

const char* cond_op_text(CondOp op) {
    switch (op) {
        case CondOp::Lt: return "lt";
        case CondOp::Le: return "le";
        case CondOp::Gt: return "gt";
        case CondOp::Ge: return "ge";
        case CondOp::Eq: return "eq";
        case CondOp::Ne: return "ne";
        case CondOp::In: return "in";
        case CondOp::NotIn: return "notin";
    }
    return "eq";
}

std::string condition_text(const Condition& cond, const VarNamer& name) {
    std::string out = "(";
    out += cond_op_text(cond.op);
    out += ',';
    if (const auto* v = std::get_if<Condition::ValueRhs>(&cond.rhs)) {
        out += std::to_string(v->value);
    } else if (const auto* x = std::get_if<Condition::VarRhs>(&cond.rhs)) {
        out += name(x->var);
    } else if (const auto* iv = std::get_if<Condition::IntervalRhs>(&cond.rhs)) {
        out += std::to_string(iv->lo) + ".." + std::to_string(iv->hi);
    } else if (const auto* s = std::get_if<Condition::SetRhs>(&cond.rhs)) {
        out += '{';
        for (size_t i = 0; i < s->values.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(s->values[i]);
        }
        out += '}';
    }
    out += ')';
    return out;
}

XmlNode text_node(const std::string& text) {
    XmlNode n;
    n.text = text;
    return n;
}

XmlNode elem(const std::string& name, const std::string& text = "") {
    XmlNode n;
    n.name = name;
    if (!text.empty()) n.children.push_back(text_node(text));
    return n;
}

class Emitter {
public:
    explicit Emitter(const Instance& inst)
        : inst_(inst), name_([&inst](VarId v) { return inst.variables.at(v).name; }) {}

    std::string run() {
        XmlNode root = elem("instance");
        root.attrs = {{"format", "XCSP3"},
                      {"type", inst_.kind == InstanceKind::Csp ? "CSP" : "COP"}};

        XmlNode vars = elem("variables");
        for (const auto& v : inst_.variables) {
            XmlNode node = elem("var", domain_text(v.domain));
            node.attrs = {{"id", v.name}};
            vars.children.push_back(std::move(node));
        }
        root.children.push_back(std::move(vars));

        if (!inst_.constraints.empty()) {
            XmlNode cts = elem("constraints");
            for (const auto& c : inst_.constraints) {
                XmlNode node = std::visit([this](const auto& k) { return emit(k); }, c.kind);
                if (!c.tags.empty()) {
                    std::string cls;
                    for (size_t i = 0; i < c.tags.size(); ++i) {
                        if (i) cls += ' ';
                        cls += c.tags[i];
                    }
                    node.attrs.emplace_back("class", cls);
                }
                cts.children.push_back(std::move(node));
            }
            root.children.push_back(std::move(cts));
        }

        if (inst_.objective) {
            XmlNode objs = elem("objectives");
            const Objective& obj = *inst_.objective;
            XmlNode body = elem(obj.sense == ObjectiveSense::Minimize ? "minimize"
                                                                      : "maximize");
            if (const auto* e = std::get_if<Expr>(&obj.body)) {
                body.children.push_back(text_node(expr_to_text(*e, inst_)));
            } else {
                const auto& ws = std::get<WeightedSum>(obj.body);
                body.attrs.emplace_back("type", "sum");
                body.children.push_back(elem("list", join_names(ws.scope, name_)));
                body.children.push_back(elem("coeffs", join_vals(ws.coeffs)));
            }
            objs.children.push_back(std::move(body));
            root.children.push_back(std::move(objs));
        }
        return xml_write(root);
    }

private:
    const Instance& inst_;
    VarNamer name_;

    std::string tuple_row(const std::vector<std::string>& cells) const {
        std::string out = "(";
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += ')';
        return out;
    }

    XmlNode with_condition(XmlNode node, const Condition& cond) const {
        node.children.push_back(elem("condition", condition_text(cond, name_)));
        return node;
    }

    XmlNode emit(const IntensionCt& c) const {
        return elem("intension", expr_to_text(c.expr, inst_));
    }

    XmlNode emit(const ExtensionCt& c) const {
        XmlNode node = elem("extension");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        std::string body;
        for (const auto& tuple : c.tuples) {
            std::vector<std::string> cells;
            for (Val v : tuple) cells.push_back(v == kStar ? "*" : std::to_string(v));
            body += tuple_row(cells);
        }
        node.children.push_back(elem(c.positive ? "supports" : "conflicts", body));
        return node;
    }

    XmlNode emit(const RegularCt& c) const {
        XmlNode node = elem("regular");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        std::string trans;
        for (const auto& t : c.transitions)
            trans += tuple_row({t.from, std::to_string(t.symbol), t.to});
        node.children.push_back(elem("transitions", trans));
        node.children.push_back(elem("start", c.start));
        std::string finals;
        for (size_t i = 0; i < c.finals.size(); ++i) {
            if (i) finals += ' ';
            finals += c.finals[i];
        }
        node.children.push_back(elem("final", finals));
        return node;
    }

    XmlNode emit(const MddCt& c) const {
        XmlNode node = elem("mdd");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        std::string edges;
        for (const auto& e : c.edges)
            edges += tuple_row({e.from, std::to_string(e.symbol), e.to});
        node.children.push_back(elem("transitions", edges));
        return node;
    }

    XmlNode var_matrix(const std::vector<std::vector<VarId>>& rows) const {
        std::string body;
        for (const auto& row : rows) {
            std::vector<std::string> cells;
            for (VarId v : row) cells.push_back(name_(v));
            body += tuple_row(cells);
        }
        return elem("matrix", body);
    }

    XmlNode emit(const AllDifferentCt& c) const {
        if (c.except.empty()) return elem("allDifferent", join_names(c.scope, name_));
        XmlNode node = elem("allDifferent");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("except", join_vals(c.except)));
        return node;
    }

    XmlNode emit(const AllDifferentMatrixCt& c) const {
        XmlNode node = elem("allDifferent");
        node.children.push_back(var_matrix(c.rows));
        return node;
    }

    XmlNode emit(const AllDifferentListCt& c) const {
        XmlNode node = elem("allDifferent");
        for (const auto& l : c.lists)
            node.children.push_back(elem("list", join_names(l, name_)));
        return node;
    }

    XmlNode emit(const AllEqualCt& c) const {
        return elem("allEqual", join_names(c.scope, name_));
    }

    XmlNode emit(const OrderedCt& c) const {
        XmlNode node = elem("ordered");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        if (!c.lengths.empty()) node.children.push_back(elem("lengths", join_vals(c.lengths)));
        node.children.push_back(elem("operator", rel_text(c.rel)));
        return node;
    }

    XmlNode emit(const LexCt& c) const {
        XmlNode node = elem("lex");
        if (c.matrix) {
            node.children.push_back(var_matrix(c.lists));
        } else {
            for (const auto& l : c.lists)
                node.children.push_back(elem("list", join_names(l, name_)));
        }
        node.children.push_back(elem("operator", rel_text(c.rel)));
        return node;
    }

    XmlNode emit(const PrecedenceCt& c) const {
        XmlNode node = elem("precedence");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("values", join_vals(c.values)));
        return node;
    }

    XmlNode emit(const SumCt& c) const {
        XmlNode node = elem("sum");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("coeffs", join_vals(c.coeffs)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const CountCt& c) const {
        XmlNode node = elem("count");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("values", join_vals(c.values)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const NValuesCt& c) const {
        XmlNode node = elem("nValues");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const CardinalityCt& c) const {
        XmlNode node = elem("cardinality");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("values", join_vals(c.values)));
        std::string occ;
        for (size_t i = 0; i < c.occurs.size(); ++i) {
            if (i) occ += ' ';
            occ += std::to_string(c.occurs[i].lo);
            if (c.occurs[i].hi != c.occurs[i].lo)
                occ += ".." + std::to_string(c.occurs[i].hi);
        }
        node.children.push_back(elem("occurs", occ));
        return node;
    }

    XmlNode emit(const MaximumCt& c) const {
        XmlNode node = elem("maximum");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const MinimumCt& c) const {
        XmlNode node = elem("minimum");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const ElementCt& c) const {
        XmlNode node = elem("element");
        node.children.push_back(elem("list", join_terms(c.list, name_)));
        node.children.push_back(elem("index", name_(c.index)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const ChannelCt& c) const {
        XmlNode node = elem("channel");
        node.children.push_back(elem("list", join_names(c.list1, name_)));
        if (!c.list2.empty()) node.children.push_back(elem("list", join_names(c.list2, name_)));
        return node;
    }

    XmlNode emit(const NoOverlapCt& c) const {
        XmlNode node = elem("noOverlap");
        bool one_dim = true;
        for (const auto& o : c.origins) one_dim &= o.size() == 1;
        if (one_dim) {
            std::vector<VarId> origins;
            std::vector<Term> lengths;
            for (const auto& o : c.origins) origins.push_back(o[0]);
            for (const auto& l : c.lengths) lengths.push_back(l[0]);
            node.children.push_back(elem("origins", join_names(origins, name_)));
            node.children.push_back(elem("lengths", join_terms(lengths, name_)));
        } else {
            std::string obody, lbody;
            for (const auto& o : c.origins) {
                std::vector<std::string> cells;
                for (VarId v : o) cells.push_back(name_(v));
                obody += tuple_row(cells);
            }
            for (const auto& l : c.lengths) {
                std::vector<std::string> cells;
                for (const Term& t : l) cells.push_back(term_text(t, name_));
                lbody += tuple_row(cells);
            }
            node.children.push_back(elem("origins", obody));
            node.children.push_back(elem("lengths", lbody));
        }
        return node;
    }

    XmlNode emit(const CumulativeCt& c) const {
        XmlNode node = elem("cumulative");
        node.children.push_back(elem("origins", join_names(c.origins, name_)));
        node.children.push_back(elem("lengths", join_terms(c.lengths, name_)));
        node.children.push_back(elem("heights", join_terms(c.heights, name_)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const BinPackingCt& c) const {
        XmlNode node = elem("binPacking");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("sizes", join_vals(c.sizes)));
        return with_condition(std::move(node), c.cond);
    }

    XmlNode emit(const KnapsackCt& c) const {
        XmlNode node = elem("knapsack");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("weights", join_vals(c.weights)));
        node.children.push_back(elem("profits", join_vals(c.profits)));
        node.children.push_back(elem("condition", condition_text(c.wcond, name_)));
        node.children.push_back(elem("condition", condition_text(c.pcond, name_)));
        return node;
    }

    XmlNode emit(const CircuitCt& c) const {
        return elem("circuit", join_names(c.scope, name_));
    }

    XmlNode emit(const InstantiationCt& c) const {
        XmlNode node = elem("instantiation");
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        node.children.push_back(elem("values", join_vals(c.values)));
        return node;
    }

    XmlNode emit(const SlideCt& c) const {
        XmlNode node = elem("slide");
        node.attrs = {{"window", std::to_string(c.window)},
                      {"offset", std::to_string(c.offset)}};
        node.children.push_back(elem("list", join_names(c.scope, name_)));
        auto placeholder = [](VarId v) { return "%" + std::to_string(v); };
        node.children.push_back(elem("intension", expr_to_text(c.pattern, placeholder)));
        return node;
    }
};

}  // namespace

std::string emit_instance(const Instance& inst) { return Emitter(inst).run(); }

std::string expr_to_text(const Expr& expr,
                         const std::function<std::string(VarId)>& var_name) {
    switch (expr.op) {
        case ExprOp::Const: return std::to_string(expr.num);
        case ExprOp::Var: return var_name(expr.var);
        case ExprOp::InSet: {
            std::string out = "in(" + expr_to_text(expr.children.at(0), var_name) + ",set(";
            for (size_t i = 0; i < expr.set_values.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(expr.set_values[i]);
            }
            return out + "))";
        }
        default: {
            std::string out = expr_op_name(expr.op);
            out += '(';
            for (size_t i = 0; i < expr.children.size(); ++i) {
                if (i) out += ',';
                out += expr_to_text(expr.children[i], var_name);
            }
            return out + ')';
        }
    }
}

std::string expr_to_text(const Expr& expr, const Instance& inst) {
    return expr_to_text(expr, [&inst](VarId v) { return inst.variables.at(v).name; });
}

}  // namespace xcore
