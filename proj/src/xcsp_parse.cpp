#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <unordered_map>

#include "xcore/xcsp.hpp"
#include "xcore/xml.hpp"

namespace xcore {

namespace {

// ---------------------------------------------------------------------------
// token helpers
// ---------------------------------------------------------------------------

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

bool try_int(const std::string& t, Val& out) {
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size()) return false;
    out = v;
    return true;
}

// "5" -> [5,5]; "2..8" -> [2,8]. Returns false on anything else.
bool try_range(const std::string& t, Interval& out) {
    size_t dots = t.find("..");
    if (dots == std::string::npos) {
        Val v;
        if (!try_int(t, v)) return false;
        out = {v, v};
        return true;
    }
    Val lo, hi;
    if (!try_int(t.substr(0, dots), lo) || !try_int(t.substr(dots + 2), hi)) return false;
    out = {lo, hi};
    return true;
}

// "(a,b) (c,d)" -> {{"a","b"},{"c","d"}}. Cells are trimmed raw strings.
std::vector<std::vector<std::string>> parse_tuples(const std::string& text, bool& ok) {
    std::vector<std::vector<std::string>> out;
    ok = true;
    size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    for (skip(); i < text.size(); skip()) {
        if (text[i] != '(') {
            ok = false;
            return out;
        }
        size_t close = text.find(')', i);
        if (close == std::string::npos) {
            ok = false;
            return out;
        }
        std::vector<std::string> cells;
        std::string body = text.substr(i + 1, close - i - 1);
        size_t b = 0;
        while (true) {
            size_t comma = body.find(',', b);
            std::string cell = body.substr(b, comma == std::string::npos ? comma : comma - b);
            size_t cb = cell.find_first_not_of(" \t\r\n");
            size_t ce = cell.find_last_not_of(" \t\r\n");
            cells.push_back(cb == std::string::npos ? "" : cell.substr(cb, ce - cb + 1));
            if (comma == std::string::npos) break;
            b = comma + 1;
        }
        out.push_back(std::move(cells));
        i = close + 1;
    }
    return out;
}

const std::unordered_map<std::string, CondOp>& cond_ops() {
    static const std::unordered_map<std::string, CondOp> map = {
        {"lt", CondOp::Lt}, {"le", CondOp::Le}, {"gt", CondOp::Gt}, {"ge", CondOp::Ge},
        {"eq", CondOp::Eq}, {"ne", CondOp::Ne}, {"in", CondOp::In}, {"notin", CondOp::NotIn},
    };
    return map;
}

// ---------------------------------------------------------------------------
// functional expression text
// ---------------------------------------------------------------------------

const std::unordered_map<std::string, ExprOp>& expr_ops() {
    static const std::unordered_map<std::string, ExprOp> map = {
        {"add", ExprOp::Add}, {"sub", ExprOp::Sub}, {"mul", ExprOp::Mul},
        {"div", ExprOp::Div}, {"mod", ExprOp::Mod}, {"abs", ExprOp::Abs},
        {"neg", ExprOp::Neg}, {"dist", ExprOp::Dist}, {"min", ExprOp::Min},
        {"max", ExprOp::Max}, {"eq", ExprOp::Eq}, {"ne", ExprOp::Ne},
        {"lt", ExprOp::Lt}, {"le", ExprOp::Le}, {"gt", ExprOp::Gt},
        {"ge", ExprOp::Ge}, {"and", ExprOp::And}, {"or", ExprOp::Or},
        {"not", ExprOp::Not}, {"xor", ExprOp::Xor}, {"iff", ExprOp::Iff},
        {"if", ExprOp::IfThenElse}, {"in", ExprOp::InSet},
    };
    return map;
}

class ExprParser {
public:
    ExprParser(const std::string& text, const NameResolver& resolve)
        : text_(text), resolve_(resolve) {}

    Expr run() {
        Expr e = parse();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after expression");
        if (auto msg = deep_arity_error(e); !msg.empty()) fail(msg);
        return e;
    }

private:
    const std::string& text_;
    const NameResolver& resolve_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression '" + text_ + "': " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '[' ||
               c == ']' || c == '%';
    }

    static std::string deep_arity_error(const Expr& e) {
        if (auto msg = arity_error(e); !msg.empty()) return msg;
        for (const auto& c : e.children)
            if (auto msg = deep_arity_error(c); !msg.empty()) return msg;
        return "";
    }

    Expr parse() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (!ident_char(c)) fail(std::string("unexpected character '") + c + "'");
        std::string word = read_ident();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            auto it = expr_ops().find(word);
            if (it == expr_ops().end()) fail("unknown operator '" + word + "'");
            return it->second == ExprOp::InSet ? parse_in() : parse_call(it->second);
        }
        VarId id = resolve_(word);
        if (id < 0) fail("unknown identifier '" + word + "'");
        return var(id);
    }

    std::string read_ident() {
        size_t b = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return text_.substr(b, pos_ - b);
    }

    Expr parse_number() {
        size_t b = pos_;
        if (text_[pos_] == '-') ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        Val v;
        if (!try_int(text_.substr(b, pos_ - b), v)) fail("malformed integer");
        return val(v);
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    Expr parse_call(ExprOp op) {
        expect('(');
        std::vector<Expr> children;
        children.push_back(parse());
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            children.push_back(parse());
            skip_ws();
        }
        expect(')');
        Expr e;
        e.op = op;
        e.children = std::move(children);
        return e;
    }

    // in(x, set(a,b,...)) — membership of x in a literal integer set.
    Expr parse_in() {
        expect('(');
        Expr child = parse();
        expect(',');
        skip_ws();
        std::string word = read_ident();
        if (word != "set") fail("in() requires a set(...) literal as second argument");
        expect('(');
        std::vector<Val> values;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] != ')') {
            for (;;) {
                Expr n = parse_number();
                values.push_back(n.num);
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                    continue;
                }
                break;
            }
        }
        expect(')');
        expect(')');
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        return in_set(std::move(child), std::move(values));
    }
};

// ---------------------------------------------------------------------------
// document parser
// ---------------------------------------------------------------------------

struct ParseAbort {};

class DocParser {
public:
    DocParser(const std::string& bytes, FormatProfile profile,
              std::vector<ParseDiagnostic>& diags)
        : bytes_(bytes), profile_(profile), diags_(diags) {}

    std::optional<Instance> run() {
        try {
            parse_root(xml_parse(bytes_));
        } catch (const XmlError& e) {
            diags_.push_back({ParseDiagnostic::Severity::Error, e.offset(), "", e.what()});
            return std::nullopt;
        } catch (const ParseAbort&) {
            return std::nullopt;
        }
        // Structural validation backs the markup-level checks; its errors
        // also abort construction.
        for (const auto& v : validate_instance(inst_)) {
            auto sev = v.severity == ValidationError::Severity::Error
                           ? ParseDiagnostic::Severity::Error
                           : ParseDiagnostic::Severity::Warning;
            std::string where = v.constraint_id >= 0
                                    ? "constraint " + std::to_string(v.constraint_id) + ": "
                                    : "";
            diags_.push_back({sev, 0, "/instance", where + v.rule + ": " + v.message});
        }
        for (const auto& d : diags_)
            if (d.severity == ParseDiagnostic::Severity::Error) return std::nullopt;
        return std::move(inst_);
    }

private:
    const std::string& bytes_;
    FormatProfile profile_;
    std::vector<ParseDiagnostic>& diags_;
    Instance inst_;
    std::unordered_map<std::string, VarId> by_name_;
    int next_id_ = 0;

    [[noreturn]] void error(const XmlNode& node, const std::string& path,
                            const std::string& msg) {
        diags_.push_back({ParseDiagnostic::Severity::Error, node.offset, path, msg});
        throw ParseAbort{};
    }

    // --- variables ---------------------------------------------------------

    Domain parse_domain_text(const XmlNode& node, const std::string& path) {
        auto toks = split_ws(node.inner_text());
        std::vector<Interval> ivs;
        for (const auto& t : toks) {
            Interval iv;
            if (!try_range(t, iv) || iv.lo > iv.hi)
                error(node, path, "domain token '" + t + "' is not an integer or lo..hi range");
            ivs.push_back(iv);
        }
        if (ivs.empty()) error(node, path, "empty domain");
        return Domain::from_intervals(std::move(ivs));
    }

    void add_variable(const XmlNode& node, const std::string& path, const std::string& name,
                      const Domain& dom) {
        if (by_name_.count(name)) error(node, path, "duplicate variable id '" + name + "'");
        VarId id = static_cast<VarId>(inst_.variables.size());
        inst_.variables.push_back({id, name, dom});
        by_name_.emplace(name, id);
    }

    void parse_variables(const XmlNode& node, const std::string& path) {
        for (const auto& child : node.children) {
            if (child.is_text()) continue;
            std::string cpath = path + "/" + child.name;
            const std::string* id = child.attr("id");
            if (!id || id->empty()) error(child, cpath, "missing id attribute");
            if (child.name == "var") {
                add_variable(child, cpath, *id, parse_domain_text(child, cpath));
            } else if (child.name == "array") {
                const std::string* size = child.attr("size");
                if (!size) error(child, cpath, "array without size attribute");
                std::vector<int> dims;
                for (size_t i = 0; i < size->size();) {
                    if ((*size)[i] != '[') error(child, cpath, "malformed size attribute");
                    size_t close = size->find(']', i);
                    if (close == std::string::npos)
                        error(child, cpath, "malformed size attribute");
                    Val d;
                    if (!try_int(size->substr(i + 1, close - i - 1), d) || d <= 0)
                        error(child, cpath, "array dimension must be a positive integer");
                    dims.push_back(static_cast<int>(d));
                    i = close + 1;
                }
                if (dims.empty()) error(child, cpath, "array with no dimensions");
                Domain dom = parse_domain_text(child, cpath);
                std::vector<int> idx(dims.size(), 0);
                for (;;) {
                    std::string name = *id;
                    for (int v : idx) name += "[" + std::to_string(v) + "]";
                    add_variable(child, cpath, name, dom);
                    int k = static_cast<int>(dims.size()) - 1;
                    while (k >= 0 && ++idx[static_cast<size_t>(k)] ==
                                         dims[static_cast<size_t>(k)]) {
                        idx[static_cast<size_t>(k)] = 0;
                        --k;
                    }
                    if (k < 0) break;
                }
            } else {
                error(child, cpath, "unsupported element <" + child.name + "> in <variables>");
            }
        }
    }

    // --- scopes and terms ----------------------------------------------------

    // One token names either a variable, a whole array ("a" or "a[]"), or a
    // row-major slice ("a[2]").
    void expand_scope_token(const XmlNode& node, const std::string& path,
                            const std::string& token, std::vector<VarId>& out) {
        auto exact = by_name_.find(token);
        if (exact != by_name_.end()) {
            out.push_back(exact->second);
            return;
        }
        std::string prefix = token;
        if (prefix.size() >= 2 && prefix.compare(prefix.size() - 2, 2, "[]") == 0)
            prefix.resize(prefix.size() - 2);
        prefix += "[";
        bool any = false;
        for (const auto& v : inst_.variables) {
            if (v.name.size() > prefix.size() && v.name.compare(0, prefix.size(), prefix) == 0) {
                out.push_back(v.id);
                any = true;
            }
        }
        if (!any) error(node, path, "unknown variable '" + token + "'");
    }

    std::vector<VarId> scope_from_text(const XmlNode& node, const std::string& path,
                                       const std::string& text) {
        std::vector<VarId> out;
        for (const auto& t : split_ws(text)) expand_scope_token(node, path, t, out);
        if (out.empty()) error(node, path, "empty variable list");
        return out;
    }

    VarId single_var(const XmlNode& node, const std::string& path, const std::string& text) {
        auto scope = scope_from_text(node, path, text);
        if (scope.size() != 1) error(node, path, "expected exactly one variable");
        return scope[0];
    }

    std::vector<Term> terms_from_text(const XmlNode& node, const std::string& path,
                                      const std::string& text) {
        std::vector<Term> out;
        for (const auto& t : split_ws(text)) {
            Val v;
            if (try_int(t, v)) {
                out.push_back(Term::of_val(v));
            } else {
                std::vector<VarId> ids;
                expand_scope_token(node, path, t, ids);
                for (VarId id : ids) out.push_back(Term::of_var(id));
            }
        }
        return out;
    }

    std::vector<Val> ints_from_text(const XmlNode& node, const std::string& path,
                                    const std::string& text) {
        std::vector<Val> out;
        for (const auto& t : split_ws(text)) {
            Val v;
            if (!try_int(t, v)) error(node, path, "expected integer, got '" + t + "'");
            out.push_back(v);
        }
        return out;
    }

    const XmlNode& required_child(const XmlNode& node, const std::string& path,
                                  const std::string& name) {
        const XmlNode* c = node.child(name);
        if (!c) error(node, path, "missing <" + name + ">");
        return *c;
    }

    std::vector<VarId> scope_from_list(const XmlNode& node, const std::string& path) {
        const XmlNode& list = required_child(node, path, "list");
        return scope_from_text(list, path + "/list", list.inner_text());
    }

    // Scope written either as bare element text or inside a single <list>.
    std::vector<VarId> scope_from_text_or_list(const XmlNode& node, const std::string& path) {
        if (const XmlNode* list = node.child("list"))
            return scope_from_text(*list, path + "/list", list->inner_text());
        return scope_from_text(node, path, node.inner_text());
    }

    NameResolver resolver() {
        return [this](const std::string& name) -> VarId {
            auto it = by_name_.find(name);
            return it == by_name_.end() ? -1 : it->second;
        };
    }

    Condition condition_from(const XmlNode& node, const std::string& path) {
        const XmlNode& c = required_child(node, path, "condition");
        return parse_condition_checked(c, path + "/condition");
    }

    Condition parse_condition_checked(const XmlNode& node, const std::string& path) {
        try {
            return parse_condition(node.inner_text(), resolver());
        } catch (const std::invalid_argument& e) {
            error(node, path, e.what());
        }
    }

    Expr expr_from_text(const XmlNode& node, const std::string& path, const std::string& text,
                        const NameResolver& resolve) {
        try {
            return parse_intension(text, resolve);
        } catch (const std::invalid_argument& e) {
            error(node, path, e.what());
        }
    }

    RelOp rel_from(const XmlNode& node, const std::string& path) {
        const XmlNode& op = required_child(node, path, "operator");
        std::string text = op.inner_text();
        if (text == "lt") return RelOp::Lt;
        if (text == "le") return RelOp::Le;
        if (text == "gt") return RelOp::Gt;
        if (text == "ge") return RelOp::Ge;
        error(op, path + "/operator", "unknown ordering operator '" + text + "'");
    }

    std::vector<std::vector<VarId>> var_matrix(const XmlNode& node, const std::string& path) {
        std::vector<std::vector<VarId>> rows;
        for (const auto& cells : parse_tuples_or_fail(node, path)) {
            std::vector<VarId> row;
            for (const auto& cell : cells) row.push_back(single_var(node, path, cell));
            rows.push_back(std::move(row));
        }
        if (rows.empty()) error(node, path, "empty matrix");
        return rows;
    }

    // Rejects attributes whose supported value is fixed (silently skipping a
    // semantics-changing attribute would corrupt checking).
    void reject_attr(const XmlNode& node, const std::string& path, const std::string& key,
                     const std::string& allowed) {
        if (const std::string* v = node.attr(key); v && *v != allowed)
            error(node, path, "unsupported " + key + "=\"" + *v + "\" (only \"" + allowed +
                                  "\" is handled)");
    }

    // --- constraints ---------------------------------------------------------

    void parse_constraints(const XmlNode& node, const std::string& path,
                           std::vector<std::string> tags) {
        for (const auto& child : node.children) {
            if (child.is_text()) continue;
            std::string cpath = path + "/" + child.name;
            if (child.name == "block") {
                std::vector<std::string> inner = tags;
                if (const std::string* cls = child.attr("class"))
                    for (auto& t : split_ws(*cls)) inner.push_back(t);
                parse_constraints(child, cpath, inner);
            } else if (child.name == "group") {
                parse_group(child, cpath, tags);
            } else {
                parse_one_constraint(child, cpath, tags);
            }
        }
    }

    void parse_group(const XmlNode& node, const std::string& path,
                     const std::vector<std::string>& tags) {
        std::vector<std::string> group_tags = tags;
        if (const std::string* cls = node.attr("class"))
            for (auto& t : split_ws(*cls)) group_tags.push_back(t);
        const XmlNode* tmpl = nullptr;
        std::vector<const XmlNode*> args;
        for (const auto& child : node.children) {
            if (child.is_text()) continue;
            if (child.name == "args") {
                args.push_back(&child);
            } else if (!tmpl) {
                tmpl = &child;
            } else {
                error(child, path, "group with more than one template element");
            }
        }
        if (!tmpl) error(node, path, "group without a template element");
        if (args.empty()) error(node, path, "group without <args>");
        for (const XmlNode* row : args) {
            auto toks = split_ws(row->inner_text());
            XmlNode expanded = substitute(*tmpl, toks, *row, path);
            parse_one_constraint(expanded, path + "/" + tmpl->name, group_tags);
        }
    }

    // Replaces %k (k a decimal index) in all text and attribute values.
    XmlNode substitute(const XmlNode& node, const std::vector<std::string>& args,
                       const XmlNode& arg_row, const std::string& path) {
        XmlNode out = node;
        out.children.clear();
        for (auto& [k, v] : out.attrs) v = substitute_text(v, args, arg_row, path);
        if (node.is_text()) out.text = substitute_text(node.text, args, arg_row, path);
        for (const auto& c : node.children)
            out.children.push_back(substitute(c, args, arg_row, path));
        return out;
    }

    std::string substitute_text(const std::string& text, const std::vector<std::string>& args,
                                const XmlNode& arg_row, const std::string& path) {
        std::string out;
        for (size_t i = 0; i < text.size();) {
            if (text[i] != '%' || i + 1 >= text.size() ||
                !std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                out += text[i++];
                continue;
            }
            size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            size_t k = std::stoul(text.substr(i + 1, j - i - 1));
            if (k >= args.size())
                error(arg_row, path, "argument row provides no value for %" +
                                         std::to_string(k));
            out += args[k];
            i = j;
        }
        return out;
    }

    void parse_one_constraint(const XmlNode& node, const std::string& path,
                              const std::vector<std::string>& tags) {
        if (!profile_.allows(node.name))
            error(node, path,
                  "<" + node.name + "> is not allowed under the mini profile");
        std::vector<std::string> all_tags = tags;
        if (const std::string* cls = node.attr("class"))
            for (auto& t : split_ws(*cls)) all_tags.push_back(t);
        ConstraintKind kind = dispatch(node, path);
        inst_.constraints.push_back({next_id_++, std::move(kind), std::move(all_tags)});
    }

    ConstraintKind dispatch(const XmlNode& node, const std::string& path) {
        const std::string& n = node.name;
        if (n == "intension") return parse_intension_ct(node, path);
        if (n == "extension") return parse_extension(node, path);
        if (n == "regular") return parse_regular(node, path);
        if (n == "mdd") return parse_mdd(node, path);
        if (n == "allDifferent") return parse_alldifferent(node, path);
        if (n == "allEqual") return AllEqualCt{scope_from_text_or_list(node, path)};
        if (n == "ordered") return parse_ordered(node, path);
        if (n == "lex") return parse_lex(node, path);
        if (n == "precedence") return parse_precedence(node, path);
        if (n == "sum") return parse_sum(node, path);
        if (n == "count") return parse_count(node, path);
        if (n == "nValues") return parse_nvalues(node, path);
        if (n == "cardinality") return parse_cardinality(node, path);
        if (n == "maximum") return MaximumCt{scope_from_list(node, path),
                                             condition_from(node, path)};
        if (n == "minimum") return MinimumCt{scope_from_list(node, path),
                                             condition_from(node, path)};
        if (n == "element") return parse_element(node, path);
        if (n == "channel") return parse_channel(node, path);
        if (n == "noOverlap") return parse_nooverlap(node, path);
        if (n == "cumulative") return parse_cumulative(node, path);
        if (n == "binPacking") return parse_binpacking(node, path);
        if (n == "knapsack") return parse_knapsack(node, path);
        if (n == "circuit") return parse_circuit(node, path);
        if (n == "instantiation") return parse_instantiation(node, path);
        if (n == "slide") return parse_slide(node, path);
        error(node, path, "unsupported constraint element <" + n + ">");
    }

    ConstraintKind parse_intension_ct(const XmlNode& node, const std::string& path) {
        return IntensionCt{expr_from_text(node, path, node.inner_text(), resolver())};
    }

    ConstraintKind parse_extension(const XmlNode& node, const std::string& path) {
        ExtensionCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode* body = node.child("supports");
        ct.positive = body != nullptr;
        if (!body) body = node.child("conflicts");
        if (!body) error(node, path, "extension needs <supports> or <conflicts>");
        std::string text = body->inner_text();
        std::string bpath = path + (ct.positive ? "/supports" : "/conflicts");
        if (ct.scope.size() == 1 && text.find('(') == std::string::npos) {
            // Unary sugar: plain values and ranges.
            for (const auto& t : split_ws(text)) {
                Interval iv;
                if (!try_range(t, iv) || iv.lo > iv.hi)
                    error(*body, bpath, "bad unary tuple token '" + t + "'");
                for (Val v = iv.lo; v <= iv.hi; ++v) ct.tuples.push_back({v});
            }
        } else {
            for (const auto& cells : parse_tuples_or_fail(*body, bpath)) {
                if (cells.size() != ct.scope.size())
                    error(*body, bpath, "tuple arity differs from the scope");
                std::vector<Val> tuple;
                for (const auto& cell : cells) {
                    if (cell == "*") {
                        tuple.push_back(kStar);
                        ct.starred = true;
                    } else {
                        Val v;
                        if (!try_int(cell, v))
                            error(*body, bpath, "bad tuple cell '" + cell + "'");
                        tuple.push_back(v);
                    }
                }
                ct.tuples.push_back(std::move(tuple));
            }
        }
        return ct;
    }

    std::vector<std::vector<std::string>> parse_tuples_or_fail(const XmlNode& node,
                                                               const std::string& path) {
        bool ok = false;
        auto cells = parse_tuples(node.inner_text(), ok);
        if (!ok) error(node, path, "malformed tuple list");
        return cells;
    }

    ConstraintKind parse_regular(const XmlNode& node, const std::string& path) {
        RegularCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& trans = required_child(node, path, "transitions");
        for (const auto& cells : parse_tuples_or_fail(trans, path + "/transitions")) {
            if (cells.size() != 3)
                error(trans, path + "/transitions", "transition needs (state,symbol,state)");
            Val sym;
            if (!try_int(cells[1], sym))
                error(trans, path + "/transitions", "transition symbol must be an integer");
            ct.transitions.push_back({cells[0], sym, cells[2]});
        }
        ct.start = required_child(node, path, "start").inner_text();
        for (auto& t : split_ws(required_child(node, path, "final").inner_text()))
            ct.finals.push_back(t);
        if (ct.finals.empty()) error(node, path, "regular without final states");
        return ct;
    }

    ConstraintKind parse_mdd(const XmlNode& node, const std::string& path) {
        MddCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& trans = required_child(node, path, "transitions");
        for (const auto& cells : parse_tuples_or_fail(trans, path + "/transitions")) {
            if (cells.size() != 3)
                error(trans, path + "/transitions", "edge needs (node,value,node)");
            Val sym;
            if (!try_int(cells[1], sym))
                error(trans, path + "/transitions", "edge value must be an integer");
            ct.edges.push_back({cells[0], sym, cells[2]});
        }
        return ct;
    }

    ConstraintKind parse_alldifferent(const XmlNode& node, const std::string& path) {
        if (const XmlNode* matrix = node.child("matrix"))
            return AllDifferentMatrixCt{var_matrix(*matrix, path + "/matrix")};
        auto lists = node.elems("list");
        if (lists.size() >= 2) {
            AllDifferentListCt ct;
            for (const XmlNode* l : lists)
                ct.lists.push_back(scope_from_text(*l, path + "/list", l->inner_text()));
            return ct;
        }
        AllDifferentCt ct;
        ct.scope = scope_from_text_or_list(node, path);
        if (const XmlNode* except = node.child("except"))
            ct.except = ints_from_text(*except, path + "/except", except->inner_text());
        return ct;
    }

    ConstraintKind parse_ordered(const XmlNode& node, const std::string& path) {
        OrderedCt ct;
        ct.scope = scope_from_list(node, path);
        ct.rel = rel_from(node, path);
        if (const XmlNode* lengths = node.child("lengths"))
            ct.lengths = ints_from_text(*lengths, path + "/lengths", lengths->inner_text());
        return ct;
    }

    ConstraintKind parse_lex(const XmlNode& node, const std::string& path) {
        LexCt ct;
        ct.rel = rel_from(node, path);
        if (const XmlNode* matrix = node.child("matrix")) {
            ct.matrix = true;
            ct.lists = var_matrix(*matrix, path + "/matrix");
            return ct;
        }
        auto lists = node.elems("list");
        if (lists.size() < 2) error(node, path, "lex needs a matrix or at least two lists");
        for (const XmlNode* l : lists)
            ct.lists.push_back(scope_from_text(*l, path + "/list", l->inner_text()));
        return ct;
    }

    ConstraintKind parse_precedence(const XmlNode& node, const std::string& path) {
        PrecedenceCt ct;
        ct.scope = scope_from_text_or_list(node, path);
        const XmlNode& values = required_child(node, path, "values");
        ct.values = ints_from_text(values, path + "/values", values.inner_text());
        return ct;
    }

    ConstraintKind parse_sum(const XmlNode& node, const std::string& path) {
        SumCt ct;
        ct.scope = scope_from_list(node, path);
        if (const XmlNode* coeffs = node.child("coeffs"))
            ct.coeffs = ints_from_text(*coeffs, path + "/coeffs", coeffs->inner_text());
        else
            ct.coeffs.assign(ct.scope.size(), 1);
        ct.cond = condition_from(node, path);
        return ct;
    }

    ConstraintKind parse_count(const XmlNode& node, const std::string& path) {
        CountCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& values = required_child(node, path, "values");
        ct.values = ints_from_text(values, path + "/values", values.inner_text());
        ct.cond = condition_from(node, path);
        return ct;
    }

    ConstraintKind parse_nvalues(const XmlNode& node, const std::string& path) {
        NValuesCt ct;
        ct.scope = scope_from_list(node, path);
        ct.cond = condition_from(node, path);
        return ct;
    }

    ConstraintKind parse_cardinality(const XmlNode& node, const std::string& path) {
        reject_attr(node, path, "closed", "false");
        CardinalityCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& values = required_child(node, path, "values");
        ct.values = ints_from_text(values, path + "/values", values.inner_text());
        const XmlNode& occurs = required_child(node, path, "occurs");
        for (const auto& t : split_ws(occurs.inner_text())) {
            Interval iv;
            if (!try_range(t, iv))
                error(occurs, path + "/occurs", "bad occurrence token '" + t + "'");
            ct.occurs.push_back({iv.lo, iv.hi});
        }
        return ct;
    }

    ConstraintKind parse_element(const XmlNode& node, const std::string& path) {
        reject_attr(node, path, "startIndex", "0");
        const XmlNode& list = required_child(node, path, "list");
        reject_attr(list, path + "/list", "startIndex", "0");
        ElementCt ct;
        ct.list = terms_from_text(list, path + "/list", list.inner_text());
        const XmlNode& index = required_child(node, path, "index");
        ct.index = single_var(index, path + "/index", index.inner_text());
        if (const XmlNode* value = node.child("value")) {
            // Sugar for an equality condition.
            std::string text = value->inner_text();
            Val v;
            if (try_int(text, v))
                ct.cond = Condition::value(CondOp::Eq, v);
            else
                ct.cond = Condition::variable(CondOp::Eq,
                                              single_var(*value, path + "/value", text));
        } else {
            ct.cond = condition_from(node, path);
        }
        return ct;
    }

    ConstraintKind parse_channel(const XmlNode& node, const std::string& path) {
        reject_attr(node, path, "startIndex", "0");
        auto lists = node.elems("list");
        ChannelCt ct;
        if (lists.empty()) {
            ct.list1 = scope_from_text(node, path, node.inner_text());
        } else {
            for (const XmlNode* l : lists) reject_attr(*l, path + "/list", "startIndex", "0");
            ct.list1 = scope_from_text(*lists[0], path + "/list", lists[0]->inner_text());
            if (lists.size() == 2)
                ct.list2 = scope_from_text(*lists[1], path + "/list", lists[1]->inner_text());
            else if (lists.size() > 2)
                error(node, path, "channel takes one or two lists");
        }
        return ct;
    }

    ConstraintKind parse_nooverlap(const XmlNode& node, const std::string& path) {
        reject_attr(node, path, "zeroIgnored", "true");
        NoOverlapCt ct;
        const XmlNode& origins = required_child(node, path, "origins");
        const XmlNode& lengths = required_child(node, path, "lengths");
        if (origins.inner_text().find('(') != std::string::npos) {
            for (const auto& cells : parse_tuples_or_fail(origins, path + "/origins")) {
                std::vector<VarId> point;
                for (const auto& cell : cells)
                    point.push_back(single_var(origins, path + "/origins", cell));
                ct.origins.push_back(std::move(point));
            }
            for (const auto& cells : parse_tuples_or_fail(lengths, path + "/lengths")) {
                std::vector<Term> extent;
                for (const auto& cell : cells) {
                    Val v;
                    if (try_int(cell, v))
                        extent.push_back(Term::of_val(v));
                    else
                        extent.push_back(
                            Term::of_var(single_var(lengths, path + "/lengths", cell)));
                }
                ct.lengths.push_back(std::move(extent));
            }
        } else {
            for (VarId v : scope_from_text(origins, path + "/origins", origins.inner_text()))
                ct.origins.push_back({v});
            for (const Term& t :
                 terms_from_text(lengths, path + "/lengths", lengths.inner_text()))
                ct.lengths.push_back({t});
        }
        return ct;
    }

    ConstraintKind parse_cumulative(const XmlNode& node, const std::string& path) {
        CumulativeCt ct;
        const XmlNode& origins = required_child(node, path, "origins");
        ct.origins = scope_from_text(origins, path + "/origins", origins.inner_text());
        const XmlNode& lengths = required_child(node, path, "lengths");
        ct.lengths = terms_from_text(lengths, path + "/lengths", lengths.inner_text());
        const XmlNode& heights = required_child(node, path, "heights");
        ct.heights = terms_from_text(heights, path + "/heights", heights.inner_text());
        ct.cond = condition_from(node, path);
        return ct;
    }

    ConstraintKind parse_binpacking(const XmlNode& node, const std::string& path) {
        BinPackingCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& sizes = required_child(node, path, "sizes");
        ct.sizes = ints_from_text(sizes, path + "/sizes", sizes.inner_text());
        ct.cond = condition_from(node, path);
        return ct;
    }

    ConstraintKind parse_knapsack(const XmlNode& node, const std::string& path) {
        KnapsackCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& weights = required_child(node, path, "weights");
        ct.weights = ints_from_text(weights, path + "/weights", weights.inner_text());
        const XmlNode& profits = required_child(node, path, "profits");
        ct.profits = ints_from_text(profits, path + "/profits", profits.inner_text());
        auto conds = node.elems("condition");
        if (const XmlNode* limit = node.child("limit")) {
            // Sugar: <limit> w </limit> is a (le,w) weight condition.
            auto vals = ints_from_text(*limit, path + "/limit", limit->inner_text());
            if (vals.size() != 1) error(*limit, path + "/limit", "limit takes one integer");
            ct.wcond = Condition::value(CondOp::Le, vals[0]);
            if (conds.size() != 1)
                error(node, path, "knapsack with <limit> takes exactly one <condition>");
            ct.pcond = parse_condition_checked(*conds[0], path + "/condition");
        } else {
            if (conds.size() != 2)
                error(node, path,
                      "knapsack takes two <condition> elements (weights, then profits)");
            ct.wcond = parse_condition_checked(*conds[0], path + "/condition");
            ct.pcond = parse_condition_checked(*conds[1], path + "/condition");
        }
        return ct;
    }

    ConstraintKind parse_circuit(const XmlNode& node, const std::string& path) {
        reject_attr(node, path, "startIndex", "0");
        return CircuitCt{scope_from_text_or_list(node, path)};
    }

    ConstraintKind parse_instantiation(const XmlNode& node, const std::string& path) {
        InstantiationCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& values = required_child(node, path, "values");
        ct.values = ints_from_text(values, path + "/values", values.inner_text());
        return ct;
    }

    ConstraintKind parse_slide(const XmlNode& node, const std::string& path) {
        SlideCt ct;
        ct.scope = scope_from_list(node, path);
        const XmlNode& tmpl = required_child(node, path, "intension");
        // %k placeholders name window positions.
        NameResolver resolve = [](const std::string& name) -> VarId {
            if (name.size() < 2 || name[0] != '%') return -1;
            Val k;
            if (!try_int(name.substr(1), k) || k < 0) return -1;
            return static_cast<VarId>(k);
        };
        ct.pattern = expr_from_text(tmpl, path + "/intension", tmpl.inner_text(), resolve);
        std::vector<VarId> used;
        collect_vars(ct.pattern, used);
        int max_pos = -1;
        for (VarId v : used) max_pos = std::max(max_pos, v);
        if (max_pos < 0) error(tmpl, path + "/intension", "pattern uses no %k placeholder");
        ct.window = max_pos + 1;
        if (const std::string* w = node.attr("window")) {
            Val v;
            if (!try_int(*w, v) || v < ct.window)
                error(node, path, "window attribute smaller than the pattern arity");
            ct.window = static_cast<int>(v);
        }
        ct.offset = 1;
        if (const std::string* o = node.attr("offset")) {
            Val v;
            if (!try_int(*o, v) || v < 1)
                error(node, path, "offset attribute must be a positive integer");
            ct.offset = static_cast<int>(v);
        }
        return ct;
    }

    // --- objectives ----------------------------------------------------------

    void parse_objectives(const XmlNode& node, const std::string& path) {
        const XmlNode* body = nullptr;
        ObjectiveSense sense = ObjectiveSense::Minimize;
        for (const auto& child : node.children) {
            if (child.is_text()) continue;
            if (child.name != "minimize" && child.name != "maximize")
                error(child, path + "/" + child.name, "unsupported objective element");
            if (body) error(child, path, "multiple objectives are not supported");
            body = &child;
            sense = child.name == "minimize" ? ObjectiveSense::Minimize
                                             : ObjectiveSense::Maximize;
        }
        if (!body) error(node, path, "<objectives> without minimize/maximize");
        std::string opath = path + "/" + body->name;
        const std::string* type = body->attr("type");
        if (!type || *type == "expression") {
            Expr e = expr_from_text(*body, opath, body->inner_text(), resolver());
            inst_.objective = Objective{sense, std::move(e)};
        } else if (*type == "sum") {
            WeightedSum ws;
            ws.scope = scope_from_list(*body, opath);
            if (const XmlNode* coeffs = body->child("coeffs"))
                ws.coeffs = ints_from_text(*coeffs, opath + "/coeffs", coeffs->inner_text());
            else
                ws.coeffs.assign(ws.scope.size(), 1);
            inst_.objective = Objective{sense, std::move(ws)};
        } else {
            error(*body, opath, "unsupported objective type \"" + *type + "\"");
        }
    }

    // --- root ---------------------------------------------------------------

    void parse_root(const XmlNode& root) {
        std::string path = "/" + root.name;
        if (root.name != "instance") error(root, path, "root element must be <instance>");
        if (const std::string* fmt = root.attr("format"); !fmt || *fmt != "XCSP3")
            error(root, path, "instance must declare format=\"XCSP3\"");
        const std::string* type = root.attr("type");
        if (!type || (*type != "CSP" && *type != "COP"))
            error(root, path, "instance type must be CSP or COP");
        inst_.kind = *type == "CSP" ? InstanceKind::Csp : InstanceKind::Cop;

        const XmlNode* variables = root.child("variables");
        if (!variables) error(root, path, "missing <variables>");
        parse_variables(*variables, path + "/variables");

        if (const XmlNode* constraints = root.child("constraints"))
            parse_constraints(*constraints, path + "/constraints", {});
        if (const XmlNode* objectives = root.child("objectives"))
            parse_objectives(*objectives, path + "/objectives");

        for (const auto& child : root.children) {
            if (child.is_text()) continue;
            if (child.name != "variables" && child.name != "constraints" &&
                child.name != "objectives")
                error(child, path + "/" + child.name, "unsupported top-level element");
        }
    }
};

}  // namespace

bool FormatProfile::allows(const std::string& element_name) const {
    if (track == Track::Main) return true;
    static const char* const mini[] = {"intension", "extension", "allDifferent",
                                       "sum", "element", "instantiation"};
    for (const char* name : mini)
        if (element_name == name) return true;
    return false;
}

ParseResult parse_instance(const std::string& bytes, FormatProfile profile) {
    ParseResult result;
    DocParser parser(bytes, profile, result.diagnostics);
    result.instance = parser.run();
    return result;
}

Expr parse_intension(const std::string& text, const NameResolver& resolve) {
    return ExprParser(text, resolve).run();
}

Expr parse_intension(const std::string& text, const Instance& inst) {
    return parse_intension(text, [&inst](const std::string& name) {
        return inst.var_by_name(name);
    });
}

Condition parse_condition(const std::string& text, const NameResolver& resolve) {
    auto fail = [&text](const std::string& msg) -> void {
        throw std::invalid_argument("condition '" + text + "': " + msg);
    };
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.size() < 4 || t.front() != '(' || t.back() != ')') fail("expected (op,operand)");
    std::string body = t.substr(1, t.size() - 2);
    size_t comma = body.find(',');
    if (comma == std::string::npos) fail("expected (op,operand)");
    std::string op_text = body.substr(0, comma);
    std::string operand = body.substr(comma + 1);
    auto op_it = cond_ops().find(op_text);
    if (op_it == cond_ops().end()) fail("unknown operator '" + op_text + "'");
    CondOp op = op_it->second;
    bool membership = op == CondOp::In || op == CondOp::NotIn;
    if (operand.empty()) fail("missing operand");

    if (operand.front() == '{') {
        if (operand.back() != '}') fail("unterminated set");
        if (!membership) fail("set operand requires in/notin");
        std::vector<Val> values;
        std::string cell;
        for (size_t i = 1; i + 1 <= operand.size() - 1; ++i) {
            if (operand[i] == ',') {
                Val v;
                if (!try_int(cell, v)) fail("bad set element '" + cell + "'");
                values.push_back(v);
                cell.clear();
            } else {
                cell += operand[i];
            }
        }
        if (!cell.empty()) {
            Val v;
            if (!try_int(cell, v)) fail("bad set element '" + cell + "'");
            values.push_back(v);
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        return Condition::set(op, std::move(values));
    }
    if (operand.find("..") != std::string::npos) {
        if (!membership) fail("range operand requires in/notin");
        Interval iv;
        if (!try_range(operand, iv)) fail("bad range '" + operand + "'");
        return Condition::interval(op, iv.lo, iv.hi);
    }
    Val v;
    if (try_int(operand, v)) {
        if (membership) fail("in/notin need a range or set operand");
        return Condition::value(op, v);
    }
    if (membership) fail("in/notin need a range or set operand");
    VarId id = resolve(operand);
    if (id < 0) fail("unknown identifier '" + operand + "'");
    return Condition::variable(op, id);
}

}  // namespace xcore
