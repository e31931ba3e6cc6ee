#include "xcore/expr.hpp"

#include <algorithm>
#include <limits>

namespace xcore {

namespace {

Expr nary(ExprOp op, std::vector<Expr> xs) {
    Expr e;
    e.op = op;
    e.children = std::move(xs);
    return e;
}

Expr binary(ExprOp op, Expr a, Expr b) {
    Expr e;
    e.op = op;
    e.children.push_back(std::move(a));
    e.children.push_back(std::move(b));
    return e;
}

Expr unary(ExprOp op, Expr a) {
    Expr e;
    e.op = op;
    e.children.push_back(std::move(a));
    return e;
}

[[noreturn]] void throw_overflow() {
    throw EvalError(EvalErrorKind::Overflow, "64-bit overflow in expression");
}

Val checked_add(Val a, Val b) {
    Val r;
    if (__builtin_add_overflow(a, b, &r)) throw_overflow();
    return r;
}

Val checked_sub(Val a, Val b) {
    Val r;
    if (__builtin_sub_overflow(a, b, &r)) throw_overflow();
    return r;
}

Val checked_mul(Val a, Val b) {
    Val r;
    if (__builtin_mul_overflow(a, b, &r)) throw_overflow();
    return r;
}

Val checked_div(Val a, Val b) {
    if (b == 0) throw EvalError(EvalErrorKind::DivisionByZero, "division by zero");
    if (a == std::numeric_limits<Val>::min() && b == -1) throw_overflow();
    return a / b;  // C++ division truncates toward zero
}

Val checked_mod(Val a, Val b) {
    if (b == 0) throw EvalError(EvalErrorKind::DivisionByZero, "modulo by zero");
    if (a == std::numeric_limits<Val>::min() && b == -1) throw_overflow();
    return a % b;
}

Val checked_neg(Val a) {
    if (a == std::numeric_limits<Val>::min()) throw_overflow();
    return -a;
}

Val checked_abs(Val a) { return a < 0 ? checked_neg(a) : a; }

}  // namespace

Expr val(Val v) {
    Expr e;
    e.op = ExprOp::Const;
    e.num = v;
    return e;
}

Expr var(VarId id) {
    Expr e;
    e.op = ExprOp::Var;
    e.var = id;
    return e;
}

Expr add(std::vector<Expr> xs) { return nary(ExprOp::Add, std::move(xs)); }
Expr sub(Expr a, Expr b) { return binary(ExprOp::Sub, std::move(a), std::move(b)); }
Expr mul(std::vector<Expr> xs) { return nary(ExprOp::Mul, std::move(xs)); }
Expr div(Expr a, Expr b) { return binary(ExprOp::Div, std::move(a), std::move(b)); }
Expr mod(Expr a, Expr b) { return binary(ExprOp::Mod, std::move(a), std::move(b)); }
Expr abs(Expr a) { return unary(ExprOp::Abs, std::move(a)); }
Expr neg(Expr a) { return unary(ExprOp::Neg, std::move(a)); }
Expr dist(Expr a, Expr b) { return binary(ExprOp::Dist, std::move(a), std::move(b)); }
Expr emin(std::vector<Expr> xs) { return nary(ExprOp::Min, std::move(xs)); }
Expr emax(std::vector<Expr> xs) { return nary(ExprOp::Max, std::move(xs)); }
Expr eq(Expr a, Expr b) { return binary(ExprOp::Eq, std::move(a), std::move(b)); }
Expr ne(Expr a, Expr b) { return binary(ExprOp::Ne, std::move(a), std::move(b)); }
Expr lt(Expr a, Expr b) { return binary(ExprOp::Lt, std::move(a), std::move(b)); }
Expr le(Expr a, Expr b) { return binary(ExprOp::Le, std::move(a), std::move(b)); }
Expr gt(Expr a, Expr b) { return binary(ExprOp::Gt, std::move(a), std::move(b)); }
Expr ge(Expr a, Expr b) { return binary(ExprOp::Ge, std::move(a), std::move(b)); }
Expr land(std::vector<Expr> xs) { return nary(ExprOp::And, std::move(xs)); }
Expr lor(std::vector<Expr> xs) { return nary(ExprOp::Or, std::move(xs)); }
Expr lnot(Expr a) { return unary(ExprOp::Not, std::move(a)); }
Expr lxor(std::vector<Expr> xs) { return nary(ExprOp::Xor, std::move(xs)); }
Expr iff(std::vector<Expr> xs) { return nary(ExprOp::Iff, std::move(xs)); }

Expr ite(Expr c, Expr a, Expr b) {
    Expr e;
    e.op = ExprOp::IfThenElse;
    e.children.push_back(std::move(c));
    e.children.push_back(std::move(a));
    e.children.push_back(std::move(b));
    return e;
}

Expr in_set(Expr a, std::vector<Val> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    Expr e = unary(ExprOp::InSet, std::move(a));
    e.set_values = std::move(values);
    return e;
}

Val eval_expr(const Expr& e, const std::vector<Val>& a) {
    switch (e.op) {
        case ExprOp::Const: return e.num;
        case ExprOp::Var: return a.at(static_cast<size_t>(e.var));
        case ExprOp::Add: {
            Val s = 0;
            for (const auto& c : e.children) s = checked_add(s, eval_expr(c, a));
            return s;
        }
        case ExprOp::Sub:
            return checked_sub(eval_expr(e.children[0], a), eval_expr(e.children[1], a));
        case ExprOp::Mul: {
            Val p = 1;
            for (const auto& c : e.children) p = checked_mul(p, eval_expr(c, a));
            return p;
        }
        case ExprOp::Div:
            return checked_div(eval_expr(e.children[0], a), eval_expr(e.children[1], a));
        case ExprOp::Mod:
            return checked_mod(eval_expr(e.children[0], a), eval_expr(e.children[1], a));
        case ExprOp::Abs: return checked_abs(eval_expr(e.children[0], a));
        case ExprOp::Neg: return checked_neg(eval_expr(e.children[0], a));
        case ExprOp::Dist:
            return checked_abs(
                checked_sub(eval_expr(e.children[0], a), eval_expr(e.children[1], a)));
        case ExprOp::Min: {
            Val m = eval_expr(e.children[0], a);
            for (size_t i = 1; i < e.children.size(); ++i)
                m = std::min(m, eval_expr(e.children[i], a));
            return m;
        }
        case ExprOp::Max: {
            Val m = eval_expr(e.children[0], a);
            for (size_t i = 1; i < e.children.size(); ++i)
                m = std::max(m, eval_expr(e.children[i], a));
            return m;
        }
        case ExprOp::Eq:
            return eval_expr(e.children[0], a) == eval_expr(e.children[1], a) ? 1 : 0;
        case ExprOp::Ne:
            return eval_expr(e.children[0], a) != eval_expr(e.children[1], a) ? 1 : 0;
        case ExprOp::Lt:
            return eval_expr(e.children[0], a) < eval_expr(e.children[1], a) ? 1 : 0;
        case ExprOp::Le:
            return eval_expr(e.children[0], a) <= eval_expr(e.children[1], a) ? 1 : 0;
        case ExprOp::Gt:
            return eval_expr(e.children[0], a) > eval_expr(e.children[1], a) ? 1 : 0;
        case ExprOp::Ge:
            return eval_expr(e.children[0], a) >= eval_expr(e.children[1], a) ? 1 : 0;
        case ExprOp::And: {
            for (const auto& c : e.children)
                if (eval_expr(c, a) == 0) return 0;
            return 1;
        }
        case ExprOp::Or: {
            for (const auto& c : e.children)
                if (eval_expr(c, a) != 0) return 1;
            return 0;
        }
        case ExprOp::Not: return eval_expr(e.children[0], a) == 0 ? 1 : 0;
        case ExprOp::Xor: {
            int parity = 0;
            for (const auto& c : e.children) parity ^= eval_expr(c, a) != 0 ? 1 : 0;
            return parity;
        }
        case ExprOp::Iff: {
            bool first = eval_expr(e.children[0], a) != 0;
            for (size_t i = 1; i < e.children.size(); ++i)
                if ((eval_expr(e.children[i], a) != 0) != first) return 0;
            return 1;
        }
        case ExprOp::IfThenElse:
            return eval_expr(e.children[0], a) != 0 ? eval_expr(e.children[1], a)
                                                    : eval_expr(e.children[2], a);
        case ExprOp::InSet: {
            Val v = eval_expr(e.children[0], a);
            return std::binary_search(e.set_values.begin(), e.set_values.end(), v) ? 1 : 0;
        }
    }
    throw std::logic_error("unhandled expression operator");
}

FlatExpr::FlatExpr(const Expr& expr) {
    compile(expr);
    // Generous stack bound: every instruction pushes at most one slot.
    stack_.resize(prog_.size() + 1);
}

int FlatExpr::emit(Ins::Code code, int32_t a, Val num) {
    prog_.push_back({code, a, num});
    return static_cast<int>(prog_.size()) - 1;
}

void FlatExpr::compile(const Expr& e) {
    const auto n = static_cast<int32_t>(e.children.size());
    switch (e.op) {
        case ExprOp::Const: emit(Ins::kConst, 0, e.num); return;
        case ExprOp::Var: emit(Ins::kVar, 0, e.var); return;
        case ExprOp::Add:
            for (const auto& c : e.children) compile(c);
            emit(Ins::kAddN, n);
            return;
        case ExprOp::Mul:
            for (const auto& c : e.children) compile(c);
            emit(Ins::kMulN, n);
            return;
        case ExprOp::Min:
            for (const auto& c : e.children) compile(c);
            emit(Ins::kMinN, n);
            return;
        case ExprOp::Max:
            for (const auto& c : e.children) compile(c);
            emit(Ins::kMaxN, n);
            return;
        case ExprOp::Xor:
            for (const auto& c : e.children) compile(c);
            emit(Ins::kXorN, n);
            return;
        case ExprOp::Sub:
        case ExprOp::Div:
        case ExprOp::Mod:
        case ExprOp::Dist:
        case ExprOp::Eq:
        case ExprOp::Ne:
        case ExprOp::Lt:
        case ExprOp::Le:
        case ExprOp::Gt:
        case ExprOp::Ge: {
            compile(e.children[0]);
            compile(e.children[1]);
            Ins::Code code;
            switch (e.op) {
                case ExprOp::Div: code = Ins::kDiv; break;
                case ExprOp::Mod: code = Ins::kMod; break;
                case ExprOp::Dist: code = Ins::kDist; break;
                case ExprOp::Eq: code = Ins::kEq; break;
                case ExprOp::Ne: code = Ins::kNe; break;
                case ExprOp::Lt: code = Ins::kLt; break;
                case ExprOp::Le: code = Ins::kLe; break;
                case ExprOp::Gt: code = Ins::kGt; break;
                case ExprOp::Ge: code = Ins::kGe; break;
                default: code = Ins::kSub; break;
            }
            emit(code);
            return;
        }
        case ExprOp::Abs: compile(e.children[0]); emit(Ins::kAbs); return;
        case ExprOp::Neg: compile(e.children[0]); emit(Ins::kNeg); return;
        case ExprOp::Not: compile(e.children[0]); emit(Ins::kNot); return;
        case ExprOp::And: {
            std::vector<int> exits;
            for (const auto& c : e.children) {
                compile(c);
                exits.push_back(emit(Ins::kJz));
            }
            emit(Ins::kPush1);
            int skip = emit(Ins::kJmp);
            int lfalse = emit(Ins::kPush0);
            for (int site : exits) prog_[static_cast<size_t>(site)].a = lfalse;
            prog_[static_cast<size_t>(skip)].a = static_cast<int32_t>(prog_.size());
            return;
        }
        case ExprOp::Or: {
            std::vector<int> exits;
            for (const auto& c : e.children) {
                compile(c);
                exits.push_back(emit(Ins::kJnz));
            }
            emit(Ins::kPush0);
            int skip = emit(Ins::kJmp);
            int ltrue = emit(Ins::kPush1);
            for (int site : exits) prog_[static_cast<size_t>(site)].a = ltrue;
            prog_[static_cast<size_t>(skip)].a = static_cast<int32_t>(prog_.size());
            return;
        }
        case ExprOp::Iff: {
            compile(e.children[0]);
            emit(Ins::kBoolTop);
            std::vector<int> exits;
            for (size_t i = 1; i < e.children.size(); ++i) {
                compile(e.children[i]);
                exits.push_back(emit(Ins::kIffStep));
            }
            emit(Ins::kSetTop1);
            int skip = emit(Ins::kJmp);
            int lfail = emit(Ins::kSetTop0);
            for (int site : exits) prog_[static_cast<size_t>(site)].a = lfail;
            prog_[static_cast<size_t>(skip)].a = static_cast<int32_t>(prog_.size());
            return;
        }
        case ExprOp::IfThenElse: {
            compile(e.children[0]);
            int branch = emit(Ins::kJz);
            compile(e.children[1]);
            int skip = emit(Ins::kJmp);
            prog_[static_cast<size_t>(branch)].a = static_cast<int32_t>(prog_.size());
            compile(e.children[2]);
            prog_[static_cast<size_t>(skip)].a = static_cast<int32_t>(prog_.size());
            return;
        }
        case ExprOp::InSet: {
            compile(e.children[0]);
            sets_.push_back(e.set_values);
            emit(Ins::kInSet, static_cast<int32_t>(sets_.size()) - 1);
            return;
        }
    }
    throw std::logic_error("unhandled expression operator");
}

Val FlatExpr::eval(const std::vector<Val>& a) const {
    Val* st = stack_.data();
    int sp = 0;
    const int end = static_cast<int>(prog_.size());
    for (int pc = 0; pc < end; ++pc) {
        const Ins& ins = prog_[static_cast<size_t>(pc)];
        switch (ins.code) {
            case Ins::kConst: st[sp++] = ins.num; break;
            case Ins::kVar: st[sp++] = a[static_cast<size_t>(ins.num)]; break;
            case Ins::kAddN: {
                int base = sp - ins.a;
                Val s = 0;
                for (int i = 0; i < ins.a; ++i) s = checked_add(s, st[base + i]);
                sp = base;
                st[sp++] = s;
                break;
            }
            case Ins::kMulN: {
                int base = sp - ins.a;
                Val p = 1;
                for (int i = 0; i < ins.a; ++i) p = checked_mul(p, st[base + i]);
                sp = base;
                st[sp++] = p;
                break;
            }
            case Ins::kMinN: {
                int base = sp - ins.a;
                Val m = st[base];
                for (int i = 1; i < ins.a; ++i) m = std::min(m, st[base + i]);
                sp = base;
                st[sp++] = m;
                break;
            }
            case Ins::kMaxN: {
                int base = sp - ins.a;
                Val m = st[base];
                for (int i = 1; i < ins.a; ++i) m = std::max(m, st[base + i]);
                sp = base;
                st[sp++] = m;
                break;
            }
            case Ins::kXorN: {
                int base = sp - ins.a;
                Val parity = 0;
                for (int i = 0; i < ins.a; ++i) parity ^= st[base + i] != 0 ? 1 : 0;
                sp = base;
                st[sp++] = parity;
                break;
            }
            case Ins::kSub: --sp; st[sp - 1] = checked_sub(st[sp - 1], st[sp]); break;
            case Ins::kDiv: --sp; st[sp - 1] = checked_div(st[sp - 1], st[sp]); break;
            case Ins::kMod: --sp; st[sp - 1] = checked_mod(st[sp - 1], st[sp]); break;
            case Ins::kDist:
                --sp;
                st[sp - 1] = checked_abs(checked_sub(st[sp - 1], st[sp]));
                break;
            case Ins::kAbs: st[sp - 1] = checked_abs(st[sp - 1]); break;
            case Ins::kNeg: st[sp - 1] = checked_neg(st[sp - 1]); break;
            case Ins::kEq: --sp; st[sp - 1] = st[sp - 1] == st[sp] ? 1 : 0; break;
            case Ins::kNe: --sp; st[sp - 1] = st[sp - 1] != st[sp] ? 1 : 0; break;
            case Ins::kLt: --sp; st[sp - 1] = st[sp - 1] < st[sp] ? 1 : 0; break;
            case Ins::kLe: --sp; st[sp - 1] = st[sp - 1] <= st[sp] ? 1 : 0; break;
            case Ins::kGt: --sp; st[sp - 1] = st[sp - 1] > st[sp] ? 1 : 0; break;
            case Ins::kGe: --sp; st[sp - 1] = st[sp - 1] >= st[sp] ? 1 : 0; break;
            case Ins::kNot: st[sp - 1] = st[sp - 1] == 0 ? 1 : 0; break;
            case Ins::kInSet: {
                const auto& set = sets_[static_cast<size_t>(ins.a)];
                st[sp - 1] =
                    std::binary_search(set.begin(), set.end(), st[sp - 1]) ? 1 : 0;
                break;
            }
            case Ins::kJz:
                if (st[--sp] == 0) pc = ins.a - 1;
                break;
            case Ins::kJnz:
                if (st[--sp] != 0) pc = ins.a - 1;
                break;
            case Ins::kJmp: pc = ins.a - 1; break;
            case Ins::kPush0: st[sp++] = 0; break;
            case Ins::kPush1: st[sp++] = 1; break;
            case Ins::kBoolTop: st[sp - 1] = st[sp - 1] != 0 ? 1 : 0; break;
            case Ins::kIffStep: {
                Val x = st[--sp];
                if ((x != 0 ? 1 : 0) != st[sp - 1]) pc = ins.a - 1;
                break;
            }
            case Ins::kSetTop1: st[sp - 1] = 1; break;
            case Ins::kSetTop0: st[sp - 1] = 0; break;
        }
    }
    return st[sp - 1];
}

bool is_boolean_op(ExprOp op) {
    switch (op) {
        case ExprOp::Eq:
        case ExprOp::Ne:
        case ExprOp::Lt:
        case ExprOp::Le:
        case ExprOp::Gt:
        case ExprOp::Ge:
        case ExprOp::And:
        case ExprOp::Or:
        case ExprOp::Not:
        case ExprOp::Xor:
        case ExprOp::Iff:
        case ExprOp::InSet:
            return true;
        default:
            return false;
    }
}

void collect_vars(const Expr& e, std::vector<VarId>& out) {
    if (e.op == ExprOp::Var) out.push_back(e.var);
    for (const auto& c : e.children) collect_vars(c, out);
}

std::string arity_error(const Expr& e) {
    const size_t n = e.children.size();
    auto expect = [&](bool ok, const char* what) -> std::string {
        if (ok) return {};
        return std::string(expr_op_name(e.op)) + " expects " + what;
    };
    switch (e.op) {
        case ExprOp::Const:
        case ExprOp::Var:
            return expect(n == 0, "no children");
        case ExprOp::Abs:
        case ExprOp::Neg:
        case ExprOp::Not:
        case ExprOp::InSet:
            return expect(n == 1, "exactly 1 child");
        case ExprOp::Sub:
        case ExprOp::Div:
        case ExprOp::Mod:
        case ExprOp::Dist:
        case ExprOp::Eq:
        case ExprOp::Ne:
        case ExprOp::Lt:
        case ExprOp::Le:
        case ExprOp::Gt:
        case ExprOp::Ge:
            return expect(n == 2, "exactly 2 children");
        case ExprOp::IfThenElse:
            return expect(n == 3, "exactly 3 children");
        case ExprOp::Add:
        case ExprOp::Mul:
        case ExprOp::Min:
        case ExprOp::Max:
        case ExprOp::And:
        case ExprOp::Or:
        case ExprOp::Xor:
        case ExprOp::Iff:
            return expect(n >= 2, "at least 2 children");
    }
    return "unknown operator";
}

const char* expr_op_name(ExprOp op) {
    switch (op) {
        case ExprOp::Const: return "const";
        case ExprOp::Var: return "var";
        case ExprOp::Add: return "add";
        case ExprOp::Sub: return "sub";
        case ExprOp::Mul: return "mul";
        case ExprOp::Div: return "div";
        case ExprOp::Mod: return "mod";
        case ExprOp::Abs: return "abs";
        case ExprOp::Neg: return "neg";
        case ExprOp::Dist: return "dist";
        case ExprOp::Min: return "min";
        case ExprOp::Max: return "max";
        case ExprOp::Eq: return "eq";
        case ExprOp::Ne: return "ne";
        case ExprOp::Lt: return "lt";
        case ExprOp::Le: return "le";
        case ExprOp::Gt: return "gt";
        case ExprOp::Ge: return "ge";
        case ExprOp::And: return "and";
        case ExprOp::Or: return "or";
        case ExprOp::Not: return "not";
        case ExprOp::Xor: return "xor";
        case ExprOp::Iff: return "iff";
        case ExprOp::IfThenElse: return "if";
        case ExprOp::InSet: return "in";
    }
    return "?";
}

}  // namespace xcore
