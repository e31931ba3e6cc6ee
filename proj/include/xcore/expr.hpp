#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "xcore/domain.hpp"

namespace xcore {

enum class ExprOp {
    Const, Var,
    Add, Sub, Mul, Div, Mod, Abs, Neg, Dist, Min, Max,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or, Not, Xor, Iff, IfThenElse,
    InSet,
};

// Expression tree used by intension constraints and objectives.
// Boolean-valued nodes evaluate to 0/1; booleans freely mix with integers.
struct Expr {
    ExprOp op = ExprOp::Const;
    Val num = 0;                   // Const payload
    VarId var = -1;                // Var payload
    std::vector<Val> set_values;   // InSet payload (sorted, unique)
    std::vector<Expr> children;

    bool operator==(const Expr&) const = default;
};

// Builders. Variadic ops take >= 2 children (checked in validate/eval).
Expr val(Val v);
Expr var(VarId id);
Expr add(std::vector<Expr> xs);
Expr sub(Expr a, Expr b);
Expr mul(std::vector<Expr> xs);
Expr div(Expr a, Expr b);
Expr mod(Expr a, Expr b);
Expr abs(Expr a);
Expr neg(Expr a);
Expr dist(Expr a, Expr b);
Expr emin(std::vector<Expr> xs);
Expr emax(std::vector<Expr> xs);
Expr eq(Expr a, Expr b);
Expr ne(Expr a, Expr b);
Expr lt(Expr a, Expr b);
Expr le(Expr a, Expr b);
Expr gt(Expr a, Expr b);
Expr ge(Expr a, Expr b);
Expr land(std::vector<Expr> xs);
Expr lor(std::vector<Expr> xs);
Expr lnot(Expr a);
Expr lxor(std::vector<Expr> xs);
Expr iff(std::vector<Expr> xs);
Expr ite(Expr c, Expr a, Expr b);
Expr in_set(Expr a, std::vector<Val> values);

enum class EvalErrorKind { DivisionByZero, Overflow };

class EvalError : public std::runtime_error {
public:
    EvalError(EvalErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    EvalErrorKind kind() const { return kind_; }

private:
    EvalErrorKind kind_;
};

// Evaluates under a total assignment (values indexed by variable id).
// Div/Mod truncate toward zero; all arithmetic is checked 64-bit.
// Throws EvalError on division by zero or overflow.
Val eval_expr(const Expr& expr, const std::vector<Val>& assignment);

// Postfix compilation of an expression for repeated evaluation in hot
// filtering loops. eval() matches eval_expr exactly — same checked
// arithmetic, same child order, same short-circuiting (a subtree the tree
// walk skips is skipped here too) — without per-call recursion or
// allocation. The assignment must cover every variable id in the tree.
class FlatExpr {
public:
    explicit FlatExpr(const Expr& expr);
    Val eval(const std::vector<Val>& assignment) const;

private:
    struct Ins {
        enum Code : uint8_t {
            kConst, kVar, kAddN, kSub, kMulN, kDiv, kMod, kAbs, kNeg, kDist,
            kMinN, kMaxN, kEq, kNe, kLt, kLe, kGt, kGe, kNot, kXorN, kInSet,
            kJz, kJnz, kJmp, kPush0, kPush1, kBoolTop, kIffStep, kSetTop1,
            kSetTop0,
        };
        Code code;
        int32_t a = 0;  // child count, jump target, or set index
        Val num = 0;    // constant payload or variable id
    };

    void compile(const Expr& expr);
    int emit(Ins::Code code, int32_t a = 0, Val num = 0);

    std::vector<Ins> prog_;
    std::vector<std::vector<Val>> sets_;
    mutable std::vector<Val> stack_;
};

// True when the root operator always yields 0/1.
bool is_boolean_op(ExprOp op);

// Appends every variable id referenced by the tree (with repeats).
void collect_vars(const Expr& expr, std::vector<VarId>& out);

// Arity check for one node (children count vs operator). Returns an
// error message, or empty string when well-formed.
std::string arity_error(const Expr& expr);

const char* expr_op_name(ExprOp op);

}  // namespace xcore
