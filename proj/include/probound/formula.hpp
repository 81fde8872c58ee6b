#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "probound/bits.hpp"

namespace probound {

// ---------------------------------------------------------------------------
// Boolean event expressions
// ---------------------------------------------------------------------------

enum class ExprKind { False, True, Var, Not, And, Or, Implies, Xor };

// Immutable expression tree. Variables are indices into the enclosing
// problem's declared variable list. And/Or are n-ary and flattened on
// construction; single-child And/Or collapse to the child.
class Expr {
public:
    using Ptr = std::shared_ptr<const Expr>;

    ExprKind kind;
    int var = -1;               // ExprKind::Var only
    std::vector<Ptr> kids;

    static Ptr constant(bool value);
    static Ptr variable(int index);
    static Ptr mk_not(Ptr child);
    static Ptr mk_and(std::vector<Ptr> children);
    static Ptr mk_or(std::vector<Ptr> children);
    static Ptr mk_implies(Ptr lhs, Ptr rhs);
    static Ptr mk_xor(Ptr lhs, Ptr rhs);

private:
    Expr(ExprKind k) : kind(k) {}
    friend struct ExprFactory;
};

bool expr_equal(const Expr::Ptr& a, const Expr::Ptr& b);

// Largest variable index used, or -1 for a constant expression.
int max_var(const Expr::Ptr& e);

// Sorted list of distinct variable indices appearing in the expression.
std::vector<int> expr_vars(const Expr::Ptr& e);

// Rewrites Implies and Xor into Not/And/Or.
Expr::Ptr desugar(const Expr::Ptr& e);

// Grammar:  expr := impl ; impl := orE ("->" impl)? ; orE := andE ("|" andE)* ;
// andE := unary ("&" unary)* ; unary := "~" unary | "(" expr ")" | IDENT | "1" | "0".
// Whitespace is insignificant; "#" starts a line comment.
// Throws InputError (with position) on syntax errors or undeclared names.
Expr::Ptr parse_expression(std::string_view text,
                           const std::vector<std::string>& declared_vars);

// Inverse of parse_expression for Xor-free trees: parse(render(e)) == e.
// Xor nodes are printed in their desugared form.
std::string render(const Expr::Ptr& e, const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// Conjunctive normal form
// ---------------------------------------------------------------------------

struct Literal {
    int var;
    bool negated;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// A clause is a disjunction of literals, sorted by variable index.
struct Clause {
    std::vector<Literal> lits;
    friend auto operator<=>(const Clause&, const Clause&) = default;
};

std::string clause_str(const Clause& c, const std::vector<std::string>& names);

enum class CnfMode { Equivalent, Definitional };

struct CnfFormula {
    // Ordered variable list; Definitional mode appends auxiliary names.
    std::vector<std::string> variables;
    std::vector<Clause> clauses;
    // Definitional mode: (aux variable index, defining expression). The first
    // def_clause_count clauses define the auxiliaries; the remainder assert
    // the event itself.
    std::vector<std::pair<int, Expr::Ptr>> aux_defs;
    std::size_t def_clause_count = 0;
};

// Equivalent mode distributes to a logically equivalent CNF (at most 16
// variables; the result is checked against the source truth table).
// Definitional mode introduces one auxiliary variable per compound subterm.
CnfFormula to_cnf(const Expr::Ptr& expr, CnfMode mode,
                  const std::vector<std::string>& variables);

// ---------------------------------------------------------------------------
// Truth tables (events as vertex subsets of the atom space)
// ---------------------------------------------------------------------------

// Entry at atom m is 1 iff the assignment encoded by m satisfies the
// expression; bit i of m is the value of variable i. Word-parallel
// evaluation, OpenMP across words for large tables. n_vars <= 24.
AtomBits truth_table(const Expr::Ptr& e, int n_vars);

// Reference implementation: one tree walk per assignment.
AtomBits truth_table_reference(const Expr::Ptr& e, int n_vars);

bool eval_expr(const Expr::Ptr& e, std::uint32_t assignment);

AtomBits clause_table(const Clause& c, int n_vars);
AtomBits cnf_table(const CnfFormula& f, int n_vars);

}  // namespace probound
