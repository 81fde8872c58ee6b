#include "probound/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "probound/errors.hpp"

namespace probound {

struct ExprFactory {
    static Expr::Ptr make(ExprKind k) { return Expr::Ptr(new Expr(k)); }
    static Expr* mut(ExprKind k) { return new Expr(k); }
};

Expr::Ptr Expr::constant(bool value) {
    return ExprFactory::make(value ? ExprKind::True : ExprKind::False);
}

Expr::Ptr Expr::variable(int index) {
    Expr* e = ExprFactory::mut(ExprKind::Var);
    e->var = index;
    return Ptr(e);
}

Expr::Ptr Expr::mk_not(Ptr child) {
    Expr* e = ExprFactory::mut(ExprKind::Not);
    e->kids.push_back(std::move(child));
    return Ptr(e);
}

static Expr::Ptr nary(ExprKind kind, std::vector<Expr::Ptr> children, bool empty_value) {
    std::vector<Expr::Ptr> flat;
    for (auto& c : children) {
        if (c->kind == kind)
            flat.insert(flat.end(), c->kids.begin(), c->kids.end());
        else
            flat.push_back(std::move(c));
    }
    if (flat.empty()) return Expr::constant(empty_value);
    if (flat.size() == 1) return flat[0];
    Expr* e = ExprFactory::mut(kind);
    e->kids = std::move(flat);
    return Expr::Ptr(e);
}

Expr::Ptr Expr::mk_and(std::vector<Ptr> children) {
    return nary(ExprKind::And, std::move(children), true);
}

Expr::Ptr Expr::mk_or(std::vector<Ptr> children) {
    return nary(ExprKind::Or, std::move(children), false);
}

Expr::Ptr Expr::mk_implies(Ptr lhs, Ptr rhs) {
    Expr* e = ExprFactory::mut(ExprKind::Implies);
    e->kids = {std::move(lhs), std::move(rhs)};
    return Ptr(e);
}

Expr::Ptr Expr::mk_xor(Ptr lhs, Ptr rhs) {
    Expr* e = ExprFactory::mut(ExprKind::Xor);
    e->kids = {std::move(lhs), std::move(rhs)};
    return Ptr(e);
}

bool expr_equal(const Expr::Ptr& a, const Expr::Ptr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind || a->var != b->var || a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!expr_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

int max_var(const Expr::Ptr& e) {
    int m = e->kind == ExprKind::Var ? e->var : -1;
    for (const auto& k : e->kids) m = std::max(m, max_var(k));
    return m;
}

static void collect_vars(const Expr::Ptr& e, std::set<int>& out) {
    if (e->kind == ExprKind::Var) out.insert(e->var);
    for (const auto& k : e->kids) collect_vars(k, out);
}

std::vector<int> expr_vars(const Expr::Ptr& e) {
    std::set<int> s;
    collect_vars(e, s);
    return {s.begin(), s.end()};
}

Expr::Ptr desugar(const Expr::Ptr& e) {
    switch (e->kind) {
        case ExprKind::False:
        case ExprKind::True:
        case ExprKind::Var:
            return e;
        case ExprKind::Not:
            return Expr::mk_not(desugar(e->kids[0]));
        case ExprKind::And:
        case ExprKind::Or: {
            std::vector<Expr::Ptr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(desugar(k));
            return e->kind == ExprKind::And ? Expr::mk_and(std::move(kids))
                                            : Expr::mk_or(std::move(kids));
        }
        case ExprKind::Implies: {
            auto a = desugar(e->kids[0]);
            auto b = desugar(e->kids[1]);
            return Expr::mk_or({Expr::mk_not(a), b});
        }
        case ExprKind::Xor: {
            auto a = desugar(e->kids[0]);
            auto b = desugar(e->kids[1]);
            return Expr::mk_or({Expr::mk_and({a, Expr::mk_not(b)}),
                                Expr::mk_and({Expr::mk_not(a), b})});
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const std::vector<std::string>& vars;

    void skip_ws() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw InputError(msg + " at position " + std::to_string(pos), pos);
    }

    Expr::Ptr parse_expr() { return parse_impl(); }

    Expr::Ptr parse_impl() {
        Expr::Ptr lhs = parse_or();
        if (eat("->")) return Expr::mk_implies(std::move(lhs), parse_impl());
        return lhs;
    }

    Expr::Ptr parse_or() {
        std::vector<Expr::Ptr> parts{parse_and()};
        while (peek() == '|' && eat("|")) parts.push_back(parse_and());
        return parts.size() == 1 ? parts[0] : Expr::mk_or(std::move(parts));
    }

    Expr::Ptr parse_and() {
        std::vector<Expr::Ptr> parts{parse_unary()};
        while (peek() == '&' && eat("&")) parts.push_back(parse_unary());
        return parts.size() == 1 ? parts[0] : Expr::mk_and(std::move(parts));
    }

    Expr::Ptr parse_unary() {
        skip_ws();
        if (eat("~")) return Expr::mk_not(parse_unary());
        if (eat("(")) {
            Expr::Ptr e = parse_expr();
            if (!eat(")")) fail("expected ')'");
            return e;
        }
        if (eat("1")) return Expr::constant(true);
        if (eat("0")) return Expr::constant(false);
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            std::string name(text.substr(start, pos - start));
            auto it = std::find(vars.begin(), vars.end(), name);
            if (it == vars.end())
                throw InputError("undeclared variable '" + name + "' at position " +
                                     std::to_string(start),
                                 start);
            return Expr::variable(static_cast<int>(it - vars.begin()));
        }
        fail("expected expression");
    }
};

}  // namespace

Expr::Ptr parse_expression(std::string_view text,
                           const std::vector<std::string>& declared_vars) {
    Parser p{text, 0, declared_vars};
    Expr::Ptr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    return e;
}

// Precedence levels for the printer: -> is 0, | is 1, & is 2, unary is 3.
static int level(ExprKind k) {
    switch (k) {
        case ExprKind::Implies:
        case ExprKind::Xor:
            return 0;
        case ExprKind::Or:
            return 1;
        case ExprKind::And:
            return 2;
        default:
            return 3;
    }
}

static void render_rec(const Expr::Ptr& e, const std::vector<std::string>& names,
                       int min_level, std::string& out) {
    const Expr::Ptr shown = e->kind == ExprKind::Xor ? desugar(e) : e;
    int lvl = level(shown->kind);
    bool parens = lvl < min_level;
    if (parens) out += '(';
    switch (shown->kind) {
        case ExprKind::False:
            out += '0';
            break;
        case ExprKind::True:
            out += '1';
            break;
        case ExprKind::Var:
            out += names.at(static_cast<std::size_t>(shown->var));
            break;
        case ExprKind::Not:
            out += '~';
            render_rec(shown->kids[0], names, 3, out);
            break;
        case ExprKind::And:
        case ExprKind::Or: {
            const char* op = shown->kind == ExprKind::And ? " & " : " | ";
            for (std::size_t i = 0; i < shown->kids.size(); ++i) {
                if (i) out += op;
                render_rec(shown->kids[i], names, lvl + 1, out);
            }
            break;
        }
        case ExprKind::Implies:
            // Right associative: the lhs needs a strictly higher level.
            render_rec(shown->kids[0], names, 1, out);
            out += " -> ";
            render_rec(shown->kids[1], names, 0, out);
            break;
        case ExprKind::Xor:
            break;  // unreachable, desugared above
    }
    if (parens) out += ')';
}

std::string render(const Expr::Ptr& e, const std::vector<std::string>& names) {
    std::string out;
    render_rec(e, names, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Truth tables
// ---------------------------------------------------------------------------

bool eval_expr(const Expr::Ptr& e, std::uint32_t assignment) {
    switch (e->kind) {
        case ExprKind::False:
            return false;
        case ExprKind::True:
            return true;
        case ExprKind::Var:
            return (assignment >> e->var) & 1;
        case ExprKind::Not:
            return !eval_expr(e->kids[0], assignment);
        case ExprKind::And:
            for (const auto& k : e->kids)
                if (!eval_expr(k, assignment)) return false;
            return true;
        case ExprKind::Or:
            for (const auto& k : e->kids)
                if (eval_expr(k, assignment)) return true;
            return false;
        case ExprKind::Implies:
            return !eval_expr(e->kids[0], assignment) || eval_expr(e->kids[1], assignment);
        case ExprKind::Xor:
            return eval_expr(e->kids[0], assignment) != eval_expr(e->kids[1], assignment);
    }
    return false;
}

static void check_tt_guard(const Expr::Ptr& e, int n_vars) {
    if (n_vars < 0 || n_vars > 24)
        throw GuardError("truth table guard: need 0 <= variables <= 24, got " +
                         std::to_string(n_vars));
    if (max_var(e) >= n_vars)
        throw InputError("expression uses a variable outside the given order");
}

namespace {

// Bit pattern of variable v restricted to one 64-atom word. Variables 0..5
// alternate inside a word; higher variables are constant per word.
const std::uint64_t kVarPattern[6] = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull,
};

std::uint64_t eval_word(const Expr::Ptr& e, std::uint64_t word_index) {
    switch (e->kind) {
        case ExprKind::False:
            return 0;
        case ExprKind::True:
            return ~0ull;
        case ExprKind::Var:
            if (e->var < 6) return kVarPattern[e->var];
            return (word_index >> (e->var - 6)) & 1 ? ~0ull : 0;
        case ExprKind::Not:
            return ~eval_word(e->kids[0], word_index);
        case ExprKind::And: {
            std::uint64_t w = ~0ull;
            for (const auto& k : e->kids) w &= eval_word(k, word_index);
            return w;
        }
        case ExprKind::Or: {
            std::uint64_t w = 0;
            for (const auto& k : e->kids) w |= eval_word(k, word_index);
            return w;
        }
        case ExprKind::Implies:
            return ~eval_word(e->kids[0], word_index) | eval_word(e->kids[1], word_index);
        case ExprKind::Xor:
            return eval_word(e->kids[0], word_index) ^ eval_word(e->kids[1], word_index);
    }
    return 0;
}

}  // namespace

AtomBits truth_table(const Expr::Ptr& e, int n_vars) {
    check_tt_guard(e, n_vars);
    AtomBits out(1ull << n_vars);
    const std::int64_t words = static_cast<std::int64_t>(out.word_count());
#pragma omp parallel for schedule(static) if (words >= 256)
    for (std::int64_t w = 0; w < words; ++w)
        out.data()[w] = eval_word(e, static_cast<std::uint64_t>(w));
    out.trim();
    return out;
}

AtomBits truth_table_reference(const Expr::Ptr& e, int n_vars) {
    check_tt_guard(e, n_vars);
    AtomBits out(1ull << n_vars);
    for (std::uint64_t m = 0; m < out.size(); ++m)
        out.set(m, eval_expr(e, static_cast<std::uint32_t>(m)));
    return out;
}

AtomBits clause_table(const Clause& c, int n_vars) {
    AtomBits out(1ull << n_vars);
    std::vector<Expr::Ptr> lits;
    for (const Literal& l : c.lits) {
        Expr::Ptr v = Expr::variable(l.var);
        lits.push_back(l.negated ? Expr::mk_not(v) : v);
    }
    return truth_table(Expr::mk_or(std::move(lits)), n_vars);
}

AtomBits cnf_table(const CnfFormula& f, int n_vars) {
    AtomBits out(1ull << n_vars, true);
    for (const Clause& c : f.clauses) out &= clause_table(c, n_vars);
    return out;
}

// ---------------------------------------------------------------------------
// CNF conversion
// ---------------------------------------------------------------------------

std::string clause_str(const Clause& c, const std::vector<std::string>& names) {
    if (c.lits.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < c.lits.size(); ++i) {
        if (i) out += " | ";
        if (c.lits[i].negated) out += '~';
        out += names.at(static_cast<std::size_t>(c.lits[i].var));
    }
    return out;
}

namespace {

// Constant folding; assumes Implies/Xor already desugared.
Expr::Ptr fold(const Expr::Ptr& e) {
    switch (e->kind) {
        case ExprKind::False:
        case ExprKind::True:
        case ExprKind::Var:
            return e;
        case ExprKind::Not: {
            auto c = fold(e->kids[0]);
            if (c->kind == ExprKind::True) return Expr::constant(false);
            if (c->kind == ExprKind::False) return Expr::constant(true);
            if (c->kind == ExprKind::Not) return c->kids[0];
            return Expr::mk_not(c);
        }
        case ExprKind::And:
        case ExprKind::Or: {
            const bool is_and = e->kind == ExprKind::And;
            std::vector<Expr::Ptr> kids;
            for (const auto& k : e->kids) {
                auto c = fold(k);
                if (c->kind == (is_and ? ExprKind::True : ExprKind::False)) continue;
                if (c->kind == (is_and ? ExprKind::False : ExprKind::True))
                    return Expr::constant(!is_and);
                kids.push_back(c);
            }
            return is_and ? Expr::mk_and(std::move(kids)) : Expr::mk_or(std::move(kids));
        }
        default:
            return e;
    }
}

// Negation normal form over Not/And/Or.
Expr::Ptr to_nnf(const Expr::Ptr& e, bool negate) {
    switch (e->kind) {
        case ExprKind::False:
            return Expr::constant(negate);
        case ExprKind::True:
            return Expr::constant(!negate);
        case ExprKind::Var:
            return negate ? Expr::mk_not(e) : e;
        case ExprKind::Not:
            return to_nnf(e->kids[0], !negate);
        case ExprKind::And:
        case ExprKind::Or: {
            bool becomes_and = (e->kind == ExprKind::And) != negate;
            std::vector<Expr::Ptr> kids;
            for (const auto& k : e->kids) kids.push_back(to_nnf(k, negate));
            return becomes_and ? Expr::mk_and(std::move(kids))
                               : Expr::mk_or(std::move(kids));
        }
        default:
            return to_nnf(desugar(e), negate);
    }
}

// Sorted literal set; false when the clause is tautological or has a
// duplicate-free representation with both polarities.
bool make_clause(std::vector<Literal> lits, Clause& out) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
        if (lits[i].var == lits[i + 1].var) return false;  // x | ~x
    out.lits = std::move(lits);
    return true;
}

// CNF of an NNF tree as a clause set; distribution over Or.
std::vector<Clause> distribute(const Expr::Ptr& e) {
    switch (e->kind) {
        case ExprKind::True:
            return {};
        case ExprKind::False:
            return {Clause{}};
        case ExprKind::Var:
            return {Clause{{Literal{e->var, false}}}};
        case ExprKind::Not:
            return {Clause{{Literal{e->kids[0]->var, true}}}};
        case ExprKind::And: {
            std::vector<Clause> all;
            for (const auto& k : e->kids) {
                auto sub = distribute(k);
                all.insert(all.end(), sub.begin(), sub.end());
            }
            return all;
        }
        case ExprKind::Or: {
            std::vector<Clause> acc{Clause{}};
            for (const auto& k : e->kids) {
                auto sub = distribute(k);
                std::vector<Clause> next;
                for (const Clause& a : acc)
                    for (const Clause& b : sub) {
                        std::vector<Literal> merged = a.lits;
                        merged.insert(merged.end(), b.lits.begin(), b.lits.end());
                        Clause c;
                        if (make_clause(std::move(merged), c)) next.push_back(std::move(c));
                    }
                acc = std::move(next);
            }
            return acc;
        }
        default:
            return {};
    }
}

struct TseitinCtx {
    CnfFormula* out;
    std::vector<std::string>* names;

    Literal fresh(const Expr::Ptr& def) {
        int idx = static_cast<int>(names->size());
        names->push_back("_t" + std::to_string(out->aux_defs.size() + 1));
        out->aux_defs.emplace_back(idx, def);
        return Literal{idx, false};
    }

    // Returns a literal equivalent to the (NNF, folded) expression, emitting
    // defining clauses for compound nodes.
    Literal encode(const Expr::Ptr& e) {
        switch (e->kind) {
            case ExprKind::Var:
                return Literal{e->var, false};
            case ExprKind::Not: {
                Literal l = encode(e->kids[0]);
                return Literal{l.var, !l.negated};
            }
            case ExprKind::And:
            case ExprKind::Or: {
                std::vector<Literal> kids;
                for (const auto& k : e->kids) kids.push_back(encode(k));
                Literal z = fresh(e);
                const bool is_and = e->kind == ExprKind::And;
                // z <-> AND(kids): (~z | k_i) each, (z | ~k_1 | ... | ~k_n).
                // Or is the mirror image.
                std::vector<Literal> wide{Literal{z.var, !is_and}};
                for (Literal k : kids) {
                    Clause narrow;
                    if (make_clause({Literal{z.var, is_and}, Literal{k.var, k.negated == is_and}},
                                    narrow))
                        out->clauses.push_back(std::move(narrow));
                    wide.push_back(Literal{k.var, k.negated != is_and});
                }
                Clause c;
                if (make_clause(std::move(wide), c)) out->clauses.push_back(std::move(c));
                return z;
            }
            default:
                // Constants are folded away before encode().
                throw std::logic_error("encode: unexpected node");
        }
    }
};

}  // namespace

CnfFormula to_cnf(const Expr::Ptr& expr, CnfMode mode,
                  const std::vector<std::string>& variables) {
    CnfFormula out;
    out.variables = variables;
    Expr::Ptr nnf = fold(to_nnf(desugar(expr), false));

    if (mode == CnfMode::Equivalent) {
        if (expr_vars(expr).size() > 16)
            throw GuardError("equivalent CNF guard: more than 16 variables");
        out.clauses = distribute(nnf);
        std::sort(out.clauses.begin(), out.clauses.end());
        out.clauses.erase(std::unique(out.clauses.begin(), out.clauses.end()),
                          out.clauses.end());
        int n = max_var(expr) + 1;
        if (n <= 16 && !(cnf_table(out, n) == truth_table(expr, n)))
            throw std::logic_error("to_cnf: equivalence check failed");
        return out;
    }

    // Definitional (Tseitin-style).
    if (nnf->kind == ExprKind::True) return out;
    if (nnf->kind == ExprKind::False) {
        out.clauses.push_back(Clause{});
        return out;
    }
    TseitinCtx ctx{&out, &out.variables};
    Literal root = ctx.encode(nnf);
    out.def_clause_count = out.clauses.size();
    out.clauses.push_back(Clause{{root}});
    return out;
}

}  // namespace probound
