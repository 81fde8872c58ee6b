#include "probound/engine.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <stdexcept>

#include "probound/errors.hpp"
#include "probound/inequality.hpp"
#include "probound/kernels.hpp"

namespace probound {

Rat fuzzy_evaluate(const Expr::Ptr& expr, const std::map<int, Rat>& point_probs) {
    const Expr::Ptr e = desugar(expr);
    switch (e->kind) {
        case ExprKind::False:
            return Rat(0);
        case ExprKind::True:
            return Rat(1);
        case ExprKind::Var: {
            auto it = point_probs.find(e->var);
            if (it == point_probs.end())
                throw InputError("fuzzy_evaluate: missing point probability for a variable");
            if (it->second < 0 || it->second > 1)
                throw InputError("fuzzy_evaluate: point probability outside [0,1]");
            return it->second;
        }
        case ExprKind::Not:
            return Rat(1) - fuzzy_evaluate(e->kids[0], point_probs);
        case ExprKind::And: {
            Rat v = fuzzy_evaluate(e->kids[0], point_probs);
            for (std::size_t i = 1; i < e->kids.size(); ++i)
                v = std::min(v, fuzzy_evaluate(e->kids[i], point_probs));
            return v;
        }
        case ExprKind::Or: {
            Rat v = fuzzy_evaluate(e->kids[0], point_probs);
            for (std::size_t i = 1; i < e->kids.size(); ++i)
                v = std::max(v, fuzzy_evaluate(e->kids[i], point_probs));
            return v;
        }
        default:
            throw std::logic_error("fuzzy_evaluate: desugar left a compound node");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Exact mode: LP over full atom coordinates
// ---------------------------------------------------------------------------

LinearProgram exact_lp(const KnowledgeBase& kb) {
    const int n = static_cast<int>(kb.vars().size());
    const std::uint64_t atoms = 1ull << n;
    if (atoms > 5000)
        throw GuardError("exact mode guard: 2^" + std::to_string(n) +
                         " atoms exceed the LP size limit");

    LinearProgram lp;
    for (std::uint64_t m = 0; m < atoms; ++m) lp.vars.push_back("p" + std::to_string(m));
    lp.objective.assign(atoms, Rat(0));

    for (std::uint64_t m = 0; m < atoms; ++m) {
        LpRow r{std::vector<Rat>(atoms, Rat(0)), LpRel::Ge, Rat(0)};
        r.coeffs[m] = 1;
        lp.rows.push_back(std::move(r));
    }
    {
        LpRow sum{std::vector<Rat>(atoms, Rat(1)), LpRel::Eq, Rat(1)};
        lp.rows.push_back(std::move(sum));
    }
    auto indicator_row = [&](const AtomBits& event, LpRel rel, const Rat& rhs) {
        LpRow r{std::vector<Rat>(atoms, Rat(0)), rel, rhs};
        for (std::uint64_t m = 0; m < atoms; ++m)
            if (event.get(m)) r.coeffs[m] = 1;
        lp.rows.push_back(std::move(r));
    };
    for (const Assertion& a : kb.assertions()) {
        AtomBits event = cnf_table(a.cnf, n);
        switch (a.kind) {
            case AssertKind::Equal:
                indicator_row(event, LpRel::Eq, a.lo);
                break;
            case AssertKind::AtLeast:
                indicator_row(event, LpRel::Ge, a.lo);
                break;
            case AssertKind::AtMost:
                indicator_row(event, LpRel::Le, a.hi);
                break;
            case AssertKind::Interval:
                indicator_row(event, LpRel::Ge, a.lo);
                indicator_row(event, LpRel::Le, a.hi);
                break;
        }
    }
    for (const Clause& c : kb.definitional_units())
        indicator_row(clause_table(c, n), LpRel::Eq, Rat(1));
    return lp;
}

AtomVector witness_measure(const KnowledgeBase& kb, const std::vector<Rat>& values) {
    AtomVector v{AtomSpace{std::vector<std::string>(kb.vars())}};
    std::copy(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(v.entries.size()),
              v.entries.begin());
    return v;
}

BoundResult bound_exact(const KnowledgeBase& kb, const Expr::Ptr& query) {
    const auto start = Clock::now();
    const int n = static_cast<int>(kb.vars().size());

    LinearProgram lp = exact_lp(kb);
    AtomBits q = truth_table(query, n);
    for (std::uint64_t m = 0; m < q.size(); ++m)
        if (q.get(m)) lp.objective[m] = 1;

    BoundResult out;
    out.mode = BoundResult::Mode::Exact;
    out.stats.rows = lp.rows.size();

    lp.dir = LpDir::Min;
    LpOutcome lo = solve(lp);
    out.stats.pivots += lo.pivots;
    if (lo.status == LpOutcome::Status::Infeasible) {
        out.status = BoundResult::Status::Infeasible;
        out.proof = InfeasibilityProof{lp, lo};
        out.stats.seconds = seconds_since(start);
        return out;
    }
    lp.dir = LpDir::Max;
    LpOutcome hi = solve(lp);
    out.stats.pivots += hi.pivots;
    if (lo.status != LpOutcome::Status::Optimal || hi.status != LpOutcome::Status::Optimal)
        throw std::logic_error("bound: atom-space LP cannot be unbounded");

    out.status = BoundResult::Status::Feasible;
    out.lo = lo.value;
    out.hi = hi.value;
    out.lo_witness = witness_measure(kb, lo.witness);
    out.hi_witness = witness_measure(kb, hi.witness);
    out.stats.seconds = seconds_since(start);
    return out;
}

// ---------------------------------------------------------------------------
// Relaxed mode: LP over the degree-d monotone basis
// ---------------------------------------------------------------------------

struct SparseRow {
    std::map<std::size_t, Rat> coeffs;
    LpRel rel;
    Rat rhs;
};

// Affine form over LP columns; the basis column of the empty term plays the
// constant (it is pinned to one).
using LinForm = std::map<std::size_t, Rat>;

struct RelaxedBuilder {
    const KnowledgeBase& kb;
    int degree;
    MonotoneBasis basis;
    std::map<std::uint32_t, std::size_t> term_col;
    std::vector<std::string> names;
    std::vector<SparseRow> rows;

    RelaxedBuilder(const KnowledgeBase& k, int d)
        : kb(k), degree(d), basis(AtomSpace{std::vector<std::string>(k.vars())}, d) {
        for (std::uint32_t t : basis.terms) {
            term_col[t] = names.size();
            names.push_back(basis.term_str(t));
        }
        // The empty term is the universal event.
        rows.push_back(SparseRow{{{term_col[0], Rat(1)}}, LpRel::Eq, Rat(1)});
        for (std::uint32_t t : basis.terms) {
            if (t == 0) continue;
            rows.push_back(SparseRow{{{term_col[t], Rat(1)}}, LpRel::Ge, Rat(0)});
            rows.push_back(SparseRow{{{term_col[t], Rat(1)}}, LpRel::Le, Rat(1)});
        }
    }

    std::size_t fresh_var(const std::string& name) {
        names.push_back(name);
        return names.size() - 1;
    }

    void box(std::size_t col) {
        rows.push_back(SparseRow{{{col, Rat(1)}}, LpRel::Ge, Rat(0)});
        rows.push_back(SparseRow{{{col, Rat(1)}}, LpRel::Le, Rat(1)});
    }

    // Exact linear form of an event's probability, when its inclusion-
    // exclusion expansion stays within the working degree.
    std::optional<LinForm> event_form(const std::vector<int>& support,
                                      const AtomBits& table) {
        const int k = static_cast<int>(support.size());
        if (k > 16) return std::nullopt;
        std::vector<Rat> coeffs(1ull << k, Rat(0));
        for (std::uint64_t m = 0; m < coeffs.size(); ++m)
            if (table.get(m)) coeffs[m] = 1;
        kernels::moebius_subset(coeffs, k);
        LinForm form;
        for (std::uint32_t local = 0; local < coeffs.size(); ++local) {
            if (coeffs[local] == 0) continue;
            if (std::popcount(local) > degree) return std::nullopt;
            std::uint32_t global = 0;
            for (int b = 0; b < k; ++b)
                if ((local >> b) & 1) global |= 1u << support[static_cast<std::size_t>(b)];
            form[term_col.at(global)] += coeffs[local];
        }
        return form;
    }

    std::optional<LinForm> clause_form(const Clause& c) {
        std::vector<int> support;
        for (const Literal& l : c.lits) support.push_back(l.var);
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        Expr::Ptr e;
        {
            std::vector<Expr::Ptr> lits;
            for (const Literal& l : c.lits) {
                // Remap onto the support indexing.
                int local = static_cast<int>(
                    std::lower_bound(support.begin(), support.end(), l.var) - support.begin());
                Expr::Ptr v = Expr::variable(local);
                lits.push_back(l.negated ? Expr::mk_not(v) : v);
            }
            e = Expr::mk_or(std::move(lits));
        }
        return event_form(support, truth_table(e, static_cast<int>(support.size())));
    }

    // A column constrained to bracket the clause's probability: exact when
    // the clause fits the degree, otherwise sandwiched between sub-clause
    // chunks (below) and the union bound over literals (above).
    LinForm clause_bracket(const Clause& c, std::size_t index_hint) {
        if (auto form = clause_form(c)) return *form;
        std::size_t qc = fresh_var("qc" + std::to_string(index_hint));
        box(qc);
        const int width = degree;
        for (std::size_t i = 0; i < c.lits.size(); i += static_cast<std::size_t>(width)) {
            Clause chunk;
            for (std::size_t j = i; j < std::min(c.lits.size(), i + static_cast<std::size_t>(width)); ++j)
                chunk.lits.push_back(c.lits[j]);
            auto sub = clause_form(chunk);
            if (!sub) continue;
            // qc >= P(chunk)
            SparseRow r{*sub, LpRel::Le, Rat(0)};
            r.coeffs[qc] -= 1;
            for (auto& [col, v] : r.coeffs) v = -v;
            r.rel = LpRel::Ge;
            rows.push_back(std::move(r));
        }
        {
            // qc <= sum of literal probabilities
            SparseRow r{{}, LpRel::Ge, Rat(0)};
            for (const Literal& l : c.lits) {
                Clause unit{{l}};
                auto form = clause_form(unit);
                for (const auto& [col, v] : *form) r.coeffs[col] += v;
            }
            r.coeffs[qc] -= 1;
            rows.push_back(std::move(r));
        }
        return LinForm{{qc, Rat(1)}};
    }

    // Linear form (or bracketed column) for a CNF event's probability.
    LinForm event_bracket(const CnfFormula& cnf, const std::string& name) {
        std::vector<int> support;
        for (const Clause& c : cnf.clauses)
            for (const Literal& l : c.lits) support.push_back(l.var);
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        if (support.size() <= 16) {
            // Truth table over the support only.
            AtomBits table(1ull << support.size(), true);
            for (const Clause& c : cnf.clauses) {
                Clause local;
                for (const Literal& l : c.lits) {
                    int idx = static_cast<int>(
                        std::lower_bound(support.begin(), support.end(), l.var) -
                        support.begin());
                    local.lits.push_back(Literal{idx, l.negated});
                }
                table &= clause_table(local, static_cast<int>(support.size()));
            }
            if (auto form = event_form(support, table)) return *form;
        }
        // Boole-Fréchet bracketing: q <= P(c_i), q >= sum P(c_i) - (m-1).
        std::size_t q = fresh_var(name);
        box(q);
        // q >= sum P(c_i) - (m-1), stated as q - sum P(c_i) >= 1 - m.
        SparseRow lower{{{q, Rat(1)}}, LpRel::Ge, Rat(1 - static_cast<long>(cnf.clauses.size()))};
        for (std::size_t i = 0; i < cnf.clauses.size(); ++i) {
            LinForm ci = clause_bracket(cnf.clauses[i], rows.size());
            SparseRow upper{ci, LpRel::Ge, Rat(0)};
            upper.coeffs[q] -= 1;
            rows.push_back(std::move(upper));
            for (const auto& [col, v] : ci) lower.coeffs[col] -= v;
        }
        rows.push_back(std::move(lower));
        return LinForm{{q, Rat(1)}};
    }

    void add_form_rows(const LinForm& form, AssertKind kind, const Rat& lo, const Rat& hi) {
        switch (kind) {
            case AssertKind::Equal:
                rows.push_back(SparseRow{form, LpRel::Eq, lo});
                break;
            case AssertKind::AtLeast:
                rows.push_back(SparseRow{form, LpRel::Ge, lo});
                break;
            case AssertKind::AtMost:
                rows.push_back(SparseRow{form, LpRel::Le, hi});
                break;
            case AssertKind::Interval:
                rows.push_back(SparseRow{form, LpRel::Ge, lo});
                rows.push_back(SparseRow{form, LpRel::Le, hi});
                break;
        }
    }

    LinearProgram finish(const LinForm& objective) {
        LinearProgram lp;
        lp.vars = names;
        lp.objective.assign(names.size(), Rat(0));
        for (const auto& [col, v] : objective) lp.objective[col] = v;
        for (const SparseRow& s : rows) {
            LpRow r{std::vector<Rat>(names.size(), Rat(0)), s.rel, s.rhs};
            for (const auto& [col, v] : s.coeffs) r.coeffs[col] = v;
            lp.rows.push_back(std::move(r));
        }
        return lp;
    }
};

BoundResult bound_relaxed(const KnowledgeBase& kb, const Expr::Ptr& query, int degree,
                          std::size_t budget) {
    const auto start = Clock::now();
    const int n = static_cast<int>(kb.vars().size());
    if (degree < 1 || degree > n)
        throw InputError("relaxed mode: need 1 <= degree <= variable count");

    RelaxedBuilder b(kb, degree);

    // Generated valid inequalities, a deterministic budget prefix.
    auto family = generate_family(b.basis.space, degree, budget);
    for (const LinearInequality& ineq : family) {
        SparseRow r{{}, LpRel::Ge, Rat(0)};
        for (const auto& [mask, c] : ineq.terms) r.coeffs[b.term_col.at(mask)] = c;
        b.rows.push_back(std::move(r));
    }

    for (const Assertion& a : kb.assertions()) {
        LinForm form = b.event_bracket(a.cnf, "qe" + std::to_string(b.rows.size()));
        b.add_form_rows(form, a.kind, a.lo, a.hi);
    }
    for (std::size_t i = 0; i < kb.definitional_units().size(); ++i) {
        LinForm form = b.clause_bracket(kb.definitional_units()[i], b.rows.size());
        b.rows.push_back(SparseRow{form, LpRel::Eq, Rat(1)});
    }

    if (expr_vars(query).size() > 16)
        throw GuardError("relaxed mode: query too wide for equivalent CNF");
    CnfFormula qcnf = to_cnf(query, CnfMode::Equivalent, kb.vars());
    LinForm objective = b.event_bracket(qcnf, "q");

    BoundResult out;
    out.mode = BoundResult::Mode::Relaxed;
    out.degree = degree;
    out.budget = budget;

    LinearProgram lp = b.finish(objective);
    out.stats.rows = lp.rows.size();

    lp.dir = LpDir::Min;
    LpOutcome lo = solve(lp);
    out.stats.pivots += lo.pivots;
    if (lo.status == LpOutcome::Status::Infeasible) {
        out.status = BoundResult::Status::Infeasible;
        out.proof = InfeasibilityProof{lp, lo};
        out.stats.seconds = seconds_since(start);
        return out;
    }
    lp.dir = LpDir::Max;
    LpOutcome hi = solve(lp);
    out.stats.pivots += hi.pivots;
    if (lo.status != LpOutcome::Status::Optimal || hi.status != LpOutcome::Status::Optimal)
        throw std::logic_error("bound: relaxed LP cannot be unbounded with box rows");

    out.status = BoundResult::Status::Feasible;
    // The query is a probability; the relaxation never needs to claim more.
    out.lo = std::max(lo.value, Rat(0));
    out.hi = std::min(hi.value, Rat(1));
    out.stats.seconds = seconds_since(start);
    return out;
}

}  // namespace

BoundResult bound(const KnowledgeBase& kb, const Expr::Ptr& query,
                  const RefinementConfig& cfg) {
    if (max_var(query) >= static_cast<int>(kb.vars().size()))
        throw InputError("query uses an undeclared variable");
    const int n = static_cast<int>(kb.vars().size());
    const bool exact = cfg.mode == RefinementConfig::ModeRequest::ForceExact ||
                       (cfg.mode == RefinementConfig::ModeRequest::Auto &&
                        n <= kExactAutoThreshold);
    if (exact) return bound_exact(kb, query);
    std::size_t budget = cfg.budgets.empty() ? 256 : cfg.budgets.back();
    return bound_relaxed(kb, query, cfg.degree, budget);
}

ConsistencyResult check_consistency(const KnowledgeBase& kb) {
    LinearProgram lp = exact_lp(kb);
    lp.dir = LpDir::Min;
    LpOutcome res = solve(lp);
    ConsistencyResult out;
    if (res.status == LpOutcome::Status::Infeasible) {
        out.consistent = false;
        out.proof = InfeasibilityProof{std::move(lp), std::move(res)};
    } else {
        out.consistent = true;
        out.witness = witness_measure(kb, res.witness);
    }
    return out;
}

std::vector<BoundResult> refine(const KnowledgeBase& kb, const Expr::Ptr& query,
                                const RefinementConfig& cfg) {
    if (cfg.budgets.empty()) throw InputError("refine: empty budget schedule");
    const auto start = Clock::now();
    const int n = static_cast<int>(kb.vars().size());

    std::optional<BoundResult> exact;
    if (n <= kExactAutoThreshold) exact = bound_exact(kb, query);

    std::vector<BoundResult> results;
    for (std::size_t b : cfg.budgets) {
        results.push_back(bound_relaxed(kb, query, cfg.degree, b));
        const BoundResult& r = results.back();
        if (r.status == BoundResult::Status::Infeasible) break;
        if (exact && exact->status == BoundResult::Status::Feasible &&
            r.lo == exact->lo && r.hi == exact->hi)
            break;
        if (cfg.time_limit_seconds && seconds_since(start) > *cfg.time_limit_seconds) {
            results.back().timed_out = true;
            break;
        }
    }
    return results;
}

}  // namespace probound
