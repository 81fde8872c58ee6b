#include "probound/projection.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "probound/errors.hpp"
#include "probound/lp.hpp"

namespace probound {

namespace {

// Integer coefficients, positive gcd 1; equality rows flip so the first
// nonzero coefficient is positive.
void normalize_row(LinRow& r) {
    Int lcm(1);
    for (const Rat& c : r.coeffs) {
        Int den = c.get_den();
        lcm = lcm / gcd(lcm, den) * den;
    }
    {
        Int den = r.rhs.get_den();
        lcm = lcm / gcd(lcm, den) * den;
    }
    Int g(0);
    for (Rat& c : r.coeffs) {
        c *= lcm;
        c.canonicalize();
        g = gcd(g, c.get_num());
    }
    r.rhs *= lcm;
    r.rhs.canonicalize();
    g = gcd(g, r.rhs.get_num());
    if (g > 1) {
        for (Rat& c : r.coeffs) {
            c /= g;
            c.canonicalize();
        }
        r.rhs /= g;
        r.rhs.canonicalize();
    }
    if (r.rel == Rel::Eq) {
        for (const Rat& c : r.coeffs) {
            if (c == 0) continue;
            if (c < 0) {
                for (Rat& x : r.coeffs) x = -x;
                r.rhs = -r.rhs;
            }
            break;
        }
    }
}

bool all_zero(const LinRow& r) {
    for (const Rat& c : r.coeffs)
        if (c != 0) return false;
    return true;
}

// Constant-row handling, duplicate removal, dominance between parallel >=
// rows. Sets `inconsistent` on a contradictory constant row.
void tidy(LinearSystem& sys) {
    std::vector<LinRow> kept;
    std::map<std::pair<int, std::vector<Rat>>, std::size_t> index;
    for (LinRow& r : sys.rows) {
        if (all_zero(r)) {
            bool bad = r.rel == Rel::Eq ? r.rhs != 0 : r.rhs > 0;
            if (bad) {
                sys.inconsistent = true;
                sys.rows.clear();
                return;
            }
            continue;
        }
        normalize_row(r);
        auto key = std::make_pair(static_cast<int>(r.rel), r.coeffs);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(std::move(key), kept.size());
            kept.push_back(std::move(r));
        } else if (r.rel == Rel::Ge) {
            // Parallel bounds: keep the tighter one.
            if (r.rhs > kept[it->second].rhs) kept[it->second].rhs = r.rhs;
        }
        // Parallel equalities with distinct rhs surface as contradictions
        // once some variable is eliminated through one of them.
    }
    sys.rows = std::move(kept);
}

}  // namespace

LinearSystem build_atom_system(
    const AtomSpace& space,
    const std::vector<std::pair<CnfFormula, std::string>>& targets) {
    LinearSystem sys;
    const std::uint64_t atoms = space.atom_count();
    for (std::uint64_t m = 0; m < atoms; ++m) sys.vars.push_back("p" + std::to_string(m));
    for (const auto& [cnf, name] : targets) sys.vars.push_back(name);
    const std::size_t width = sys.vars.size();

    for (std::uint64_t m = 0; m < atoms; ++m) {
        LinRow r{std::vector<Rat>(width, Rat(0)), Rel::Ge, Rat(0)};
        r.coeffs[m] = 1;
        sys.rows.push_back(std::move(r));
    }
    {
        LinRow sum{std::vector<Rat>(width, Rat(0)), Rel::Eq, Rat(1)};
        for (std::uint64_t m = 0; m < atoms; ++m) sum.coeffs[m] = 1;
        sys.rows.push_back(std::move(sum));
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
        AtomBits event = cnf_table(targets[t].first, space.n());
        LinRow def{std::vector<Rat>(width, Rat(0)), Rel::Eq, Rat(0)};
        def.coeffs[atoms + t] = 1;
        for (std::uint64_t m = 0; m < atoms; ++m)
            if (event.get(m)) def.coeffs[m] = -1;
        sys.rows.push_back(std::move(def));
    }
    return sys;
}

namespace {

LinearProgram system_to_lp(const LinearSystem& sys, std::vector<Rat> objective,
                           LpDir dir, std::size_t skip_row = SIZE_MAX) {
    LinearProgram lp;
    lp.vars = sys.vars;
    lp.objective = std::move(objective);
    lp.dir = dir;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        if (i == skip_row) continue;
        const LinRow& r = sys.rows[i];
        lp.rows.push_back(LpRow{r.coeffs, r.rel == Rel::Eq ? LpRel::Eq : LpRel::Ge, r.rhs});
    }
    return lp;
}

}  // namespace

LinearSystem lp_reduce(LinearSystem sys) {
    if (sys.inconsistent) return sys;
    for (std::size_t i = 0; i < sys.rows.size();) {
        if (sys.rows[i].rel != Rel::Ge) {
            ++i;
            continue;
        }
        LpOutcome res = solve(system_to_lp(sys, sys.rows[i].coeffs, LpDir::Min, i));
        if (res.status == LpOutcome::Status::Infeasible) {
            sys.inconsistent = true;
            sys.rows.clear();
            return sys;
        }
        if (res.status == LpOutcome::Status::Optimal && res.value >= sys.rows[i].rhs)
            sys.rows.erase(sys.rows.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return sys;
}

LinearSystem fm_eliminate(LinearSystem sys, const std::string& var, const FmOptions& opts) {
    auto vit = std::find(sys.vars.begin(), sys.vars.end(), var);
    if (vit == sys.vars.end())
        throw InputError("fm_eliminate: unknown variable '" + var + "'");
    const std::size_t idx = static_cast<std::size_t>(vit - sys.vars.begin());

    LinearSystem out;
    out.vars = sys.vars;
    out.vars.erase(out.vars.begin() + static_cast<std::ptrdiff_t>(idx));
    out.inconsistent = sys.inconsistent;
    if (out.inconsistent) return out;

    auto drop_col = [idx](LinRow r) {
        r.coeffs.erase(r.coeffs.begin() + static_cast<std::ptrdiff_t>(idx));
        return r;
    };

    // Prefer substitution through an equality containing the variable.
    std::size_t eq_row = sys.rows.size();
    std::size_t eq_nonzeros = 0;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        const LinRow& r = sys.rows[i];
        if (r.rel != Rel::Eq || r.coeffs[idx] == 0) continue;
        std::size_t nz = 0;
        for (const Rat& c : r.coeffs)
            if (c != 0) ++nz;
        if (eq_row == sys.rows.size() || nz < eq_nonzeros) {
            eq_row = i;
            eq_nonzeros = nz;
        }
    }

    if (eq_row != sys.rows.size()) {
        const LinRow& e = sys.rows[eq_row];
        for (std::size_t i = 0; i < sys.rows.size(); ++i) {
            if (i == eq_row) continue;
            LinRow r = sys.rows[i];
            if (r.coeffs[idx] != 0) {
                Rat f = r.coeffs[idx] / e.coeffs[idx];
                for (std::size_t j = 0; j < r.coeffs.size(); ++j)
                    r.coeffs[j] -= f * e.coeffs[j];
                r.rhs -= f * e.rhs;
            }
            out.rows.push_back(drop_col(std::move(r)));
        }
    } else {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < sys.rows.size(); ++i) {
            const Rat& c = sys.rows[i].coeffs[idx];
            if (c == 0) {
                out.rows.push_back(drop_col(sys.rows[i]));
            } else if (sys.rows[i].rel == Rel::Ge) {
                (c > 0 ? pos : neg).push_back(i);
            }
        }
        for (std::size_t p : pos)
            for (std::size_t n : neg) {
                const LinRow& rp = sys.rows[p];
                const LinRow& rn = sys.rows[n];
                Rat sp = Rat(1) / rp.coeffs[idx];    // > 0
                Rat sn = Rat(-1) / rn.coeffs[idx];   // > 0
                LinRow combined{std::vector<Rat>(sys.vars.size(), Rat(0)), Rel::Ge,
                                sp * rp.rhs + sn * rn.rhs};
                for (std::size_t j = 0; j < sys.vars.size(); ++j)
                    combined.coeffs[j] = sp * rp.coeffs[j] + sn * rn.coeffs[j];
                out.rows.push_back(drop_col(std::move(combined)));
                if (out.rows.size() > opts.row_limit)
                    throw GuardError("fm_eliminate guard: row explosion");
            }
    }

    tidy(out);
    if (!out.inconsistent && out.rows.size() > opts.lp_prune_threshold) out = lp_reduce(std::move(out));
    return out;
}

FacetList enumerate_facets(int n, int degree) {
    if (n < 1 || n > 4)
        throw GuardError("enumerate_facets guard: need 1 <= N <= 4");
    if (degree < 1 || degree > n)
        throw InputError("enumerate_facets: need 1 <= degree <= N");

    AtomSpace space = AtomSpace::with_default_names(n);
    MonotoneBasis basis(space, degree);

    std::vector<std::pair<CnfFormula, std::string>> targets;
    std::vector<std::uint32_t> target_masks;
    for (std::uint32_t mask : basis.terms) {
        if (mask == 0) continue;
        CnfFormula cnf;
        cnf.variables = space.vars();
        for (int v = 0; v < n; ++v)
            if ((mask >> v) & 1) cnf.clauses.push_back(Clause{{Literal{v, false}}});
        targets.emplace_back(std::move(cnf), basis.term_str(mask));
        target_masks.push_back(mask);
    }

    LinearSystem sys = build_atom_system(space, targets);
    for (std::uint64_t m = 0; m < space.atom_count(); ++m)
        sys = fm_eliminate(std::move(sys), "p" + std::to_string(m));
    if (sys.inconsistent)
        throw std::logic_error("enumerate_facets: simplex projection infeasible");
    sys = lp_reduce(std::move(sys));

    FacetList out{std::move(basis), {}};
    for (const LinRow& r : sys.rows) {
        if (r.rel == Rel::Eq)
            throw std::logic_error("enumerate_facets: unexpected equality in projection");
        LinearInequality ineq{space, {}};
        std::map<std::uint32_t, Rat> acc;
        if (r.rhs != 0) acc[0] = -r.rhs;
        for (std::size_t j = 0; j < r.coeffs.size(); ++j)
            if (r.coeffs[j] != 0) acc[target_masks[j]] = r.coeffs[j];
        for (const auto& [mask, c] : acc) ineq.terms.emplace_back(mask, c);
        std::sort(ineq.terms.begin(), ineq.terms.end(),
                  [](const auto& a, const auto& b) { return term_less(a.first, b.first); });
        out.facets.push_back(normalize(std::move(ineq)));
    }
    std::sort(out.facets.begin(), out.facets.end(), inequality_less);
    return out;
}

OracleBounds oracle_bounds(const KnowledgeBase& kb, const CnfFormula& query) {
    if (kb.vars().size() > 10)
        throw GuardError("oracle_bounds guard: more than 10 variables");
    AtomSpace space((std::vector<std::string>(kb.vars())));

    std::vector<std::pair<CnfFormula, std::string>> targets;
    for (std::size_t i = 0; i < kb.assertions().size(); ++i)
        targets.emplace_back(kb.assertions()[i].cnf, "E" + std::to_string(i));
    for (std::size_t i = 0; i < kb.definitional_units().size(); ++i) {
        CnfFormula cnf;
        cnf.variables = kb.vars();
        cnf.clauses.push_back(kb.definitional_units()[i]);
        targets.emplace_back(std::move(cnf), "D" + std::to_string(i));
    }
    targets.emplace_back(query, "q");

    LinearSystem sys = build_atom_system(space, targets);
    const std::size_t width = sys.vars.size();
    const std::uint64_t atoms = space.atom_count();
    for (std::size_t i = 0; i < kb.assertions().size(); ++i) {
        const Assertion& a = kb.assertions()[i];
        const std::size_t col = atoms + i;
        auto unit = [&](Rel rel, const Rat& rhs, int sign) {
            LinRow r{std::vector<Rat>(width, Rat(0)), rel, rhs};
            r.coeffs[col] = sign;
            sys.rows.push_back(std::move(r));
        };
        switch (a.kind) {
            case AssertKind::Equal:
                unit(Rel::Eq, a.lo, 1);
                break;
            case AssertKind::AtLeast:
                unit(Rel::Ge, a.lo, 1);
                break;
            case AssertKind::AtMost:
                unit(Rel::Ge, Rat(-a.hi), -1);
                break;
            case AssertKind::Interval:
                unit(Rel::Ge, a.lo, 1);
                unit(Rel::Ge, Rat(-a.hi), -1);
                break;
        }
    }
    for (std::size_t i = 0; i < kb.definitional_units().size(); ++i) {
        LinRow r{std::vector<Rat>(width, Rat(0)), Rel::Eq, Rat(1)};
        r.coeffs[atoms + kb.assertions().size() + i] = 1;
        sys.rows.push_back(std::move(r));
    }

    for (std::uint64_t m = 0; m < atoms; ++m) {
        sys = fm_eliminate(std::move(sys), "p" + std::to_string(m));
        if (sys.inconsistent) return {};
    }
    for (std::size_t i = 0; i < kb.assertions().size(); ++i) {
        sys = fm_eliminate(std::move(sys), "E" + std::to_string(i));
        if (sys.inconsistent) return {};
    }
    for (std::size_t i = 0; i < kb.definitional_units().size(); ++i) {
        sys = fm_eliminate(std::move(sys), "D" + std::to_string(i));
        if (sys.inconsistent) return {};
    }

    // One-variable system: fold the rows into an interval.
    OracleBounds out;
    bool have_lo = false, have_hi = false;
    Rat lo, hi;
    for (const LinRow& r : sys.rows) {
        const Rat& c = r.coeffs[0];
        if (c == 0) continue;
        Rat bound = r.rhs / c;
        if (r.rel == Rel::Eq) {
            if (!have_lo || bound > lo) lo = bound, have_lo = true;
            if (!have_hi || bound < hi) hi = bound, have_hi = true;
        } else if (c > 0) {
            if (!have_lo || bound > lo) lo = bound, have_lo = true;
        } else {
            if (!have_hi || bound < hi) hi = bound, have_hi = true;
        }
    }
    if (!have_lo || !have_hi)
        throw std::logic_error("oracle_bounds: projection left the query unbounded");
    if (lo > hi) return {};
    out.feasible = true;
    out.lo = lo;
    out.hi = hi;
    return out;
}

}  // namespace probound
