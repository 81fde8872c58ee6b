#include "probound/lp.hpp"

#include <algorithm>
#include <stdexcept>

#include "probound/errors.hpp"

namespace probound {

namespace {

struct NormRow {
    std::vector<Rat> coeffs;  // >=-normalized (Le rows negated)
    bool is_eq;
    Rat rhs;
};

enum class RowFate { Kept, AbsorbedSign, DroppedTrivial };

// Dense Gauss-Jordan tableau over structural + artificial columns.
struct Tableau {
    std::size_t m = 0;          // rows
    std::size_t ncols = 0;      // structural (vars, splits, slacks)
    std::size_t width = 0;      // ncols + m artificials + rhs
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> obj;       // phase objective (reduced costs; rhs = -value)
    std::vector<Rat> obj2;      // real objective maintained through phase 1
    std::vector<std::size_t> basis;
    std::vector<bool> active;
    std::uint64_t pivots = 0;

    std::size_t art_col(std::size_t i) const { return ncols + i; }
    std::size_t rhs_col() const { return ncols + m; }

    void pivot(std::size_t r, std::size_t c) {
        ++pivots;
        Rat inv = rows[r][c];
        for (auto& x : rows[r]) x /= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rat f = rows[i][c];
            for (std::size_t j = 0; j < width; ++j)
                if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
        }
        for (auto* o : {&obj, &obj2}) {
            if ((*o)[c] == 0) continue;
            Rat f = (*o)[c];
            for (std::size_t j = 0; j < width; ++j)
                if (rows[r][j] != 0) (*o)[j] -= f * rows[r][j];
        }
        basis[r] = c;
    }

    // Bland: smallest structural column with negative reduced cost; smallest
    // basic index breaks min-ratio ties. Returns false at optimum, throws
    // Unbounded via the out-parameter when no ratio bounds the step.
    enum class Step { Optimal, Pivoted, Unbounded };
    Step step(std::size_t* unbounded_col) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < ncols; ++j)
            if (obj[j] < 0) {
                enter = j;
                break;
            }
        if (enter == width) return Step::Optimal;
        std::size_t leave = m;
        Rat best;
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i] || rows[i][enter] <= 0) continue;
            Rat ratio = rows[i][rhs_col()] / rows[i][enter];
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) {
            *unbounded_col = enter;
            return Step::Unbounded;
        }
        pivot(leave, enter);
        return Step::Pivoted;
    }
};

void check_lp(const LinearProgram& lp) {
    if (lp.vars.size() > 5000)
        throw GuardError("lp guard: more than 5000 variables");
    if (lp.objective.size() != lp.vars.size())
        throw InputError("lp: objective length mismatch");
    for (const auto& r : lp.rows)
        if (r.coeffs.size() != lp.vars.size())
            throw InputError("lp: row length mismatch");
}

}  // namespace

LpOutcome solve(const LinearProgram& lp) {
    check_lp(lp);
    const std::size_t nv = lp.vars.size();
    const bool maximize = lp.dir == LpDir::Max;

    // >=-normalize; Le multipliers then share the nonnegative convention.
    std::vector<NormRow> norm;
    norm.reserve(lp.rows.size());
    for (const auto& r : lp.rows) {
        NormRow nr{r.coeffs, r.rel == LpRel::Eq, r.rhs};
        if (r.rel == LpRel::Le) {
            for (auto& c : nr.coeffs) c = -c;
            nr.rhs = -nr.rhs;
        }
        norm.push_back(std::move(nr));
    }

    LpOutcome out;
    out.status = LpOutcome::Status::Optimal;

    // Trivial constant rows resolve immediately.
    std::vector<RowFate> fate(norm.size(), RowFate::Kept);
    std::vector<bool> nonneg(nv, false);
    std::vector<std::size_t> sign_row(nv, norm.size());
    for (std::size_t i = 0; i < norm.size(); ++i) {
        const auto& nr = norm[i];
        std::size_t nz = 0, last = 0;
        for (std::size_t j = 0; j < nv; ++j)
            if (nr.coeffs[j] != 0) {
                ++nz;
                last = j;
            }
        if (nz == 0) {
            bool bad = nr.is_eq ? nr.rhs != 0 : nr.rhs > 0;
            if (bad) {
                out.status = LpOutcome::Status::Infeasible;
                out.certificate = {{i, Rat(nr.is_eq && nr.rhs < 0 ? -1 : 1)}};
                if (!verify_outcome(lp, out))
                    throw std::logic_error("lp: trivial certificate failed verification");
                return out;
            }
            fate[i] = RowFate::DroppedTrivial;
        } else if (nz == 1 && !nr.is_eq && nr.rhs == 0 && nr.coeffs[last] > 0) {
            if (!nonneg[last]) {
                nonneg[last] = true;
                sign_row[last] = i;
                fate[i] = RowFate::AbsorbedSign;
            } else {
                fate[i] = RowFate::DroppedTrivial;  // duplicate sign row
            }
        }
    }

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < norm.size(); ++i)
        if (fate[i] == RowFate::Kept) kept.push_back(i);

    // Structural columns: var, optional negative part, then slacks.
    std::vector<std::size_t> col_plus(nv), col_minus(nv, SIZE_MAX);
    std::size_t ncols = 0;
    for (std::size_t j = 0; j < nv; ++j) col_plus[j] = ncols++;
    for (std::size_t j = 0; j < nv; ++j)
        if (!nonneg[j]) col_minus[j] = ncols++;
    std::vector<std::size_t> slack_col(kept.size(), SIZE_MAX);
    for (std::size_t k = 0; k < kept.size(); ++k)
        if (!norm[kept[k]].is_eq) slack_col[k] = ncols++;

    Tableau t;
    t.m = kept.size();
    t.ncols = ncols;
    t.width = ncols + t.m + 1;
    t.rows.assign(t.m, std::vector<Rat>(t.width, Rat(0)));
    t.obj.assign(t.width, Rat(0));
    t.obj2.assign(t.width, Rat(0));
    t.basis.resize(t.m);
    t.active.assign(t.m, true);

    std::vector<int> sigma(t.m, 1);
    for (std::size_t k = 0; k < t.m; ++k) {
        const auto& nr = norm[kept[k]];
        int s = nr.rhs < 0 ? -1 : 1;
        sigma[k] = s;
        auto& row = t.rows[k];
        for (std::size_t j = 0; j < nv; ++j) {
            if (nr.coeffs[j] == 0) continue;
            Rat c = s * nr.coeffs[j];
            row[col_plus[j]] = c;
            if (col_minus[j] != SIZE_MAX) row[col_minus[j]] = -c;
        }
        if (slack_col[k] != SIZE_MAX) row[slack_col[k]] = Rat(-s);
        row[t.art_col(k)] = 1;
        row[t.rhs_col()] = s * nr.rhs;
        t.basis[k] = t.art_col(k);
    }

    // Real objective in Min form.
    for (std::size_t j = 0; j < nv; ++j) {
        Rat c = maximize ? Rat(-lp.objective[j]) : lp.objective[j];
        t.obj2[col_plus[j]] = c;
        if (col_minus[j] != SIZE_MAX) t.obj2[col_minus[j]] = -c;
    }

    // Phase 1: cost 1 per artificial, reduced against the artificial basis.
    for (std::size_t k = 0; k < t.m; ++k)
        for (std::size_t j = 0; j < t.width; ++j) t.obj[j] -= t.rows[k][j];
    for (std::size_t k = 0; k < t.m; ++k) t.obj[t.art_col(k)] += 1;

    std::size_t unbounded_col = 0;
    for (;;) {
        auto s = t.step(&unbounded_col);
        if (s == Tableau::Step::Optimal) break;
        if (s == Tableau::Step::Unbounded)
            throw std::logic_error("lp: phase 1 cannot be unbounded");
    }

    Rat phase1 = -t.obj[t.rhs_col()];
    if (phase1 > 0) {
        out.status = LpOutcome::Status::Infeasible;
        // y_i = 1 - reduced cost of artificial i; lambda = sigma * y.
        std::vector<Rat> lambda(norm.size(), Rat(0));
        for (std::size_t k = 0; k < t.m; ++k) {
            Rat y = Rat(1) - t.obj[t.art_col(k)];
            lambda[kept[k]] = sigma[k] * y;
        }
        // Residuals against variable columns give the sign-row multipliers.
        for (std::size_t j = 0; j < nv; ++j) {
            Rat res(0);
            for (std::size_t k = 0; k < t.m; ++k)
                res += lambda[kept[k]] * norm[kept[k]].coeffs[j];
            if (nonneg[j]) {
                const std::size_t i = sign_row[j];
                Rat mult = -res / norm[i].coeffs[j];
                if (mult < 0) throw std::logic_error("lp: negative sign multiplier");
                lambda[i] = mult;
            } else if (res != 0) {
                throw std::logic_error("lp: free-variable residual in certificate");
            }
        }
        for (std::size_t i = 0; i < norm.size(); ++i)
            if (lambda[i] != 0) out.certificate.push_back({i, lambda[i]});
        if (!verify_outcome(lp, out))
            throw std::logic_error("lp: infeasibility certificate failed verification");
        out.pivots = t.pivots;
        return out;
    }

    // Drive artificials out of the basis; rows that cannot pivot are
    // redundant and go inactive.
    for (std::size_t k = 0; k < t.m; ++k) {
        if (t.basis[k] < t.ncols) continue;
        std::size_t c = t.width;
        for (std::size_t j = 0; j < t.ncols; ++j)
            if (t.rows[k][j] != 0) {
                c = j;
                break;
            }
        if (c == t.width)
            t.active[k] = false;
        else
            t.pivot(k, c);
    }

    // Phase 2.
    t.obj = t.obj2;
    for (;;) {
        auto s = t.step(&unbounded_col);
        if (s == Tableau::Step::Optimal) break;
        if (s == Tableau::Step::Unbounded) {
            out.status = LpOutcome::Status::Unbounded;
            std::vector<Rat> d(t.ncols, Rat(0));
            d[unbounded_col] = 1;
            for (std::size_t i = 0; i < t.m; ++i)
                if (t.active[i] && t.basis[i] < t.ncols)
                    d[t.basis[i]] = -t.rows[i][unbounded_col];
            std::vector<Rat> xs(t.ncols, Rat(0));
            for (std::size_t i = 0; i < t.m; ++i)
                if (t.active[i] && t.basis[i] < t.ncols)
                    xs[t.basis[i]] = t.rows[i][t.rhs_col()];
            out.witness.resize(nv);
            out.ray.resize(nv);
            for (std::size_t j = 0; j < nv; ++j) {
                out.witness[j] = xs[col_plus[j]];
                out.ray[j] = d[col_plus[j]];
                if (col_minus[j] != SIZE_MAX) {
                    out.witness[j] -= xs[col_minus[j]];
                    out.ray[j] -= d[col_minus[j]];
                }
            }
            out.pivots = t.pivots;
            if (!verify_outcome(lp, out))
                throw std::logic_error("lp: unbounded outcome failed verification");
            return out;
        }
    }

    // Optimal: read the basic solution and the duals.
    std::vector<Rat> xs(t.ncols, Rat(0));
    for (std::size_t i = 0; i < t.m; ++i)
        if (t.active[i] && t.basis[i] < t.ncols) xs[t.basis[i]] = t.rows[i][t.rhs_col()];
    out.witness.resize(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        out.witness[j] = xs[col_plus[j]];
        if (col_minus[j] != SIZE_MAX) out.witness[j] -= xs[col_minus[j]];
    }
    out.value = Rat(0);
    for (std::size_t j = 0; j < nv; ++j) out.value += lp.objective[j] * out.witness[j];

    out.duals.assign(norm.size(), Rat(0));
    for (std::size_t k = 0; k < t.m; ++k) {
        Rat y = -t.obj[t.art_col(k)];
        out.duals[kept[k]] = sigma[k] * y;
    }
    for (std::size_t j = 0; j < nv; ++j)
        if (nonneg[j]) {
            const std::size_t i = sign_row[j];
            out.duals[i] = t.obj[col_plus[j]] / norm[i].coeffs[j];
        }
    // Duals above are stated against the >=-normalized rows; re-express
    // against the rows as given, and against the original direction.
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
        if (lp.rows[i].rel == LpRel::Le) out.duals[i] = -out.duals[i];
    if (maximize)
        for (auto& d : out.duals) d = -d;

    out.pivots = t.pivots;
    if (!verify_outcome(lp, out))
        throw std::logic_error("lp: optimal outcome failed verification");
    return out;
}

bool verify_outcome(const LinearProgram& lp, const LpOutcome& out) {
    const std::size_t nv = lp.vars.size();
    switch (out.status) {
        case LpOutcome::Status::Optimal: {
            if (out.witness.size() != nv) return false;
            for (const auto& r : lp.rows) {
                Rat lhs(0);
                for (std::size_t j = 0; j < nv; ++j) lhs += r.coeffs[j] * out.witness[j];
                if (r.rel == LpRel::Ge && lhs < r.rhs) return false;
                if (r.rel == LpRel::Le && lhs > r.rhs) return false;
                if (r.rel == LpRel::Eq && lhs != r.rhs) return false;
            }
            Rat obj(0);
            for (std::size_t j = 0; j < nv; ++j) obj += lp.objective[j] * out.witness[j];
            if (obj != out.value) return false;
            if (!out.duals.empty()) {
                if (out.duals.size() != lp.rows.size()) return false;
                Rat dual_value(0);
                for (std::size_t i = 0; i < lp.rows.size(); ++i) {
                    const Rat& y = out.duals[i];
                    const int want = lp.dir == LpDir::Min ? +1 : -1;
                    if (lp.rows[i].rel == LpRel::Ge && want * y < 0) return false;
                    if (lp.rows[i].rel == LpRel::Le && want * y > 0) return false;
                    dual_value += y * lp.rows[i].rhs;
                }
                if (dual_value != out.value) return false;
            }
            return true;
        }
        case LpOutcome::Status::Infeasible: {
            if (out.certificate.empty()) return false;
            std::vector<Rat> combo(nv, Rat(0));
            Rat rhs(0);
            for (const auto& e : out.certificate) {
                if (e.row >= lp.rows.size()) return false;
                const auto& r = lp.rows[e.row];
                if (r.rel != LpRel::Eq && e.mult < 0) return false;
                Rat s = r.rel == LpRel::Le ? Rat(-e.mult) : e.mult;
                for (std::size_t j = 0; j < nv; ++j) combo[j] += s * r.coeffs[j];
                rhs += s * r.rhs;
            }
            for (const auto& c : combo)
                if (c != 0) return false;
            return rhs > 0;
        }
        case LpOutcome::Status::Unbounded: {
            if (out.witness.size() != nv || out.ray.size() != nv) return false;
            Rat ray_obj(0);
            for (std::size_t j = 0; j < nv; ++j) ray_obj += lp.objective[j] * out.ray[j];
            if (lp.dir == LpDir::Min ? ray_obj >= 0 : ray_obj <= 0) return false;
            for (const auto& r : lp.rows) {
                Rat lhs(0), dir(0);
                for (std::size_t j = 0; j < nv; ++j) {
                    lhs += r.coeffs[j] * out.witness[j];
                    dir += r.coeffs[j] * out.ray[j];
                }
                if (r.rel == LpRel::Ge && (lhs < r.rhs || dir < 0)) return false;
                if (r.rel == LpRel::Le && (lhs > r.rhs || dir > 0)) return false;
                if (r.rel == LpRel::Eq && (lhs != r.rhs || dir != 0)) return false;
            }
            return true;
        }
    }
    return false;
}

}  // namespace probound
