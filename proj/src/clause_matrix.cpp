#include "probound/clause_matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "probound/errors.hpp"

namespace probound {

ClauseMatrix empty_label_matrix(const std::string& var) {
    ClauseMatrix m{AtomSpace({var}), {}};
    m.cols.push_back(ClauseColumn{Clause{}, 0, AtomBits(2, true)});
    return m;
}

ClauseMatrix literal_matrix(const std::string& var) {
    ClauseMatrix m{AtomSpace({var}), {}};
    AtomBits pos(2), neg(2);
    pos.set(0, true);   // clause {x} is falsified where x is false
    neg.set(1, true);   // clause {~x} is falsified where x is true
    m.cols.push_back(ClauseColumn{Clause{{Literal{0, false}}}, 1, pos});
    m.cols.push_back(ClauseColumn{Clause{{Literal{0, true}}}, 1, neg});
    return m;
}

ClauseMatrix base_matrix(const std::string& var) {
    return graded_sum(empty_label_matrix(var), literal_matrix(var));
}

ClauseMatrix graded_sum(const ClauseMatrix& a, const ClauseMatrix& b) {
    if (!(a.space == b.space))
        throw std::invalid_argument("graded_sum: mismatched spaces");
    ClauseMatrix out = a;
    out.cols.insert(out.cols.end(), b.cols.begin(), b.cols.end());
    return out;
}

ClauseMatrix graded_tensor(const ClauseMatrix& lhs, const ClauseMatrix& rhs) {
    for (const auto& v : rhs.space.vars())
        if (lhs.space.var_index(v) >= 0)
            throw std::invalid_argument("graded_tensor: variable sets overlap on '" + v + "'");

    std::vector<std::string> vars = lhs.space.vars();
    vars.insert(vars.end(), rhs.space.vars().begin(), rhs.space.vars().end());
    ClauseMatrix out{AtomSpace(std::move(vars)), {}};

    const int nl = lhs.space.n();
    const std::uint64_t rows_l = lhs.space.atom_count();
    const std::uint64_t rows_r = rhs.space.atom_count();
    const std::uint64_t rows = rows_l * rows_r;

    out.cols.resize(lhs.cols.size() * rhs.cols.size());
    const std::int64_t total = static_cast<std::int64_t>(out.cols.size());
#pragma omp parallel for schedule(static) if (total >= 64)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const auto& cl = lhs.cols[static_cast<std::size_t>(idx) % lhs.cols.size()];
        const auto& cr = rhs.cols[static_cast<std::size_t>(idx) / lhs.cols.size()];
        ClauseColumn col;
        col.grade = cl.grade + cr.grade;
        col.label.lits = cl.label.lits;
        for (Literal l : cr.label.lits) col.label.lits.push_back(Literal{l.var + nl, l.negated});
        col.bits = AtomBits(rows);
        for (std::uint64_t r2 = 0; r2 < rows_r; ++r2) {
            if (!cr.bits.get(r2)) continue;
            for (std::uint64_t r1 = 0; r1 < rows_l; ++r1)
                if (cl.bits.get(r1)) col.bits.set((r2 << nl) | r1, true);
        }
        out.cols[static_cast<std::size_t>(idx)] = std::move(col);
    }
    return out;
}

namespace {

void check_matrix_guard(int n) {
    if (n < 1 || n > 12)
        throw GuardError("clause matrix guard: need 1 <= N <= 12 (3^N columns)");
}

std::vector<std::string> default_matrix_vars(int n) {
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    return vars;
}

// Stable split of a mixed-grade matrix into C_{N,0}..C_{N,N}.
std::vector<ClauseMatrix> split_by_grade(const ClauseMatrix& m) {
    std::vector<ClauseMatrix> out(static_cast<std::size_t>(m.space.n()) + 1,
                                  ClauseMatrix{m.space, {}});
    for (const auto& col : m.cols) out[static_cast<std::size_t>(col.grade)].cols.push_back(col);
    return out;
}

}  // namespace

std::vector<ClauseMatrix> clause_matrices_direct(int n) {
    check_matrix_guard(n);
    auto vars = default_matrix_vars(n);
    ClauseMatrix acc = base_matrix(vars[0]);
    for (int i = 1; i < n; ++i) acc = graded_tensor(acc, base_matrix(vars[static_cast<std::size_t>(i)]));
    return split_by_grade(acc);
}

std::vector<ClauseMatrix> clause_matrices_recursive(int n) {
    check_matrix_guard(n);
    auto vars = default_matrix_vars(n);

    // C_{0,0} is the scalar all-ones column over the empty space.
    std::vector<ClauseMatrix> prev{ClauseMatrix{AtomSpace(std::vector<std::string>{}), {}}};
    prev[0].cols.push_back(ClauseColumn{Clause{}, 0, AtomBits(1, true)});

    for (int k = 1; k <= n; ++k) {
        const std::string& xk = vars[static_cast<std::size_t>(k - 1)];
        ClauseMatrix e = empty_label_matrix(xk);
        ClauseMatrix l = literal_matrix(xk);
        std::vector<ClauseMatrix> cur;
        for (int i = 0; i <= k; ++i) {
            ClauseMatrix keep = graded_tensor(prev[static_cast<std::size_t>(std::min(i, k - 1))], e);
            if (i == k) keep.cols.clear();  // C_{k-1,k} is empty
            ClauseMatrix add{keep.space, {}};
            if (i >= 1) add = graded_tensor(prev[static_cast<std::size_t>(i - 1)], l);
            cur.push_back(graded_sum(keep, add));
        }
        prev = std::move(cur);
    }
    return prev;
}

std::string matrix_dump(const std::vector<ClauseMatrix>& by_grade) {
    std::string out;
    for (const auto& m : by_grade) {
        for (const auto& col : m.cols) {
            out += std::to_string(col.grade);
            out += ' ';
            if (col.label.lits.empty()) {
                out += '-';
            } else {
                for (std::size_t i = 0; i < col.label.lits.size(); ++i) {
                    if (i) out += '|';
                    if (col.label.lits[i].negated) out += '~';
                    out += m.space.var_name(col.label.lits[i].var);
                }
            }
            out += ' ';
            for (std::uint64_t r = 0; r < col.bits.size(); ++r)
                out += col.bits.get(r) ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

}  // namespace probound
