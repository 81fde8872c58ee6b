#pragma once

#include <string>
#include <vector>

#include "probound/atoms.hpp"
#include "probound/bits.hpp"
#include "probound/formula.hpp"

namespace probound {

// One clause column: the 0/1 indicator, over atoms, of the assignments that
// falsify every literal of the clause. Under this reading a union of clause
// label sets is a pointwise product of columns, the empty label is the
// all-ones column, and grade counts literals.
struct ClauseColumn {
    Clause label;
    int grade = 0;
    AtomBits bits;

    friend bool operator==(const ClauseColumn& a, const ClauseColumn& b) {
        return a.label == b.label && a.grade == b.grade && a.bits == b.bits;
    }
};

// Columns over a common atom space; may hold mixed grades.
struct ClauseMatrix {
    AtomSpace space;
    std::vector<ClauseColumn> cols;

    friend bool operator==(const ClauseMatrix& a, const ClauseMatrix& b) {
        return a.space == b.space && a.cols == b.cols;
    }
};

// Single-variable pieces: E has the lone empty-label all-ones column; L has
// the two literal columns x, ~x; the base matrix is E followed by L.
ClauseMatrix empty_label_matrix(const std::string& var);
ClauseMatrix literal_matrix(const std::string& var);
ClauseMatrix base_matrix(const std::string& var);

// Tensor product over disjoint variable sets. Result rows pair operand rows
// (lhs vars keep their little-endian positions, rhs vars follow); columns
// take all label unions with rhs slowest, entries multiply, grades add.
ClauseMatrix graded_tensor(const ClauseMatrix& lhs, const ClauseMatrix& rhs);

// Column concatenation over a shared space.
ClauseMatrix graded_sum(const ClauseMatrix& a, const ClauseMatrix& b);

// All clause matrices C_{N,i}, i = 0..N, over default variable names
// x1..xN. Direct: expand the N-fold tensor product of the base matrices and
// collect columns by grade (parallel across columns). Recursive: build from
// the binomial recursion C_{N,i} = C_{N-1,i} (x) E  ++  C_{N-1,i-1} (x) L.
// Both yield identical column order. N <= 12.
std::vector<ClauseMatrix> clause_matrices_direct(int n);
std::vector<ClauseMatrix> clause_matrices_recursive(int n);

// Dump format: one line per column - grade, clause label ("-" when empty,
// literals joined by '|'), then 2^N 0/1 characters in atom order.
std::string matrix_dump(const std::vector<ClauseMatrix>& by_grade);

}  // namespace probound
