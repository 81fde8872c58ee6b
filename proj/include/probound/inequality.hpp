#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "probound/atoms.hpp"
#include "probound/rational.hpp"

namespace probound {

// An affine form over monotone-conjunction coordinates, asserted >= 0 over
// the partition simplex. Terms are (variable-subset mask, coefficient) pairs
// in canonical (size, lex) order with nonzero coefficients; mask 0 is the
// affine constant. Normalized means integer coefficients with gcd 1.
struct LinearInequality {
    AtomSpace space;
    std::vector<std::pair<std::uint32_t, Rat>> terms;

    int degree() const;
    Rat coeff(std::uint32_t mask) const;

    // Value at the point mass on an atom: sum of coefficients of terms
    // contained in the atom's true set.
    Rat value_at(std::uint64_t atom) const;

    friend bool operator==(const LinearInequality& a, const LinearInequality& b) {
        return a.space == b.space && a.terms == b.terms;
    }
};

// Scales to integer coefficients with collective gcd 1.
LinearInequality normalize(LinearInequality ineq);

// Deterministic order on normalized inequalities over one space.
bool inequality_less(const LinearInequality& a, const LinearInequality& b);

// Text form: "1 - P(A) - P(B) + P(A&B) >= 0"; unit coefficients drop the
// "k*", zero coefficients are omitted, terms follow canonical basis order.
std::string inequality_str(const LinearInequality& ineq);
LinearInequality parse_inequality(const std::string& line, const AtomSpace& space);

// Vertex values at all 2^N atoms (subset-sum butterfly, OpenMP for large
// spaces) and the per-atom reference used to cross-check it.
std::vector<Rat> vertex_values(const LinearInequality& ineq);
std::vector<Rat> vertex_values_reference(const LinearInequality& ineq);

// Recover basis coefficients from a vertex value function.
LinearInequality from_vertex_values(const AtomSpace& space, std::vector<Rat> values);

// ---------------------------------------------------------------------------
// Boolean symmetric functions
// ---------------------------------------------------------------------------

// S_n(a_0..a_p): true exactly when the count of true variables is one of the
// defining constants, which are distinct, sorted, and within [0, n].
struct SymmetricSpec {
    int n = 0;
    std::vector<int> constants;
};

struct ParityPass {
    int sign;  // +1 or -1: the shared sign of the nonzero values
};
struct ParityFail {
    int k_positive;
    int k_negative;
};
struct ParityDegenerate {};
using ParityResult = std::variant<ParityPass, ParityFail, ParityDegenerate>;

// Evaluates f(k) = prod_i (a_i - k) over k = 0..n. Pass when all nonzero
// values share one sign (zeros are neutral), Degenerate when f vanishes
// identically.
ParityResult parity_check(const SymmetricSpec& spec);

// Shared per-size coefficients c_j with sum_j c_j * C(k,j) = |f(k)|,
// recovered as forward finite differences of |f| at 0. Not normalized.
std::vector<Rat> symmetric_coeffs(const SymmetricSpec& spec);

// The valid inequality of a parity-passing spec over an n-variable space:
// coefficient c_j on every size-j term; tight exactly at atoms whose
// true-count is a defining constant. Throws on parity Fail/Degenerate.
LinearInequality synthesize(const SymmetricSpec& spec, const AtomSpace& space);

// ---------------------------------------------------------------------------
// Symmetries and combination
// ---------------------------------------------------------------------------

// Basis substitution induced by var -> ~var; an involution, validity
// preserved.
LinearInequality negate_variable(const LinearInequality& ineq, int var);

// perm[i] = new index of variable i; validity preserved.
LinearInequality permute_variables(const LinearInequality& ineq,
                                   const std::vector<int>& perm);

struct OutOfSubspace {
    int degree;
};

// Permutes the vertex value function by atom_perm (value at atom m comes
// from atom_perm[m]) and converts back to basis coefficients. Validity is
// automatic; reports OutOfSubspace when the result's degree exceeds
// max_degree (if given).
std::variant<LinearInequality, OutOfSubspace> flip_transform(
    const LinearInequality& ineq, const std::vector<std::uint64_t>& atom_perm,
    std::optional<int> max_degree = std::nullopt);

// Product inequality over disjoint variable sets: the vertex value at a
// joint atom is the product of the operand values, so coefficients multiply
// term by term. Operands either share a space (with disjoint supports) or
// live in disjoint spaces, which are then concatenated.
LinearInequality compound(const LinearInequality& a, const LinearInequality& b);

// Same coefficients over the enlarged space; the special case of compounding
// with the trivial inequality 1 >= 0.
LinearInequality escalator_lift(const LinearInequality& ineq,
                                const std::vector<std::string>& extra_vars);

struct Valid {
    std::vector<std::uint64_t> tight;  // atoms with value zero
};
struct Invalid {
    std::uint64_t witness;
    Rat value;
};
using Validity = std::variant<Valid, Invalid>;

// Checks nonnegativity at every vertex of the partition simplex. N <= 20.
Validity is_valid(const LinearInequality& ineq);

// Deterministic generation stream over the given space: parity-passing
// symmetric synths on variable blocks, compounded over disjoint blocks,
// closed under variable negation (permutation closure comes from ranging
// over block assignments), lifted to the full space, deduplicated, and cut
// to the first `budget` members in canonical order.
std::vector<LinearInequality> generate_family(const AtomSpace& space, int degree,
                                              std::size_t budget);

}  // namespace probound
