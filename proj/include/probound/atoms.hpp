#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "probound/bits.hpp"
#include "probound/rational.hpp"

namespace probound {

// The product partition: 2^N atoms, one per truth assignment over the
// declared variables. Atom indexing is little-endian in declared order
// (bit i of the atom index is the value of variable i), project-wide.
class AtomSpace {
public:
    AtomSpace() = default;
    explicit AtomSpace(std::vector<std::string> vars);

    // Default names A, B, C, ... for n variables.
    static AtomSpace with_default_names(int n);

    int n() const { return static_cast<int>(vars_.size()); }
    std::uint64_t atom_count() const { return 1ull << vars_.size(); }
    const std::vector<std::string>& vars() const { return vars_; }
    const std::string& var_name(int i) const { return vars_[static_cast<std::size_t>(i)]; }
    int var_index(const std::string& name) const;  // -1 when absent

    // Atom rendered as a bitstring, character i = value of variable i.
    std::string atom_str(std::uint64_t atom) const;

    friend bool operator==(const AtomSpace& a, const AtomSpace& b) {
        return a.vars_ == b.vars_;
    }

private:
    std::vector<std::string> vars_;
};

// Exact-rational vector indexed by atoms.
struct AtomVector {
    AtomSpace space;
    std::vector<Rat> entries;

    AtomVector() = default;
    explicit AtomVector(AtomSpace s)
        : space(std::move(s)), entries(space.atom_count(), Rat(0)) {}

    bool is_measure() const;  // entries >= 0 and sum == 1

    static AtomVector from_bits(const AtomSpace& s, const AtomBits& b);

    friend bool operator==(const AtomVector& a, const AtomVector& b) {
        return a.space == b.space && a.entries == b.entries;
    }
};

// Compares subsets by (size, lexicographic on ascending variable indices).
bool term_less(std::uint32_t a, std::uint32_t b);

// Monotone-conjunction coordinates: term S (a variable subset, stored as a
// mask) denotes the event "all variables in S true"; S = 0 is the universal
// event. Terms are all subsets of size <= degree in (size, lex) order.
struct MonotoneBasis {
    AtomSpace space;
    int degree = 0;
    std::vector<std::uint32_t> terms;

    MonotoneBasis() = default;
    MonotoneBasis(AtomSpace s, int d);

    std::string term_str(std::uint32_t mask) const;  // "1" or "P(A&C)"
};

// Full-degree coordinate change: out[S] = sum of v over atoms m ⊇ S. The
// inverse recovers atoms by inclusion-exclusion. Both are exact and mutually
// inverse; vectors are aligned with basis.terms.
std::vector<Rat> atoms_to_basis(const AtomVector& v, const MonotoneBasis& basis);
AtomVector basis_to_atoms(const std::vector<Rat>& coeffs, const MonotoneBasis& basis);

}  // namespace probound
