#pragma once

#include <string>
#include <utility>
#include <vector>

#include "probound/atoms.hpp"
#include "probound/formula.hpp"
#include "probound/inequality.hpp"
#include "probound/knowledge.hpp"
#include "probound/rational.hpp"

namespace probound {

enum class Rel { Ge, Eq };

struct LinRow {
    std::vector<Rat> coeffs;
    Rel rel;
    Rat rhs;
};

// Rows over named variables. `inconsistent` is set when elimination derives
// a contradictory constant row; the stored rows are then meaningless.
struct LinearSystem {
    std::vector<std::string> vars;
    std::vector<LinRow> rows;
    bool inconsistent = false;
};

struct FmOptions {
    std::size_t lp_prune_threshold = 64;
    std::size_t row_limit = 50000;
};

// The atom-space system: one nonnegativity row per atom, the sum-to-one row,
// and one defining equality per named target event.
LinearSystem build_atom_system(
    const AtomSpace& space,
    const std::vector<std::pair<CnfFormula, std::string>>& targets);

// Exact projection along one variable: equality substitution when possible,
// otherwise Fourier-Motzkin pairing. Redundancy control: constant-row and
// dominance pruning always, LP-based irredundancy past the threshold.
LinearSystem fm_eliminate(LinearSystem sys, const std::string& var,
                          const FmOptions& opts = {});

// Drops every >= row implied by the others (exact LP tests).
LinearSystem lp_reduce(LinearSystem sys);

struct FacetList {
    MonotoneBasis basis;
    std::vector<LinearInequality> facets;  // normalized, canonically sorted
};

// Projects the partition simplex onto the monotone terms of size <= degree
// by eliminating every atom variable; the rows of the result are exactly the
// facets. N <= 4.
FacetList enumerate_facets(int n, int degree);

struct OracleBounds {
    bool feasible = false;
    Rat lo, hi;
};

// Ground-truth bounds by elimination: keeps only the query probability and
// reads the interval off the one-variable system. Total variables <= 10.
OracleBounds oracle_bounds(const KnowledgeBase& kb, const CnfFormula& query);

}  // namespace probound
