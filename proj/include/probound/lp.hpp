#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "probound/rational.hpp"

namespace probound {

enum class LpRel { Ge, Le, Eq };
enum class LpDir { Min, Max };

struct LpRow {
    std::vector<Rat> coeffs;
    LpRel rel;
    Rat rhs;
};

// Variables are free reals; sign restrictions arrive as ordinary rows.
struct LinearProgram {
    std::vector<std::string> vars;
    std::vector<LpRow> rows;
    std::vector<Rat> objective;
    LpDir dir = LpDir::Min;
};

// One Farkas multiplier. Inequality rows take nonnegative multipliers on
// their >=-normalized form (Le rows count as -a >= -b); equality rows may
// take either sign. The weighted rows sum to 0 >= positive.
struct LpCertEntry {
    std::size_t row;
    Rat mult;
};

struct LpOutcome {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status;

    // Optimal
    Rat value;
    std::vector<Rat> witness;
    // Row duals y with sum_i y_i * b_i == value; for Min, Ge rows have
    // y >= 0 and Le rows y <= 0 (reversed for Max).
    std::vector<Rat> duals;

    // Infeasible
    std::vector<LpCertEntry> certificate;

    // Unbounded: witness is a feasible point, ray the improving direction.
    std::vector<Rat> ray;

    std::uint64_t pivots = 0;
};

// Exact two-phase simplex, smallest-index (Bland) anti-cycling rule,
// deterministic for a fixed input. Outcomes are verified internally before
// being returned. At most 5000 variables.
LpOutcome solve(const LinearProgram& lp);

// Independent recheck by plain arithmetic: witness feasibility and objective
// value, certificate combination, or ray conditions.
bool verify_outcome(const LinearProgram& lp, const LpOutcome& out);

}  // namespace probound
