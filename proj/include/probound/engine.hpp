#pragma once

#include <map>
#include <optional>
#include <vector>

#include "probound/atoms.hpp"
#include "probound/formula.hpp"
#include "probound/knowledge.hpp"
#include "probound/lp.hpp"
#include "probound/rational.hpp"

namespace probound {

struct EngineStats {
    std::size_t rows = 0;
    std::uint64_t pivots = 0;
    double seconds = 0.0;
};

// The LP whose infeasibility was certified, plus the certified outcome;
// enough to replay verify_outcome.
struct InfeasibilityProof {
    LinearProgram lp;
    LpOutcome outcome;
};

struct BoundResult {
    enum class Status { Feasible, Infeasible };
    enum class Mode { Exact, Relaxed };

    Status status = Status::Feasible;
    Rat lo, hi;
    Mode mode = Mode::Exact;
    int degree = 0;          // Relaxed only
    std::size_t budget = 0;  // Relaxed only
    // Exact mode: measures attaining each endpoint. A relaxed basis point
    // need not lift to a measure, so no witness is claimed there.
    std::optional<AtomVector> lo_witness, hi_witness;
    std::optional<InfeasibilityProof> proof;
    bool timed_out = false;
    EngineStats stats;
};

struct RefinementConfig {
    enum class ModeRequest { Auto, ForceExact, ForceRelaxed };
    ModeRequest mode = ModeRequest::Auto;
    int degree = 2;
    std::vector<std::size_t> budgets = {16, 64, 256};
    std::optional<double> time_limit_seconds;
};

// Full-atom LPs stay interactive up to 2^12 atoms; beyond that Auto switches
// to the relaxed basis.
constexpr int kExactAutoThreshold = 12;

// The min/max/complement baseline: And -> min, Or -> max, Not -> 1-p, with
// Implies and Xor desugared first. Requires a point probability per variable
// of the expression.
Rat fuzzy_evaluate(const Expr::Ptr& expr, const std::map<int, Rat>& point_probs);

// Sound probability bounds for the query event. Exact mode optimizes over
// full atom coordinates and returns attained witnesses; Relaxed mode
// optimizes over the degree-d monotone basis under generated valid
// inequalities plus clause-level bracketing rows, and is sound for every
// budget.
BoundResult bound(const KnowledgeBase& kb, const Expr::Ptr& query,
                  const RefinementConfig& cfg = {});

struct ConsistencyResult {
    bool consistent = false;
    std::optional<AtomVector> witness;
    std::optional<InfeasibilityProof> proof;
};

// LP feasibility of the assertion system over full atom coordinates.
ConsistencyResult check_consistency(const KnowledgeBase& kb);

// One relaxed result per budget in the schedule; intervals never widen.
// Stops early when the interval matches the exact one (when affordable) or
// the time limit runs out (the last result is flagged).
std::vector<BoundResult> refine(const KnowledgeBase& kb, const Expr::Ptr& query,
                                const RefinementConfig& cfg);

}  // namespace probound
