#pragma once

#include <optional>
#include <string>
#include <vector>

#include "probound/formula.hpp"
#include "probound/rational.hpp"

namespace probound {

enum class AssertKind { Equal, AtLeast, AtMost, Interval };

// One probability assertion over a CNF-defined event. The carried interval
// is [lo, hi]: Equal has lo == hi, AtLeast hi == 1, AtMost lo == 0.
struct Assertion {
    Expr::Ptr expr;
    CnfFormula cnf;
    AssertKind kind;
    Rat lo, hi;
};

// Declared variables plus assertions; immutable once handed to the engine.
// Definitional CNF conversion appends auxiliary variables and records the
// defining clauses as probability-one assertions, preserving event
// semantics under free measures on the extended space.
class KnowledgeBase {
public:
    explicit KnowledgeBase(std::vector<std::string> declared_vars);

    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Assertion>& assertions() const { return assertions_; }
    const std::vector<Clause>& definitional_units() const { return definitional_units_; }

    // Converts and records the assertion. Default mode: Equivalent when the
    // event touches at most 16 variables, Definitional beyond that.
    void assume(Expr::Ptr event, AssertKind kind, const Rat& lo, const Rat& hi,
                std::optional<CnfMode> mode = std::nullopt);

    // Parses the event over this base's declared variables.
    Expr::Ptr parse(std::string_view text) const;

private:
    std::vector<std::string> vars_;
    std::size_t declared_count_;
    std::vector<Assertion> assertions_;
    std::vector<Clause> definitional_units_;
};

}  // namespace probound
