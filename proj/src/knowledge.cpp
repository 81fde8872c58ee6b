#include "probound/knowledge.hpp"

#include "probound/errors.hpp"

namespace probound {

KnowledgeBase::KnowledgeBase(std::vector<std::string> declared_vars)
    : vars_(std::move(declared_vars)), declared_count_(vars_.size()) {
    if (vars_.empty()) throw InputError("knowledge base: no variables declared");
    if (vars_.size() > 24) throw GuardError("knowledge base guard: more than 24 variables");
}

void KnowledgeBase::assume(Expr::Ptr event, AssertKind kind, const Rat& lo, const Rat& hi,
                           std::optional<CnfMode> mode) {
    if (lo < 0 || hi > 1 || lo > hi)
        throw InputError("assertion bounds must satisfy 0 <= lo <= hi <= 1");
    if (max_var(event) >= static_cast<int>(vars_.size()))
        throw InputError("assertion uses an undeclared variable");

    CnfMode m = mode.value_or(expr_vars(event).size() <= 16 ? CnfMode::Equivalent
                                                            : CnfMode::Definitional);
    CnfFormula cnf = to_cnf(event, m, vars_);
    if (!cnf.aux_defs.empty()) {
        if (cnf.variables.size() > 24)
            throw GuardError("knowledge base guard: auxiliary variables exceed 24 total");
        vars_ = cnf.variables;
        // The definitional clauses must hold with probability one for the
        // CNF to define the same event over the extended space.
        for (std::size_t i = 0; i < cnf.def_clause_count; ++i)
            definitional_units_.push_back(cnf.clauses[i]);
    }
    assertions_.push_back(Assertion{std::move(event), std::move(cnf), kind, lo, hi});
}

Expr::Ptr KnowledgeBase::parse(std::string_view text) const {
    return parse_expression(text, vars_);
}

}  // namespace probound
