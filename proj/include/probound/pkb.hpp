#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "probound/engine.hpp"
#include "probound/knowledge.hpp"

namespace probound {

// Line-oriented problem files:
//   vars A B C
//   assume P(<expr>) = <rat>        (also >=, <=, in [<rat>, <rat>])
//   query P(<expr>)
//   option degree 2 | budgets 8,32,128 | mode auto|exact|relaxed |
//          time-limit 5
//   # comment
// <rat> is p/q, an integer, or a decimal (converted exactly).
struct ProblemFile {
    std::string path;
    std::vector<std::string> vars;

    struct Assumption {
        std::string expr_text;
        AssertKind kind;
        Rat lo, hi;
        int line;
    };
    std::vector<Assumption> assumptions;

    struct Query {
        std::string expr_text;
        int line;
    };
    std::vector<Query> queries;

    struct Options {
        std::optional<int> degree;
        std::optional<std::vector<std::size_t>> budgets;
        std::optional<RefinementConfig::ModeRequest> mode;
        std::optional<double> time_limit_seconds;
    } options;
};

ProblemFile parse_problem_file(std::istream& in, const std::string& path);

// Parses every assumption over the declared variables and loads it.
KnowledgeBase build_knowledge_base(const ProblemFile& pf);

}  // namespace probound
