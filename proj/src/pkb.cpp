#include "probound/pkb.hpp"

#include <cctype>
#include <istream>
#include <sstream>

#include "probound/errors.hpp"

namespace probound {

namespace {

struct LineScanner {
    const std::string& s;
    std::size_t pos = 0;
    const std::string& path;
    int line;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(path + ":" + std::to_string(line) + ": " + msg +
                         " (column " + std::to_string(pos + 1) + ")");
    }

    void ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(std::string_view tok) {
        ws();
        if (s.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    bool done() {
        ws();
        return pos >= s.size();
    }

    std::string word() {
        ws();
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return s.substr(start, pos - start);
    }

    // The text between "P(" and its matching ")".
    std::string event_text() {
        if (!eat("P(")) fail("expected P(<expr>)");
        std::size_t start = pos;
        int depth = 1;
        while (pos < s.size() && depth > 0) {
            if (s[pos] == '(') ++depth;
            if (s[pos] == ')') --depth;
            ++pos;
        }
        if (depth != 0) fail("unbalanced parentheses in event");
        return s.substr(start, pos - start - 1);
    }

    Rat rational() {
        ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '/' || s[pos] == '.' || s[pos] == '-' ||
                                  s[pos] == '+'))
            ++pos;
        auto r = parse_rat(std::string_view(s).substr(start, pos - start));
        if (!r) fail("expected a rational number");
        return *r;
    }
};

std::string strip_comment(const std::string& line) {
    auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace

ProblemFile parse_problem_file(std::istream& in, const std::string& path) {
    ProblemFile pf;
    pf.path = path;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_comment(raw);
        LineScanner sc{line, 0, path, lineno};
        if (sc.done()) continue;
        std::string head = sc.word();

        if (head == "vars") {
            if (!pf.vars.empty()) sc.fail("duplicate vars line");
            while (!sc.done()) pf.vars.push_back(sc.word());
            if (pf.vars.empty()) sc.fail("vars line declares nothing");
        } else if (head == "assume") {
            ProblemFile::Assumption a;
            a.line = lineno;
            a.expr_text = sc.event_text();
            if (sc.eat(">=")) {
                a.kind = AssertKind::AtLeast;
                a.lo = sc.rational();
                a.hi = 1;
            } else if (sc.eat("<=")) {
                a.kind = AssertKind::AtMost;
                a.lo = 0;
                a.hi = sc.rational();
            } else if (sc.eat("=")) {
                a.kind = AssertKind::Equal;
                a.lo = a.hi = sc.rational();
            } else if (sc.eat("in")) {
                if (!sc.eat("[")) sc.fail("expected '[' after 'in'");
                a.kind = AssertKind::Interval;
                a.lo = sc.rational();
                if (!sc.eat(",")) sc.fail("expected ',' in interval");
                a.hi = sc.rational();
                if (!sc.eat("]")) sc.fail("expected ']' after interval");
            } else {
                sc.fail("expected =, >=, <=, or in [lo, hi]");
            }
            if (!sc.done()) sc.fail("trailing input after assumption");
            pf.assumptions.push_back(std::move(a));
        } else if (head == "query") {
            ProblemFile::Query q{sc.event_text(), lineno};
            if (!sc.done()) sc.fail("trailing input after query");
            pf.queries.push_back(std::move(q));
        } else if (head == "option") {
            std::string key = sc.word();
            if (key == "degree") {
                pf.options.degree = std::stoi(sc.word());
            } else if (key == "budgets") {
                std::vector<std::size_t> budgets;
                std::string list = sc.word();
                std::stringstream ss(list);
                std::string item;
                while (std::getline(ss, item, ','))
                    budgets.push_back(static_cast<std::size_t>(std::stoul(item)));
                if (budgets.empty()) sc.fail("empty budget list");
                pf.options.budgets = std::move(budgets);
            } else if (key == "mode") {
                std::string v = sc.word();
                if (v == "auto")
                    pf.options.mode = RefinementConfig::ModeRequest::Auto;
                else if (v == "exact")
                    pf.options.mode = RefinementConfig::ModeRequest::ForceExact;
                else if (v == "relaxed")
                    pf.options.mode = RefinementConfig::ModeRequest::ForceRelaxed;
                else
                    sc.fail("mode must be auto, exact, or relaxed");
            } else if (key == "time-limit") {
                pf.options.time_limit_seconds = std::stod(sc.word());
            } else {
                sc.fail("unknown option '" + key + "'");
            }
            if (!sc.done()) sc.fail("trailing input after option");
        } else {
            sc.fail("unknown directive '" + head + "'");
        }
    }
    if (pf.vars.empty())
        throw InputError(path + ": no vars line");
    return pf;
}

KnowledgeBase build_knowledge_base(const ProblemFile& pf) {
    KnowledgeBase kb{std::vector<std::string>(pf.vars)};
    for (const auto& a : pf.assumptions) {
        Expr::Ptr e;
        try {
            e = kb.parse(a.expr_text);
        } catch (const InputError& err) {
            throw InputError(pf.path + ":" + std::to_string(a.line) + ": " + err.what());
        }
        kb.assume(e, a.kind, a.lo, a.hi);
    }
    return kb;
}

}  // namespace probound
