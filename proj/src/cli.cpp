#include "probound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "probound/clause_matrix.hpp"
#include "probound/engine.hpp"
#include "probound/errors.hpp"
#include "probound/inequality.hpp"
#include "probound/pkb.hpp"
#include "probound/projection.hpp"

namespace probound::cli {

namespace {

using nlohmann::json;

std::string approx(const Rat& q) {
    std::ostringstream os;
    os << rat_double(q);
    return os.str();
}

json rat_json(const Rat& q) {
    return json{{"rat", rat_str(q)}, {"approx", rat_double(q)}};
}

std::string interval_text(const Rat& lo, const Rat& hi) {
    return "[" + rat_str(lo) + ", " + rat_str(hi) + "]  (= [" + approx(lo) + ", " +
           approx(hi) + "])";
}

std::string row_text(const LinearProgram& lp, std::size_t i) {
    const LpRow& r = lp.rows[i];
    std::string s;
    bool first = true;
    for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
        const Rat& c = r.coeffs[j];
        if (c == 0) continue;
        Rat mag = c < 0 ? Rat(-c) : c;
        if (first) {
            if (c < 0) s += '-';
            first = false;
        } else {
            s += c < 0 ? " - " : " + ";
        }
        if (mag != 1) s += rat_str(mag) + "*";
        s += lp.vars[j];
    }
    if (first) s += '0';
    switch (r.rel) {
        case LpRel::Ge: s += " >= "; break;
        case LpRel::Le: s += " <= "; break;
        case LpRel::Eq: s += " = "; break;
    }
    return s + rat_str(r.rhs);
}

void print_certificate(const InfeasibilityProof& proof, std::ostream& out) {
    out << "certificate (nonnegative multipliers deriving 0 >= positive):\n";
    for (const auto& e : proof.outcome.certificate)
        out << "  " << rat_str(e.mult) << " * [" << row_text(proof.lp, e.row) << "]\n";
    out << "  verified: " << (verify_outcome(proof.lp, proof.outcome) ? "yes" : "NO") << "\n";
}

json certificate_json(const InfeasibilityProof& proof) {
    json arr = json::array();
    for (const auto& e : proof.outcome.certificate)
        arr.push_back(json{{"row", e.row},
                           {"mult", rat_str(e.mult)},
                           {"text", row_text(proof.lp, e.row)}});
    return arr;
}

json result_json(const BoundResult& r, const std::string& query) {
    json o;
    o["query"] = query;
    o["status"] = r.status == BoundResult::Status::Feasible ? "feasible" : "infeasible";
    o["mode"] = r.mode == BoundResult::Mode::Exact ? "exact" : "relaxed";
    if (r.mode == BoundResult::Mode::Relaxed) {
        o["degree"] = r.degree;
        o["budget"] = r.budget;
    }
    if (r.status == BoundResult::Status::Feasible) {
        o["lo"] = rat_json(r.lo);
        o["hi"] = rat_json(r.hi);
    } else if (r.proof) {
        o["certificate"] = certificate_json(*r.proof);
    }
    o["timed_out"] = r.timed_out;
    o["stats"] = json{{"rows", r.stats.rows},
                      {"pivots", r.stats.pivots},
                      {"seconds", r.stats.seconds}};
    return o;
}

std::string mode_suffix(const BoundResult& r) {
    if (r.mode == BoundResult::Mode::Exact) return "";
    std::string s = "  [degree " + std::to_string(r.degree) + ", budget " +
                    std::to_string(r.budget) + "]";
    if (r.timed_out) s += "  (time limit)";
    return s;
}

struct BoundArgs {
    std::string file;
    bool exact = false;
    int degree = 0;
    std::string budgets;
    bool json_out = false;
    double time_limit = 0;
};

std::vector<std::size_t> parse_budget_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
    if (out.empty()) throw InputError("empty budget list");
    return out;
}

int cmd_bound(const BoundArgs& args, std::ostream& out) {
    std::ifstream in(args.file);
    if (!in) throw InputError("cannot open '" + args.file + "'");
    ProblemFile pf = parse_problem_file(in, args.file);
    if (pf.queries.empty()) throw InputError(args.file + ": no query lines");
    KnowledgeBase kb = build_knowledge_base(pf);

    RefinementConfig cfg;
    if (pf.options.degree) cfg.degree = *pf.options.degree;
    if (pf.options.budgets) cfg.budgets = *pf.options.budgets;
    if (pf.options.mode) cfg.mode = *pf.options.mode;
    if (pf.options.time_limit_seconds) cfg.time_limit_seconds = *pf.options.time_limit_seconds;
    if (args.exact) cfg.mode = RefinementConfig::ModeRequest::ForceExact;
    if (args.degree > 0) cfg.degree = args.degree;
    if (!args.budgets.empty()) cfg.budgets = parse_budget_list(args.budgets);
    if (args.time_limit > 0) cfg.time_limit_seconds = args.time_limit;
    const bool force_relaxed = args.degree > 0 || !args.budgets.empty() ||
                               cfg.mode == RefinementConfig::ModeRequest::ForceRelaxed;
    if (args.exact && force_relaxed)
        throw InputError("--exact conflicts with --degree/--budget");
    if (force_relaxed) cfg.mode = RefinementConfig::ModeRequest::ForceRelaxed;

    json doc{{"command", "bound"}, {"file", args.file}, {"queries", json::array()}};
    bool any_infeasible = false;

    for (const auto& q : pf.queries) {
        Expr::Ptr e = kb.parse(q.expr_text);
        std::string shown = "P(" + render(e, kb.vars()) + ")";

        if (force_relaxed) {
            auto stream = refine(kb, e, cfg);
            for (const BoundResult& r : stream) {
                if (r.status == BoundResult::Status::Feasible) {
                    if (!args.json_out)
                        out << shown << " in " << interval_text(r.lo, r.hi)
                            << mode_suffix(r) << "\n";
                } else {
                    any_infeasible = true;
                    if (!args.json_out) {
                        out << shown << ": INFEASIBLE" << mode_suffix(r) << "\n";
                        if (r.proof) print_certificate(*r.proof, out);
                    }
                }
            }
            if (args.json_out) {
                json qj = result_json(stream.back(), render(e, kb.vars()));
                qj["refinement"] = json::array();
                for (const BoundResult& r : stream)
                    qj["refinement"].push_back(result_json(r, render(e, kb.vars())));
                doc["queries"].push_back(std::move(qj));
            }
            if (stream.back().status == BoundResult::Status::Infeasible)
                any_infeasible = true;
        } else {
            BoundResult r = bound(kb, e, cfg);
            if (args.json_out) {
                doc["queries"].push_back(result_json(r, render(e, kb.vars())));
            } else if (r.status == BoundResult::Status::Feasible) {
                out << shown << " in " << interval_text(r.lo, r.hi) << mode_suffix(r) << "\n";
            } else {
                out << shown << ": INFEASIBLE\n";
                if (r.proof) print_certificate(*r.proof, out);
            }
            if (r.status == BoundResult::Status::Infeasible) any_infeasible = true;
        }
    }
    if (args.json_out) out << doc.dump(2) << "\n";
    return any_infeasible ? 1 : 0;
}

int cmd_check(const std::string& file, bool json_out, std::ostream& out) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open '" + file + "'");
    ProblemFile pf = parse_problem_file(in, file);
    KnowledgeBase kb = build_knowledge_base(pf);
    ConsistencyResult res = check_consistency(kb);

    if (json_out) {
        json doc{{"command", "check"}, {"file", file}};
        doc["status"] = res.consistent ? "consistent" : "inconsistent";
        if (res.consistent && res.witness) {
            json w = json::array();
            for (std::uint64_t m = 0; m < res.witness->entries.size(); ++m)
                if (res.witness->entries[m] != 0)
                    w.push_back(json{{"atom", res.witness->space.atom_str(m)},
                                     {"prob", rat_json(res.witness->entries[m])}});
            doc["witness"] = std::move(w);
        } else if (res.proof) {
            doc["certificate"] = certificate_json(*res.proof);
        }
        out << doc.dump(2) << "\n";
    } else if (res.consistent) {
        out << "consistent\n";
        if (res.witness) {
            out << "witness measure (nonzero atoms, variable order "
                << [&] {
                       std::string s;
                       for (const auto& v : kb.vars()) s += s.empty() ? v : " " + v;
                       return s;
                   }()
                << "):\n";
            for (std::uint64_t m = 0; m < res.witness->entries.size(); ++m)
                if (res.witness->entries[m] != 0)
                    out << "  P(" << res.witness->space.atom_str(m)
                        << ") = " << rat_str(res.witness->entries[m]) << "\n";
        }
    } else {
        out << "inconsistent\n";
        if (res.proof) print_certificate(*res.proof, out);
    }
    return res.consistent ? 0 : 1;
}

int cmd_fuzzy(const std::string& file, std::ostream& out) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open '" + file + "'");
    ProblemFile pf = parse_problem_file(in, file);
    if (pf.queries.empty()) throw InputError(file + ": no query lines");
    KnowledgeBase kb = build_knowledge_base(pf);

    std::map<int, Rat> probs;
    for (const Assertion& a : kb.assertions())
        if (a.expr->kind == ExprKind::Var && a.kind == AssertKind::Equal)
            probs[a.expr->var] = a.lo;
    for (std::size_t i = 0; i < pf.vars.size(); ++i)
        if (!probs.count(static_cast<int>(i)))
            throw InputError("fuzzy requires a point assertion P(" + pf.vars[i] +
                             ") = <rat>");

    for (const auto& q : pf.queries) {
        Expr::Ptr e = kb.parse(q.expr_text);
        Rat v = fuzzy_evaluate(e, probs);
        out << "fuzzy P(" << render(e, kb.vars()) << ") = " << rat_str(v) << "  (= "
            << approx(v) << ")\n";
    }
    return 0;
}

int cmd_facets(int n, int degree, std::ostream& out) {
    FacetList fl = enumerate_facets(n, degree);
    out << "N=" << n << " degree=" << degree << " count=" << fl.facets.size() << "\n";
    for (const auto& f : fl.facets) out << inequality_str(f) << "\n";
    return 0;
}

int cmd_matrices(int n, std::ostream& out) {
    out << matrix_dump(clause_matrices_recursive(n));
    return 0;
}

int cmd_verify(const std::string& file, int n, std::ostream& out) {
    if (n < 1 || n > 20) throw GuardError("verify-ineq guard: need 1 <= n <= 20");
    std::ifstream in(file);
    if (!in) throw InputError("cannot open '" + file + "'");
    AtomSpace space = AtomSpace::with_default_names(n);
    std::string line;
    int lineno = 0;
    bool any_invalid = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        LinearInequality ineq;
        try {
            ineq = parse_inequality(line, space);
        } catch (const InputError& e) {
            throw InputError(file + ":" + std::to_string(lineno) + ": " + e.what());
        }
        Validity v = is_valid(ineq);
        if (std::holds_alternative<Valid>(v)) {
            const auto& tight = std::get<Valid>(v).tight;
            out << "line " << lineno << ": valid, tight atoms:";
            for (std::uint64_t m : tight) out << " " << space.atom_str(m);
            if (tight.empty()) out << " (none)";
            out << "\n";
        } else {
            const auto& inv = std::get<Invalid>(v);
            out << "line " << lineno << ": INVALID at atom " << space.atom_str(inv.witness)
                << ", value " << rat_str(inv.value) << "\n";
            any_invalid = true;
        }
    }
    return any_invalid ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Probability bounds over boolean events via exact linear programming"};
    app.name("probound");
    app.require_subcommand(1);

    BoundArgs bound_args;
    auto* bound_cmd = app.add_subcommand("bound", "Bound query probabilities in a problem file");
    bound_cmd->add_option("file", bound_args.file, "problem file (.pkb)")->required();
    bound_cmd->add_flag("--exact", bound_args.exact, "force full atom-space LP");
    bound_cmd->add_option("--degree", bound_args.degree, "relaxed basis degree");
    bound_cmd->add_option("--budget", bound_args.budgets,
                          "comma-separated inequality budget schedule");
    bound_cmd->add_flag("--json", bound_args.json_out, "machine-readable output");
    bound_cmd->add_option("--time-limit", bound_args.time_limit, "seconds per query");

    std::string check_file;
    bool check_json = false;
    auto* check_cmd = app.add_subcommand("check", "Consistency verdict for a problem file");
    check_cmd->add_option("file", check_file, "problem file (.pkb)")->required();
    check_cmd->add_flag("--json", check_json, "machine-readable output");

    std::string fuzzy_file;
    auto* fuzzy_cmd = app.add_subcommand("fuzzy", "Min/max baseline estimates per query");
    fuzzy_cmd->add_option("file", fuzzy_file, "problem file (.pkb)")->required();

    int facets_n = 0, facets_degree = 0;
    auto* facets_cmd = app.add_subcommand("facets", "Enumerate projection facets (oracle)");
    facets_cmd->add_option("--n", facets_n, "variable count")->required();
    facets_cmd->add_option("--degree", facets_degree, "basis degree")->required();

    int matrices_n = 0;
    auto* matrices_cmd = app.add_subcommand("matrices", "Dump clause matrices C_{N,i}");
    matrices_cmd->add_option("--n", matrices_n, "variable count")->required();

    std::string verify_file;
    int verify_n = 0;
    auto* verify_cmd = app.add_subcommand("verify-ineq", "Check inequalities for validity");
    verify_cmd->add_option("file", verify_file, "file with one inequality per line")->required();
    verify_cmd->add_option("--n", verify_n, "variable count")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (bound_cmd->parsed()) return cmd_bound(bound_args, out);
        if (check_cmd->parsed()) return cmd_check(check_file, check_json, out);
        if (fuzzy_cmd->parsed()) return cmd_fuzzy(fuzzy_file, out);
        if (facets_cmd->parsed()) return cmd_facets(facets_n, facets_degree, out);
        if (matrices_cmd->parsed()) return cmd_matrices(matrices_n, out);
        if (verify_cmd->parsed()) return cmd_verify(verify_file, verify_n, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        err << "resource guard: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace probound::cli
