#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "probound/engine.hpp"
#include "probound/errors.hpp"
#include "probound/projection.hpp"
#include "util.hpp"

using namespace probound;
using testutil::prob_of;
using testutil::random_consistent_kb;
using testutil::random_event;

namespace {

KnowledgeBase frechet_kb() {
    std::vector<std::string> vars{"A", "B"};
    KnowledgeBase kb(vars);
    kb.assume(parse_expression("A", vars), AssertKind::Equal, rat(2, 5), rat(2, 5));
    kb.assume(parse_expression("B", vars), AssertKind::Equal, rat(4, 5), rat(4, 5));
    return kb;
}

KnowledgeBase disjoint_triple_kb() {
    std::vector<std::string> vars{"A", "B", "C"};
    KnowledgeBase kb(vars);
    for (const char* v : {"A", "B", "C"})
        kb.assume(parse_expression(v, vars), AssertKind::Equal, rat(1, 2), rat(1, 2));
    for (const char* e : {"A & B", "A & C", "B & C"})
        kb.assume(parse_expression(e, vars), AssertKind::Equal, Rat(0), Rat(0));
    return kb;
}

bool satisfies(const AtomVector& m, const KnowledgeBase& kb) {
    if (!m.is_measure()) return false;
    const int n = static_cast<int>(kb.vars().size());
    for (const Assertion& a : kb.assertions()) {
        Rat p = prob_of(m, cnf_table(a.cnf, n));
        if (p < a.lo || p > a.hi) return false;
    }
    for (const Clause& c : kb.definitional_units())
        if (prob_of(m, clause_table(c, n)) != 1) return false;
    return true;
}

}  // namespace

TEST_CASE("fuzzy_evaluate: the min/max rules") {
    std::vector<std::string> vars{"A", "B"};
    std::map<int, Rat> probs{{0, rat(2, 5)}, {1, rat(4, 5)}};
    CHECK(fuzzy_evaluate(parse_expression("A & B", vars), probs) == rat(2, 5));
    CHECK(fuzzy_evaluate(parse_expression("A | B", vars), probs) == rat(4, 5));
    CHECK(fuzzy_evaluate(parse_expression("~A", vars), probs) == rat(3, 5));
    CHECK(fuzzy_evaluate(parse_expression("A -> B", vars), probs) == rat(4, 5));
    CHECK_THROWS_AS(fuzzy_evaluate(parse_expression("A", vars), {}), InputError);
}

TEST_CASE("exact bound reproduces the Fréchet interval with witnesses") {
    KnowledgeBase kb = frechet_kb();
    Expr::Ptr query = kb.parse("A & B");
    BoundResult r = bound(kb, query);
    REQUIRE(r.status == BoundResult::Status::Feasible);
    CHECK(r.mode == BoundResult::Mode::Exact);
    CHECK(r.lo == rat(1, 5));
    CHECK(r.hi == rat(2, 5));

    REQUIRE(r.lo_witness);
    REQUIRE(r.hi_witness);
    CHECK(satisfies(*r.lo_witness, kb));
    CHECK(satisfies(*r.hi_witness, kb));
    AtomBits q = truth_table(query, 2);
    CHECK(prob_of(*r.lo_witness, q) == r.lo);
    CHECK(prob_of(*r.hi_witness, q) == r.hi);
    CHECK(r.stats.rows > 0);
}

TEST_CASE("infeasible knowledge bases carry verified certificates") {
    KnowledgeBase kb = disjoint_triple_kb();
    BoundResult r = bound(kb, kb.parse("A & B & C"));
    REQUIRE(r.status == BoundResult::Status::Infeasible);
    REQUIRE(r.proof);
    CHECK(r.proof->outcome.status == LpOutcome::Status::Infeasible);
    CHECK(verify_outcome(r.proof->lp, r.proof->outcome));

    ConsistencyResult c = check_consistency(kb);
    CHECK_FALSE(c.consistent);
    REQUIRE(c.proof);
    CHECK(verify_outcome(c.proof->lp, c.proof->outcome));
}

TEST_CASE("check_consistency: witness measures") {
    KnowledgeBase kb = frechet_kb();
    ConsistencyResult c = check_consistency(kb);
    REQUIRE(c.consistent);
    REQUIRE(c.witness);
    CHECK(satisfies(*c.witness, kb));

    // The interval-derived example measure satisfies the same system.
    AtomVector m{AtomSpace({"A", "B"})};
    m.entries[0b11] = rat(3, 10);
    m.entries[0b10] = rat(1, 2);
    m.entries[0b01] = rat(1, 10);
    m.entries[0b00] = rat(1, 10);
    CHECK(satisfies(m, kb));

    std::vector<std::string> vars{"A"};
    KnowledgeBase twice(vars);
    twice.assume(parse_expression("A", vars), AssertKind::Equal, rat(1, 2), rat(1, 2));
    twice.assume(parse_expression("A", vars), AssertKind::Equal, rat(1, 3), rat(1, 3));
    CHECK_FALSE(check_consistency(twice).consistent);
}

TEST_CASE("triple with quarter intersections: exact interval and witnesses") {
    std::vector<std::string> vars{"A", "B", "C"};
    KnowledgeBase kb(vars);
    for (const char* v : {"A", "B", "C"})
        kb.assume(parse_expression(v, vars), AssertKind::Equal, rat(1, 2), rat(1, 2));
    for (const char* e : {"A & B", "A & C", "B & C"})
        kb.assume(parse_expression(e, vars), AssertKind::Equal, rat(1, 4), rat(1, 4));
    BoundResult r = bound(kb, kb.parse("A & B & C"));
    REQUIRE(r.status == BoundResult::Status::Feasible);
    CHECK(r.lo == 0);
    CHECK(r.hi == rat(1, 4));
    AtomBits q = truth_table(kb.parse("A & B & C"), 3);
    CHECK(prob_of(*r.lo_witness, q) == 0);
    CHECK(prob_of(*r.hi_witness, q) == rat(1, 4));
}

TEST_CASE("exact bounds equal the elimination oracle on a random corpus") {
    std::mt19937_64 rng(1841);
    for (int rep = 0; rep < 40; ++rep) {
        int n = 2 + static_cast<int>(rng() % 3);
        KnowledgeBase kb = random_consistent_kb(rng, n);
        Expr::Ptr query = random_event(rng, n, 2);
        BoundResult r = bound(kb, query);
        REQUIRE(r.status == BoundResult::Status::Feasible);
        OracleBounds ob = oracle_bounds(kb, to_cnf(query, CnfMode::Equivalent, kb.vars()));
        REQUIRE(ob.feasible);
        CHECK(r.lo == ob.lo);
        CHECK(r.hi == ob.hi);
    }
}

TEST_CASE("soundness: generating measures fall inside every reported interval") {
    std::mt19937_64 rng(6021023);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 2 + static_cast<int>(rng() % 5);  // up to 6
        AtomVector measure;
        KnowledgeBase kb = random_consistent_kb(rng, n, &measure);
        Expr::Ptr query = random_event(rng, n, 2);
        Rat truth = prob_of(measure, truth_table(query, n));

        BoundResult exact = bound(kb, query);
        REQUIRE(exact.status == BoundResult::Status::Feasible);
        CHECK(exact.lo <= truth);
        CHECK(truth <= exact.hi);

        RefinementConfig cfg;
        cfg.mode = RefinementConfig::ModeRequest::ForceRelaxed;
        cfg.degree = 2;
        cfg.budgets = {64};
        BoundResult relaxed = bound(kb, query, cfg);
        REQUIRE(relaxed.status == BoundResult::Status::Feasible);
        CHECK(relaxed.lo <= truth);
        CHECK(truth <= relaxed.hi);
    }
}

TEST_CASE("relaxed intervals contain exact intervals; budgets narrow monotonically") {
    std::mt19937_64 rng(595959);
    for (int rep = 0; rep < 15; ++rep) {
        int n = 5 + static_cast<int>(rng() % 2);
        KnowledgeBase kb = random_consistent_kb(rng, n);
        Expr::Ptr query = random_event(rng, n, 2);

        BoundResult exact = bound(kb, query);
        REQUIRE(exact.status == BoundResult::Status::Feasible);

        RefinementConfig cfg;
        cfg.mode = RefinementConfig::ModeRequest::ForceRelaxed;
        cfg.degree = 2;
        cfg.budgets = {8, 32, 128};
        auto stream = refine(kb, query, cfg);
        REQUIRE(!stream.empty());

        Rat prev_lo(-1), prev_hi(2);
        for (const BoundResult& r : stream) {
            REQUIRE(r.status == BoundResult::Status::Feasible);
            CHECK(r.lo <= exact.lo);   // containment
            CHECK(r.hi >= exact.hi);
            CHECK(r.lo >= prev_lo);    // non-widening
            CHECK(r.hi <= prev_hi);
            prev_lo = r.lo;
            prev_hi = r.hi;
        }
    }
}

TEST_CASE("budget zero gives the trivial interval cut by direct assertions") {
    std::vector<std::string> vars{"A", "B", "C", "D", "E"};
    KnowledgeBase kb(vars);
    kb.assume(parse_expression("A", vars), AssertKind::Equal, rat(2, 5), rat(2, 5));
    RefinementConfig cfg;
    cfg.mode = RefinementConfig::ModeRequest::ForceRelaxed;
    cfg.degree = 2;
    cfg.budgets = {0};
    BoundResult direct = bound(kb, kb.parse("A"), cfg);
    REQUIRE(direct.status == BoundResult::Status::Feasible);
    CHECK(direct.lo == rat(2, 5));
    CHECK(direct.hi == rat(2, 5));
    BoundResult open = bound(kb, kb.parse("B"), cfg);
    CHECK(open.lo == 0);
    CHECK(open.hi == 1);
}

TEST_CASE("baseline relation: fuzzy equals the exact upper bound for conjunctions") {
    std::mt19937_64 rng(321);
    std::vector<std::string> vars{"A", "B"};
    for (int rep = 0; rep < 20; ++rep) {
        Rat p = rat(static_cast<long>(rng() % 11), 10);
        Rat q = rat(static_cast<long>(rng() % 11), 10);
        KnowledgeBase kb(vars);
        kb.assume(parse_expression("A", vars), AssertKind::Equal, p, p);
        kb.assume(parse_expression("B", vars), AssertKind::Equal, q, q);
        BoundResult r = bound(kb, kb.parse("A & B"));
        REQUIRE(r.status == BoundResult::Status::Feasible);
        CHECK(r.hi == std::min(p, q));
        CHECK(r.lo == std::max(Rat(0), p + q - 1));
        CHECK(fuzzy_evaluate(kb.parse("A & B"), {{0, p}, {1, q}}) == r.hi);
    }
}

TEST_CASE("chain conjunctions: the baseline error grows, the engine's does not") {
    for (int k = 2; k <= 8; ++k) {
        std::vector<std::string> vars;
        for (int i = 0; i < k; ++i) vars.push_back("x" + std::to_string(i + 1));
        KnowledgeBase kb(vars);
        std::map<int, Rat> probs;
        std::vector<Expr::Ptr> lits;
        for (int i = 0; i < k; ++i) {
            kb.assume(Expr::variable(i), AssertKind::Equal, rat(9, 10), rat(9, 10));
            probs[i] = rat(9, 10);
            lits.push_back(Expr::variable(i));
        }
        Expr::Ptr chain = Expr::mk_and(std::move(lits));
        CHECK(fuzzy_evaluate(chain, probs) == rat(9, 10));
        BoundResult r = bound(kb, chain);
        REQUIRE(r.status == BoundResult::Status::Feasible);
        CHECK(r.hi == rat(9, 10));
        CHECK(r.lo == std::max(Rat(0), Rat(1) - rat(k, 10)));
    }
}

TEST_CASE("definitional conversion preserves engine results") {
    std::vector<std::string> vars{"A", "B", "C"};
    const char* event = "(A & B) | (~A & C)";

    KnowledgeBase kb_eq(vars);
    kb_eq.assume(parse_expression(event, vars), AssertKind::Equal, rat(1, 2), rat(1, 2),
                 CnfMode::Equivalent);
    KnowledgeBase kb_def(vars);
    kb_def.assume(parse_expression(event, vars), AssertKind::Equal, rat(1, 2), rat(1, 2),
                  CnfMode::Definitional);
    CHECK(kb_def.vars().size() > 3);
    CHECK(!kb_def.definitional_units().empty());

    for (const char* q : {"A", "A & B", "C | B"}) {
        BoundResult a = bound(kb_eq, parse_expression(q, vars));
        BoundResult b = bound(kb_def, parse_expression(q, kb_def.vars()));
        REQUIRE(a.status == BoundResult::Status::Feasible);
        REQUIRE(b.status == BoundResult::Status::Feasible);
        CHECK(a.lo == b.lo);
        CHECK(a.hi == b.hi);
    }
}

TEST_CASE("relaxed mode handles clauses wider than the degree") {
    std::vector<std::string> vars{"A", "B", "C", "D", "E"};
    KnowledgeBase kb(vars);
    // A five-literal disjunction: its single clause exceeds degree 2, so the
    // engine brackets it; the assertion still constrains the query soundly.
    kb.assume(parse_expression("A | B | C | D | E", vars), AssertKind::Equal, Rat(0), Rat(0));
    RefinementConfig cfg;
    cfg.mode = RefinementConfig::ModeRequest::ForceRelaxed;
    cfg.degree = 2;
    cfg.budgets = {64};
    BoundResult r = bound(kb, kb.parse("A"), cfg);
    REQUIRE(r.status == BoundResult::Status::Feasible);
    CHECK(r.hi == 0);  // P(union) = 0 forces each literal to zero

    BoundResult exact = bound(kb, kb.parse("A"));
    CHECK(exact.lo == 0);
    CHECK(exact.hi == 0);
    CHECK(r.lo <= exact.lo);
    CHECK(r.hi >= exact.hi);
}

TEST_CASE("interval assertions enter as two rows") {
    std::vector<std::string> vars{"A", "B"};
    KnowledgeBase kb(vars);
    kb.assume(parse_expression("A", vars), AssertKind::Interval, rat(1, 4), rat(3, 4));
    kb.assume(parse_expression("B", vars), AssertKind::AtLeast, rat(1, 2), Rat(1));
    BoundResult r = bound(kb, kb.parse("A"));
    CHECK(r.lo == rat(1, 4));
    CHECK(r.hi == rat(3, 4));
    BoundResult rb = bound(kb, kb.parse("B"));
    CHECK(rb.lo == rat(1, 2));
    CHECK(rb.hi == 1);
}

TEST_CASE("refine stops early when the exact interval is reached") {
    KnowledgeBase kb = frechet_kb();
    RefinementConfig cfg;
    cfg.mode = RefinementConfig::ModeRequest::ForceRelaxed;
    cfg.degree = 2;
    cfg.budgets = {50, 100, 200, 400};
    auto stream = refine(kb, kb.parse("A & B"), cfg);
    REQUIRE(!stream.empty());
    // Degree-2 relaxation of a two-variable problem is already exact, so the
    // stream should terminate on the first budget.
    CHECK(stream.size() == 1);
    CHECK(stream[0].lo == rat(1, 5));
    CHECK(stream[0].hi == rat(2, 5));
}

TEST_CASE("auto mode switches to relaxed beyond the atom threshold") {
    std::vector<std::string> vars;
    for (int i = 0; i < 13; ++i) vars.push_back("v" + std::to_string(i));
    KnowledgeBase kb(vars);
    kb.assume(parse_expression("v0", vars), AssertKind::Equal, rat(1, 2), rat(1, 2));
    BoundResult r = bound(kb, kb.parse("v0 & v1"));
    CHECK(r.mode == BoundResult::Mode::Relaxed);
    CHECK(r.lo >= 0);
    CHECK(r.hi <= rat(1, 2));

    RefinementConfig force;
    force.mode = RefinementConfig::ModeRequest::ForceExact;
    CHECK_THROWS_AS(bound(kb, kb.parse("v0"), force), GuardError);
}
