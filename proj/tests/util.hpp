#pragma once

// Shared corpus generators for the randomized suites.

#include <random>
#include <vector>

#include "probound/atoms.hpp"
#include "probound/formula.hpp"
#include "probound/knowledge.hpp"

namespace probound::testutil {

inline Rat prob_of(const AtomVector& m, const AtomBits& event) {
    Rat p(0);
    for (std::uint64_t i = 0; i < m.entries.size(); ++i)
        if (event.get(i)) p += m.entries[i];
    return p;
}

inline AtomVector random_measure(const AtomSpace& s, std::mt19937_64& rng) {
    AtomVector v(s);
    Rat sum(0);
    for (auto& e : v.entries) {
        e = rat(static_cast<long>(rng() % 20));
        sum += e;
    }
    if (sum == 0) {
        v.entries[0] = 1;
        sum = 1;
    }
    for (auto& e : v.entries) e /= sum;
    return v;
}

inline Expr::Ptr random_event(std::mt19937_64& rng, int n_vars, int depth) {
    if (depth <= 0 || rng() % 3 == 0)
        return Expr::variable(static_cast<int>(rng() % static_cast<std::uint64_t>(n_vars)));
    switch (rng() % 4) {
        case 0:
            return Expr::mk_not(random_event(rng, n_vars, depth - 1));
        case 1: {
            std::vector<Expr::Ptr> kids;
            for (std::size_t i = 0; i < 2 + rng() % 2; ++i)
                kids.push_back(random_event(rng, n_vars, depth - 1));
            return Expr::mk_and(std::move(kids));
        }
        case 2: {
            std::vector<Expr::Ptr> kids;
            for (std::size_t i = 0; i < 2 + rng() % 2; ++i)
                kids.push_back(random_event(rng, n_vars, depth - 1));
            return Expr::mk_or(std::move(kids));
        }
        default:
            return Expr::mk_implies(random_event(rng, n_vars, depth - 1),
                                    random_event(rng, n_vars, depth - 1));
    }
}

// A knowledge base satisfied by construction by the returned measure.
inline KnowledgeBase random_consistent_kb(std::mt19937_64& rng, int n,
                                          AtomVector* measure_out = nullptr) {
    AtomSpace space = AtomSpace::with_default_names(n);
    AtomVector measure = random_measure(space, rng);
    KnowledgeBase kb{std::vector<std::string>(space.vars())};

    const std::size_t count = 2 + rng() % 3;
    for (std::size_t i = 0; i < count; ++i) {
        Expr::Ptr e = random_event(rng, n, 2);
        Rat p = prob_of(measure, truth_table(e, n));
        switch (rng() % 4) {
            case 0:
                kb.assume(e, AssertKind::Equal, p, p);
                break;
            case 1: {
                Rat lo = p - rat(static_cast<long>(rng() % 3), 10);
                if (lo < 0) lo = 0;
                kb.assume(e, AssertKind::AtLeast, lo, Rat(1));
                break;
            }
            case 2: {
                Rat hi = p + rat(static_cast<long>(rng() % 3), 10);
                if (hi > 1) hi = 1;
                kb.assume(e, AssertKind::AtMost, Rat(0), hi);
                break;
            }
            default: {
                Rat lo = p - rat(static_cast<long>(rng() % 3), 12);
                Rat hi = p + rat(static_cast<long>(rng() % 3), 12);
                if (lo < 0) lo = 0;
                if (hi > 1) hi = 1;
                kb.assume(e, AssertKind::Interval, lo, hi);
                break;
            }
        }
    }
    if (measure_out) *measure_out = std::move(measure);
    return kb;
}

}  // namespace probound::testutil
