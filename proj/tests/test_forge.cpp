#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "probound/errors.hpp"
#include "probound/inequality.hpp"

using namespace probound;

namespace {

const AtomSpace kS2 = AtomSpace::with_default_names(2);
const AtomSpace kS3 = AtomSpace::with_default_names(3);

LinearInequality parse2(const std::string& s) { return parse_inequality(s, kS2); }
LinearInequality parse3(const std::string& s) { return parse_inequality(s, kS3); }

// The four projection facets for two events.
std::vector<LinearInequality> frechet_facets(const AtomSpace& space) {
    return {
        parse_inequality("P(A&B) >= 0", space),
        parse_inequality("P(A) - P(A&B) >= 0", space),
        parse_inequality("P(B) - P(A&B) >= 0", space),
        parse_inequality("1 - P(A) - P(B) + P(A&B) >= 0", space),
    };
}

bool contains(const std::vector<LinearInequality>& list, const LinearInequality& x) {
    return std::any_of(list.begin(), list.end(),
                       [&](const LinearInequality& y) { return y == x; });
}

// Valid-by-construction: random nonnegative vertex values.
LinearInequality random_valid(std::mt19937_64& rng, const AtomSpace& space) {
    std::vector<Rat> values(space.atom_count());
    for (auto& v : values)
        v = rng() % 3 == 0 ? Rat(0) : rat(static_cast<long>(rng() % 12), 1 + rng() % 5);
    return from_vertex_values(space, std::move(values));
}

}  // namespace

TEST_CASE("parity check: frozen cases") {
    auto p1 = parity_check(SymmetricSpec{2, {1, 2}});
    REQUIRE(std::holds_alternative<ParityPass>(p1));
    CHECK(std::get<ParityPass>(p1).sign == +1);

    auto p2 = parity_check(SymmetricSpec{3, {1, 3}});
    REQUIRE(std::holds_alternative<ParityFail>(p2));
    CHECK(std::get<ParityFail>(p2).k_positive == 0);
    CHECK(std::get<ParityFail>(p2).k_negative == 2);

    auto p3 = parity_check(SymmetricSpec{1, {0}});
    REQUIRE(std::holds_alternative<ParityPass>(p3));
    CHECK(std::get<ParityPass>(p3).sign == -1);

    CHECK(std::holds_alternative<ParityDegenerate>(parity_check(SymmetricSpec{2, {0, 1, 2}})));
}

TEST_CASE("symmetric coefficients are finite differences of |f|") {
    CHECK(symmetric_coeffs(SymmetricSpec{2, {1, 2}}) ==
          std::vector<Rat>{rat(2), rat(-2), rat(2)});
    CHECK(symmetric_coeffs(SymmetricSpec{1, {1}}) == std::vector<Rat>{rat(1), rat(-1)});
}

TEST_CASE("synthesize reproduces the displayed inequalities") {
    CHECK(synthesize(SymmetricSpec{2, {1, 2}}, kS2) ==
          parse2("1 - P(A) - P(B) + P(A&B) >= 0"));
    CHECK(synthesize(SymmetricSpec{3, {1, 2}}, kS3) ==
          parse3("1 - P(A) - P(B) - P(C) + P(A&B) + P(A&C) + P(B&C) >= 0"));
    CHECK(synthesize(SymmetricSpec{1, {1}}, AtomSpace::with_default_names(1)) ==
          parse_inequality("1 - P(A) >= 0", AtomSpace::with_default_names(1)));
    CHECK_THROWS_AS(synthesize(SymmetricSpec{3, {1, 3}}, kS3), std::invalid_argument);
}

TEST_CASE("synthesize tightness: exactly the defining constants") {
    std::mt19937_64 rng(555);
    for (int rep = 0; rep < 60; ++rep) {
        int n = 1 + static_cast<int>(rng() % 8);
        SymmetricSpec spec{n, {}};
        for (int a = 0; a <= n; ++a)
            if (rng() % 3 == 0) spec.constants.push_back(a);
        if (spec.constants.empty()) spec.constants.push_back(static_cast<int>(rng() % (n + 1)));
        if (!std::holds_alternative<ParityPass>(parity_check(spec))) continue;

        AtomSpace space = AtomSpace::with_default_names(n);
        LinearInequality ineq = synthesize(spec, space);
        auto v = is_valid(ineq);
        REQUIRE(std::holds_alternative<Valid>(v));
        std::set<std::uint64_t> tight(std::get<Valid>(v).tight.begin(),
                                      std::get<Valid>(v).tight.end());
        for (std::uint64_t m = 0; m < space.atom_count(); ++m) {
            bool is_constant = std::find(spec.constants.begin(), spec.constants.end(),
                                         std::popcount(m)) != spec.constants.end();
            CHECK(tight.count(m) == (is_constant ? 1u : 0u));
        }
    }
}

TEST_CASE("parity necessity: the signed function is not valid") {
    std::mt19937_64 rng(776);
    int found = 0;
    for (int rep = 0; rep < 300 && found < 25; ++rep) {
        int n = 2 + static_cast<int>(rng() % 5);
        SymmetricSpec spec{n, {}};
        for (int a = 0; a <= n; ++a)
            if (rng() % 3 == 0) spec.constants.push_back(a);
        if (spec.constants.empty()) continue;
        if (!std::holds_alternative<ParityFail>(parity_check(spec))) continue;
        ++found;

        // Vertex values from the signed product, no absolute value.
        AtomSpace space = AtomSpace::with_default_names(n);
        std::vector<Rat> values(space.atom_count());
        for (std::uint64_t m = 0; m < values.size(); ++m) {
            Rat f(1);
            for (int a : spec.constants) f *= Rat(a - std::popcount(m));
            values[m] = f;
        }
        LinearInequality signed_ineq = from_vertex_values(space, std::move(values));
        CHECK(std::holds_alternative<Invalid>(is_valid(signed_ineq)));
    }
    CHECK(found >= 10);
}

TEST_CASE("negate_variable: the Fréchet orbit") {
    LinearInequality base = parse2("1 - P(A) - P(B) + P(A&B) >= 0");
    CHECK(negate_variable(base, 0) == parse2("P(A) - P(A&B) >= 0"));
    CHECK(negate_variable(negate_variable(base, 0), 1) == parse2("P(A&B) >= 0"));
    CHECK(negate_variable(negate_variable(base, 0), 0) == base);  // involution
}

TEST_CASE("negation orbit of the two-event symmetric function is exactly the facet list") {
    LinearInequality s = synthesize(SymmetricSpec{2, {1, 2}}, kS2);
    std::vector<LinearInequality> orbit;
    for (std::uint32_t neg = 0; neg < 4; ++neg) {
        LinearInequality cur = s;
        for (int v = 0; v < 2; ++v)
            if ((neg >> v) & 1) cur = negate_variable(cur, v);
        if (!contains(orbit, cur)) orbit.push_back(cur);
    }
    auto facets = frechet_facets(kS2);
    REQUIRE(orbit.size() == 4);
    for (const auto& f : facets) CHECK(contains(orbit, f));
}

TEST_CASE("permute_variables") {
    LinearInequality ineq = parse2("P(A) - P(A&B) >= 0");
    CHECK(permute_variables(ineq, {1, 0}) == parse2("P(B) - P(A&B) >= 0"));
    CHECK(permute_variables(ineq, {0, 1}) == ineq);

    // The cycle sending A->C, C->B, B->A carries the {A,C} facet family onto
    // the {B,C} one.
    std::vector<LinearInequality> eq8 = {
        parse3("1 - P(A) - P(C) + P(A&C) >= 0"),
        parse3("P(A) - P(A&C) >= 0"),
        parse3("P(C) - P(A&C) >= 0"),
        parse3("P(A&C) >= 0"),
    };
    std::vector<LinearInequality> eq9 = {
        parse3("1 - P(B) - P(C) + P(B&C) >= 0"),
        parse3("P(B) - P(B&C) >= 0"),
        parse3("P(C) - P(B&C) >= 0"),
        parse3("P(B&C) >= 0"),
    };
    const std::vector<int> cycle{2, 0, 1};  // A->C, B->A, C->B
    for (std::size_t i = 0; i < eq8.size(); ++i)
        CHECK(contains(eq9, permute_variables(eq8[i], cycle)));
}

TEST_CASE("flip_transform examples") {
    LinearInequality ineq = parse2("P(A) - P(A&B) >= 0");
    // Swap atoms a (01 = index 1) and b (10 = index 2).
    std::vector<std::uint64_t> swap_ab{0, 2, 1, 3};
    auto res = flip_transform(ineq, swap_ab);
    REQUIRE(std::holds_alternative<LinearInequality>(res));
    CHECK(std::get<LinearInequality>(res) == parse2("P(B) - P(A&B) >= 0"));

    std::vector<std::uint64_t> identity{0, 1, 2, 3};
    CHECK(std::get<LinearInequality>(flip_transform(ineq, identity)) == ineq);

    // Each facet of the two-event projection is an atom indicator, so every
    // one of the 4! atom permutations maps the facet set onto itself.
    auto facets = frechet_facets(kS2);
    std::vector<std::uint64_t> perm{0, 1, 2, 3};
    int count = 0;
    do {
        for (const auto& f : facets) {
            auto r = flip_transform(f, perm);
            REQUIRE(std::holds_alternative<LinearInequality>(r));
            LinearInequality img = normalize(std::get<LinearInequality>(r));
            CHECK(contains(facets, img));
            CHECK(std::holds_alternative<Valid>(is_valid(img)));
        }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(count == 24);
}

TEST_CASE("flip_transform reports when the image leaves the working degree") {
    // An indicator of a single atom has full degree; restricting to degree 1
    // must be rejected for some permutation image.
    LinearInequality ineq = parse2("P(A&B) >= 0");
    std::vector<std::uint64_t> identity{0, 1, 2, 3};
    auto r = flip_transform(ineq, identity, 1);
    REQUIRE(std::holds_alternative<OutOfSubspace>(r));
    CHECK(std::get<OutOfSubspace>(r).degree == 2);
}

TEST_CASE("compound: vertex values multiply") {
    AtomSpace sa({"A"});
    AtomSpace sb({"B"});
    LinearInequality pa = parse_inequality("P(A) >= 0", sa);
    LinearInequality one_minus_b = parse_inequality("1 - P(B) >= 0", sb);
    CHECK(compound(pa, one_minus_b) == parse2("P(A) - P(A&B) >= 0"));

    LinearInequality s1a = parse_inequality("1 - P(A) >= 0", sa);
    LinearInequality s1b = parse_inequality("1 - P(B) >= 0", sb);
    CHECK(compound(s1a, s1b) == parse2("1 - P(A) - P(B) + P(A&B) >= 0"));

    // Compounding with 1 >= 0 is exactly the escalator lift.
    LinearInequality one{AtomSpace({"C"}), {{0u, Rat(1)}}};
    LinearInequality lifted = compound(parse2("P(A) - P(A&B) >= 0"), one);
    CHECK(lifted == escalator_lift(parse2("P(A) - P(A&B) >= 0"), {"C"}));

    CHECK_THROWS_AS(compound(pa, parse_inequality("P(A) >= 0", sa)), std::invalid_argument);
}

TEST_CASE("compound on random operands: product law, commutative, associative") {
    std::mt19937_64 rng(9001);
    for (int rep = 0; rep < 30; ++rep) {
        AtomSpace sa = AtomSpace::with_default_names(1 + rng() % 2);
        std::vector<std::string> bvars{"X", "Y"};
        AtomSpace sb(std::vector<std::string>(bvars.begin(), bvars.begin() + 1 + rng() % 2));
        LinearInequality a = random_valid(rng, sa);
        LinearInequality b = random_valid(rng, sb);
        LinearInequality ab = compound(a, b);

        auto va = vertex_values(a);
        auto vb = vertex_values(b);
        auto vab = vertex_values(ab);
        for (std::uint64_t mb = 0; mb < sb.atom_count(); ++mb)
            for (std::uint64_t ma = 0; ma < sa.atom_count(); ++ma)
                CHECK(vab[(mb << sa.n()) | ma] == va[ma] * vb[mb]);

        // Commutativity up to normalization and variable order: compare on
        // vertex values after aligning variable order.
        LinearInequality ba = compound(b, a);
        auto vba = vertex_values(ba);
        for (std::uint64_t mb = 0; mb < sb.atom_count(); ++mb)
            for (std::uint64_t ma = 0; ma < sa.atom_count(); ++ma)
                CHECK(vba[(ma << sb.n()) | mb] == vab[(mb << sa.n()) | ma]);

        CHECK(std::holds_alternative<Valid>(is_valid(ab)));
    }

    // Associativity on fixed small operands.
    AtomSpace sx({"X"}), sy({"Y"}), sz({"Z"});
    std::mt19937_64 rng2(77);
    LinearInequality x = random_valid(rng2, sx);
    LinearInequality y = random_valid(rng2, sy);
    LinearInequality z = random_valid(rng2, sz);
    CHECK(normalize(compound(compound(x, y), z)) == normalize(compound(x, compound(y, z))));
}

TEST_CASE("escalator_lift") {
    LinearInequality frechet = parse2("1 - P(A) - P(B) + P(A&B) >= 0");
    LinearInequality lifted = escalator_lift(frechet, {"C"});
    CHECK(lifted.space.n() == 3);
    CHECK(lifted.terms == frechet.terms);
    auto v = is_valid(lifted);
    CHECK(std::holds_alternative<Valid>(v));

    CHECK(escalator_lift(frechet, {}) == frechet);
    CHECK_THROWS_AS(escalator_lift(frechet, {"A"}), std::invalid_argument);
}

TEST_CASE("is_valid examples") {
    auto v1 = is_valid(parse2("1 - P(A) - P(B) + P(A&B) >= 0"));
    REQUIRE(std::holds_alternative<Valid>(v1));
    CHECK(std::get<Valid>(v1).tight == std::vector<std::uint64_t>{1, 2, 3});

    auto v2 = is_valid(parse2("1 - P(A) - P(B) >= 0"));
    REQUIRE(std::holds_alternative<Invalid>(v2));
    CHECK(std::get<Invalid>(v2).witness == 3);
    CHECK(std::get<Invalid>(v2).value == -1);

    auto v3 = is_valid(parse2("1 >= 0"));
    REQUIRE(std::holds_alternative<Valid>(v3));
    CHECK(std::get<Valid>(v3).tight.empty());

    LinearInequality big{AtomSpace::with_default_names(21), {{0u, Rat(1)}}};
    CHECK_THROWS_AS(is_valid(big), GuardError);
}

TEST_CASE("vertex_values equals the per-atom reference") {
    std::mt19937_64 rng(2718);
    for (int rep = 0; rep < 40; ++rep) {
        AtomSpace s = AtomSpace::with_default_names(1 + rng() % 6);
        LinearInequality ineq = random_valid(rng, s);
        CHECK(vertex_values(ineq) == vertex_values_reference(ineq));
    }
}

TEST_CASE("inequality text form roundtrips") {
    std::mt19937_64 rng(1615);
    for (int rep = 0; rep < 60; ++rep) {
        AtomSpace s = AtomSpace::with_default_names(1 + rng() % 5);
        LinearInequality ineq = normalize(random_valid(rng, s));
        CHECK(parse_inequality(inequality_str(ineq), s) == ineq);
    }
    CHECK(inequality_str(parse2("1 - P(A) - P(B) + P(A&B) >= 0")) ==
          "1 - P(A) - P(B) + P(A&B) >= 0");
    CHECK(inequality_str(parse2("2*P(A) - P(A&B) >= 0")) == "2*P(A) - P(A&B) >= 0");
}

TEST_CASE("generate_family includes the displayed facet lists") {
    auto fam2 = generate_family(kS2, 2, 50);
    for (const auto& f : frechet_facets(kS2)) CHECK(contains(fam2, f));

    auto fam3 = generate_family(kS3, 2, 300);
    std::vector<LinearInequality> sixteen = {
        parse3("1 - P(A) - P(B) + P(A&B) >= 0"),
        parse3("P(A) - P(A&B) >= 0"),
        parse3("P(B) - P(A&B) >= 0"),
        parse3("P(A&B) >= 0"),
        parse3("1 - P(A) - P(C) + P(A&C) >= 0"),
        parse3("P(A) - P(A&C) >= 0"),
        parse3("P(C) - P(A&C) >= 0"),
        parse3("P(A&C) >= 0"),
        parse3("1 - P(B) - P(C) + P(B&C) >= 0"),
        parse3("P(B) - P(B&C) >= 0"),
        parse3("P(C) - P(B&C) >= 0"),
        parse3("P(B&C) >= 0"),
        parse3("1 - P(A) - P(B) - P(C) + P(A&B) + P(A&C) + P(B&C) >= 0"),
        parse3("P(A) - P(A&B) - P(A&C) + P(B&C) >= 0"),
        parse3("P(B) - P(A&B) + P(A&C) - P(B&C) >= 0"),
        parse3("P(C) + P(A&B) - P(A&C) - P(B&C) >= 0"),
    };
    for (const auto& f : sixteen) {
        CAPTURE(inequality_str(f));
        CHECK(contains(fam3, f));
    }
}

TEST_CASE("generate_family: budget prefixes, determinism, soundness") {
    auto fam_a = generate_family(kS3, 2, 40);
    auto fam_b = generate_family(kS3, 2, 120);
    REQUIRE(fam_a.size() == 40);
    for (std::size_t i = 0; i < fam_a.size(); ++i) CHECK(fam_a[i] == fam_b[i]);

    auto again = generate_family(kS3, 2, 120);
    CHECK(again.size() == fam_b.size());
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == fam_b[i]);

    for (const auto& f : fam_b) {
        CAPTURE(inequality_str(f));
        CHECK(std::holds_alternative<Valid>(is_valid(f)));
        CHECK(f.degree() <= 2);
    }

    // No duplicates after normalization.
    for (std::size_t i = 0; i < fam_b.size(); ++i)
        for (std::size_t j = i + 1; j < fam_b.size(); ++j) CHECK(!(fam_b[i] == fam_b[j]));
}
