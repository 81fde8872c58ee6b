#include "probound/inequality.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include "probound/errors.hpp"
#include "probound/kernels.hpp"

namespace probound {

int LinearInequality::degree() const {
    int d = 0;
    for (const auto& [mask, c] : terms) d = std::max(d, std::popcount(mask));
    return d;
}

Rat LinearInequality::coeff(std::uint32_t mask) const {
    for (const auto& [m, c] : terms)
        if (m == mask) return c;
    return Rat(0);
}

Rat LinearInequality::value_at(std::uint64_t atom) const {
    Rat v(0);
    for (const auto& [mask, c] : terms)
        if ((atom & mask) == mask) v += c;
    return v;
}

namespace {

LinearInequality from_term_map(AtomSpace space, const std::map<std::uint32_t, Rat>& m) {
    LinearInequality out{std::move(space), {}};
    for (const auto& [mask, c] : m)
        if (c != 0) out.terms.emplace_back(mask, c);
    std::sort(out.terms.begin(), out.terms.end(),
              [](const auto& a, const auto& b) { return term_less(a.first, b.first); });
    return out;
}

}  // namespace

LinearInequality normalize(LinearInequality ineq) {
    if (ineq.terms.empty()) return ineq;
    Int lcm(1);
    for (const auto& [mask, c] : ineq.terms) {
        Int den = c.get_den();
        lcm = lcm / gcd(lcm, den) * den;
    }
    Int g(0);
    for (auto& [mask, c] : ineq.terms) {
        c *= lcm;
        c.canonicalize();
        g = gcd(g, c.get_num());
    }
    if (g > 1)
        for (auto& [mask, c] : ineq.terms) {
            c /= g;
            c.canonicalize();
        }
    return ineq;
}

bool inequality_less(const LinearInequality& a, const LinearInequality& b) {
    const std::size_t n = std::min(a.terms.size(), b.terms.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.terms[i].first != b.terms[i].first)
            return term_less(a.terms[i].first, b.terms[i].first);
        int c = cmp(a.terms[i].second, b.terms[i].second);
        if (c != 0) return c < 0;
    }
    return a.terms.size() < b.terms.size();
}

std::string inequality_str(const LinearInequality& ineq) {
    if (ineq.terms.empty()) return "0 >= 0";
    MonotoneBasis names(ineq.space, ineq.space.n());
    std::string out;
    bool first = true;
    for (const auto& [mask, c] : ineq.terms) {
        const bool neg = c < 0;
        Rat mag = neg ? Rat(-c) : c;
        if (first) {
            if (neg) out += '-';
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        if (mask == 0) {
            out += rat_str(mag);
        } else {
            if (mag != 1) out += rat_str(mag) + "*";
            out += names.term_str(mask);
        }
    }
    return out + " >= 0";
}

namespace {

struct IneqParser {
    const std::string& s;
    std::size_t pos = 0;
    const AtomSpace& space;

    void ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw InputError(msg + " at position " + std::to_string(pos), pos);
    }

    bool eat(std::string_view tok) {
        ws();
        if (s.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    Rat number() {
        ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
            ++pos;
        auto r = parse_rat(std::string_view(s).substr(start, pos - start));
        if (!r) fail("expected a number");
        return *r;
    }

    std::uint32_t term_mask() {
        if (!eat("P(")) fail("expected P(");
        std::uint32_t mask = 0;
        do {
            ws();
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            int idx = space.var_index(name);
            if (idx < 0) fail("unknown variable '" + name + "'");
            mask |= 1u << idx;
        } while (eat("&"));
        if (!eat(")")) fail("expected ')'");
        return mask;
    }

    LinearInequality parse() {
        std::map<std::uint32_t, Rat> acc;
        bool neg = eat("-");
        for (;;) {
            Rat c(1);
            ws();
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                c = number();
                if (eat("*")) {
                    acc[term_mask()] += neg ? -c : c;
                } else {
                    acc[0] += neg ? -c : c;
                }
            } else {
                acc[term_mask()] += neg ? Rat(-1) : Rat(1);
            }
            if (eat("+"))
                neg = false;
            else if (eat("-"))
                neg = true;
            else
                break;
        }
        if (!eat(">=")) fail("expected '>='");
        ws();
        if (!eat("0")) fail("expected '0'");
        ws();
        if (pos != s.size()) fail("trailing input");
        return from_term_map(space, acc);
    }
};

}  // namespace

LinearInequality parse_inequality(const std::string& line, const AtomSpace& space) {
    IneqParser p{line, 0, space};
    return p.parse();
}

std::vector<Rat> vertex_values(const LinearInequality& ineq) {
    std::vector<Rat> v(ineq.space.atom_count(), Rat(0));
    for (const auto& [mask, c] : ineq.terms) v[mask] = c;
    kernels::zeta_subset(v, ineq.space.n());
    return v;
}

std::vector<Rat> vertex_values_reference(const LinearInequality& ineq) {
    std::vector<Rat> v;
    v.reserve(ineq.space.atom_count());
    for (std::uint64_t m = 0; m < ineq.space.atom_count(); ++m)
        v.push_back(ineq.value_at(m));
    return v;
}

LinearInequality from_vertex_values(const AtomSpace& space, std::vector<Rat> values) {
    if (values.size() != space.atom_count())
        throw std::invalid_argument("from_vertex_values: size mismatch");
    kernels::moebius_subset(values, space.n());
    std::map<std::uint32_t, Rat> acc;
    for (std::uint32_t m = 0; m < values.size(); ++m)
        if (values[m] != 0) acc[m] = values[m];
    return from_term_map(space, acc);
}

// ---------------------------------------------------------------------------
// Symmetric functions
// ---------------------------------------------------------------------------

namespace {

void check_spec(const SymmetricSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("symmetric spec: need n >= 1");
    if (spec.constants.empty())
        throw std::invalid_argument("symmetric spec: no defining constants");
    for (std::size_t i = 0; i < spec.constants.size(); ++i) {
        if (spec.constants[i] < 0 || spec.constants[i] > spec.n)
            throw std::invalid_argument("symmetric spec: constant out of range");
        if (i && spec.constants[i] <= spec.constants[i - 1])
            throw std::invalid_argument("symmetric spec: constants must be increasing");
    }
}

std::vector<Int> parity_values(const SymmetricSpec& spec) {
    std::vector<Int> f;
    f.reserve(static_cast<std::size_t>(spec.n) + 1);
    for (int k = 0; k <= spec.n; ++k) {
        Int v(1);
        for (int a : spec.constants) v *= Int(a - k);
        f.push_back(v);
    }
    return f;
}

}  // namespace

ParityResult parity_check(const SymmetricSpec& spec) {
    check_spec(spec);
    auto f = parity_values(spec);
    int first_pos = -1, first_neg = -1;
    for (int k = 0; k <= spec.n; ++k) {
        if (f[static_cast<std::size_t>(k)] > 0 && first_pos < 0) first_pos = k;
        if (f[static_cast<std::size_t>(k)] < 0 && first_neg < 0) first_neg = k;
    }
    if (first_pos >= 0 && first_neg >= 0) return ParityFail{first_pos, first_neg};
    if (first_pos < 0 && first_neg < 0) return ParityDegenerate{};
    return ParityPass{first_pos >= 0 ? +1 : -1};
}

std::vector<Rat> symmetric_coeffs(const SymmetricSpec& spec) {
    check_spec(spec);
    auto f = parity_values(spec);
    std::vector<Rat> g;
    g.reserve(f.size());
    for (const Int& v : f) g.push_back(Rat(abs(v)));
    std::vector<Rat> coeffs;
    coeffs.reserve(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        coeffs.push_back(g[0]);
        for (std::size_t i = 0; i + 1 < g.size() - j; ++i) g[i] = g[i + 1] - g[i];
    }
    return coeffs;
}

namespace {

// Coefficient c_j applied to every size-j subset of the block's variables.
LinearInequality instantiate_symmetric(const std::vector<Rat>& coeffs,
                                       const AtomSpace& space, std::uint32_t block) {
    std::map<std::uint32_t, Rat> acc;
    // Enumerate submasks of the block (including the empty one).
    std::uint32_t sub = block;
    for (;;) {
        int j = std::popcount(sub);
        if (j < static_cast<int>(coeffs.size()) && coeffs[static_cast<std::size_t>(j)] != 0)
            acc[sub] += coeffs[static_cast<std::size_t>(j)];
        if (sub == 0) break;
        sub = (sub - 1) & block;
    }
    return from_term_map(space, acc);
}

}  // namespace

LinearInequality synthesize(const SymmetricSpec& spec, const AtomSpace& space) {
    if (space.n() != spec.n)
        throw std::invalid_argument("synthesize: space size must match spec");
    auto parity = parity_check(spec);
    if (!std::holds_alternative<ParityPass>(parity))
        throw std::invalid_argument("synthesize: spec fails the uniform parity condition");
    auto coeffs = symmetric_coeffs(spec);
    std::uint32_t all = static_cast<std::uint32_t>(space.atom_count() - 1);
    return normalize(instantiate_symmetric(coeffs, space, all));
}

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

LinearInequality negate_variable(const LinearInequality& ineq, int var) {
    const std::uint32_t bit = 1u << var;
    std::map<std::uint32_t, Rat> acc;
    for (const auto& [mask, c] : ineq.terms) {
        if (mask & bit) {
            // P(S) -> P(S \ var) - P(S)
            acc[mask & ~bit] += c;
            acc[mask] -= c;
        } else {
            acc[mask] += c;
        }
    }
    return from_term_map(ineq.space, acc);
}

LinearInequality permute_variables(const LinearInequality& ineq,
                                   const std::vector<int>& perm) {
    if (perm.size() != static_cast<std::size_t>(ineq.space.n()))
        throw std::invalid_argument("permute_variables: permutation size mismatch");
    std::map<std::uint32_t, Rat> acc;
    for (const auto& [mask, c] : ineq.terms) {
        std::uint32_t moved = 0;
        for (int i = 0; i < ineq.space.n(); ++i)
            if ((mask >> i) & 1) moved |= 1u << perm[static_cast<std::size_t>(i)];
        acc[moved] += c;
    }
    return from_term_map(ineq.space, acc);
}

std::variant<LinearInequality, OutOfSubspace> flip_transform(
    const LinearInequality& ineq, const std::vector<std::uint64_t>& atom_perm,
    std::optional<int> max_degree) {
    if (atom_perm.size() != ineq.space.atom_count())
        throw std::invalid_argument("flip_transform: permutation size mismatch");
    std::vector<Rat> values = vertex_values(ineq);
    std::vector<Rat> permuted(values.size());
    for (std::uint64_t m = 0; m < values.size(); ++m) permuted[m] = values[atom_perm[m]];
    LinearInequality out = from_vertex_values(ineq.space, std::move(permuted));
    if (max_degree && out.degree() > *max_degree) return OutOfSubspace{out.degree()};
    return out;
}

LinearInequality compound(const LinearInequality& a, const LinearInequality& b) {
    AtomSpace space;
    std::vector<std::pair<std::uint32_t, Rat>> bterms;
    if (a.space == b.space) {
        std::uint32_t support_a = 0, support_b = 0;
        for (const auto& [m, c] : a.terms) support_a |= m;
        for (const auto& [m, c] : b.terms) support_b |= m;
        if (support_a & support_b)
            throw std::invalid_argument("compound: operand supports overlap");
        space = a.space;
        bterms = b.terms;
    } else {
        for (const auto& v : b.space.vars())
            if (a.space.var_index(v) >= 0)
                throw std::invalid_argument("compound: variable sets overlap on '" + v + "'");
        std::vector<std::string> vars = a.space.vars();
        vars.insert(vars.end(), b.space.vars().begin(), b.space.vars().end());
        space = AtomSpace(std::move(vars));
        for (const auto& [m, c] : b.terms)
            bterms.emplace_back(m << a.space.n(), c);
    }
    std::map<std::uint32_t, Rat> acc;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : bterms) acc[ma | mb] += ca * cb;
    return from_term_map(std::move(space), acc);
}

LinearInequality escalator_lift(const LinearInequality& ineq,
                                const std::vector<std::string>& extra_vars) {
    if (extra_vars.empty()) return ineq;
    std::vector<std::string> vars = ineq.space.vars();
    for (const auto& v : extra_vars) {
        if (ineq.space.var_index(v) >= 0)
            throw std::invalid_argument("escalator_lift: variable '" + v + "' already present");
        vars.push_back(v);
    }
    return LinearInequality{AtomSpace(std::move(vars)), ineq.terms};
}

Validity is_valid(const LinearInequality& ineq) {
    if (ineq.space.n() > 20)
        throw GuardError("is_valid guard: more than 20 variables");
    std::vector<Rat> values = vertex_values(ineq);
    Valid res;
    for (std::uint64_t m = 0; m < values.size(); ++m) {
        if (values[m] < 0) return Invalid{m, values[m]};
        if (values[m] == 0) res.tight.push_back(m);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Family generation
// ---------------------------------------------------------------------------

namespace {

struct BaseSpec {
    SymmetricSpec spec;
    std::vector<Rat> coeffs;
    int degree;
};

// All parity-passing specs with n block variables whose synthesized degree
// lies in [1, max_degree], ordered by (n, constants).
std::vector<BaseSpec> enumerate_base_specs(int max_n, int max_degree) {
    std::vector<BaseSpec> out;
    for (int n = 1; n <= max_n; ++n) {
        for (std::uint32_t bits = 1; bits < (1u << (n + 1)); ++bits) {
            SymmetricSpec spec{n, {}};
            for (int a = 0; a <= n; ++a)
                if ((bits >> a) & 1) spec.constants.push_back(a);
            if (!std::holds_alternative<ParityPass>(parity_check(spec))) continue;
            auto coeffs = symmetric_coeffs(spec);
            int deg = 0;
            for (std::size_t j = 0; j < coeffs.size(); ++j)
                if (coeffs[j] != 0) deg = static_cast<int>(j);
            if (deg < 1 || deg > max_degree) continue;
            out.push_back(BaseSpec{std::move(spec), std::move(coeffs), deg});
        }
    }
    std::sort(out.begin(), out.end(), [](const BaseSpec& a, const BaseSpec& b) {
        if (a.spec.n != b.spec.n) return a.spec.n < b.spec.n;
        return a.spec.constants < b.spec.constants;
    });
    return out;
}

// A multiset of base specs forming the blocks of one compound.
struct BlockGroup {
    std::vector<std::size_t> specs;  // indices, non-decreasing
    int total_degree = 0;
    int total_vars = 0;
};

void enumerate_groups(const std::vector<BaseSpec>& base, int max_vars, int max_degree,
                      std::size_t first, BlockGroup& cur, std::vector<BlockGroup>& out) {
    if (!cur.specs.empty()) out.push_back(cur);
    for (std::size_t i = first; i < base.size(); ++i) {
        if (cur.total_degree + base[i].degree > max_degree) continue;
        if (cur.total_vars + base[i].spec.n > max_vars) continue;
        cur.specs.push_back(i);
        cur.total_degree += base[i].degree;
        cur.total_vars += base[i].spec.n;
        enumerate_groups(base, max_vars, max_degree, i, cur, out);
        cur.total_vars -= base[i].spec.n;
        cur.total_degree -= base[i].degree;
        cur.specs.pop_back();
    }
}

// Canonical group order: ascending (degree, variable count, spec list).
bool group_less(const std::vector<BaseSpec>& base, const BlockGroup& a, const BlockGroup& b) {
    if (a.total_degree != b.total_degree) return a.total_degree < b.total_degree;
    if (a.total_vars != b.total_vars) return a.total_vars < b.total_vars;
    const std::size_t n = std::min(a.specs.size(), b.specs.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& sa = base[a.specs[i]].spec;
        const auto& sb = base[b.specs[i]].spec;
        if (sa.n != sb.n) return sa.n < sb.n;
        if (sa.constants != sb.constants) return sa.constants < sb.constants;
    }
    return a.specs.size() < b.specs.size();
}

// Recursively choose disjoint variable sets for each block, then apply every
// negation pattern. Equal adjacent specs take increasing minimum elements so
// each unordered choice appears once.
void assign_blocks(const std::vector<BaseSpec>& base, const BlockGroup& group,
                   const AtomSpace& space, std::size_t depth, std::uint32_t used,
                   std::vector<std::uint32_t>& chosen,
                   std::vector<LinearInequality>& out) {
    const std::uint32_t all = static_cast<std::uint32_t>(space.atom_count() - 1);
    if (depth == group.specs.size()) {
        std::map<std::uint32_t, Rat> acc{{0u, Rat(1)}};
        LinearInequality prod = from_term_map(space, acc);
        for (std::size_t b = 0; b < group.specs.size(); ++b)
            prod = compound(prod, instantiate_symmetric(base[group.specs[b]].coeffs, space,
                                                        chosen[b]));
        std::uint32_t support = used;
        std::uint32_t neg = 0;
        for (;;) {  // all submasks of the support, including empty
            LinearInequality cur = prod;
            for (int v = 0; v < space.n(); ++v)
                if ((neg >> v) & 1) cur = negate_variable(cur, v);
            out.push_back(normalize(std::move(cur)));
            if (neg == support) break;
            neg = (neg - support) & support;  // next submask
        }
        return;
    }
    const int want = base[group.specs[depth]].spec.n;
    const bool same_as_prev =
        depth > 0 && group.specs[depth] == group.specs[depth - 1];
    const std::uint32_t prev_min = same_as_prev ? (chosen[depth - 1] & -chosen[depth - 1]) : 0;
    // Enumerate size-`want` submasks of the unused variables.
    std::uint32_t avail = all & ~used;
    for (std::uint32_t sub = avail;; sub = (sub - 1) & avail) {
        if (std::popcount(sub) == want && (!same_as_prev || (sub & -sub) > prev_min)) {
            chosen[depth] = sub;
            assign_blocks(base, group, space, depth + 1, used | sub, chosen, out);
        }
        if (sub == 0) break;
    }
}

}  // namespace

std::vector<LinearInequality> generate_family(const AtomSpace& space, int degree,
                                              std::size_t budget) {
    if (degree < 1 || degree > space.n())
        throw std::invalid_argument("generate_family: need 1 <= degree <= N");
    const auto base = enumerate_base_specs(space.n(), degree);
    BlockGroup scratch;
    std::vector<BlockGroup> groups;
    enumerate_groups(base, space.n(), degree, 0, scratch, groups);
    std::sort(groups.begin(), groups.end(),
              [&](const BlockGroup& a, const BlockGroup& b) { return group_less(base, a, b); });

    auto cmp = [](const LinearInequality& a, const LinearInequality& b) {
        return inequality_less(a, b);
    };
    std::set<LinearInequality, decltype(cmp)> seen(cmp);
    std::vector<LinearInequality> out;
    for (const BlockGroup& g : groups) {
        std::vector<LinearInequality> orbit;
        std::vector<std::uint32_t> chosen(g.specs.size());
        assign_blocks(base, g, space, 0, 0, chosen, orbit);
        std::sort(orbit.begin(), orbit.end(), cmp);
        for (auto& ineq : orbit) {
            if (out.size() >= budget) return out;
            if (ineq.terms.empty()) continue;
            if (seen.insert(ineq).second) out.push_back(std::move(ineq));
        }
        if (out.size() >= budget) return out;
    }
    return out;
}

}  // namespace probound
