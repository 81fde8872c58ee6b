#include "probound/atoms.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "probound/errors.hpp"
#include "probound/kernels.hpp"

namespace probound {

AtomSpace::AtomSpace(std::vector<std::string> vars) : vars_(std::move(vars)) {
    if (vars_.size() > 24)
        throw GuardError("atom space guard: more than 24 variables");
    for (std::size_t i = 0; i < vars_.size(); ++i)
        for (std::size_t j = i + 1; j < vars_.size(); ++j)
            if (vars_[i] == vars_[j])
                throw InputError("duplicate variable '" + vars_[i] + "'");
}

AtomSpace AtomSpace::with_default_names(int n) {
    if (n < 0 || n > 24) throw GuardError("atom space guard: need 0 <= n <= 24");
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
    return AtomSpace(std::move(names));
}

int AtomSpace::var_index(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

std::string AtomSpace::atom_str(std::uint64_t atom) const {
    std::string s(vars_.size(), '0');
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if ((atom >> i) & 1) s[i] = '1';
    return s;
}

bool AtomVector::is_measure() const {
    Rat sum(0);
    for (const Rat& e : entries) {
        if (e < 0) return false;
        sum += e;
    }
    return sum == 1;
}

AtomVector AtomVector::from_bits(const AtomSpace& s, const AtomBits& b) {
    AtomVector v(s);
    for (std::uint64_t m = 0; m < v.entries.size(); ++m)
        if (b.get(m)) v.entries[m] = 1;
    return v;
}

bool term_less(std::uint32_t a, std::uint32_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    while (a && b) {
        int la = std::countr_zero(a), lb = std::countr_zero(b);
        if (la != lb) return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return false;  // equal masks
}

MonotoneBasis::MonotoneBasis(AtomSpace s, int d) : space(std::move(s)), degree(d) {
    if (d < 0 || d > space.n())
        throw std::invalid_argument("monotone basis: bad degree");
    for (std::uint32_t mask = 0; mask < space.atom_count(); ++mask)
        if (std::popcount(mask) <= d) terms.push_back(mask);
    std::sort(terms.begin(), terms.end(), term_less);
}

std::string MonotoneBasis::term_str(std::uint32_t mask) const {
    if (mask == 0) return "1";
    std::string s = "P(";
    bool first = true;
    for (int i = 0; i < space.n(); ++i)
        if ((mask >> i) & 1) {
            if (!first) s += '&';
            s += space.var_name(i);
            first = false;
        }
    return s + ")";
}

std::vector<Rat> atoms_to_basis(const AtomVector& v, const MonotoneBasis& basis) {
    if (basis.degree != basis.space.n())
        throw std::invalid_argument("atoms_to_basis: full-degree basis required");
    std::vector<Rat> by_mask = v.entries;
    kernels::zeta_superset(by_mask, basis.space.n());
    std::vector<Rat> out;
    out.reserve(basis.terms.size());
    for (std::uint32_t t : basis.terms) out.push_back(by_mask[t]);
    return out;
}

AtomVector basis_to_atoms(const std::vector<Rat>& coeffs, const MonotoneBasis& basis) {
    if (basis.degree != basis.space.n())
        throw std::invalid_argument("basis_to_atoms: full-degree basis required");
    if (coeffs.size() != basis.terms.size())
        throw std::invalid_argument("basis_to_atoms: coefficient count mismatch");
    AtomVector v(basis.space);
    for (std::size_t i = 0; i < basis.terms.size(); ++i)
        v.entries[basis.terms[i]] = coeffs[i];
    kernels::moebius_superset(v.entries, basis.space.n());
    return v;
}

}  // namespace probound
