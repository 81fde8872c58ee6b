#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace probound {

// All algebraic paths in this project use exact rationals. GMP's mpq_class
// keeps values canonical (lowest terms, positive denominator) as long as
// every value is built through arithmetic or through the helpers below.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p/q", integers, and decimal literals ("0.4" becomes 2/5 exactly).
std::optional<Rat> parse_rat(std::string_view text);

// "p/q", or just "p" when the denominator is one.
std::string rat_str(const Rat& q);

double rat_double(const Rat& q);

}  // namespace probound
