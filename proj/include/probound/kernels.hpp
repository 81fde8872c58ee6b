#pragma once

#include <vector>

#include "probound/rational.hpp"

namespace probound::kernels {

// In-place lattice transforms over a vector of length 2^n. The butterfly
// variants run one layer per variable; each layer touches disjoint pairs, so
// the parallel versions split layers across threads. Results are exact and
// identical regardless of schedule.

// a[S] <- sum over m ⊇ S of a[m]
void zeta_superset_serial(std::vector<Rat>& a, int n);
void zeta_superset(std::vector<Rat>& a, int n);

// inverse of zeta_superset
void moebius_superset_serial(std::vector<Rat>& a, int n);
void moebius_superset(std::vector<Rat>& a, int n);

// a[m] <- sum over S ⊆ m of a[S]
void zeta_subset_serial(std::vector<Rat>& a, int n);
void zeta_subset(std::vector<Rat>& a, int n);

// inverse of zeta_subset
void moebius_subset_serial(std::vector<Rat>& a, int n);
void moebius_subset(std::vector<Rat>& a, int n);

// Quadratic-time references, one direct summation per output entry.
// Kept as independent oracles for the butterflies.
std::vector<Rat> zeta_superset_reference(const std::vector<Rat>& a, int n);
std::vector<Rat> zeta_subset_reference(const std::vector<Rat>& a, int n);

}  // namespace probound::kernels
