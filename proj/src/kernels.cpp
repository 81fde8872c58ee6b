#include "probound/kernels.hpp"

#include <cstdint>

namespace probound::kernels {

namespace {

constexpr int kParallelBits = 12;  // run layers in parallel from 4096 entries up

enum class Op { AddSuper, SubSuper, AddSub, SubSub };

// One butterfly layer for bit b. Writes touch only indices without bit b
// (superset direction) or with bit b (subset direction); reads come from the
// opposite half, so iterations are independent.
inline void layer(std::vector<Rat>& a, std::uint64_t bit, Op op, bool parallel) {
    const std::int64_t size = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t m = 0; m < size; ++m) {
        const auto u = static_cast<std::uint64_t>(m);
        switch (op) {
            case Op::AddSuper:
                if (!(u & bit)) a[u] += a[u | bit];
                break;
            case Op::SubSuper:
                if (!(u & bit)) a[u] -= a[u | bit];
                break;
            case Op::AddSub:
                if (u & bit) a[u] += a[u ^ bit];
                break;
            case Op::SubSub:
                if (u & bit) a[u] -= a[u ^ bit];
                break;
        }
    }
}

void run(std::vector<Rat>& a, int n, Op op, bool parallel) {
    for (int b = 0; b < n; ++b) layer(a, 1ull << b, op, parallel);
}

}  // namespace

void zeta_superset_serial(std::vector<Rat>& a, int n) { run(a, n, Op::AddSuper, false); }
void zeta_superset(std::vector<Rat>& a, int n) {
    run(a, n, Op::AddSuper, n >= kParallelBits);
}

void moebius_superset_serial(std::vector<Rat>& a, int n) { run(a, n, Op::SubSuper, false); }
void moebius_superset(std::vector<Rat>& a, int n) {
    run(a, n, Op::SubSuper, n >= kParallelBits);
}

void zeta_subset_serial(std::vector<Rat>& a, int n) { run(a, n, Op::AddSub, false); }
void zeta_subset(std::vector<Rat>& a, int n) { run(a, n, Op::AddSub, n >= kParallelBits); }

void moebius_subset_serial(std::vector<Rat>& a, int n) { run(a, n, Op::SubSub, false); }
void moebius_subset(std::vector<Rat>& a, int n) {
    run(a, n, Op::SubSub, n >= kParallelBits);
}

std::vector<Rat> zeta_superset_reference(const std::vector<Rat>& a, int n) {
    const std::uint64_t size = 1ull << n;
    std::vector<Rat> out(size, Rat(0));
    for (std::uint64_t s = 0; s < size; ++s)
        for (std::uint64_t m = 0; m < size; ++m)
            if ((m & s) == s) out[s] += a[m];
    return out;
}

std::vector<Rat> zeta_subset_reference(const std::vector<Rat>& a, int n) {
    const std::uint64_t size = 1ull << n;
    std::vector<Rat> out(size, Rat(0));
    for (std::uint64_t m = 0; m < size; ++m)
        for (std::uint64_t s = 0; s < size; ++s)
            if ((s & m) == s) out[m] += a[s];
    return out;
}

}  // namespace probound::kernels
