// Timing harness for the parallel kernels against their serial twins:
// lattice transforms, truth-table fill, vertex evaluation, and the tensor
// expansion of the clause matrices. Thread count follows OMP_NUM_THREADS.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "probound/clause_matrix.hpp"
#include "probound/formula.hpp"
#include "probound/inequality.hpp"
#include "probound/kernels.hpp"

using namespace probound;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_once(F&& f) {
    double t0 = now_seconds();
    f();
    return now_seconds() - t0;
}

std::vector<Rat> random_vector(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Rat> v(1ull << n);
    for (auto& x : v) x = rat(static_cast<long>(rng() % 1000), 97);
    return v;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n", name, serial,
                parallel, parallel > 0 ? serial / parallel : 0.0);
}

Expr::Ptr dense_expr(int n) {
    // Alternating ands/ors over all variables, negating every third one.
    std::vector<Expr::Ptr> groups;
    for (int i = 0; i + 1 < n; i += 2) {
        Expr::Ptr a = Expr::variable(i);
        Expr::Ptr b = Expr::variable(i + 1);
        if (i % 3 == 0) a = Expr::mk_not(a);
        groups.push_back(Expr::mk_or({a, b}));
    }
    return Expr::mk_and(std::move(groups));
}

}  // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 18;
    if (n < 12 || n > 22) {
        std::fprintf(stderr, "usage: %s [n between 12 and 22]\n", argv[0]);
        return 2;
    }
#ifdef _OPENMP
    std::printf("openmp threads: %d, n = %d (%llu atoms)\n", omp_get_max_threads(), n,
                static_cast<unsigned long long>(1ull << n));
#else
    std::printf("built without openmp, n = %d\n", n);
#endif

    {
        auto a = random_vector(n, 1);
        auto b = a;
        double ts = time_once([&] { kernels::zeta_superset_serial(a, n); });
        double tp = time_once([&] { kernels::zeta_superset(b, n); });
        if (!(a == b)) {
            std::fprintf(stderr, "zeta_superset mismatch\n");
            return 1;
        }
        report("zeta_superset", ts, tp);
    }
    {
        auto a = random_vector(n, 2);
        auto b = a;
        double ts = time_once([&] { kernels::moebius_subset_serial(a, n); });
        double tp = time_once([&] { kernels::moebius_subset(b, n); });
        if (!(a == b)) {
            std::fprintf(stderr, "moebius_subset mismatch\n");
            return 1;
        }
        report("moebius_subset", ts, tp);
    }
    {
        Expr::Ptr e = dense_expr(n);
        AtomBits ref;
        AtomBits fast;
        double ts = time_once([&] { ref = truth_table_reference(e, n); });
        double tp = time_once([&] { fast = truth_table(e, n); });
        if (!(ref == fast)) {
            std::fprintf(stderr, "truth_table mismatch\n");
            return 1;
        }
        report("truth_table", ts, tp);
    }
    {
        // Vertex evaluation of a synthesized inequality over n variables.
        AtomSpace space = AtomSpace::with_default_names(n);
        SymmetricSpec spec{n, {1, 2}};
        LinearInequality ineq = synthesize(spec, space);
        std::vector<Rat> ref, fast;
        double ts = time_once([&] { ref = vertex_values_reference(ineq); });
        double tp = time_once([&] { fast = vertex_values(ineq); });
        if (!(ref == fast)) {
            std::fprintf(stderr, "vertex_values mismatch\n");
            return 1;
        }
        report("vertex_values", ts, tp);
    }
    {
        int nm = std::min(n / 2, 9);
        std::vector<ClauseMatrix> rec, dir;
        double ts = time_once([&] { rec = clause_matrices_recursive(nm); });
        double tp = time_once([&] { dir = clause_matrices_direct(nm); });
        if (!(rec == dir)) {
            std::fprintf(stderr, "clause matrices mismatch\n");
            return 1;
        }
        std::printf("clause_matrices (N=%d)       recursive %6.3fs   direct %6.3fs\n", nm,
                    ts, tp);
    }
    return 0;
}
