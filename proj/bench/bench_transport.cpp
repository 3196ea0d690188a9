// Benchmark of the transport kernel: serial reference vs the OpenMP
// version across k, plus the Monte Carlo classifier evaluation. Prints a
// table; the two kernels' outputs are also compared so a mismatch fails
// loudly.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "froc/classifier.hpp"
#include "froc/data_io.hpp"
#include "froc/transport.hpp"
#include "../tests/support/instances.hpp"

using namespace froc;
namespace ft = froc::testing;

namespace {

template <typename F>
double time_best(F&& fn, int reps) {
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%10s %14s %14s %8s\n", "k", "serial (ms)", "openmp (ms)", "speedup");

    SplitMix64 rng(2024);
    const double eps = 0.05;
    for (int k : {1000, 10000, 100000, 400000}) {
        const ft::InstancePair inst = ft::shared_knot_instance(rng, k);
        const int reps = k <= 10000 ? 20 : 5;

        TransportPlan serial, parallel;
        const double ts = time_best([&] { serial = fair_roc_serial(inst.up, inst.down, eps); }, reps);
        const double tp = time_best([&] { parallel = fair_roc(inst.up, inst.down, eps); }, reps);

        for (std::size_t i = 0; i < serial.decisions.size(); ++i) {
            if (!(serial.decisions[i].target == parallel.decisions[i].target) ||
                serial.decisions[i].kind != parallel.decisions[i].kind) {
                std::fprintf(stderr, "kernel mismatch at index %zu\n", i);
                return 1;
            }
        }
        std::printf("%10d %14.3f %14.3f %7.2fx\n", k, ts * 1e3, tp * 1e3, ts / tp);
    }

    // Monte Carlo evaluation throughput (predict draws per second).
    {
        SyntheticSpec spec;
        spec.cells[0][1] = {0.6, 0.12, 50000};
        spec.cells[0][0] = {0.4, 0.12, 50000};
        spec.cells[1][1] = {0.7, 0.12, 50000};
        spec.cells[1][0] = {0.3, 0.12, 50000};
        spec.seed = 7;
        const SyntheticResult syn = generate_synthetic(spec);
        const QueryGrid grid(10);
        const RocCurve up = empirical_roc(syn.data, 1, grid);
        const RocCurve down = empirical_roc(syn.data, 0, grid);
        const TransportPlan plan = fair_roc(up, down, 0.05);
        const RandomizedClassifier rc = construct_classifier(plan, up, down, 1, grid);
        RocCurve sim;
        const double t = time_best([&] { sim = simulate_curve(rc, syn.data, 1, 11); }, 3);
        const double draws = 100000.0 * grid.k;
        std::printf("\nclassifier Monte Carlo: %.1f M draws/s\n", draws / t / 1e6);
        if (sim.points.empty()) return 1;
    }
    return 0;
}
