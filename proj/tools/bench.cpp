// Benchmarks the OpenMP kernels against their serial reference
// implementations. Results must agree exactly; only the wall time differs.

#include <omp.h>

#include <cstdio>
#include <functional>

#include "xorgames/clifford.hpp"
#include "xorgames/game.hpp"
#include "xorgames/rigidity.hpp"
#include "xorgames/rounding.hpp"
#include "xorgames/sdpsolve.hpp"

using namespace xorgames;

namespace {

void row(const char* name, const std::function<double(Exec)>& run) {
    const double t0 = omp_get_wtime();
    const double serialValue = run(Exec::serial);
    const double t1 = omp_get_wtime();
    const double ompValue = run(Exec::openmp);
    const double t2 = omp_get_wtime();
    const double ts = t1 - t0, tp = t2 - t1;
    std::printf("%-38s %9.3fs %9.3fs %7.2fx  %s\n", name, ts, tp, ts / tp,
                serialValue == ompValue ? "match" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-38s %10s %10s %8s  %s\n", "kernel", "serial", "openmp", "speedup",
                "result");

    const XorGame g2 = chsh_n(2);
    const XorGame g6 = chsh_n(6);
    const QuantumStrategy s2 = slofstra_strategy(2);
    const QuantumStrategy s8 = slofstra_strategy(8);

    row("rounding sweep d=8, 20000 trials", [&](Exec e) {
        return rounding_sweep(s2, g2, 8, 20000, 7, e).meanObjective;
    });
    row("sdp solve CHSH(6), 32 restarts", [&](Exec e) {
        SolveOptions opt;
        opt.seed = 42;
        opt.restarts = 32;
        opt.exec = e;
        return solve_bias(g6, opt).objective;
    });
    row("simulate CHSH(2), 2e6 rounds", [&](Exec e) {
        return simulate_rounds(s2, g2, 2000000, 11, 64, e).empiricalSuccess;
    });
    row("rigidity report CHSH(8)", [&](Exec e) {
        return embedded_chsh_report(s8, 8, e).meanCross;
    });
    row("qubit pairs CHSH(8) (detuned)", [&](Exec e) {
        const QuantumStrategy noisy = detuned_slofstra_strategy(8, 0.01);
        return build_qubit_pairs(noisy, 8, e).stage2Shift;
    });
    return 0;
}
