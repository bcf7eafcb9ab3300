// Timing comparison of the serial reference kernels against the OpenMP
// versions: the pairwise link-event solver and the sweep runner.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <vector>

#include "manetsim/mobility.hpp"
#include "manetsim/rng.hpp"
#include "manetsim/sweep.hpp"

using namespace manet;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Trajectory> make_trajectories(int n, double horizon) {
    RngStream rng(42);
    FieldDim field{1500.0, 1500.0};
    std::vector<Trajectory> trajs;
    for (int i = 0; i < n; ++i) {
        Vec2 start{rng.uniform(0.0, field.width), rng.uniform(0.0, field.height)};
        trajs.push_back(
            random_waypoint_trajectory(rng, start, field, 5.0, 20.0, 10.0, horizon));
    }
    return trajs;
}

void bench_link_events() {
    std::printf("link_events kernel (range 250 m)\n");
    std::printf("%8s %10s %12s %12s %9s %9s\n", "nodes", "horizon", "serial[s]", "openmp[s]",
                "speedup", "events");
    for (int n : {100, 200, 400}) {
        double horizon = 2000.0;
        auto trajs = make_trajectories(n, horizon);
        auto t0 = Clock::now();
        auto serial = link_events_serial(trajs, 250.0, horizon);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto parallel = link_events(trajs, 250.0, horizon);
        double tp = seconds_since(t0);
        if (serial != parallel) {
            std::printf("MISMATCH between serial and parallel kernels\n");
            std::exit(1);
        }
        std::printf("%8d %9.0fs %12.4f %12.4f %8.2fx %9zu\n", n, horizon, ts, tp, ts / tp,
                    serial.size());
    }
}

void bench_sweep() {
    std::printf("\nsweep runner (10-node pdsr, 20 s runs, 8 seeds)\n");
    Scenario base;
    base.protocol = Protocol::kPdsr;
    base.nodes = 10;
    base.duration_s = 20.0;
    SweepSpec spec;
    spec.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
    spec.jobs = 1;
    auto t0 = Clock::now();
    run_sweep(base, spec, "/tmp/manetsim-bench-serial");
    double ts = seconds_since(t0);
    spec.jobs = omp_get_max_threads();
    t0 = Clock::now();
    run_sweep(base, spec, "/tmp/manetsim-bench-parallel");
    double tp = seconds_since(t0);
    std::printf("%8s %12s %12s %9s\n", "threads", "serial[s]", "openmp[s]", "speedup");
    std::printf("%8d %12.3f %12.3f %8.2fx\n", omp_get_max_threads(), ts, tp, ts / tp);
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());
    bench_link_events();
    bench_sweep();
    return 0;
}
