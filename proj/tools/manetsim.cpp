#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "manetsim/replay.hpp"
#include "manetsim/sim.hpp"
#include "manetsim/sweep.hpp"

using namespace manet;

namespace {

void write_row(const RunEcho& echo, const Metrics& m, const std::string& out_path) {
    std::string text = std::string(kCsvHeader) + "\n" + csv_row(echo, m) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream f(out_path);
        if (!f)
            throw std::runtime_error("cannot open output file: " + out_path);
        f << text;
    }
}

std::vector<std::uint64_t> parse_u64_list(const std::vector<std::string>& in) {
    std::vector<std::uint64_t> out;
    for (const auto& s : in)
        out.push_back(std::stoull(s));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic MANET simulator: DSR, preemptive DSR and TORA over an "
                 "abstract broadcast medium with random-waypoint mobility"};
    app.require_subcommand(1);

    // run
    std::string run_file, run_trace, run_out;
    std::int64_t run_seed = -1;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario file");
    run_cmd->add_option("scenario", run_file, "Scenario file")->required();
    run_cmd->add_option("--seed", run_seed, "Override the scenario seed");
    run_cmd->add_option("--trace", run_trace, "Write the per-event trace to FILE");
    run_cmd->add_option("--out", run_out, "Write the results CSV to FILE (default stdout)");

    // sweep
    std::string sweep_file, sweep_out;
    std::vector<int> sweep_nodes;
    std::vector<std::string> sweep_speeds, sweep_seeds, sweep_protocols;
    std::vector<double> sweep_pauses;
    int sweep_jobs = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter grid");
    sweep_cmd->add_option("scenario", sweep_file, "Base scenario file")->required();
    sweep_cmd->add_option("--nodes", sweep_nodes, "Node counts")->delimiter(',');
    sweep_cmd->add_option("--speed", sweep_speeds, "Speed classes (slow,fast)")->delimiter(',');
    sweep_cmd->add_option("--pause", sweep_pauses, "Pause times, seconds")->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep_seeds, "Seeds")->delimiter(',')->required();
    sweep_cmd->add_option("--protocols", sweep_protocols, "Protocols (default: scenario's)")
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();
    sweep_cmd->add_option("--jobs", sweep_jobs, "Worker threads (default: OpenMP)");

    // replay
    std::string replay_file, replay_out;
    auto* replay_cmd = app.add_subcommand("replay", "Recompute metrics from a trace file");
    replay_cmd->add_option("trace", replay_file, "Trace file")->required();
    replay_cmd->add_option("--out", replay_out, "Write the results CSV to FILE");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            Scenario sc = load_scenario(run_file);
            if (run_seed >= 0)
                sc.seed = static_cast<std::uint64_t>(run_seed);
            RunResult r = run_scenario(sc, run_trace);
            write_row(r.echo, r.metrics, run_out);
            if (!r.audit.ok) {
                std::cerr << "conservation audit FAILED: " << r.audit.unaccounted
                          << " unaccounted packets\n";
                return 2;
            }
        } else if (*sweep_cmd) {
            Scenario sc = load_scenario(sweep_file);
            SweepSpec spec;
            spec.nodes = sweep_nodes;
            spec.speeds = sweep_speeds;
            spec.pauses = sweep_pauses;
            spec.seeds = parse_u64_list(sweep_seeds);
            spec.protocols = sweep_protocols;
            spec.jobs = sweep_jobs;
            SweepOutcome out = run_sweep(sc, spec, sweep_out);
            std::printf("sweep: %d rows, %d failures -> %s\n", out.rows, out.failures,
                        sweep_out.c_str());
            if (out.failures > 0)
                return 3;
        } else if (*replay_cmd) {
            ReplayResult r = replay_trace_file(replay_file);
            write_row(r.echo, r.metrics, replay_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
