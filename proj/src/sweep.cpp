#include "manetsim/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace manet {

namespace {

struct GridPoint {
    std::string protocol;
    int nodes;
    std::string speed;
    double pause;
    std::uint64_t seed;
};

Scenario apply_point(Scenario sc, const GridPoint& g) {
    if (g.protocol == "tora")
        sc.protocol = Protocol::kTora;
    else if (g.protocol == "pdsr")
        sc.protocol = Protocol::kPdsr;
    else if (g.protocol == "dsr")
        sc.protocol = Protocol::kDsr;
    else
        throw ParseError("unknown protocol '" + g.protocol + "'");
    sc.nodes = g.nodes;
    if (!g.speed.empty() && g.speed != "base")
        Scenario::speed_class_range(g.speed, sc.speed_min, sc.speed_max);
    sc.pause_s = g.pause;
    sc.seed = g.seed;
    return sc;
}

struct Agg {
    double sum = 0.0, lo = 0.0, hi = 0.0;
    int n = 0;
    void add(double v) {
        if (n == 0) {
            lo = hi = v;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        sum += v;
        ++n;
    }
    std::optional<double> mean() const {
        return n ? std::optional<double>(sum / n) : std::nullopt;
    }
};

std::string num(const std::optional<double>& v) {
    if (!v)
        return "NM";
    char b[48];
    std::snprintf(b, sizeof(b), "%.5f", *v);
    return b;
}

std::optional<double> metric_value(const Metrics& m, const std::string& name) {
    if (name == "throughput_kBps")
        return m.throughput_kBps;
    if (name == "pct_delivered")
        return m.pct_delivered;
    if (name == "pdf")
        return m.pdf;
    if (name == "avg_delay_ms")
        return m.avg_delay_ms;
    if (name == "recv_eff")
        return m.eff.recv;
    if (name == "send_eff")
        return m.eff.send;
    if (name == "fwd_eff")
        return m.eff.fwd;
    if (name == "ctrl_bytes")
        return static_cast<double>(m.ctrl_bytes);
    return std::nullopt;
}

const char* const kPlotMetrics[] = {"throughput_kBps", "pct_delivered", "pdf",
                                    "avg_delay_ms",    "recv_eff",      "send_eff",
                                    "fwd_eff",         "ctrl_bytes"};

} // namespace

SweepOutcome run_sweep(const Scenario& base, const SweepSpec& spec, const std::string& out_dir) {
    if (spec.seeds.empty())
        throw std::invalid_argument("sweep needs at least one seed");
    std::vector<std::string> protocols =
        spec.protocols.empty() ? std::vector<std::string>{protocol_name(base.protocol)}
                               : spec.protocols;
    std::vector<int> nodes = spec.nodes.empty() ? std::vector<int>{base.nodes} : spec.nodes;
    std::vector<std::string> speeds =
        spec.speeds.empty() ? std::vector<std::string>{"base"} : spec.speeds;
    std::vector<double> pauses =
        spec.pauses.empty() ? std::vector<double>{base.pause_s} : spec.pauses;

    std::vector<GridPoint> grid;
    for (const auto& pr : protocols)
        for (int n : nodes)
            for (const auto& sp : speeds)
                for (double pa : pauses)
                    for (std::uint64_t sd : spec.seeds)
                        grid.push_back(GridPoint{pr, n, sp, pa, sd});

    std::vector<std::optional<RunResult>> results(grid.size());
    std::vector<std::string> errors(grid.size());
    if (spec.jobs > 0)
        omp_set_num_threads(spec.jobs);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.size()); ++i) {
        try {
            Scenario sc = apply_point(base, grid[static_cast<std::size_t>(i)]);
            results[static_cast<std::size_t>(i)] = run_scenario(sc);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    SweepOutcome out;
    std::ofstream res(out_dir + "/results.csv");
    res << kCsvHeader << "\n";
    std::ofstream fail(out_dir + "/failures.csv");
    fail << "protocol,nodes,speed_class,pause_s,seed,error\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (results[i]) {
            res << csv_row(results[i]->echo, results[i]->metrics) << "\n";
            out.results.push_back(*results[i]);
            ++out.rows;
        } else {
            const auto& g = grid[i];
            fail << g.protocol << ',' << g.nodes << ',' << g.speed << ',' << g.pause << ','
                 << g.seed << ',' << errors[i] << "\n";
            ++out.failures;
        }
    }

    // per-point aggregates over seeds
    std::ofstream agg(out_dir + "/aggregate.csv");
    agg << "protocol,nodes,speed_class,pause_s,metric,mean,min,max,n\n";
    std::map<std::tuple<std::string, int, std::string, double, std::string>, Agg> table;
    for (const auto& r : out.results) {
        for (const char* m : kPlotMetrics) {
            auto v = metric_value(r.metrics, m);
            if (v)
                table[{r.echo.protocol, r.echo.nodes, r.echo.speed_class, r.echo.pause_s, m}]
                    .add(*v);
        }
    }
    for (const auto& [key, a] : table) {
        const auto& [pr, n, sp, pa, m] = key;
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%d,%s,%g,%s,%.5f,%.5f,%.5f,%d", pr.c_str(), n,
                      sp.c_str(), pa, m.c_str(), a.sum / a.n, a.lo, a.hi, a.n);
        agg << line << "\n";
    }

    // plot tables: x = pause, one series per protocol
    std::set<double> pause_axis(pauses.begin(), pauses.end());
    for (const char* m : kPlotMetrics) {
        for (int n : nodes) {
            for (const auto& sp : speeds) {
                std::string cls = sp;
                if (sp == "base") {
                    Scenario tmp = base;
                    cls = tmp.speed_class();
                }
                char fname[160];
                std::snprintf(fname, sizeof(fname), "%s/plot_%s_n%d_%s.csv", out_dir.c_str(), m,
                              n, cls.c_str());
                std::ofstream plot(fname);
                plot << "pause_s";
                for (const auto& pr : protocols)
                    plot << ',' << pr << "_mean," << pr << "_min," << pr << "_max";
                plot << "\n";
                for (double pa : pause_axis) {
                    plot << pa;
                    for (const auto& pr : protocols) {
                        auto it = table.find({pr, n, cls, pa, m});
                        if (it == table.end()) {
                            plot << ",NM,NM,NM";
                        } else {
                            plot << ',' << num(it->second.mean()) << ',' << num(it->second.lo)
                                 << ',' << num(it->second.hi);
                        }
                    }
                    plot << "\n";
                }
            }
        }
    }
    return out;
}

} // namespace manet
