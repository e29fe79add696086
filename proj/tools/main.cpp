#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "ibps.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

void usage(std::FILE* to) {
    std::fputs(
        "usage:\n"
        "  ibps run --config FILE --out DIR [--measure]\n"
        "      advance the configured scenario, writing diagnostics.csv,\n"
        "      numbered field snapshots and summary.txt into DIR\n"
        "  ibps convergence --config FILE --grids N1,N2,... [--measure]\n"
        "  ibps convergence --config FILE --dts DT1,DT2,... [--measure]\n"
        "      grid or time-step refinement study; CSV on stdout, the last\n"
        "      listed resolution is the reference\n"
        "  ibps filter --in SNAPSHOT --calpha C --out SNAPSHOT\n"
        "      Helmholtz-filter a stored field with alpha derived from C\n"
        "\n"
        "exit status: 0 success, 2 configuration error, 3 numerical abort\n",
        to);
}

/// Flags of one subcommand: every option takes a value except --measure.
std::map<std::string, std::string> parse_flags(int argc, char** argv, int from) {
    std::map<std::string, std::string> flags;
    for (int i = from; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--", 0) != 0)
            throw ibps::ConfigError("unexpected argument '" + arg + "'");
        if (arg == "--measure") {
            flags[arg] = "1";
            continue;
        }
        if (i + 1 >= argc) throw ibps::ConfigError("flag '" + arg + "' needs a value");
        if (flags.count(arg)) throw ibps::ConfigError("duplicate flag '" + arg + "'");
        flags[arg] = argv[++i];
    }
    return flags;
}

const std::string& need(const std::map<std::string, std::string>& flags, const char* name) {
    auto it = flags.find(name);
    if (it == flags.end())
        throw ibps::ConfigError(std::string("missing required flag '") + name + "'");
    return it->second;
}

void reject_unknown(const std::map<std::string, std::string>& flags,
                    std::vector<std::string> known) {
    for (const auto& [key, value] : flags) {
        bool ok = false;
        for (const std::string& k : known) ok = ok || k == key;
        if (!ok) throw ibps::ConfigError("unknown flag '" + key + "'");
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw ibps::ConfigError("empty entry in list '" + text + "'");
        out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

int cmd_run(int argc, char** argv) {
    const auto flags = parse_flags(argc, argv, 2);
    reject_unknown(flags, {"--config", "--out", "--measure"});
    const ibps::RunConfig cfg = ibps::load_run_config(need(flags, "--config"));

    ibps::Scenario scenario = ibps::make_scenario(cfg);
    ibps::RunOptions opt;
    opt.dt = cfg.dt;
    opt.snapshot_every = cfg.snapshot_every;
    opt.c_alpha = cfg.c_alpha;
    opt.out_dir = need(flags, "--out");
    opt.plan_mode = flags.count("--measure") ? ibps::PlanMode::measure : ibps::PlanMode::estimate;
    if (!cfg.restart.empty()) {
        opt.t0 = ibps::apply_restart(scenario, ibps::read_snapshot(cfg.restart));
        if (cfg.t_end < opt.t0)
            throw ibps::ConfigError("t_end lies before the restart snapshot time");
    }
    opt.steps = ibps::steps_for(cfg.t_end - opt.t0, cfg.dt, false);

    const ibps::RunResult res = ibps::run_simulation(scenario, opt);
    std::printf("steps = %ld\nfinal_time = %.12g\nwall_seconds = %.3f\nmax_cfl = %.4g\n",
                res.steps_taken, res.time, res.wall_seconds, res.max_cfl);
    if (!res.records.empty()) {
        const ibps::DiagnosticsRecord& r = res.records.back();
        std::printf("final_energy = %.12g\nfinal_enstrophy = %.12g\nfinal_bc_residual = %.4g\n",
                    r.energy, r.enstrophy, r.bc_residual);
    }
    if (res.aborted) {
        std::fprintf(stderr, "run aborted: %s\n", res.abort_reason.c_str());
        return exit_numerical;
    }
    return exit_ok;
}

int cmd_convergence(int argc, char** argv) {
    const auto flags = parse_flags(argc, argv, 2);
    reject_unknown(flags, {"--config", "--grids", "--dts", "--measure"});
    const ibps::RunConfig cfg = ibps::load_run_config(need(flags, "--config"));
    const bool grids = flags.count("--grids") > 0;
    const bool dts = flags.count("--dts") > 0;
    if (grids == dts)
        throw ibps::ConfigError("pass exactly one of '--grids' or '--dts'");
    const ibps::PlanMode mode =
        flags.count("--measure") ? ibps::PlanMode::measure : ibps::PlanMode::estimate;

    ibps::ConvergenceTable table;
    if (grids) {
        std::vector<int> sizes;
        for (const std::string& item : split_list(flags.at("--grids")))
            sizes.push_back(ibps::detail::parse_int("--grids", item));
        table = ibps::spatial_convergence(cfg, sizes, mode);
        std::printf("N,error,slope\n");
    } else {
        std::vector<double> steps;
        for (const std::string& item : split_list(flags.at("--dts")))
            steps.push_back(ibps::detail::parse_double("--dts", item));
        table = ibps::temporal_convergence(cfg, steps, mode);
        std::printf("dt,error,slope\n");
    }
    for (const ibps::ConvergenceRow& row : table.rows)
        std::printf("%.12g,%.12g,%.12g\n", row.parameter, row.error, row.slope);
    std::printf("# fitted_slope = %.6g\n", table.fitted_slope);
    return exit_ok;
}

int cmd_filter(int argc, char** argv) {
    const auto flags = parse_flags(argc, argv, 2);
    reject_unknown(flags, {"--in", "--calpha", "--out"});
    const double c_alpha = ibps::detail::parse_double("--calpha", need(flags, "--calpha"));
    if (c_alpha <= 0.0) throw ibps::ConfigError("'--calpha' must be > 0");

    const ibps::Snapshot snap = ibps::read_snapshot(need(flags, "--in"));
    const ibps::Grid& g = snap.grid;
    const double alpha = ibps::alpha_from_c_alpha(c_alpha, g.l1, g);

    ibps::Transformer tr(g);
    ibps::SpectralField hat(g);
    ibps::PhysicalField field = snap.field();
    tr.forward(field, hat);
    const ibps::SpectralField filtered = ibps::helmholtz_filter(hat, alpha);
    tr.inverse(filtered, field);

    char c0[64], c1[64];
    std::snprintf(c0, sizeof c0, "c_alpha = %.17g", c_alpha);
    std::snprintf(c1, sizeof c1, "alpha = %.17g", alpha);
    ibps::write_snapshot(need(flags, "--out"), field, snap.time, snap.name, {c0, c1});
    std::printf("alpha = %.17g\n", alpha);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(stderr);
        return exit_config;
    }
    const std::string cmd = argv[1];
    try {
        if (cmd == "run") return cmd_run(argc, argv);
        if (cmd == "convergence") return cmd_convergence(argc, argv);
        if (cmd == "filter") return cmd_filter(argc, argv);
        if (cmd == "--help" || cmd == "help" || cmd == "-h") {
            usage(stdout);
            return exit_ok;
        }
        throw ibps::ConfigError("unknown subcommand '" + cmd + "'");
    } catch (const ibps::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    }
}
