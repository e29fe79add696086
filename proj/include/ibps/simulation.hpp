#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ibps/boundary.hpp"
#include "ibps/config.hpp"
#include "ibps/diagnostics.hpp"
#include "ibps/dynamics.hpp"
#include "ibps/filtering.hpp"
#include "ibps/scenarios.hpp"
#include "ibps/snapshot.hpp"

namespace ibps {

/// Knobs of one simulation run. An empty out_dir keeps the run purely in
/// memory; otherwise the directory receives diagnostics.csv, numbered field
/// snapshots and a summary.txt of flat key = value pairs.
struct RunOptions {
    double dt = 0.0;
    long steps = 0;
    double t0 = 0.0;
    int snapshot_every = 0; ///< steps between snapshots; 0 writes first and last only
    double c_alpha = 0.0;   ///< > 0 also writes Helmholtz-filtered vorticity snapshots
    std::string out_dir;
    PlanMode plan_mode = PlanMode::estimate;
    double steady_tol = 0.0; ///< > 0 tracks max|dw/dt| and records when it first drops below
    bool stop_when_steady = false;
    std::function<void(const DiagnosticsRecord&)> on_record;
};

/// What a run produced. records holds one row per completed step including
/// the initial state, identical to the diagnostics CSV.
struct RunResult {
    long steps_taken = 0;
    double time = 0.0;
    bool aborted = false;
    std::string abort_reason;
    double wall_seconds = 0.0;
    double wall_per_step = 0.0;
    TransformCounts transforms;
    double steady_time = -1.0;     ///< first time the steady residual dropped below tol
    double steady_residual = -1.0; ///< last measured max|dw/dt|
    double max_cfl = 0.0;
    std::vector<DiagnosticsRecord> records;
    SpectralField omega; ///< final vorticity (last finite state when aborted)
};

namespace detail {

inline std::string step_tag(long k) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%06ld", k);
    return buf;
}

inline std::string csv_row(const DiagnosticsRecord& r) {
    char buf[240];
    std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g", r.step,
                  r.time, r.energy, r.enstrophy, r.cfl, r.max_divergence, r.mean_vorticity,
                  r.bc_residual);
    return buf;
}

} // namespace detail

/// Advance a scenario opt.steps times from opt.t0, writing diagnostics for
/// the initial state and after every step. Periodic scenarios take the plain
/// pseudo-spectral path; windowed ones run the boundary conditioner in every
/// stage. The solution trajectory never depends on which outputs are
/// requested: diagnostics are computed from the stored state with a plain
/// velocity recovery, never by re-conditioning it.
inline RunResult run_simulation(const Scenario& s, const RunOptions& opt) {
    if (opt.dt <= 0.0) throw std::invalid_argument("time step must be positive");
    if (opt.steps < 0) throw std::invalid_argument("step count must be non-negative");
    const Grid& g = s.grid;
    const auto wall_start = std::chrono::steady_clock::now();

    Transformer tr(g, opt.plan_mode);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    const bool periodic = s.periodic();
    std::optional<BoundaryConditioner> cond;
    if (!periodic) cond.emplace(tr, s.conditioning);

    SpectralField w = s.omega0;
    SpectralField u1h(g), u2h(g);
    PhysicalField u1p(g), u2p(g), wp(g), wprev(g);

    bool moving = false;
    for (const ImmersedBody& b : s.conditioning.bodies)
        if (!b.motion.is_stationary) moving = true;
    PhysicalField mask = flow_mask(g, s.conditioning.window, s.conditioning.bodies, opt.t0);

    // Moving bodies get their numerical boundary built inside the stage
    // conditioner; prime it once on a throwaway copy so the initial record
    // can measure the surface residual too.
    if (!periodic && moving) {
        SpectralField scratch = w;
        (*cond)(opt.t0, scratch, u1h, u2h);
    }

    const bool write = !opt.out_dir.empty();
    std::ofstream csv;
    if (write) {
        std::filesystem::create_directories(opt.out_dir);
        csv.open(opt.out_dir + "/diagnostics.csv", std::ios::trunc);
        if (!csv) throw std::runtime_error("cannot open diagnostics.csv in " + opt.out_dir);
        csv << "step,time,E,Z,CFL,max_div,mean_vorticity,bc_residual\n";
    }

    const double stability = diffusion_stability_number(g, s.nu, opt.dt);
    if (stability >= rk4_diffusion_limit)
        std::fprintf(stderr,
                     "warning: explicit diffusion stability number %.3f is at or above the "
                     "limit %.3f; expect blow-up, reduce dt\n",
                     stability, rk4_diffusion_limit);

    RunResult res;
    res.records.reserve(std::size_t(opt.steps) + 1);
    res.omega = w;
    res.time = opt.t0;
    double good_time = opt.t0;

    auto diagnose = [&](long k, double t) {
        velocity_from_vorticity(w, u1h, u2h);
        tr.inverse(u1h, u1p);
        tr.inverse(u2h, u2p);
        tr.inverse(w, wp);
        if (moving) mask = flow_mask(g, s.conditioning.window, s.conditioning.bodies, t);
        double speed = 0.0;
        const double* a = u1p.data();
        const double* b = u2p.data();
        for (std::size_t m = 0; m < u1p.size(); ++m)
            speed = std::max(speed, std::max(std::abs(a[m]), std::abs(b[m])));
        DiagnosticsRecord r;
        r.step = k;
        r.time = t;
        r.energy = energy(u1p, u2p, mask);
        r.enstrophy = enstrophy(wp, mask);
        r.cfl = cfl_number(speed, opt.dt, g);
        r.max_divergence = max_divergence(tr, u1h, u2h);
        r.mean_vorticity = mean_value(w);
        r.bc_residual = 0.0;
        if (!periodic)
            for (std::size_t m = 0; m < s.conditioning.bodies.size(); ++m)
                r.bc_residual = std::max(
                    r.bc_residual,
                    foot_residual(u1p, u2p, cond->boundary(m), s.conditioning.bodies[m], g, t));
        return r;
    };

    auto emit = [&](const DiagnosticsRecord& r) {
        if (write) csv << detail::csv_row(r) << "\n";
        if (opt.on_record) opt.on_record(r);
        res.max_cfl = std::max(res.max_cfl, r.cfl);
        res.records.push_back(r);
    };

    auto write_fields = [&](long k, double t) {
        if (!write) return;
        const std::string tag = detail::step_tag(k);
        write_snapshot(opt.out_dir + "/omega_" + tag + ".fps", wp, t, "omega");
        write_snapshot(opt.out_dir + "/u1_" + tag + ".fps", u1p, t, "u1");
        write_snapshot(opt.out_dir + "/u2_" + tag + ".fps", u2p, t, "u2");
        if (opt.c_alpha > 0.0) {
            const double alpha = alpha_from_c_alpha(opt.c_alpha, g.l1, g);
            const SpectralField fh = helmholtz_filter(w, alpha);
            PhysicalField fp(g);
            tr.inverse(fh, fp);
            char c0[64], c1[64];
            std::snprintf(c0, sizeof c0, "c_alpha = %.17g", opt.c_alpha);
            std::snprintf(c1, sizeof c1, "alpha = %.17g", alpha);
            write_snapshot(opt.out_dir + "/omega_filtered_" + tag + ".fps", fp, t,
                           "omega_filtered", {c0, c1});
        }
        csv.flush();
    };

    emit(diagnose(0, opt.t0));
    write_fields(0, opt.t0);
    std::swap(wp, wprev);

    auto condition_stage = [&](double t, SpectralField& wf, SpectralField& v1, SpectralField& v2) {
        if (periodic)
            velocity_from_vorticity(wf, v1, v2);
        else
            (*cond)(t, wf, v1, v2);
    };

    long k = 1;
    for (; k <= opt.steps; ++k) {
        const double t_prev = opt.t0 + (k - 1) * opt.dt;
        rk4_step(tr, ws, sw, w, t_prev, opt.dt, s.nu, condition_stage);
        const double t = opt.t0 + k * opt.dt;

        if (has_non_finite(w)) {
            res.aborted = true;
            res.abort_reason = "non-finite vorticity at step " + std::to_string(k);
            std::fprintf(stderr, "abort: %s; flushing the last finite state\n",
                         res.abort_reason.c_str());
            if (write) {
                tr.inverse(res.omega, wp);
                write_snapshot(opt.out_dir + "/omega_" + detail::step_tag(k - 1) + ".fps", wp,
                               good_time, "omega", {"last finite state before abort"});
                csv.flush();
            }
            break;
        }

        const DiagnosticsRecord r = diagnose(k, t);
        bool steady_now = false;
        if (opt.steady_tol > 0.0) {
            // Stationarity measure: the largest pointwise vorticity change
            // per unit time over one step, max|w(t+dt) - w(t)| / dt.
            double diff = 0.0;
            const double* cur = wp.data();
            const double* prev = wprev.data();
            for (std::size_t m = 0; m < wp.size(); ++m)
                diff = std::max(diff, std::abs(cur[m] - prev[m]));
            res.steady_residual = diff / opt.dt;
            if (res.steady_residual < opt.steady_tol) {
                steady_now = true;
                if (res.steady_time < 0.0) res.steady_time = t;
            }
        }
        emit(r);
        res.omega = w;
        good_time = t;
        res.steps_taken = k;
        res.time = t;

        const bool stopping = (k == opt.steps) || (opt.stop_when_steady && steady_now);
        if ((opt.snapshot_every > 0 && k % opt.snapshot_every == 0) || stopping)
            write_fields(k, t);
        std::swap(wp, wprev);
        if (stopping && k != opt.steps) break;
    }

    res.transforms = tr.counts();
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    res.wall_per_step = res.steps_taken > 0 ? res.wall_seconds / double(res.steps_taken) : 0.0;

    if (write) {
        std::ofstream summary(opt.out_dir + "/summary.txt", std::ios::trunc);
        summary << "steps = " << res.steps_taken << "\n";
        char buf[64];
        auto put = [&summary, &buf](const char* key, double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            summary << key << " = " << buf << "\n";
        };
        put("final_time", res.time);
        put("wall_seconds", res.wall_seconds);
        put("wall_per_step", res.wall_per_step);
        summary << "fft_nonpadded = " << res.transforms.nonpadded << "\n";
        summary << "fft_padded = " << res.transforms.padded << "\n";
        put("max_cfl", res.max_cfl);
        put("diffusion_stability", stability);
        summary << "aborted = " << (res.aborted ? 1 : 0) << "\n";
        if (res.aborted) summary << "abort_reason = " << res.abort_reason << "\n";
        if (opt.steady_tol > 0.0) {
            put("steady_residual", res.steady_residual);
            put("steady_time", res.steady_time);
        }
    }
    return res;
}

/// Initial state and start time taken from a stored vorticity snapshot.
/// The snapshot grid must match the scenario grid exactly.
inline double apply_restart(Scenario& s, const Snapshot& snap) {
    if (!(snap.grid == s.grid))
        throw ConfigError("restart snapshot grid does not match the scenario grid");
    if (snap.name != "omega")
        throw ConfigError("restart expects an omega snapshot, got field '" + snap.name + "'");
    s.omega0 = detail::spectral_state(s.grid, snap.field());
    return snap.time;
}

/// Build the scenario a validated config describes, applying every override
/// that was given and the published defaults otherwise.
inline Scenario make_scenario(const RunConfig& c) {
    const bool physical_band = c.margin > 0.0;
    if (physical_band && c.scenario != "dipole" && c.scenario != "dipole-periodic")
        throw ConfigError("physical 'margin'/'rise' overrides apply to dipole scenarios only");

    Scenario s;
    if (c.scenario == "taylor-green") {
        s = taylor_green_scenario(c.n, c.nu > 0.0 ? c.nu : 0.01);
    } else if (c.scenario == "dipole" || c.scenario == "dipole-periodic") {
        DipoleParams p;
        if (c.omega_e > 0.0) p.omega_e = c.omega_e;
        if (c.r0 > 0.0) p.r0 = c.r0;
        if (c.half_width > 0.0) p.half_width = c.half_width;
        if (c.nu > 0.0) p.nu = c.nu;
        if (c.margin_cells >= 0) p.margin_cells = c.margin_cells;
        if (c.rise_cells >= 0) p.rise_cells = c.rise_cells;
        if (physical_band) {
            p.margin = c.margin;
            p.rise = c.rise;
        }
        if (c.scenario == "dipole")
            s = dipole_scenario(p, c.n, c.domain_length > 0.0 ? c.domain_length : 0.0);
        else
            s = dipole_periodic_scenario(p, c.n, c.domain_length > 0.0 ? c.domain_length : 2.0);
    } else if (c.scenario == "cylinder") {
        CylinderParams p;
        if (c.diameter > 0.0) p.diameter = c.diameter;
        if (c.frequency > 0.0) p.frequency = c.frequency;
        if (c.amplitude > 0.0) p.amplitude = c.amplitude;
        if (c.nu > 0.0) p.nu = c.nu;
        s = cylinder_scenario(p, c.n, c.margin_cells >= 0 ? c.margin_cells : 8,
                              c.rise_cells >= 0 ? c.rise_cells : 6);
    } else if (c.scenario == "cavity") {
        CavityParams p;
        if (c.lid_speed > 0.0) p.lid_speed = c.lid_speed;
        if (c.side > 0.0) p.side = c.side;
        if (c.nu > 0.0) p.nu = c.nu;
        if (c.active_cells > 0) p.active_cells = c.active_cells;
        if (c.wall_cells > 0) p.wall_cells = c.wall_cells;
        if (c.lid_cells > 0) p.lid_cells = c.lid_cells;
        if (c.channel_cells > 0) p.channel_cells = c.channel_cells;
        if (c.margin_cells >= 0) p.margin_cells = c.margin_cells;
        if (c.rise_cells >= 0) p.rise_cells = c.rise_cells;
        s = cavity_scenario(p, c.n);
    } else {
        throw ConfigError("unknown scenario '" + c.scenario + "'");
    }
    if (c.order != -1) s.conditioning.order = c.order;
    if (c.repetitions != -1) s.conditioning.repetitions = c.repetitions;
    return s;
}

/// Steps covering [0, t_end]. When t_end is an integer multiple of dt (to a
/// relative 1e-9) that exact count is used; otherwise, with exact = false,
/// the run extends to the first step boundary at or past t_end, and with
/// exact = true the mismatch is an error (convergence studies must compare
/// states at identical times).
inline long steps_for(double t_end, double dt, bool exact) {
    const double raw = t_end / dt;
    const long rounded = std::llround(raw);
    if (std::abs(rounded * dt - t_end) <= 1e-9 * std::max(dt, t_end)) return rounded;
    if (exact) throw ConfigError("t_end must be an integer multiple of dt for this study");
    return static_cast<long>(std::ceil(raw));
}

struct ConvergenceRow {
    double parameter = 0.0; ///< grid size N or time step dt
    double error = 0.0;     ///< normalized error against the reference run
    double slope = 0.0;     ///< local order between this row and the next; NaN on the last
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double fitted_slope = 0.0; ///< least-squares slope of log error vs log parameter
};

namespace detail {

inline double fit_log_slope(const std::vector<ConvergenceRow>& rows) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const ConvergenceRow& r : rows) {
        const double x = std::log(r.parameter), y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = double(rows.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline void local_slopes(std::vector<ConvergenceRow>& rows) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        rows[i].slope = std::log(rows[i].error / rows[i + 1].error) /
                        std::log(rows[i].parameter / rows[i + 1].parameter);
    if (!rows.empty()) rows.back().slope = std::nan("");
}

} // namespace detail

/// Grid-refinement study: run the configured scenario on every grid size
/// with one shared time step, box and physical window band (all taken from
/// the coarsest grid), then compare each run against the spectrally
/// restricted finest one at the shared active-region mask.
inline ConvergenceTable spatial_convergence(const RunConfig& base, std::vector<int> grids,
                                            PlanMode plan_mode = PlanMode::estimate) {
    std::sort(grids.begin(), grids.end());
    grids.erase(std::unique(grids.begin(), grids.end()), grids.end());
    if (grids.size() < 2) throw ConfigError("grid study needs at least two distinct sizes");
    const long steps = steps_for(base.t_end, base.dt, true);

    RunConfig c0 = base;
    c0.n = grids.front();
    const Scenario coarse = make_scenario(c0);

    std::vector<Scenario> scens;
    std::vector<SpectralField> finals;
    for (int n : grids) {
        RunConfig c = base;
        c.n = n;
        c.domain_length = coarse.grid.l1;
        if (coarse.conditioning.window.rise > 0.0) {
            // Pin the flow-side edge of the window band, but let the rise
            // width shrink with the grid (a fixed cell count): refinement
            // then sharpens the wall rather than resolving one fixed smooth
            // profile, and the error is dominated by the O(dx) motion of
            // the effective wall position, the regime the first-order rate
            // describes. The flow region itself is identical on every grid.
            const double wall_depth =
                coarse.conditioning.window.margin + coarse.conditioning.window.rise;
            const double cells = coarse.conditioning.window.rise / coarse.grid.dx1();
            c.rise = cells * coarse.grid.l1 / n;
            c.margin = wall_depth - c.rise;
        }
        Scenario s = make_scenario(c);
        RunOptions o;
        o.dt = base.dt;
        o.steps = steps;
        o.plan_mode = plan_mode;
        RunResult r = run_simulation(s, o);
        if (r.aborted)
            throw std::runtime_error("grid study run aborted on n = " + std::to_string(n) + ": " +
                                     r.abort_reason);
        finals.push_back(std::move(r.omega));
        scens.push_back(std::move(s));
    }

    const double t_end = steps * base.dt;
    ConvergenceTable table;
    for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
        const Grid& gi = scens[i].grid;
        const SpectralField ref_hat = restrict_spectrum(finals.back(), gi);
        Transformer tri(gi);
        PhysicalField ref(gi), got(gi);
        tri.inverse(ref_hat, ref);
        tri.inverse(finals[i], got);
        const PhysicalField mask =
            flow_mask(gi, scens[i].conditioning.window, scens[i].conditioning.bodies, t_end);
        table.rows.push_back({double(grids[i]), error_norm(ref, got, mask), 0.0});
    }
    detail::local_slopes(table.rows);
    table.fitted_slope = detail::fit_log_slope(table.rows);
    return table;
}

/// Time-step study on one grid: every dt must divide t_end exactly, the
/// smallest dt in the list is the reference, and errors are measured in the
/// final vorticity over the active region.
inline ConvergenceTable temporal_convergence(const RunConfig& base, std::vector<double> dts,
                                             PlanMode plan_mode = PlanMode::estimate) {
    std::sort(dts.begin(), dts.end(), std::greater<>());
    dts.erase(std::unique(dts.begin(), dts.end()), dts.end());
    if (dts.size() < 2) throw ConfigError("time-step study needs at least two distinct steps");

    const Scenario s = make_scenario(base);
    Transformer tr(s.grid);
    std::vector<PhysicalField> finals;
    for (double dt : dts) {
        RunOptions o;
        o.dt = dt;
        o.steps = steps_for(base.t_end, dt, true);
        o.plan_mode = plan_mode;
        RunResult r = run_simulation(s, o);
        if (r.aborted)
            throw std::runtime_error("time-step study run aborted on dt = " + std::to_string(dt) +
                                     ": " + r.abort_reason);
        PhysicalField wp(s.grid);
        tr.inverse(r.omega, wp);
        finals.push_back(std::move(wp));
    }

    const PhysicalField mask =
        flow_mask(s.grid, s.conditioning.window, s.conditioning.bodies, base.t_end);
    ConvergenceTable table;
    for (std::size_t i = 0; i + 1 < dts.size(); ++i)
        table.rows.push_back({dts[i], error_norm(finals.back(), finals[i], mask), 0.0});
    detail::local_slopes(table.rows);
    table.fitted_slope = detail::fit_log_slope(table.rows);
    return table;
}

} // namespace ibps
