#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ibps/spectral_ops.hpp"

namespace ibps {

/// Real-axis stability boundary of the classic fourth-order Runge-Kutta
/// scheme. The explicit diffusion term requires nu * |kappa|^2_max * dt to
/// stay below this value.
inline constexpr double rk4_diffusion_limit = 2.785;

/// Approximate imaginary-axis stability boundary of the same scheme, used to
/// bound the advective mode u * kappa_max * dt.
inline constexpr double rk4_advection_limit = 2.8;

/// Stability number of the explicit diffusion term. Values at or above
/// rk4_diffusion_limit blow up no matter how smooth the flow is.
inline double diffusion_stability_number(const Grid& g, double nu, double dt) {
    return nu * g.kappa_max_sq() * dt;
}

/// Scratch fields for one Runge-Kutta step, allocated once per run.
struct StepWorkspace {
    explicit StepWorkspace(const Grid& g)
        : u1(g), u2(g), acc(g), stage(g), slope(g), n_a(g), n_b(g) {}
    SpectralField u1, u2, acc, stage, slope, n_a, n_b;
};

/// Spectral right-hand side of the vorticity transport equation,
///   d_t w = -nu |kappa|^2 w - kap1 kap2 F[u1^2 - u2^2]
///           + (kap1^2 - kap2^2) F[u1 u2],
/// which evaluates the advection term from two dealiased products (four
/// padded transforms). The mean mode is structurally zero and the Nyquist
/// slots are cleared so states stay Nyquist free.
inline void vorticity_rhs(const Transformer& tr, ProductWorkspace& ws, StepWorkspace& sw,
                          const SpectralField& w, const SpectralField& u1,
                          const SpectralField& u2, double nu, SpectralField& out) {
    dealiased_velocity_products(tr, ws, u1, u2, sw.n_a, sw.n_b);
    const Grid& g = w.grid();
    for (int j = 0; j < g.n2; ++j) {
        const double kap2 = g.kappa2(g.k2_int(j));
        for (int k = 0; k <= g.n1 / 2; ++k) {
            const double kap1 = g.kappa1(k);
            out(k, j) = -nu * (kap1 * kap1 + kap2 * kap2) * w(k, j) -
                        kap1 * kap2 * sw.n_a(k, j) +
                        (kap1 * kap1 - kap2 * kap2) * sw.n_b(k, j);
        }
    }
    zero_nyquist(out);
}

/// Advance the vorticity field by one RK4 step. The conditioner is invoked
/// once per stage with the stage time; it imposes the embedded boundary
/// values on its vorticity argument and fills the matching solenoidal
/// velocity. The accumulation base is the conditioned stage-one field, so
/// boundary corrections are not overwritten by the update. Returns the
/// largest velocity magnitude seen in stage one, for the CFL diagnostic.
template <typename Conditioner>
double rk4_step(const Transformer& tr, ProductWorkspace& ws, StepWorkspace& sw,
                SpectralField& w, double t, double dt, double nu, Conditioner&& condition) {
    const std::size_t n = w.size();
    complex* wd = w.data();
    complex* acc = sw.acc.data();
    complex* stage = sw.stage.data();
    complex* slope = sw.slope.data();

    condition(t, w, sw.u1, sw.u2);
    vorticity_rhs(tr, ws, sw, w, sw.u1, sw.u2, nu, sw.slope);
    const double stage_one_speed = ws.max_speed;
    for (std::size_t m = 0; m < n; ++m) {
        acc[m] = slope[m];
        stage[m] = wd[m] + 0.5 * dt * slope[m];
    }

    condition(t + 0.5 * dt, sw.stage, sw.u1, sw.u2);
    vorticity_rhs(tr, ws, sw, sw.stage, sw.u1, sw.u2, nu, sw.slope);
    for (std::size_t m = 0; m < n; ++m) {
        acc[m] += 2.0 * slope[m];
        stage[m] = wd[m] + 0.5 * dt * slope[m];
    }

    condition(t + 0.5 * dt, sw.stage, sw.u1, sw.u2);
    vorticity_rhs(tr, ws, sw, sw.stage, sw.u1, sw.u2, nu, sw.slope);
    for (std::size_t m = 0; m < n; ++m) {
        acc[m] += 2.0 * slope[m];
        stage[m] = wd[m] + dt * slope[m];
    }

    condition(t + dt, sw.stage, sw.u1, sw.u2);
    vorticity_rhs(tr, ws, sw, sw.stage, sw.u1, sw.u2, nu, sw.slope);
    const double sixth = dt / 6.0;
    for (std::size_t m = 0; m < n; ++m) wd[m] += sixth * (acc[m] + slope[m]);

    return stage_one_speed;
}

/// Conditioner for unbounded periodic flow: no boundary values to impose,
/// the stage velocity is recovered straight from the vorticity.
inline auto plain_conditioner() {
    return [](double, SpectralField& w, SpectralField& u1, SpectralField& u2) {
        velocity_from_vorticity(w, u1, u2);
    };
}

/// True if any coefficient has gone non-finite.
inline bool has_non_finite(const SpectralField& f) {
    for (std::size_t m = 0; m < f.size(); ++m) {
        const complex v = f.data()[m];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return true;
    }
    return false;
}

} // namespace ibps
