#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ibps/boundary.hpp"
#include "ibps/fft.hpp"
#include "ibps/field.hpp"
#include "ibps/geometry.hpp"
#include "ibps/grid.hpp"
#include "ibps/spectral_ops.hpp"
#include "ibps/window.hpp"

namespace ibps {

/// Everything a run needs besides the time step: grid, physics, embedded
/// geometry with its conditioning settings, and the initial state.
struct Scenario {
    Grid grid;
    double nu = 0.0;
    ConditioningConfig conditioning;
    SpectralField omega0;

    /// True when there is nothing to condition: no bodies and an all-ones
    /// window, so the plain pseudo-spectral step applies.
    bool periodic() const {
        return conditioning.bodies.empty() && conditioning.window.rise == 0.0;
    }
};

namespace detail {

inline SpectralField spectral_state(const Grid& g, const PhysicalField& w) {
    Transformer tr(g);
    SpectralField wh(g);
    tr.forward(w, wh);
    wh.set_mean_mode(complex(0.0, 0.0));
    zero_nyquist(wh);
    return wh;
}

} // namespace detail

/// Decaying cellular flow with the exact solution
/// omega(x, t) = 2 exp(-2 nu t) sin x1 sin x2 on the 2 pi square.
inline PhysicalField taylor_green_vorticity(const Grid& g, double nu, double t) {
    PhysicalField w(g);
    const double amp = 2.0 * std::exp(-2.0 * nu * t);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) w(i, j) = amp * std::sin(g.x1(i)) * std::sin(g.x2(j));
    return w;
}

inline Scenario taylor_green_scenario(int n, double nu) {
    Scenario s;
    s.grid = Grid(n, n, 2.0 * pi, 2.0 * pi);
    s.nu = nu;
    s.conditioning.window = WindowField::ones(s.grid);
    s.omega0 = detail::spectral_state(s.grid, taylor_green_vorticity(s.grid, nu, 0.0));
    return s;
}

/// Dipole-wall collision parameters: a pair of opposite-sign shielded
/// monopoles released toward the zero-velocity margin that plays the wall.
struct DipoleParams {
    double omega_e = 299.528385375226;
    double r0 = 0.1;
    std::array<double, 2> center_pos{0.0, 0.1};
    std::array<double, 2> center_neg{0.0, -0.1};
    double nu = 0.001;
    double half_width = 1.0;
    int margin_cells = 10;
    int rise_cells = 6;
    /// Physical window band; when > 0 these take precedence over the cell
    /// counts. A grid sweep that must keep the geometry identical pins the
    /// band of its coarsest grid here.
    double margin = 0.0;
    double rise = 0.0;

    double band_width(const Grid& g) const {
        return margin > 0.0 ? margin + rise
                            : (margin_cells + rise_cells) * std::max(g.dx1(), g.dx2());
    }
};

/// Shielded monopole profile at distance r from its center: the extremal
/// value sits at r = 0 and the bracket vanishes at r = r0, so each monopole
/// carries zero net circulation.
inline double monopole_vorticity(double omega_e, double r0, double r) {
    const double s = (r / r0) * (r / r0);
    return omega_e * (1.0 - s) * std::exp(-s);
}

/// Initial vorticity of the dipole: positive monopole at center_pos,
/// negative at center_neg. Throws when a monopole core reaches into the
/// window band implied by the params.
inline PhysicalField dipole_initial_vorticity(const DipoleParams& p, const Grid& g) {
    const double band = p.band_width(g);
    const double core = 4.0 * p.r0;
    for (const std::array<double, 2>& c : {p.center_pos, p.center_neg}) {
        if (std::abs(c[0]) + core > 0.5 * g.l1 - band || std::abs(c[1]) + core > 0.5 * g.l2 - band)
            throw std::invalid_argument("monopole overlaps the window margin");
    }
    PhysicalField w(g);
    for (int j = 0; j < g.n2; ++j) {
        for (int i = 0; i < g.n1; ++i) {
            const double x1 = g.x1(i), x2 = g.x2(j);
            const double rp = std::hypot(x1 - p.center_pos[0], x2 - p.center_pos[1]);
            const double rm = std::hypot(x1 - p.center_neg[0], x2 - p.center_neg[1]);
            w(i, j) = monopole_vorticity(p.omega_e, p.r0, rp) - monopole_vorticity(p.omega_e, p.r0, rm);
        }
    }
    return w;
}

/// Dipole run inside the windowed box. The domain length solves
/// l = 2 half_width + 2 (margin + rise) so the active flow box is exactly
/// [-half_width, half_width]^2; pass domain_length to pin l instead. With a
/// physical band (p.margin > 0) the window is grid independent, which is
/// what a grid-convergence sweep over one fixed box needs.
inline Scenario dipole_scenario(const DipoleParams& p, int n, double domain_length = 0.0) {
    Scenario s;
    const bool physical_band = p.margin > 0.0;
    double l = domain_length;
    if (l <= 0.0) {
        const int band_cells = p.margin_cells + p.rise_cells;
        l = physical_band ? 2.0 * p.half_width + 2.0 * (p.margin + p.rise)
                          : 2.0 * p.half_width / (1.0 - 2.0 * double(band_cells) / n);
    }
    s.grid = Grid(n, n, l, l);
    s.nu = p.nu;
    s.conditioning.order = 1;
    const double margin = physical_band ? p.margin : p.margin_cells * s.grid.dx1();
    const double rise = physical_band ? p.rise : p.rise_cells * s.grid.dx1();
    s.conditioning.window = build_window(s.grid, margin, rise);
    PhysicalField w = dipole_initial_vorticity(p, s.grid);
    for (int j = 0; j < s.grid.n2; ++j)
        for (int i = 0; i < s.grid.n1; ++i) w(i, j) *= s.conditioning.window.rho(i, j);
    s.omega0 = detail::spectral_state(s.grid, w);
    return s;
}

/// The same dipole released in a fully periodic box of length l: no walls,
/// no window, used by the temporal-convergence study.
inline Scenario dipole_periodic_scenario(const DipoleParams& p, int n, double l) {
    Scenario s;
    s.grid = Grid(n, n, l, l);
    s.nu = p.nu;
    s.conditioning.window = WindowField::ones(s.grid);
    DipoleParams q = p;
    q.margin_cells = 0;
    q.rise_cells = 0;
    s.omega0 = detail::spectral_state(s.grid, dipole_initial_vorticity(q, s.grid));
    return s;
}

/// In-line oscillating cylinder parameters; the derived maximum speed,
/// Keulegan-Carpenter number and Reynolds number follow from the harmonic
/// motion law x1c(t) = A sin(2 pi f t + phase).
struct CylinderParams {
    double diameter = 0.35;
    double frequency = 1.0;
    double amplitude = 0.27852;
    double nu = 6.1249747e-3;
    double phase = -0.5 * pi;

    double max_speed() const { return 2.0 * pi * frequency * amplitude; }
    double keulegan_carpenter() const { return max_speed() / (frequency * diameter); }
    double reynolds() const { return max_speed() * diameter / nu; }
};

/// Cylinder center position and velocity at time t.
inline std::array<std::array<double, 2>, 2> cylinder_state(const CylinderParams& p, double t) {
    const double om = 2.0 * pi * p.frequency;
    return {std::array<double, 2>{p.amplitude * std::sin(om * t + p.phase), 0.0},
            std::array<double, 2>{p.amplitude * om * std::cos(om * t + p.phase), 0.0}};
}

/// Oscillating cylinder in the (2 pi)^2 box, started from rest at the phase
/// of zero velocity and full negative displacement.
inline Scenario cylinder_scenario(const CylinderParams& p, int n, int margin_cells = 8,
                                  int rise_cells = 6, int order = 2, int repetitions = 1) {
    Scenario s;
    s.grid = Grid(n, n, 2.0 * pi, 2.0 * pi);
    s.nu = p.nu;
    s.conditioning.order = order;
    s.conditioning.repetitions = repetitions;
    s.conditioning.window =
        build_window(s.grid, margin_cells * s.grid.dx1(), rise_cells * s.grid.dx1());
    s.conditioning.bodies.push_back(
        ImmersedBody{std::make_shared<Circle>(0.0, 0.0, 0.5 * p.diameter),
                     Motion::oscillation(p.amplitude, p.frequency, p.phase, 0)});
    s.omega0 = SpectralField(s.grid);
    return s;
}

/// Lid-driven cavity parameters. The cavity side spans active_cells + 1
/// grid cells so every wall face lies on a grid line; the side channel is a
/// gap of channel_cells between the lid strip and one side wall, letting
/// the exterior ring balance the mass the lid drags along.
struct CavityParams {
    double lid_speed = 1.0;
    double side = 1.0;
    double nu = 0.01;
    int active_cells = 185;
    int wall_cells = 10;
    int lid_cells = 10;
    int channel_cells = 8;
    int margin_cells = 10;
    int rise_cells = 6;
    int repetitions = 3;

    double reynolds() const { return lid_speed * side / nu; }

    /// Steady regime of the benchmark.
    static CavityParams re100() { return CavityParams{}; }
    /// Unsteady regime: finer grid, lower viscosity.
    static CavityParams re1000() {
        CavityParams p;
        p.nu = 0.001;
        p.active_cells = 375;
        return p;
    }
};

/// Cavity flow on an n^2 grid: U-shaped solid walls, a driven lid strip
/// with prescribed velocity (lid_speed, 0), and the side channel next to
/// the right wall. Walls coincide with grid lines, so every numerical
/// boundary point sits on its wall face and the extrapolation collapses to
/// the prescribed value.
inline Scenario cavity_scenario(const CavityParams& p, int n) {
    if (p.channel_cells < 2)
        throw std::invalid_argument("side channel must span at least two cells");
    Scenario s;
    const double dx = p.side / (p.active_cells + 1);
    s.grid = Grid(n, n, n * dx, n * dx);
    s.nu = p.nu;
    s.conditioning.order = 1;
    s.conditioning.repetitions = p.repetitions;
    s.conditioning.window = build_window(s.grid, p.margin_cells * dx, p.rise_cells * dx);

    const double half = 0.5 * p.side;
    const double w = p.wall_cells * dx;
    const double h = p.lid_cells * dx;
    const double c = p.channel_cells * dx;
    // Faces sit on grid lines only up to rounding of the grid coordinates,
    // which would leave both the face points and the next solid layer on the
    // knife edge of the boundary-band classification. Growing every face by
    // a sub-grid snap keeps face points robustly on the boundary (at depth
    // snap, so the extrapolated value is the prescribed one to the same
    // accuracy) and the next layer robustly outside the band.
    const double snap = 1e-9 * dx;

    std::vector<std::shared_ptr<const Shape>> walls;
    walls.push_back(std::make_shared<RoundedRectangle>(-half - 0.5 * w, -0.5 * w, 0.5 * w + snap,
                                                       half + 0.5 * w + snap, 0.0));
    walls.push_back(std::make_shared<RoundedRectangle>(0.0, -half - 0.5 * w, half + w + snap,
                                                       0.5 * w + snap, 0.0));
    walls.push_back(std::make_shared<RoundedRectangle>(half + 0.5 * w, -0.5 * w, 0.5 * w + snap,
                                                       half + 0.5 * w + snap, 0.0));
    s.conditioning.bodies.push_back(
        ImmersedBody{std::make_shared<ShapeUnion>(std::move(walls)), Motion::stationary()});
    s.conditioning.bodies.push_back(
        ImmersedBody{std::make_shared<RoundedRectangle>(-0.5 * c, half + 0.5 * h,
                                                        half - 0.5 * c + snap, 0.5 * h + snap, 0.0),
                     Motion::stationary(), std::array<double, 2>{p.lid_speed, 0.0}});
    s.omega0 = SpectralField(s.grid);
    return s;
}

} // namespace ibps
