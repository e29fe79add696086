#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ibps/field.hpp"
#include "ibps/grid.hpp"

namespace ibps {

namespace detail {

/// Half-width of the erf transition, in units of its scale parameter, such
/// that the residual tail is below 2e-15. Two edge factors can then meet in
/// an active-region corner and still leave the mask within 1e-14 of one.
inline double erf_band_halfwidth() {
    static const double x = [] {
        double lo = 1.0, hi = 10.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (std::erfc(mid) > 4e-15 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return x;
}

/// Rising edge profile in the wall-normal coordinate s (distance from the
/// domain edge): below 1e-14 for s <= margin, above 1 - 1e-14 for
/// s >= margin + rise.
inline double edge_profile(double s, double margin, double rise) {
    const double a = 2.0 * erf_band_halfwidth() / rise;
    return 0.5 * std::erfc(-a * (s - (margin + 0.5 * rise)));
}

} // namespace detail

/// Smooth confinement mask: 1 in the active interior and 0 in the dead band
/// of width `margin` along every domain edge, rising across `rise` through
/// shifted and scaled error functions. The four edge profiles multiply, so
/// iso-lines are rounded rectangles and corners need no special casing.
struct WindowField {
    Grid grid;
    PhysicalField rho;
    double margin = 0.0;
    double rise = 0.0;

    /// Mask that is one everywhere, for setups conditioned by bodies alone.
    static WindowField ones(const Grid& g) {
        WindowField w{g, PhysicalField(g), 0.0, 0.0};
        w.rho.fill(1.0);
        return w;
    }
};

/// Build the confinement mask for the given dead-band and rise widths
/// (lengths, not cells). Requires margin >= rise, a rise of at least two
/// grid cells, and a nonempty active interior.
inline WindowField build_window(const Grid& g, double margin, double rise) {
    if (!(rise > 0.0) || margin < rise)
        throw std::invalid_argument("window needs margin >= rise > 0");
    if (rise < 2.0 * std::max(g.dx1(), g.dx2()))
        throw std::invalid_argument("window rise must span at least two grid cells");
    if (2.0 * (margin + rise) >= std::min(g.l1, g.l2))
        throw std::invalid_argument("window margins leave no active interior");

    WindowField w{g, PhysicalField(g), margin, rise};
    std::vector<double> p1(g.n1), p2(g.n2);
    for (int i = 0; i < g.n1; ++i) {
        const double s = g.x1(i) + 0.5 * g.l1;
        p1[i] = detail::edge_profile(s, margin, rise) * detail::edge_profile(g.l1 - s, margin, rise);
    }
    for (int j = 0; j < g.n2; ++j) {
        const double s = g.x2(j) + 0.5 * g.l2;
        p2[j] = detail::edge_profile(s, margin, rise) * detail::edge_profile(g.l2 - s, margin, rise);
    }
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) w.rho(i, j) = p1[i] * p2[j];
    return w;
}

} // namespace ibps
