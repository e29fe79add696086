#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ibps/fft.hpp"
#include "ibps/field.hpp"
#include "ibps/geometry.hpp"
#include "ibps/grid.hpp"
#include "ibps/spectral_ops.hpp"
#include "ibps/window.hpp"

namespace ibps {

/// One row of the per-step monitor stream.
struct DiagnosticsRecord {
    long step = 0;
    double time = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;
    double cfl = 0.0;
    double max_divergence = 0.0;
    double mean_vorticity = 0.0;
    double bc_residual = 0.0;

    bool valid() const {
        return std::isfinite(time) && std::isfinite(energy) && std::isfinite(enstrophy) &&
               std::isfinite(cfl) && std::isfinite(max_divergence) &&
               std::isfinite(mean_vorticity) && std::isfinite(bc_residual) && energy >= 0.0 &&
               enstrophy >= 0.0;
    }
};

/// Sharp quadrature mask for the active flow region: 1 at cell centers where
/// the window is fully saturated and no body covers the point, 0 elsewhere.
inline PhysicalField flow_mask(const Grid& g, const WindowField& window,
                               const std::vector<ImmersedBody>& bodies, double t) {
    if (window.rho.grid() != g)
        throw std::invalid_argument("flow_mask: window grid mismatch");
    PhysicalField m(g);
    for (int j = 0; j < g.n2; ++j) {
        for (int i = 0; i < g.n1; ++i) {
            bool in = window.rho(i, j) >= 1.0 - 1e-14;
            if (in) {
                const double x1 = g.x1(i), x2 = g.x2(j);
                for (const ImmersedBody& b : bodies) {
                    if (b.distance(x1, x2, t) <= 0.0) {
                        in = false;
                        break;
                    }
                }
            }
            m(i, j) = in ? 1.0 : 0.0;
        }
    }
    return m;
}

/// Kinetic energy (1/2) sum mask*(u1^2 + u2^2) dA by the rectangle rule.
inline double energy(const PhysicalField& u1, const PhysicalField& u2, const PhysicalField& mask) {
    const Grid& g = u1.grid();
    if (u2.grid() != g || mask.grid() != g)
        throw std::invalid_argument("energy: grid mismatch");
    const double *a = u1.data(), *b = u2.data(), *m = mask.data();
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += m[i] * (a[i] * a[i] + b[i] * b[i]);
    return 0.5 * s * g.cell_area();
}

/// Enstrophy (1/2) sum mask*w^2 dA by the rectangle rule.
inline double enstrophy(const PhysicalField& w, const PhysicalField& mask) {
    const Grid& g = w.grid();
    if (mask.grid() != g) throw std::invalid_argument("enstrophy: grid mismatch");
    const double *a = w.data(), *m = mask.data();
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += m[i] * a[i] * a[i];
    return 0.5 * s * g.cell_area();
}

/// Mean of a real field read off its spectrum.
inline double mean_value(const SpectralField& f) { return f(0, 0).real(); }

/// Largest pointwise |div u| recovered on the grid; the velocity is given
/// spectrally so this measures how solenoidal the discrete field really is.
inline double max_divergence(const Transformer& tr, const SpectralField& u1, const SpectralField& u2) {
    const Grid& g = tr.grid();
    SpectralField d(g);
    divergence_spectral(u1, u2, d);
    PhysicalField dp(g);
    tr.inverse(d, dp);
    const double* p = dp.data();
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(p[i]));
    return m;
}

/// Advective CFL number for a step of size dt.
inline double cfl_number(double max_speed, double dt, const Grid& g) {
    return max_speed * dt / g.min_dx();
}

/// Restriction of a fine-grid spectrum onto a coarser nested grid: modes the
/// coarse grid retains are copied, everything above its Nyquist is dropped,
/// and the coarse Nyquist slots fold the +/- pairs the fine grid resolves
/// separately so the result samples exactly on coarse grid points. Both
/// grids must span the same box with even sizes, fine at least as large.
inline SpectralField restrict_spectrum(const SpectralField& fine, const Grid& coarse) {
    const Grid& f = fine.grid();
    if (f.l1 != coarse.l1 || f.l2 != coarse.l2)
        throw std::invalid_argument("restrict_spectrum: grids span different boxes");
    if (f.n1 < coarse.n1 || f.n2 < coarse.n2)
        throw std::invalid_argument("restrict_spectrum: target grid is finer than the source");
    SpectralField out(coarse);
    if (f == coarse) {
        out = fine;
        return out;
    }
    if (f.n1 == coarse.n1 || f.n2 == coarse.n2)
        throw std::invalid_argument("restrict_spectrum: grids must nest strictly in both directions");
    detail::truncate_spectrum(fine, out);
    return out;
}

/// Normalized discrepancy between a reference field and a candidate on the
/// same grid: L2 norm of the masked difference over the masked max of the
/// reference.
inline double error_norm(const PhysicalField& ref, const PhysicalField& field, const PhysicalField& mask) {
    const Grid& g = ref.grid();
    if (field.grid() != g || mask.grid() != g)
        throw std::invalid_argument("error_norm: grid mismatch");
    const double *r = ref.data(), *f = field.data(), *w = mask.data();
    double s = 0.0, m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = w[i] * (r[i] - f[i]);
        s += d * d;
        m = std::max(m, w[i] * std::abs(r[i]));
    }
    if (m == 0.0) throw std::invalid_argument("error_norm: reference vanishes on the masked region");
    return std::sqrt(s * g.cell_area()) / m;
}

} // namespace ibps
