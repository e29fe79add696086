#pragma once

#include <algorithm>
#include <cmath>

#include "ibps/fft.hpp"

namespace ibps {

/// Zero the k1 = n1/2 column and k2 = n2/2 row. Odd-derivative multipliers
/// are not sign-definite on those self-conjugate modes, so the spectral
/// operators below leave them empty and solver states keep them empty.
inline void zero_nyquist(SpectralField& f) {
    const Grid& g = f.grid();
    const int kn = g.n1 / 2, jn = g.n2 / 2;
    for (int j = 0; j < g.n2; ++j) f(kn, j) = complex(0.0, 0.0);
    for (int k = 0; k <= kn; ++k) f(k, jn) = complex(0.0, 0.0);
}

/// Solenoidal velocity induced by a vorticity field:
/// u_hat = -i k_perp / |k|^2 * omega_hat with k_perp = (-k2, k1),
/// i.e. u1 = i k2/|k|^2 w, u2 = -i k1/|k|^2 w. The mean mode is zero
/// (zero-mean velocity convention) and the Nyquist modes of each component
/// whose multiplier is odd in the corresponding wavenumber are dropped.
inline void velocity_from_vorticity(const SpectralField& w, SpectralField& u1, SpectralField& u2) {
    const Grid& g = w.grid();
    const int jn = g.n2 / 2, kn = g.n1 / 2;
    for (int j = 0; j < g.n2; ++j) {
        const double kap2 = g.kappa2(g.k2_int(j));
        for (int k = 0; k <= kn; ++k) {
            if (k == 0 && j == 0) {
                u1(0, 0) = u2(0, 0) = complex(0.0, 0.0);
                continue;
            }
            const double kap1 = g.kappa1(k);
            const double inv = 1.0 / (kap1 * kap1 + kap2 * kap2);
            const complex iw = complex(-w(k, j).imag(), w(k, j).real()); // i*w
            u1(k, j) = (j == jn) ? complex(0.0, 0.0) : kap2 * inv * iw;
            u2(k, j) = (k == kn) ? complex(0.0, 0.0) : -kap1 * inv * iw;
        }
    }
}

/// omega_hat = i (k1 u2_hat - k2 u1_hat). Exact inverse of
/// velocity_from_vorticity on zero-mean, Nyquist-free fields.
inline void curl_spectral(const SpectralField& u1, const SpectralField& u2, SpectralField& w) {
    const Grid& g = u1.grid();
    const int jn = g.n2 / 2, kn = g.n1 / 2;
    for (int j = 0; j < g.n2; ++j) {
        const double kap2 = g.kappa2(g.k2_int(j));
        for (int k = 0; k <= kn; ++k) {
            complex t(0.0, 0.0);
            if (k != kn) t += g.kappa1(k) * u2(k, j);
            if (j != jn) t -= kap2 * u1(k, j);
            w(k, j) = complex(-t.imag(), t.real()); // i*t
        }
    }
}

/// div_hat = i (k1 u1_hat + k2 u2_hat), the solenoidality diagnostic.
inline void divergence_spectral(const SpectralField& u1, const SpectralField& u2, SpectralField& d) {
    const Grid& g = u1.grid();
    const int jn = g.n2 / 2, kn = g.n1 / 2;
    for (int j = 0; j < g.n2; ++j) {
        const double kap2 = g.kappa2(g.k2_int(j));
        for (int k = 0; k <= kn; ++k) {
            complex t(0.0, 0.0);
            if (k != kn) t += g.kappa1(k) * u1(k, j);
            if (j != jn) t += kap2 * u2(k, j);
            d(k, j) = complex(-t.imag(), t.real());
        }
    }
}

namespace detail {

/// Copy an n-grid spectrum into the padded layout. Source Nyquist slots are
/// dropped: their +/- halves cannot be separated without aliasing their
/// products back onto retained modes, and solver states keep them empty
/// anyway (see zero_nyquist).
inline void pad_spectrum(const SpectralField& src, SpectralField& dst) {
    const Grid& g = src.grid();
    const Grid& p = dst.grid();
    dst.fill(complex(0.0, 0.0));
    const int kn = g.n1 / 2, jn = g.n2 / 2;
    for (int j = 0; j < g.n2; ++j) {
        if (j == jn) continue;
        const int jp = j < jn ? j : j + (p.n2 - g.n2);
        for (int k = 0; k < kn; ++k) dst(k, jp) = src(k, j);
    }
}

/// Inverse of pad_spectrum for a product spectrum: interior modes copy over,
/// the coarse-grid Nyquist slots refold the +/- contributions that the
/// padded grid resolves separately.
inline void truncate_spectrum(const SpectralField& src, SpectralField& dst) {
    const Grid& p = src.grid();
    const Grid& g = dst.grid();
    const int kn = g.n1 / 2, jn = g.n2 / 2;
    auto row = [&](int k2) { return k2 >= 0 ? k2 : k2 + p.n2; };
    for (int j = 0; j < g.n2; ++j) {
        const int k2 = g.k2_int(j);
        for (int k = 0; k <= kn; ++k) {
            if (k < kn && j != jn) {
                dst(k, j) = src(k, row(k2));
            } else if (k < kn) { // k2 Nyquist row
                dst(k, j) = src(k, row(jn)) + src(k, row(-jn));
            } else if (j != jn) { // k1 Nyquist column
                dst(k, j) = src(kn, row(k2)) + std::conj(src(kn, row(-k2)));
            } else { // corner
                dst(k, j) = complex(2.0 * src(kn, row(jn)).real() + 2.0 * src(kn, row(-jn)).real(), 0.0);
            }
        }
    }
}

} // namespace detail

/// Workspace reused across dealiased products to avoid reallocating the
/// padded-grid buffers every RK4 stage.
struct ProductWorkspace {
    explicit ProductWorkspace(const Transformer& tr)
        : ca(tr.padded_grid()), cb(tr.padded_grid()), ra(tr.padded_grid()), rb(tr.padded_grid()) {}
    SpectralField ca, cb;
    PhysicalField ra, rb;
    /// Largest velocity magnitude seen by the last fused product call,
    /// sampled on the padded grid. Costs nothing extra and feeds the CFL
    /// diagnostic.
    double max_speed = 0.0;
};

/// 3/2-rule dealiased product: zero-pad both spectra to the padded grid,
/// multiply pointwise in physical space, transform back and truncate.
/// Equals the exact convolution of the inputs on all retained modes.
inline SpectralField dealiased_product(const Transformer& tr, ProductWorkspace& ws,
                                       const SpectralField& f, const SpectralField& g) {
    detail::pad_spectrum(f, ws.ca);
    detail::pad_spectrum(g, ws.cb);
    tr.inverse_padded(ws.ca, ws.ra);
    tr.inverse_padded(ws.cb, ws.rb);
    double* a = ws.ra.data();
    const double* b = ws.rb.data();
    for (std::size_t m = 0; m < ws.ra.size(); ++m) a[m] *= b[m];
    tr.forward_padded(ws.ra, ws.ca);
    SpectralField out(tr.grid());
    detail::truncate_spectrum(ws.ca, out);
    return out;
}

/// Fused dealiased products needed by the vorticity transport right-hand
/// side: n_a = F[u1^2 - u2^2] and n_b = F[u1 u2] from one padded transform
/// pair per velocity component (4 padded transforms total).
inline void dealiased_velocity_products(const Transformer& tr, ProductWorkspace& ws,
                                        const SpectralField& u1, const SpectralField& u2,
                                        SpectralField& n_a, SpectralField& n_b) {
    detail::pad_spectrum(u1, ws.ca);
    detail::pad_spectrum(u2, ws.cb);
    tr.inverse_padded(ws.ca, ws.ra);
    tr.inverse_padded(ws.cb, ws.rb);
    double* a = ws.ra.data();
    double* b = ws.rb.data();
    double speed_sq = 0.0;
    for (std::size_t m = 0; m < ws.ra.size(); ++m) {
        const double p = a[m], q = b[m];
        speed_sq = std::max(speed_sq, p * p + q * q);
        a[m] = p * p - q * q;
        b[m] = p * q;
    }
    ws.max_speed = std::sqrt(speed_sq);
    tr.forward_padded(ws.ra, ws.ca);
    tr.forward_padded(ws.rb, ws.cb);
    detail::truncate_spectrum(ws.ca, n_a);
    detail::truncate_spectrum(ws.cb, n_b);
}

} // namespace ibps
