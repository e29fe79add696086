#pragma once

#include <cmath>
#include <stdexcept>

#include "ibps/field.hpp"
#include "ibps/grid.hpp"

namespace ibps {

/// Length scale of the Helmholtz filter from the dimensionless factor
/// c_alpha: alpha = (2 pi / L) / (c_alpha * k_max) with k_max the magnitude
/// of the largest retained integer mode pair.
inline double alpha_from_c_alpha(double c_alpha, double domain_length, const Grid& g) {
    if (!(c_alpha > 0.0)) throw std::invalid_argument("filter factor must be positive");
    const double k1 = 0.5 * g.n1, k2 = 0.5 * g.n2;
    return (2.0 * pi / domain_length) / (c_alpha * std::hypot(k1, k2));
}

/// Dimensionless smoothing strength; the grid-dependent length it implies
/// comes from alpha_from_c_alpha.
struct FilterSpec {
    double c_alpha = 1.0;

    FilterSpec() = default;
    explicit FilterSpec(double c) : c_alpha(c) {
        if (!(c > 0.0)) throw std::invalid_argument("filter factor must be positive");
    }

    double alpha(double domain_length, const Grid& g) const {
        return alpha_from_c_alpha(c_alpha, domain_length, g);
    }
};

/// Helmholtz low pass: every mode is divided by 1 + alpha^2 |kappa|^2. The
/// mean mode passes through unchanged; alpha = 0 is the identity. Applied as
/// a post-processor only, never inside the time loop.
inline SpectralField helmholtz_filter(const SpectralField& f, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("filter length must be nonnegative");
    const Grid& g = f.grid();
    SpectralField out(g);
    const double a2 = alpha * alpha;
    for (int j = 0; j < g.n2; ++j) {
        const double kap2 = g.kappa2(g.k2_int(j));
        for (int k = 0; k <= g.n1 / 2; ++k) {
            const double kap1 = g.kappa1(k);
            out(k, j) = f(k, j) / (1.0 + a2 * (kap1 * kap1 + kap2 * kap2));
        }
    }
    return out;
}

} // namespace ibps
