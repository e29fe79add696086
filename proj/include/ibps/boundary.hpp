#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ibps/geometry.hpp"
#include "ibps/spectral_ops.hpp"
#include "ibps/window.hpp"

namespace ibps {

/// How the boundary values are imposed each stage: extrapolation order n_p,
/// number of conditioning repetitions n_r, the confinement window and the
/// embedded bodies. probe_spacing = 0 selects min(dx, dy).
struct ConditioningConfig {
    int order = 2;
    int repetitions = 1;
    double probe_spacing = 0.0;
    WindowField window;
    std::vector<ImmersedBody> bodies;
};

/// Weights of (u_pb, u_I, u_II) giving the value at a numerical boundary
/// point of the degree-n polynomial along its normal through the surface
/// value at delta1 and the probes at delta1+delta2 and delta1+delta2+delta3,
/// evaluated at the point itself (coordinate zero). Lagrange form, so the
/// weights sum to one and reproduce polynomials of degree <= n exactly.
inline std::array<double, 3> extrapolation_weights(const BoundaryPoint& p, int order) {
    const int n = std::min(order, p.order);
    if (n == 0) return {1.0, 0.0, 0.0};
    const double x0 = p.delta1, x1 = p.delta1 + p.delta2, x2 = x1 + p.delta3;
    if (n == 1) return {x1 / (x1 - x0), -x0 / (x1 - x0), 0.0};
    return {x1 * x2 / ((x0 - x1) * (x0 - x2)), x0 * x2 / ((x1 - x0) * (x1 - x2)),
            x0 * x1 / ((x2 - x0) * (x2 - x1))};
}

/// Impose the body's velocity on the solid region of (u1, u2): numerical
/// boundary points take the normal-direction polynomial extrapolation of
/// the prescribed surface value and the fluid probes; deeper solid points
/// clamp to the surface velocity. Probes are sampled before any write, so
/// the update is safely in place.
inline void extend_into_body(PhysicalField& u1, PhysicalField& u2, const ImmersedBody& body,
                             const NumericalBoundary& nb, const Grid& g, double t, int order) {
    const std::array<double, 2> u_pb = body.surface_velocity(t);
    std::vector<std::array<double, 2>> values(nb.points.size());
    for (std::size_t m = 0; m < nb.points.size(); ++m) {
        const BoundaryPoint& p = nb.points[m];
        const std::array<double, 3> w = extrapolation_weights(p, order);
        values[m] = {w[0] * u_pb[0], w[0] * u_pb[1]};
        if (w[1] != 0.0) {
            values[m][0] += w[1] * p.probe1.sample(u1);
            values[m][1] += w[1] * p.probe1.sample(u2);
        }
        if (w[2] != 0.0) {
            values[m][0] += w[2] * p.probe2.sample(u1);
            values[m][1] += w[2] * p.probe2.sample(u2);
        }
    }

    const double h = g.min_dx();
    const std::array<double, 4> bb = body.bounds(t);
    const int i_lo = std::max(0, static_cast<int>(std::floor((bb[0] + 0.5 * g.l1) / g.dx1())));
    const int i_hi = std::min(g.n1 - 1, static_cast<int>(std::ceil((bb[2] + 0.5 * g.l1) / g.dx1())));
    const int j_lo = std::max(0, static_cast<int>(std::floor((bb[1] + 0.5 * g.l2) / g.dx2())));
    const int j_hi = std::min(g.n2 - 1, static_cast<int>(std::ceil((bb[3] + 0.5 * g.l2) / g.dx2())));
    for (int j = j_lo; j <= j_hi; ++j)
        for (int i = i_lo; i <= i_hi; ++i)
            if (body.distance(g.x1(i), g.x2(j), t) <= -h) {
                u1(i, j) = u_pb[0];
                u2(i, j) = u_pb[1];
            }
    for (std::size_t m = 0; m < nb.points.size(); ++m) {
        u1(nb.points[m].i, nb.points[m].j) = values[m][0];
        u2(nb.points[m].i, nb.points[m].j) = values[m][1];
    }
}

/// Largest mismatch between the prescribed surface velocity and the
/// bilinearly interpolated field at the surface foot points.
inline double foot_residual(const PhysicalField& u1, const PhysicalField& u2,
                            const NumericalBoundary& nb, const ImmersedBody& body, const Grid& g,
                            double t) {
    auto everywhere = [](double, double) { return true; };
    const std::array<double, 2> u_pb = body.surface_velocity(t);
    double res = 0.0;
    for (const BoundaryPoint& p : nb.points) {
        const BilinearStencil s = build_bilinear(g, p.foot[0], p.foot[1], everywhere);
        if (!s.valid) continue;
        res = std::max(res, std::abs(s.sample(u1) - u_pb[0]));
        res = std::max(res, std::abs(s.sample(u2) - u_pb[1]));
    }
    return res;
}

/// Stage conditioner: turns the free-space vorticity of the current stage
/// into one that respects every embedded velocity boundary. Each repetition
/// recovers the velocity, imposes the body values in physical space,
/// confines it with the window, takes the spectral curl (which has zero mean
/// by construction) and rebuilds the solenoidal velocity; repeating tightens
/// the surface values. Costs four non-padded transforms per repetition.
class BoundaryConditioner {
  public:
    BoundaryConditioner(const Transformer& tr, ConditioningConfig cfg)
        : tr_(tr), cfg_(std::move(cfg)), u1p_(tr.grid()), u2p_(tr.grid()) {
        if (cfg_.order < 0 || cfg_.order > 2)
            throw std::invalid_argument("extrapolation order must be 0, 1 or 2");
        if (cfg_.repetitions < 1 || cfg_.repetitions > 3)
            throw std::invalid_argument("conditioning repetitions must be 1, 2 or 3");
        if (cfg_.window.grid != tr.grid())
            throw std::invalid_argument("window grid does not match the transformer grid");
        cached_.resize(cfg_.bodies.size());
        for (std::size_t b = 0; b < cfg_.bodies.size(); ++b) {
            check_clearance(cfg_.bodies[b], 0.0);
            if (cfg_.bodies[b].motion.is_stationary)
                cached_[b] = identify_numerical_boundary(cfg_.bodies[b], tr.grid(), 0.0, cfg_.order,
                                                         cfg_.probe_spacing, fluid_test(0.0));
        }
    }

    /// Replace w by the conditioned vorticity and fill the matching
    /// solenoidal velocity; signature matches the rk4_step conditioner slot.
    void operator()(double t, SpectralField& w, SpectralField& u1h, SpectralField& u2h) {
        const Grid& g = tr_.grid();
        for (int r = 0; r < cfg_.repetitions; ++r) {
            if (r == 0) velocity_from_vorticity(w, u1h, u2h);
            tr_.inverse(u1h, u1p_);
            tr_.inverse(u2h, u2p_);
            for (std::size_t b = 0; b < cfg_.bodies.size(); ++b) {
                const ImmersedBody& body = cfg_.bodies[b];
                if (!body.motion.is_stationary) {
                    check_clearance(body, t);
                    cached_[b] = identify_numerical_boundary(body, g, t, cfg_.order,
                                                             cfg_.probe_spacing, fluid_test(t));
                }
                extend_into_body(u1p_, u2p_, body, cached_[b], g, t, cfg_.order);
            }
            const double* rho = cfg_.window.rho.data();
            double* a = u1p_.data();
            double* b = u2p_.data();
            for (std::size_t m = 0; m < u1p_.size(); ++m) {
                a[m] *= rho[m];
                b[m] *= rho[m];
            }
            tr_.forward(u1p_, u1h);
            tr_.forward(u2p_, u2h);
            curl_spectral(u1h, u2h, w);
            zero_nyquist(w);
            velocity_from_vorticity(w, u1h, u2h);
        }
    }

    const ConditioningConfig& config() const { return cfg_; }
    const NumericalBoundary& boundary(std::size_t b) const { return cached_[b]; }
    /// Points that could not reach the requested extrapolation order, summed
    /// over the current boundaries.
    int downgraded_points() const {
        int n = 0;
        for (const NumericalBoundary& nb : cached_) n += nb.downgraded;
        return n;
    }
    /// Physical velocity pair of the last conditioning repetition, after the
    /// body extension and windowing (the field whose curl became w).
    const PhysicalField& windowed_u1() const { return u1p_; }
    const PhysicalField& windowed_u2() const { return u2p_; }

  private:
    std::function<bool(double, double)> fluid_test(double t) const {
        return [this, t](double x1, double x2) {
            for (const ImmersedBody& body : cfg_.bodies)
                if (body.distance(x1, x2, t) <= 0.0) return false;
            return true;
        };
    }

    void check_clearance(const ImmersedBody& body, double t) const {
        const Grid& g = tr_.grid();
        const double dp = cfg_.probe_spacing > 0.0 ? cfg_.probe_spacing : g.min_dx();
        const double reach = 2.0 * dp + 2.0 * std::max(g.dx1(), g.dx2());
        const double keep = cfg_.window.margin + cfg_.window.rise;
        const std::array<double, 4> bb = body.bounds(t);
        if (bb[0] - reach < -0.5 * g.l1 + keep || bb[2] + reach > 0.5 * g.l1 - keep ||
            bb[1] - reach < -0.5 * g.l2 + keep || bb[3] + reach > 0.5 * g.l2 - keep)
            throw std::runtime_error("body reaches into the window margin");
    }

    const Transformer& tr_;
    ConditioningConfig cfg_;
    PhysicalField u1p_, u2p_;
    std::vector<NumericalBoundary> cached_;
};

} // namespace ibps
