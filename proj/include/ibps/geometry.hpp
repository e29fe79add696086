#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ibps/field.hpp"
#include "ibps/grid.hpp"

namespace ibps {

/// Implicit shape described by a signed distance function, negative inside
/// the solid, with |grad phi| = 1 near the surface. Normals point out of the
/// body toward the fluid; medial-axis ties resolve to the x1 axis first.
class Shape {
  public:
    virtual ~Shape() = default;
    virtual double distance(double x1, double x2) const = 0;
    virtual std::array<double, 2> normal(double x1, double x2) const = 0;
    /// Axis-aligned bounding box {x1_min, x2_min, x1_max, x2_max}.
    virtual std::array<double, 4> bounds() const = 0;
};

class Circle final : public Shape {
  public:
    Circle(double c1, double c2, double radius) : c1_(c1), c2_(c2), r_(radius) {
        if (radius <= 0.0) throw std::invalid_argument("circle radius must be positive");
    }
    double distance(double x1, double x2) const override {
        return std::hypot(x1 - c1_, x2 - c2_) - r_;
    }
    std::array<double, 2> normal(double x1, double x2) const override {
        const double d1 = x1 - c1_, d2 = x2 - c2_;
        const double len = std::hypot(d1, d2);
        if (len == 0.0) return {1.0, 0.0};
        return {d1 / len, d2 / len};
    }
    std::array<double, 4> bounds() const override { return {c1_ - r_, c2_ - r_, c1_ + r_, c2_ + r_}; }

  private:
    double c1_, c2_, r_;
};

/// Axis-aligned rectangle with circular corner fillets of radius
/// corner_radius; corner_radius = 0 degenerates to a sharp box whose
/// signed distance is still exact everywhere.
class RoundedRectangle final : public Shape {
  public:
    RoundedRectangle(double c1, double c2, double half1, double half2, double corner_radius)
        : c1_(c1), c2_(c2), b1_(half1 - corner_radius), b2_(half2 - corner_radius), r_(corner_radius) {
        if (half1 <= 0.0 || half2 <= 0.0) throw std::invalid_argument("rectangle half-extents must be positive");
        if (corner_radius < 0.0 || b1_ < 0.0 || b2_ < 0.0)
            throw std::invalid_argument("corner radius must lie in [0, min(half-extents)]");
    }
    double distance(double x1, double x2) const override {
        const double d1 = std::abs(x1 - c1_) - b1_, d2 = std::abs(x2 - c2_) - b2_;
        const double o1 = std::max(d1, 0.0), o2 = std::max(d2, 0.0);
        return std::hypot(o1, o2) + std::min(std::max(d1, d2), 0.0) - r_;
    }
    std::array<double, 2> normal(double x1, double x2) const override {
        const double q1 = x1 - c1_, q2 = x2 - c2_;
        const double d1 = std::abs(q1) - b1_, d2 = std::abs(q2) - b2_;
        const double s1 = q1 >= 0.0 ? 1.0 : -1.0, s2 = q2 >= 0.0 ? 1.0 : -1.0;
        if (d1 > 0.0 && d2 > 0.0) {
            const double len = std::hypot(d1, d2);
            return {s1 * d1 / len, s2 * d2 / len};
        }
        if (d1 >= d2) return {s1, 0.0};
        return {0.0, s2};
    }
    std::array<double, 4> bounds() const override {
        return {c1_ - b1_ - r_, c2_ - b2_ - r_, c1_ + b1_ + r_, c2_ + b2_ + r_};
    }

  private:
    double c1_, c2_, b1_, b2_, r_;
};

/// Union of shapes: phi = min over parts; the normal comes from the closest
/// part, earlier parts winning ties (x1-priority analog for medial points).
class ShapeUnion final : public Shape {
  public:
    explicit ShapeUnion(std::vector<std::shared_ptr<const Shape>> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw std::invalid_argument("shape union needs at least one part");
    }
    double distance(double x1, double x2) const override {
        double d = parts_.front()->distance(x1, x2);
        for (std::size_t p = 1; p < parts_.size(); ++p) d = std::min(d, parts_[p]->distance(x1, x2));
        return d;
    }
    std::array<double, 2> normal(double x1, double x2) const override {
        const Shape* best = parts_.front().get();
        double d = best->distance(x1, x2);
        for (std::size_t p = 1; p < parts_.size(); ++p) {
            const double dp = parts_[p]->distance(x1, x2);
            if (dp < d) {
                d = dp;
                best = parts_[p].get();
            }
        }
        return best->normal(x1, x2);
    }
    std::array<double, 4> bounds() const override {
        std::array<double, 4> b = parts_.front()->bounds();
        for (std::size_t p = 1; p < parts_.size(); ++p) {
            const std::array<double, 4> c = parts_[p]->bounds();
            b[0] = std::min(b[0], c[0]);
            b[1] = std::min(b[1], c[1]);
            b[2] = std::max(b[2], c[2]);
            b[3] = std::max(b[3], c[3]);
        }
        return b;
    }

  private:
    std::vector<std::shared_ptr<const Shape>> parts_;
};

/// Rigid translation of a shape frame over time. is_stationary marks
/// motions that never move, letting callers cache the numerical boundary.
struct Motion {
    std::function<std::array<double, 2>(double)> offset;
    std::function<std::array<double, 2>(double)> velocity;
    bool is_stationary = false;

    static Motion stationary() {
        return {[](double) { return std::array<double, 2>{0.0, 0.0}; },
                [](double) { return std::array<double, 2>{0.0, 0.0}; }, true};
    }
    /// Sinusoidal translation along one axis:
    /// offset = amplitude * sin(2 pi f t + phase).
    static Motion oscillation(double amplitude, double frequency, double phase, int axis) {
        const double om = 2.0 * pi * frequency;
        return {[=](double t) {
                    std::array<double, 2> o{0.0, 0.0};
                    o[axis] = amplitude * std::sin(om * t + phase);
                    return o;
                },
                [=](double t) {
                    std::array<double, 2> v{0.0, 0.0};
                    v[axis] = amplitude * om * std::cos(om * t + phase);
                    return v;
                },
                false};
    }
};

/// A solid body embedded in the periodic domain: an implicit shape carried
/// by a rigid translation, with the surface velocity equal to the body
/// velocity unless a slip value is prescribed (driven walls).
struct ImmersedBody {
    std::shared_ptr<const Shape> shape;
    Motion motion = Motion::stationary();
    std::optional<std::array<double, 2>> surface_slip;

    double distance(double x1, double x2, double t) const {
        const std::array<double, 2> o = motion.offset(t);
        return shape->distance(x1 - o[0], x2 - o[1]);
    }
    std::array<double, 2> normal(double x1, double x2, double t) const {
        const std::array<double, 2> o = motion.offset(t);
        return shape->normal(x1 - o[0], x2 - o[1]);
    }
    std::array<double, 2> surface_velocity(double t) const {
        if (surface_slip) return *surface_slip;
        return motion.velocity(t);
    }
    std::array<double, 4> bounds(double t) const {
        const std::array<double, 2> o = motion.offset(t);
        const std::array<double, 4> b = shape->bounds();
        return {b[0] + o[0], b[1] + o[1], b[2] + o[0], b[3] + o[1]};
    }
};

/// Four-point bilinear interpolation stencil anchored at cell (i0, j0),
/// weights ordered (i0,j0), (i0+1,j0), (i0,j0+1), (i0+1,j0+1). Weights are
/// nonnegative and sum to one; the stencil is valid only when every corner
/// lies in the fluid.
struct BilinearStencil {
    int i0 = 0, j0 = 0;
    std::array<double, 4> w{0.0, 0.0, 0.0, 0.0};
    bool valid = false;

    double sample(const PhysicalField& f) const {
        const Grid& g = f.grid();
        const int i1 = (i0 + 1) % g.n1, j1 = (j0 + 1) % g.n2;
        return w[0] * f(i0, j0) + w[1] * f(i1, j0) + w[2] * f(i0, j1) + w[3] * f(i1, j1);
    }
};

/// Build the bilinear stencil for an arbitrary position; fluid(x1, x2)
/// decides whether a corner node may participate.
inline BilinearStencil build_bilinear(const Grid& g, double x1, double x2,
                                      const std::function<bool(double, double)>& fluid) {
    BilinearStencil s;
    const double f1 = (x1 + 0.5 * g.l1) / g.dx1();
    const double f2 = (x2 + 0.5 * g.l2) / g.dx2();
    const double c1 = std::floor(f1), c2 = std::floor(f2);
    s.i0 = static_cast<int>(c1);
    s.j0 = static_cast<int>(c2);
    const double a = f1 - c1, b = f2 - c2;
    s.w = {(1.0 - a) * (1.0 - b), a * (1.0 - b), (1.0 - a) * b, a * b};
    if (s.i0 < 0 || s.i0 + 1 >= g.n1 || s.j0 < 0 || s.j0 + 1 >= g.n2) return s;
    s.valid = true;
    for (int c = 0; c < 4; ++c) {
        if (s.w[c] == 0.0) continue;
        const int i = s.i0 + c % 2, j = s.j0 + c / 2;
        if (!fluid(g.x1(i), g.x2(j))) {
            s.valid = false;
            break;
        }
    }
    return s;
}

/// One grid point of the numerical boundary: the first layer of solid nodes
/// seen from the fluid, with the normal-direction probe geometry used by
/// polynomial extrapolation.
struct BoundaryPoint {
    int i = 0, j = 0;
    std::array<double, 2> n{0.0, 0.0};
    std::array<double, 2> foot{0.0, 0.0};
    double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
    int order = 0;
    BilinearStencil probe1, probe2;
};

struct NumericalBoundary {
    std::vector<BoundaryPoint> points;
    /// Number of points whose extrapolation order had to drop below the
    /// requested one because a fluid-only stencil was impossible.
    int downgraded = 0;
};

/// Identify the numerical boundary of one body: the solid grid points whose
/// cell-size neighborhood reaches into open fluid, -min(dx,dy) < phi <= 0.
/// Visits only the body's bounding box. Probes for the extrapolation
/// stencils sit at probe_spacing and 2 * probe_spacing beyond the surface
/// foot point; stencil corners must satisfy fluid(), which defaults to this
/// body's exterior but should test all bodies in multi-body setups.
inline NumericalBoundary identify_numerical_boundary(
    const ImmersedBody& body, const Grid& g, double t, int requested_order,
    double probe_spacing = 0.0,
    const std::function<bool(double, double)>& fluid_in = nullptr) {
    if (requested_order < 0 || requested_order > 2)
        throw std::invalid_argument("extrapolation order must be 0, 1 or 2");
    const double h = g.min_dx();
    const double dp = probe_spacing > 0.0 ? probe_spacing : h;
    std::function<bool(double, double)> fluid = fluid_in;
    if (!fluid) fluid = [&](double x1, double x2) { return body.distance(x1, x2, t) > 0.0; };

    const std::array<double, 4> bb = body.bounds(t);
    const int i_lo = static_cast<int>(std::floor((bb[0] + 0.5 * g.l1) / g.dx1())) - 1;
    const int i_hi = static_cast<int>(std::ceil((bb[2] + 0.5 * g.l1) / g.dx1())) + 1;
    const int j_lo = static_cast<int>(std::floor((bb[1] + 0.5 * g.l2) / g.dx2())) - 1;
    const int j_hi = static_cast<int>(std::ceil((bb[3] + 0.5 * g.l2) / g.dx2())) + 1;
    if (i_lo < 0 || i_hi >= g.n1 || j_lo < 0 || j_hi >= g.n2)
        throw std::invalid_argument("body extends outside the computational domain");

    NumericalBoundary nb;
    for (int j = j_lo; j <= j_hi; ++j) {
        for (int i = i_lo; i <= i_hi; ++i) {
            const double x1 = g.x1(i), x2 = g.x2(j);
            const double phi = body.distance(x1, x2, t);
            if (!(phi > -h && phi <= 0.0)) continue;
            BoundaryPoint p;
            p.i = i;
            p.j = j;
            p.n = body.normal(x1, x2, t);
            p.delta1 = -phi;
            p.delta2 = dp;
            p.delta3 = dp;
            p.foot = {x1 - phi * p.n[0], x2 - phi * p.n[1]};
            p.order = 0;
            if (requested_order >= 1) {
                p.probe1 = build_bilinear(g, p.foot[0] + dp * p.n[0], p.foot[1] + dp * p.n[1], fluid);
                if (p.probe1.valid) {
                    p.order = 1;
                    if (requested_order == 2) {
                        p.probe2 = build_bilinear(g, p.foot[0] + 2.0 * dp * p.n[0],
                                                  p.foot[1] + 2.0 * dp * p.n[1], fluid);
                        if (p.probe2.valid) p.order = 2;
                    }
                }
            }
            if (p.order < requested_order) ++nb.downgraded;
            nb.points.push_back(p);
        }
    }
    if (nb.points.empty())
        throw std::invalid_argument("body has no numerical boundary points (smaller than one cell)");
    return nb;
}

} // namespace ibps
