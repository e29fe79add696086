#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ibps/dynamics.hpp"

using namespace ibps;

namespace {

SpectralField spectrum_of(const Grid& g, double (*f)(double, double)) {
    Transformer tr(g);
    PhysicalField p(g);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) p(i, j) = f(g.x1(i), g.x2(j));
    SpectralField out(g);
    tr.forward(p, out);
    return out;
}

double mode_norm(const SpectralField& a, const SpectralField& b) {
    double s = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) s += std::norm(a.data()[m] - b.data()[m]);
    return std::sqrt(s);
}

} // namespace

TEST_CASE("single diffusive mode advances by the exact RK4 growth factor") {
    const Grid g{32, 32, 2.0 * pi, 2.0 * pi};
    Transformer tr(g);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    SpectralField w = spectrum_of(g, [](double x, double) { return std::sin(x); });
    SpectralField w0 = w;
    rk4_step(tr, ws, sw, w, 0.0, 0.1, 1.0, plain_conditioner());
    double err = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m)
        err = std::max(err, std::abs(w.data()[m] - 0.9048375 * w0.data()[m]));
    CHECK(err <= 1e-12);
}

TEST_CASE("advection term matches the hand-derived cellular-plus-shear solution") {
    const Grid g{32, 32, 2.0 * pi, 2.0 * pi};
    Transformer tr(g);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    SpectralField w = spectrum_of(
        g, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y) + std::sin(x); });
    SpectralField u1(g), u2(g), rhs(g);
    velocity_from_vorticity(w, u1, u2);
    vorticity_rhs(tr, ws, sw, w, u1, u2, 0.0, rhs);

    // d_t omega = sin(2x) cos(y) / 2, whose (2, +-1) coefficient is -i/8 in
    // centered coordinates; the corner-origin slot basis flips the sign of
    // odd-total-wavenumber modes on this domain.
    const complex want(0.0, 0.125);
    CHECK(std::abs(rhs(2, 1) - want) <= 1e-13);
    CHECK(std::abs(rhs(2, g.n2 - 1) - want) <= 1e-13);
    double rest = 0.0;
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k <= g.n1 / 2; ++k)
            if (!(k == 2 && (j == 1 || j == g.n2 - 1)))
                rest = std::max(rest, std::abs(rhs(k, j)));
    CHECK(rest <= 1e-13);
}

TEST_CASE("right-hand side keeps the mean mode and Nyquist slots empty") {
    const Grid g{24, 24, 2.0, 5.0};
    Transformer tr(g);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    PhysicalField p(g);
    for (std::size_t m = 0; m < p.size(); ++m) p.data()[m] = dist(rng);
    SpectralField w(g), u1(g), u2(g), rhs(g);
    tr.forward(p, w);
    zero_nyquist(w);
    velocity_from_vorticity(w, u1, u2);
    vorticity_rhs(tr, ws, sw, w, u1, u2, 0.3, rhs);
    CHECK(std::abs(rhs.mean_mode()) == 0.0);
    for (int j = 0; j < g.n2; ++j) CHECK(std::abs(rhs(g.n1 / 2, j)) == 0.0);
    for (int k = 0; k <= g.n1 / 2; ++k) CHECK(std::abs(rhs(k, g.n2 / 2)) == 0.0);
}

TEST_CASE("conditioner runs once per stage and defines the update base") {
    const Grid g{16, 16, 2.0 * pi, 2.0 * pi};
    Transformer tr(g);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    SpectralField w = spectrum_of(g, [](double x, double y) { return std::sin(x) + std::cos(y); });
    const SpectralField w0 = w;

    std::vector<double> times;
    auto mock = [&](double t, SpectralField& wf, SpectralField& u1, SpectralField& u2) {
        times.push_back(t);
        wf(1, 0) = complex(0.0, 0.0);
        u1.fill(complex(0.0, 0.0));
        u2.fill(complex(0.0, 0.0));
    };
    rk4_step(tr, ws, sw, w, 2.0, 0.5, 0.0, mock);

    REQUIRE(times.size() == 4);
    CHECK(times[0] == Catch::Approx(2.0));
    CHECK(times[1] == Catch::Approx(2.25));
    CHECK(times[2] == Catch::Approx(2.25));
    CHECK(times[3] == Catch::Approx(2.5));

    CHECK(std::abs(w(1, 0)) == 0.0);
    double rest = 0.0;
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k <= g.n1 / 2; ++k)
            if (!(k == 1 && j == 0)) rest = std::max(rest, std::abs(w(k, j) - w0(k, j)));
    CHECK(rest <= 1e-15);
}

TEST_CASE("cellular vortex array decays at the viscous rate") {
    const Grid g{32, 32, 2.0 * pi, 2.0 * pi};
    Transformer tr(g);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    const double nu = 0.01, dt = 0.01;
    SpectralField w =
        spectrum_of(g, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y); });
    for (int s = 0; s < 100; ++s) rk4_step(tr, ws, sw, w, s * dt, dt, nu, plain_conditioner());

    PhysicalField wp(g);
    tr.inverse(w, wp);
    const double decay = std::exp(-2.0 * nu * 1.0);
    double err = 0.0;
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i)
            err = std::max(err,
                           std::abs(wp(i, j) - 2.0 * decay * std::sin(g.x1(i)) * std::sin(g.x2(j))));
    CHECK(err <= 1e-10);
}

TEST_CASE("time stepping converges at fourth order on a nonlinear flow") {
    const Grid g{32, 32, 2.0 * pi, 2.0 * pi};
    Transformer tr(g);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    const double nu = 0.05, t_end = 0.2;
    auto init = [&] {
        return spectrum_of(
            g, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y) + std::sin(x); });
    };
    auto advance = [&](double dt) {
        SpectralField w = init();
        const int steps = static_cast<int>(std::lround(t_end / dt));
        for (int s = 0; s < steps; ++s) rk4_step(tr, ws, sw, w, s * dt, dt, nu, plain_conditioner());
        return w;
    };
    const SpectralField ref = advance(1e-3);
    const double err_coarse = mode_norm(advance(0.02), ref);
    const double err_fine = mode_norm(advance(0.01), ref);
    const double ratio = err_coarse / err_fine;
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("stage-one speed reports the true velocity maximum") {
    const Grid g{32, 32, 2.0 * pi, 2.0 * pi};
    Transformer tr(g);
    ProductWorkspace ws(tr);
    StepWorkspace sw(g);
    SpectralField w =
        spectrum_of(g, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y); });
    const double speed = rk4_step(tr, ws, sw, w, 0.0, 1e-4, 0.0, plain_conditioner());
    CHECK(speed == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("non-finite values are detected") {
    const Grid g{16, 16, 1.0, 1.0};
    SpectralField w(g);
    w.fill(complex(1.0, 0.0));
    CHECK_FALSE(has_non_finite(w));
    w(3, 5) = complex(std::nan(""), 0.0);
    CHECK(has_non_finite(w));
    w(3, 5) = complex(0.0, std::numeric_limits<double>::infinity());
    CHECK(has_non_finite(w));
}

TEST_CASE("diffusion stability number scales with the grid cutoff") {
    const Grid g{256, 256, 2.0 * pi, 2.0 * pi};
    const double kmax_sq = 2.0 * 128.0 * 128.0;
    CHECK(diffusion_stability_number(g, 1e-3, 1e-2) == Catch::Approx(1e-5 * kmax_sq));
    CHECK(diffusion_stability_number(g, 1e-3, 1e-2) < rk4_diffusion_limit);
}
