#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ibps/fft.hpp"
#include "ibps/field.hpp"
#include "ibps/filtering.hpp"
#include "ibps/spectral_ops.hpp"

using namespace ibps;

namespace {

SpectralField random_spectrum(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpectralField f(g);
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k <= g.n1 / 2; ++k) f(k, j) = complex(u(rng), u(rng));
    f.set_mean_mode(complex(u(rng), 0.0));
    zero_nyquist(f);
    return f;
}

} // namespace

TEST_CASE("filter with zero length is the identity") {
    const Grid g(16, 12, 2.0 * pi, 1.5);
    SpectralField f = random_spectrum(g, 11u);
    SpectralField out = helmholtz_filter(f, 0.0);
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k <= g.n1 / 2; ++k) REQUIRE(out(k, j) == f(k, j));
}

TEST_CASE("single mode attenuates by one over one plus alpha squared kappa squared") {
    const Grid g(32, 32, 2.0 * pi, 2.0 * pi);
    Transformer tr(g);
    PhysicalField s(g);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) s(i, j) = std::sin(g.x1(i));
    SpectralField sh(g);
    tr.forward(s, sh);

    const double alpha = 0.37;
    SpectralField fh = helmholtz_filter(sh, alpha);
    const double gain = 1.0 / (1.0 + alpha * alpha);
    REQUIRE(std::abs(fh(1, 0) - gain * sh(1, 0)) < 1e-14);
    REQUIRE(std::abs(std::abs(fh(1, 0)) - 0.5 * gain) < 1e-14);
}

TEST_CASE("attenuation uses physical wavenumbers on anisotropic boxes") {
    const Grid g(32, 32, 2.0 * pi, pi);
    SpectralField f(g);
    f(3, 2) = complex(0.25, -0.5);
    const double alpha = 0.11;
    SpectralField out = helmholtz_filter(f, alpha);
    // k2 = 2 on a box of length pi carries kappa2 = 4.
    const double gain = 1.0 / (1.0 + alpha * alpha * (3.0 * 3.0 + 4.0 * 4.0));
    REQUIRE(std::abs(out(3, 2) - gain * f(3, 2)) < 1e-15);
}

TEST_CASE("constant field and mean mode pass through unchanged") {
    const Grid g(16, 16, 2.0, 2.0);
    SpectralField f(g);
    f.set_mean_mode(complex(3.75, 0.0));
    f(2, 5) = complex(1.0, 1.0);
    SpectralField out = helmholtz_filter(f, 2.0);
    REQUIRE(out.mean_mode() == f.mean_mode());
    REQUIRE(std::abs(out(2, 5)) < std::abs(f(2, 5)));
}

TEST_CASE("filter length from the dimensionless factor matches hand arithmetic") {
    const Grid g(512, 512, 2.0 * pi, 2.0 * pi);
    const double a1 = alpha_from_c_alpha(1.0, 2.0 * pi, g);
    const double a2 = alpha_from_c_alpha(0.46, 2.0 * pi, g);
    REQUIRE(a1 == Catch::Approx(2.762135864009951e-3).epsilon(1e-12));
    REQUIRE(a2 == Catch::Approx(6.004643182630329e-3).epsilon(1e-12));
    // Four-significant-digit values quoted for this grid.
    REQUIRE(std::abs(a1 - 2.7621e-3) < 5e-8);
    REQUIRE(std::abs(a2 - 6.0046e-3) < 5e-8);

    // Doubling the factor halves the length.
    REQUIRE(alpha_from_c_alpha(2.0, 2.0 * pi, g) == Catch::Approx(0.5 * a1).epsilon(1e-15));

    REQUIRE(FilterSpec(0.46).alpha(2.0 * pi, g) == a2);
    REQUIRE_THROWS_AS(alpha_from_c_alpha(0.0, 2.0 * pi, g), std::invalid_argument);
    REQUIRE_THROWS_AS(alpha_from_c_alpha(-1.0, 2.0 * pi, g), std::invalid_argument);
    REQUIRE_THROWS_AS(FilterSpec(-0.2), std::invalid_argument);
    REQUIRE_THROWS_AS(helmholtz_filter(SpectralField(g), -0.1), std::invalid_argument);
}

TEST_CASE("filter is linear self-adjoint and contractive") {
    const Grid g(16, 16, 2.0 * pi, 2.0 * pi);
    SpectralField f = random_spectrum(g, 21u);
    SpectralField h = random_spectrum(g, 22u);
    const double alpha = 0.42;

    SpectralField combo(g);
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k <= g.n1 / 2; ++k) combo(k, j) = 2.0 * f(k, j) - 0.5 * h(k, j);
    SpectralField fc = helmholtz_filter(combo, alpha);
    SpectralField ff = helmholtz_filter(f, alpha);
    SpectralField fh = helmholtz_filter(h, alpha);

    complex lhs_dot(0.0, 0.0), rhs_dot(0.0, 0.0);
    for (int j = 0; j < g.n2; ++j) {
        for (int k = 0; k <= g.n1 / 2; ++k) {
            REQUIRE(std::abs(fc(k, j) - (2.0 * ff(k, j) - 0.5 * fh(k, j))) < 1e-14);
            REQUIRE(std::abs(ff(k, j)) <= std::abs(f(k, j)) + 1e-16);
            const double weight = (k == 0 || k == g.n1 / 2) ? 1.0 : 2.0;
            lhs_dot += weight * ff(k, j) * std::conj(h(k, j));
            rhs_dot += weight * f(k, j) * std::conj(fh(k, j));
        }
    }
    REQUIRE(std::abs(lhs_dot - rhs_dot) < 1e-12);
}

TEST_CASE("filter commutes with velocity recovery") {
    const Grid g(24, 24, 2.0 * pi, 2.0 * pi);
    SpectralField w = random_spectrum(g, 31u);
    w.set_mean_mode(complex(0.0, 0.0));
    const double alpha = 0.09;

    SpectralField u1(g), u2(g), v1(g), v2(g);
    velocity_from_vorticity(helmholtz_filter(w, alpha), u1, u2);
    velocity_from_vorticity(w, v1, v2);
    SpectralField fu1 = helmholtz_filter(v1, alpha);
    SpectralField fu2 = helmholtz_filter(v2, alpha);
    for (int j = 0; j < g.n2; ++j) {
        for (int k = 0; k <= g.n1 / 2; ++k) {
            REQUIRE(std::abs(u1(k, j) - fu1(k, j)) < 1e-15);
            REQUIRE(std::abs(u2(k, j) - fu2(k, j)) < 1e-15);
        }
    }
}

TEST_CASE("filtering twice composes the symbol") {
    const Grid g(16, 16, 2.0 * pi, 2.0 * pi);
    SpectralField f = random_spectrum(g, 41u);
    const double alpha = 0.3;
    SpectralField twice = helmholtz_filter(helmholtz_filter(f, alpha), alpha);
    for (int j = 0; j < g.n2; ++j) {
        const double kap2 = g.kappa2(g.k2_int(j));
        for (int k = 0; k <= g.n1 / 2; ++k) {
            const double kap1 = g.kappa1(k);
            const double sym = 1.0 + alpha * alpha * (kap1 * kap1 + kap2 * kap2);
            REQUIRE(std::abs(twice(k, j) - f(k, j) / (sym * sym)) < 1e-14);
        }
    }
}
