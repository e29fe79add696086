#pragma once

#include <cmath>
#include <stdexcept>

namespace ibps {

inline constexpr double pi = 3.14159265358979323846;

/// Uniform periodic grid on [-l1/2, l1/2) x [-l2/2, l2/2).
/// Storage convention for fields on this grid: row-major with x1 fastest,
/// i.e. index = i + n1*j for the point (x1(i), x2(j)).
struct Grid {
    int n1 = 0;
    int n2 = 0;
    double l1 = 0.0;
    double l2 = 0.0;

    Grid() = default;
    Grid(int n1_, int n2_, double l1_, double l2_) : n1(n1_), n2(n2_), l1(l1_), l2(l2_) {
        if (n1 < 2 || n2 < 2 || n1 % 2 != 0 || n2 % 2 != 0)
            throw std::invalid_argument("Grid: n1, n2 must be even and >= 2");
        if (!(l1 > 0.0) || !(l2 > 0.0))
            throw std::invalid_argument("Grid: l1, l2 must be positive");
    }

    double dx1() const { return l1 / n1; }
    double dx2() const { return l2 / n2; }
    double min_dx() const { return dx1() < dx2() ? dx1() : dx2(); }

    double x1(int i) const { return i * dx1() - 0.5 * l1; }
    double x2(int j) const { return j * dx2() - 0.5 * l2; }

    /// Integer wavenumber along x2 for spectral row j (negative half wraps).
    int k2_int(int j) const { return j <= n2 / 2 ? j : j - n2; }

    /// Physical wavenumbers kappa_i = 2*pi*k_i/l_i.
    double kappa1(int k1) const { return 2.0 * pi * k1 / l1; }
    double kappa2(int k2) const { return 2.0 * pi * k2 / l2; }

    /// Largest wavenumber magnitude representable on the grid.
    double kappa_max_sq() const {
        const double a = kappa1(n1 / 2), b = kappa2(n2 / 2);
        return a * a + b * b;
    }

    /// Number of complex columns in half-spectrum storage.
    int nk1() const { return n1 / 2 + 1; }

    std::size_t size() const { return std::size_t(n1) * n2; }
    std::size_t spectral_size() const { return std::size_t(nk1()) * n2; }

    double cell_area() const { return dx1() * dx2(); }

    bool operator==(const Grid& o) const {
        return n1 == o.n1 && n2 == o.n2 && l1 == o.l1 && l2 == o.l2;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Smallest even 7-smooth size >= ceil(3n/2), used for dealiasing pads.
inline int padded_size(int n) {
    auto smooth = [](int m) {
        for (int p : {2, 3, 5, 7})
            while (m % p == 0) m /= p;
        return m == 1;
    };
    int m = (3 * n + 1) / 2;
    if (m % 2 != 0) ++m;
    while (!smooth(m)) m += 2;
    return m;
}

} // namespace ibps
