#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <vector>

#include "ibps/grid.hpp"

namespace ibps {

/// 64-byte aligned allocator so field buffers can be handed to FFTW's
/// SIMD code paths via the new-array execute interface.
template <class T>
struct AlignedAlloc {
    using value_type = T;
    AlignedAlloc() = default;
    template <class U>
    AlignedAlloc(const AlignedAlloc<U>&) {}
    T* allocate(std::size_t n) {
        void* p = std::aligned_alloc(64, ((n * sizeof(T) + 63) / 64) * 64);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }
    template <class U>
    bool operator==(const AlignedAlloc<U>&) const { return true; }
};

using complex = std::complex<double>;

/// Real-valued field sampled on a Grid, x1-fastest row-major.
class PhysicalField {
  public:
    PhysicalField() = default;
    explicit PhysicalField(const Grid& g, double fill = 0.0) : grid_(g), v_(g.size(), fill) {}

    const Grid& grid() const { return grid_; }

    double& operator()(int i, int j) { return v_[std::size_t(i) + std::size_t(grid_.n1) * j]; }
    double operator()(int i, int j) const { return v_[std::size_t(i) + std::size_t(grid_.n1) * j]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }

    void fill(double x) { std::fill(v_.begin(), v_.end(), x); }

  private:
    Grid grid_;
    std::vector<double, AlignedAlloc<double>> v_;
};

/// Complex half-spectrum of a real field: columns k1 = 0..n1/2, rows j = 0..n2-1
/// with k2 = j for j <= n2/2 and k2 = j - n2 otherwise. Negative-k1 modes are
/// implied by conjugate symmetry so the inverse transform of any valid
/// instance is real. With the 1/(n1*n2) forward normalization the (0,0)
/// coefficient equals the field mean. Slot (k1, k2) holds the coefficient of
/// exp(i kappa . (x + l/2)), harmonics referenced to the domain corner where
/// grid index 0 sits; diagonal operators, products and all physical-space
/// results are independent of that phase.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid_(g), c_(g.spectral_size(), complex(0.0, 0.0)) {}

    const Grid& grid() const { return grid_; }

    complex& operator()(int k1, int j) { return c_[std::size_t(k1) + std::size_t(grid_.nk1()) * j]; }
    complex operator()(int k1, int j) const { return c_[std::size_t(k1) + std::size_t(grid_.nk1()) * j]; }

    complex* data() { return c_.data(); }
    const complex* data() const { return c_.data(); }
    std::size_t size() const { return c_.size(); }

    complex mean_mode() const { return c_[0]; }
    void set_mean_mode(complex v) { c_[0] = v; }

    void fill(complex x) { std::fill(c_.begin(), c_.end(), x); }

  private:
    Grid grid_;
    std::vector<complex, AlignedAlloc<complex>> c_;
};

} // namespace ibps
