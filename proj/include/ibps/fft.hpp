#pragma once

#include <fftw3.h>

#include <cstring>

#include "ibps/field.hpp"

namespace ibps {

enum class PlanMode { estimate, measure };

struct TransformCounts {
    long nonpadded = 0; ///< transforms executed on the solution grid
    long padded = 0;    ///< transforms executed on the 3/2-rule grid
};

/// FFTW-backed transform pair between PhysicalField and SpectralField.
/// Forward divides by n1*n2 so the (0,0) coefficient is the field mean;
/// inverse is the plain unnormalized c2r, making the pair an identity.
/// Also owns the plans for the zero-padded (dealiasing) grid, created
/// lazily on first use.
class Transformer {
  public:
    explicit Transformer(const Grid& g, PlanMode mode = PlanMode::estimate)
        : grid_(g), mode_(mode) {
        pad_ = Grid(padded_size(g.n1), padded_size(g.n2), g.l1, g.l2);
        scratch_r_ = PhysicalField(grid_);
        scratch_c_ = SpectralField(grid_);
        const unsigned flags = mode == PlanMode::measure ? FFTW_MEASURE : FFTW_ESTIMATE;
        fwd_ = fftw_plan_dft_r2c_2d(grid_.n2, grid_.n1, scratch_r_.data(),
                                    reinterpret_cast<fftw_complex*>(scratch_c_.data()), flags);
        bwd_ = fftw_plan_dft_c2r_2d(grid_.n2, grid_.n1,
                                    reinterpret_cast<fftw_complex*>(scratch_c_.data()),
                                    scratch_r_.data(), flags);
        if (!fwd_ || !bwd_) throw std::runtime_error("Transformer: FFTW plan creation failed");
    }

    ~Transformer() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        if (pfwd_) fftw_destroy_plan(pfwd_);
        if (pbwd_) fftw_destroy_plan(pbwd_);
    }

    Transformer(const Transformer&) = delete;
    Transformer& operator=(const Transformer&) = delete;

    const Grid& grid() const { return grid_; }
    const Grid& padded_grid() const { return pad_; }

    /// omega_hat = F[omega] / (n1*n2).
    void forward(const PhysicalField& in, SpectralField& out) const {
        check(in.grid(), out.grid(), grid_);
        fftw_execute_dft_r2c(fwd_, const_cast<double*>(in.data()),
                             reinterpret_cast<fftw_complex*>(scratch_c_.data()));
        const double s = 1.0 / (double(grid_.n1) * grid_.n2);
        const complex* src = scratch_c_.data();
        complex* dst = out.data();
        for (std::size_t m = 0; m < out.size(); ++m) dst[m] = s * src[m];
        ++counts_.nonpadded;
    }

    /// omega = F^-1[omega_hat]; the input field is preserved.
    void inverse(const SpectralField& in, PhysicalField& out) const {
        check(out.grid(), in.grid(), grid_);
        // multi-d c2r destroys its input, so run it on a scratch copy
        std::memcpy(scratch_c_.data(), in.data(), in.size() * sizeof(complex));
        fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(scratch_c_.data()), out.data());
        ++counts_.nonpadded;
    }

    void forward_padded(const PhysicalField& in, SpectralField& out) const {
        ensure_padded_plans();
        check(in.grid(), out.grid(), pad_);
        fftw_execute_dft_r2c(pfwd_, const_cast<double*>(in.data()),
                             reinterpret_cast<fftw_complex*>(pscratch_c_.data()));
        const double s = 1.0 / (double(pad_.n1) * pad_.n2);
        const complex* src = pscratch_c_.data();
        complex* dst = out.data();
        for (std::size_t m = 0; m < out.size(); ++m) dst[m] = s * src[m];
        ++counts_.padded;
    }

    void inverse_padded(const SpectralField& in, PhysicalField& out) const {
        ensure_padded_plans();
        check(out.grid(), in.grid(), pad_);
        std::memcpy(pscratch_c_.data(), in.data(), in.size() * sizeof(complex));
        fftw_execute_dft_c2r(pbwd_, reinterpret_cast<fftw_complex*>(pscratch_c_.data()), out.data());
        ++counts_.padded;
    }

    const TransformCounts& counts() const { return counts_; }
    void reset_counts() { counts_ = TransformCounts{}; }

  private:
    static void check(const Grid& a, const Grid& b, const Grid& want) {
        if (a != want || b != want)
            throw std::invalid_argument("Transformer: field grid does not match plan grid");
    }

    void ensure_padded_plans() const {
        if (pfwd_) return;
        pscratch_r_ = PhysicalField(pad_);
        pscratch_c_ = SpectralField(pad_);
        const unsigned flags = mode_ == PlanMode::measure ? FFTW_MEASURE : FFTW_ESTIMATE;
        pfwd_ = fftw_plan_dft_r2c_2d(pad_.n2, pad_.n1, pscratch_r_.data(),
                                     reinterpret_cast<fftw_complex*>(pscratch_c_.data()), flags);
        pbwd_ = fftw_plan_dft_c2r_2d(pad_.n2, pad_.n1,
                                     reinterpret_cast<fftw_complex*>(pscratch_c_.data()),
                                     pscratch_r_.data(), flags);
        if (!pfwd_ || !pbwd_) throw std::runtime_error("Transformer: FFTW padded plan failed");
    }

    Grid grid_;
    Grid pad_;
    PlanMode mode_;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
    mutable fftw_plan pfwd_ = nullptr, pbwd_ = nullptr;
    mutable PhysicalField scratch_r_, pscratch_r_;
    mutable SpectralField scratch_c_, pscratch_c_;
    mutable TransformCounts counts_;
};

} // namespace ibps
