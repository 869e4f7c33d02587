#pragma once

#include <memory>
#include <vector>

#include "iwsk/util.hpp"

namespace iwsk {

/// Batched 1D transforms between Fourier coefficients c_k (FFT-standard
/// order k = 0,1,...,N_y/2-1,-N_y/2,...,-1) and samples on the periodic grid
/// y_g = -L_y + g*2L_y/n_grid. The grid may be finer than the spectrum
/// (n_grid >= n_spec) for dealiased products; spectra are zero-padded on the
/// way out and truncated on the way back.
///
/// Conventions: psi(y) = sum_k c_k e^{i xi_k y} / sqrt(2 L_y), xi_k = pi k / L_y.
/// from_grid(to_grid(c)) = c exactly (up to rounding).
class YTransform {
  public:
    YTransform(int n_rows, int n_spec, int n_grid, double l_y);
    ~YTransform();
    YTransform(const YTransform&) = delete;
    YTransform& operator=(const YTransform&) = delete;

    int n_rows() const { return n_rows_; }
    int n_spec() const { return n_spec_; }
    int n_grid() const { return n_grid_; }

    /// coeffs: n_rows x n_spec row-major; grid: n_rows x n_grid row-major.
    void to_grid(const cplx* coeffs, cplx* grid) const;
    void from_grid(const cplx* grid, cplx* coeffs) const;

  private:
    int n_rows_, n_spec_, n_grid_;
    double l_y_;
    std::vector<cplx> phase_;     // (-1)^{k_int} / sqrt(2 L_y) per stored k
    std::vector<cplx> iphase_;    // inverse factors for from_grid
    void* plan_fwd_ = nullptr;    // fftw_plan, batched, out-of-place
    void* plan_bwd_ = nullptr;
    mutable std::vector<cplx> buf_;
};

}  // namespace iwsk
