#include "iwsk/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace iwsk {

namespace {
// FFTW plan creation is not thread-safe; execution on distinct arrays is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

cplx* scratch(std::size_t n) {
    thread_local std::vector<cplx> buf;
    if (buf.size() < n) buf.resize(n);
    return buf.data();
}
}  // namespace

YTransform::YTransform(int n_rows, int n_spec, int n_grid, double l_y)
    : n_rows_(n_rows), n_spec_(n_spec), n_grid_(n_grid), l_y_(l_y) {
    if (n_rows < 1 || n_spec < 4 || n_spec % 2 != 0)
        throw ConfigError("YTransform: n_spec must be even and >= 4");
    if (n_grid < n_spec) throw ConfigError("YTransform: n_grid < n_spec");
    if (l_y <= 0.0) throw ConfigError("YTransform: l_y must be positive");

    const double root = std::sqrt(2.0 * l_y);
    phase_.resize(n_spec);
    iphase_.resize(n_spec);
    for (int k = 0; k < n_spec; ++k) {
        const int k_int = (k < n_spec / 2) ? k : k - n_spec;
        const double sgn = (k_int % 2 == 0) ? 1.0 : -1.0;  // e^{-i pi k_int}
        phase_[k] = sgn / root;
        iphase_[k] = sgn * root / n_grid;
    }

    std::lock_guard<std::mutex> lock(plan_mutex());
    std::vector<cplx> a(static_cast<std::size_t>(n_rows) * n_grid);
    std::vector<cplx> b(a.size());
    int n[1] = {n_grid};
    plan_fwd_ = fftw_plan_many_dft(
        1, n, n_rows, reinterpret_cast<fftw_complex*>(a.data()), nullptr, 1, n_grid,
        reinterpret_cast<fftw_complex*>(b.data()), nullptr, 1, n_grid, FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_many_dft(
        1, n, n_rows, reinterpret_cast<fftw_complex*>(a.data()), nullptr, 1, n_grid,
        reinterpret_cast<fftw_complex*>(b.data()), nullptr, 1, n_grid, FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_fwd_ || !plan_bwd_) throw NumericError("YTransform: FFTW planning failed");
}

YTransform::~YTransform() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void YTransform::to_grid(const cplx* coeffs, cplx* grid) const {
    const std::size_t total = static_cast<std::size_t>(n_rows_) * n_grid_;
    cplx* tmp = scratch(total);
    std::memset(tmp, 0, total * sizeof(cplx));
    const int half = n_spec_ / 2;
    for (int r = 0; r < n_rows_; ++r) {
        const cplx* src = coeffs + static_cast<std::size_t>(r) * n_spec_;
        cplx* dst = tmp + static_cast<std::size_t>(r) * n_grid_;
        for (int k = 0; k < half; ++k) dst[k] = src[k] * phase_[k];
        for (int k = half; k < n_spec_; ++k) dst[n_grid_ - n_spec_ + k] = src[k] * phase_[k];
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(tmp),
                     reinterpret_cast<fftw_complex*>(grid));
}

void YTransform::from_grid(const cplx* grid, cplx* coeffs) const {
    const std::size_t total = static_cast<std::size_t>(n_rows_) * n_grid_;
    cplx* tmp = scratch(total);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(grid)),
                     reinterpret_cast<fftw_complex*>(tmp));
    const int half = n_spec_ / 2;
    for (int r = 0; r < n_rows_; ++r) {
        const cplx* src = tmp + static_cast<std::size_t>(r) * n_grid_;
        cplx* dst = coeffs + static_cast<std::size_t>(r) * n_spec_;
        for (int k = 0; k < half; ++k) dst[k] = src[k] * iphase_[k];
        for (int k = half; k < n_spec_; ++k) dst[k] = src[n_grid_ - n_spec_ + k] * iphase_[k];
    }
}

}  // namespace iwsk
