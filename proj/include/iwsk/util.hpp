#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwsk {

using cplx = std::complex<double>;

/// Configuration / input validation failure (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical abort: NaN detected, quadratic form gone negative, ... (CLI exit code 3).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// e^{i*angle} with the argument reduced mod 2*pi in extended precision.
/// Large-angle phases (t*E_n/eps^2 ~ 1e4..1e5) would otherwise lose digits.
inline cplx unit_phase(double angle) {
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    long double r = std::fmod(static_cast<long double>(angle), two_pi);
    double a = static_cast<double>(r);
    return {std::cos(a), std::sin(a)};
}

/// Number of worker threads: IWSK_THREADS caps parallelism (0 = serial),
/// unset defaults to the hardware concurrency.
unsigned worker_threads();

/// Runs fn(i) for i in [0, n). Work is split into fixed chunks processed by
/// up to worker_threads() threads; chunk boundaries do not depend on the
/// thread count, so any ordered reduction done by the caller over chunk
/// results is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace iwsk
