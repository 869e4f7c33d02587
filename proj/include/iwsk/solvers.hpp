#pragma once

#include "iwsk/averaging.hpp"
#include "iwsk/propagators.hpp"
#include "iwsk/trajectory.hpp"

namespace iwsk {

struct ModelParams {
    std::shared_ptr<const Grid> grid;
    double eps = 0.0;   // > 0 for the full model; unused by the effective one
    int sigma = 1;
    CouplingFn lambda;  // lambda(x, y), real-valued

    double b() const { return grid->b(); }
    void validate(bool need_eps) const;
};

/// Strang splitting for
///   i d_t psi = H_eps psi / eps^2 + lambda(eps x, y) |psi|^{2 sigma} psi :
/// exact pointwise nonlinear phase half-step, exact linear step via the
/// displacement diagonalization, half-step. Snapshots every out_every steps
/// (t = 0 and the final step always included). NaN aborts with step index.
Trajectory solve_full(const ModelParams& params, const SpectralField& psi0, double t_final,
                      double dt, int out_every);

/// phi(t) = e^{+i t H / eps^2} psi(t) applied per sample.
Trajectory filter_trajectory(const Trajectory& traj, double eps);

/// Classical RK4 for the non-dispersive averaged model
///   i d_t phi = lambda(0, y) F_av(phi)
/// (the coupling enters the average through lambda(0*x, y)).
Trajectory solve_effective(const ModelParams& params, const SpectralField& psi0,
                           double t_final, double dt, int out_every, const ThetaRule& rule);

/// Explicit single-eigenspace state alpha0(y) chi_n(x) e^{-i t omega_n(y)} with
/// omega_n(y) = lambda(0, y) |alpha0(y)|^{2 sigma} * integral |chi_n|^{2 sigma + 2} dx.
SpectralField polarized_exact(const std::function<cplx(double)>& alpha0, int n, double t,
                              const ModelParams& params);

/// sup over shared sample times of || e^{i t H / eps^2} psi(t) - phi(t) ||_{L^2}.
double compare_to_effective(const Trajectory& full, const Trajectory& effective, double eps);

/// Canonical initial data: 2^{-1/2}(chi_0 + chi_1)(x) * pi^{-1/4} e^{-y^2/2}.
SpectralField standard_initial(std::shared_ptr<const Grid> grid);
/// alpha0(y) chi_n(x).
SpectralField polarized_initial(std::shared_ptr<const Grid> grid, int n,
                                const std::function<cplx(double)>& alpha0);
/// pi^{-1/4} e^{-y^2/2}.
std::function<cplx(double)> gaussian_profile();

}  // namespace iwsk
