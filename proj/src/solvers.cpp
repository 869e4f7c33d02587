#include "iwsk/solvers.hpp"

#include <cmath>

namespace iwsk {

void ModelParams::validate(bool need_eps) const {
    if (!grid) throw ConfigError("ModelParams: no grid");
    if (sigma < 1) throw ConfigError("ModelParams: sigma must be >= 1");
    if (!lambda) throw ConfigError("ModelParams: no coupling");
    if (need_eps && eps <= 0.0) throw ConfigError("ModelParams: eps must be positive");
}

namespace {
long step_count(double t_final, double dt) {
    if (dt <= 0.0 || t_final <= 0.0) throw ConfigError("solver: need positive dt and T");
    const long n = std::lround(t_final / dt);
    if (n < 1 || std::abs(n * dt - t_final) > 1e-9 * t_final)
        throw ConfigError("solver: dt must divide the final time");
    return n;
}

void check_finite(const SpectralField& u, long step) {
    if (!is_finite(u))
        throw NumericError("solver: non-finite value at step " + std::to_string(step));
}
}  // namespace

Trajectory solve_full(const ModelParams& params, const SpectralField& psi0, double t_final,
                      double dt, int out_every) {
    params.validate(true);
    if (!psi0.grid->compatible(*params.grid)) throw ConfigError("solve_full: grid mismatch");
    if (out_every < 1) throw ConfigError("solve_full: out_every must be >= 1");
    const long n_steps = step_count(t_final, dt);

    NonlinWorkspace nl(params.grid, params.sigma, params.lambda, params.eps);
    DisplacementTable table = build_displacement(params.grid, params.eps);

    Trajectory traj;
    traj.push(0.0, psi0);

    // Fused Strang steps: adjacent nonlinear half-steps merge except at
    // snapshot times.
    SpectralField psi = nl.phase_flow(psi0, 0.5 * dt);
    for (long s = 1; s <= n_steps; ++s) {
        psi = flow_full_linear(psi, dt, params.eps, table);
        const bool record = (s % out_every == 0) || s == n_steps;
        if (record) {
            psi = nl.phase_flow(psi, 0.5 * dt);
            check_finite(psi, s);
            traj.push(s * dt, psi);
            if (s < n_steps) psi = nl.phase_flow(psi, 0.5 * dt);
        } else {
            psi = nl.phase_flow(psi, dt);
            check_finite(psi, s);
        }
    }
    return traj;
}

Trajectory filter_trajectory(const Trajectory& traj, double eps) {
    if (eps <= 0.0) throw ConfigError("filter_trajectory: eps must be positive");
    Trajectory out;
    for (std::size_t i = 0; i < traj.size(); ++i)
        out.push(traj.times[i],
                 flow_H(traj.fields[i], -traj.times[i] / (eps * eps)));
    return out;
}

Trajectory solve_effective(const ModelParams& params, const SpectralField& psi0,
                           double t_final, double dt, int out_every, const ThetaRule& rule) {
    params.validate(false);
    if (!psi0.grid->compatible(*params.grid)) throw ConfigError("solve_effective: grid mismatch");
    if (out_every < 1) throw ConfigError("solve_effective: out_every must be >= 1");
    const long n_steps = step_count(t_final, dt);

    AveragingWorkspace av(params.grid, params.sigma, params.lambda, 0.0, rule);
    auto rhs = [&av](const SpectralField& u) {
        SpectralField f = av.average(u);
        f.coeffs *= cplx(0.0, -1.0);
        return f;
    };

    Trajectory traj;
    traj.push(0.0, psi0);

    SpectralField u = psi0;
    SpectralField stage(u.grid);
    for (long s = 1; s <= n_steps; ++s) {
        SpectralField k1 = rhs(u);
        stage.coeffs = u.coeffs + (0.5 * dt) * k1.coeffs;
        SpectralField k2 = rhs(stage);
        stage.coeffs = u.coeffs + (0.5 * dt) * k2.coeffs;
        SpectralField k3 = rhs(stage);
        stage.coeffs = u.coeffs + dt * k3.coeffs;
        SpectralField k4 = rhs(stage);
        u.coeffs += (dt / 6.0) *
                    (k1.coeffs + 2.0 * k2.coeffs + 2.0 * k3.coeffs + k4.coeffs);
        check_finite(u, s);
        if (s % out_every == 0 || s == n_steps) traj.push(s * dt, u);
    }
    return traj;
}

SpectralField polarized_exact(const std::function<cplx(double)>& alpha0, int n, double t,
                              const ModelParams& params) {
    params.validate(false);
    const auto& grid = *params.grid;
    if (n < 0 || n >= grid.n_modes()) throw ConfigError("polarized_exact: n out of range");
    const double cn = chi_norm_pow(n, 2 * params.sigma + 2, grid.b());

    Eigen::VectorXcd coeffs = y_profile_coeffs(grid, [&](double y) {
        const cplx a0 = alpha0(y);
        const double omega = params.lambda(0.0, y) * std::pow(std::norm(a0), params.sigma) * cn;
        return a0 * unit_phase(-t * omega);
    });
    SpectralField out(params.grid);
    out.coeffs.row(n) = coeffs.transpose();
    return out;
}

double compare_to_effective(const Trajectory& full, const Trajectory& effective, double eps) {
    if (full.size() != effective.size() || full.size() == 0)
        throw ConfigError("compare_to_effective: sample counts differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (std::abs(full.times[i] - effective.times[i]) > 1e-9)
            throw ConfigError("compare_to_effective: sample times differ");
        require_same_grid(full.fields[i], effective.fields[i]);
        SpectralField filtered = flow_H(full.fields[i], -full.times[i] / (eps * eps));
        worst = std::max(worst, (filtered.coeffs - effective.fields[i].coeffs).norm());
    }
    return worst;
}

std::function<cplx(double)> gaussian_profile() {
    const double c = std::pow(M_PI, -0.25);
    return [c](double y) { return cplx(c * std::exp(-0.5 * y * y), 0.0); };
}

SpectralField standard_initial(std::shared_ptr<const Grid> grid) {
    if (grid->n_modes() < 2) throw ConfigError("standard_initial: need at least 2 modes");
    Eigen::VectorXcd prof = y_profile_coeffs(*grid, gaussian_profile());
    SpectralField u(grid);
    const double s = 1.0 / std::sqrt(2.0);
    u.coeffs.row(0) = s * prof.transpose();
    u.coeffs.row(1) = s * prof.transpose();
    return u;
}

SpectralField polarized_initial(std::shared_ptr<const Grid> grid, int n,
                                const std::function<cplx(double)>& alpha0) {
    if (n < 0 || n >= grid->n_modes()) throw ConfigError("polarized_initial: n out of range");
    SpectralField u(grid);
    u.coeffs.row(n) = y_profile_coeffs(*grid, alpha0).transpose();
    return u;
}

}  // namespace iwsk
