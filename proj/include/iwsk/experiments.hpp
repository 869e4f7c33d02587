#pragma once

#include <optional>
#include <string>

#include "iwsk/config.hpp"
#include "iwsk/solvers.hpp"

namespace iwsk {

struct RunContext {
    RunConfig cfg;
    std::string out_dir;          // empty = no files written
    std::uint64_t seed = 0;
    bool snapshots = false;
};

std::shared_ptr<const Grid> make_grid(const RunConfig& cfg);
ModelParams make_params(const RunConfig& cfg, std::shared_ptr<const Grid> grid, double eps);
SpectralField initial_field(const RunConfig& cfg, std::shared_ptr<const Grid> grid);
ThetaRule theta_rule_for(const RunConfig& cfg, const Grid& grid);

/// Largest dt <= dt_target that divides interval exactly.
double fit_dt(double dt_target, double interval);
/// Full-model step target: min(dt_config, eps^2 (2 pi / b) / 64); the
/// nonlinear-splitting commutator with the fast phases demands resolving the
/// eps^2 timescale even though the linear flow itself is exact.
double full_model_dt(const RunConfig& cfg, double eps);

/// Ordinary least squares of log(err) against log(eps).
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of the fit residuals
};
LogLogFit fit_loglog(const std::vector<double>& eps, const std::vector<double>& err);

void write_text_atomic(const std::string& path, const std::string& content);
std::string trajectory_csv(const Trajectory& traj);

// Experiment drivers. Each returns the summary (also written to
// <out_dir>/summary.json together with any CSV/snapshot files).
nlohmann::json cmd_simulate(const RunContext& ctx);
nlohmann::json cmd_effective(const RunContext& ctx);
nlohmann::json cmd_converge(const RunContext& ctx);
nlohmann::json cmd_identity(const RunContext& ctx);
nlohmann::json cmd_polarized(const RunContext& ctx);
nlohmann::json cmd_normequiv(const RunContext& ctx);

}  // namespace iwsk
