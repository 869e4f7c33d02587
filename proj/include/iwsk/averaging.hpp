#pragma once

#include <array>

#include "iwsk/field.hpp"
#include "iwsk/trajectory.hpp"

namespace iwsk {

/// Uniform nodes over one 2*pi/b period of the filtered flow. Trapezoid on a
/// full period integrates trigonometric polynomials below Nyquist exactly,
/// which makes the averages below machine-exact for band-limited integrands.
struct ThetaRule {
    int n_nodes = 0;
    double b = 0.0;

    ThetaRule(int n, double b_) : n_nodes(n), b(b_) {
        if (n < 2) throw ConfigError("ThetaRule: need at least 2 nodes");
        if (b_ <= 0.0) throw ConfigError("ThetaRule: b must be positive");
    }
    double period() const { return 2.0 * M_PI / b; }
    double node(int j) const { return j * period() / n_nodes; }
    double weight() const { return period() / n_nodes; }
};

/// Default rule for F_av: the integrand's theta-frequencies lie within
/// b*[-N_h(sigma+1), N_h(sigma+1)], so 2 N_h (sigma+1) + 1 nodes are exact.
ThetaRule default_theta_rule(const Grid& grid, int sigma);

/// F(theta, u) = e^{i theta H} ( lambda |e^{-i theta H} u|^{2 sigma} e^{-i theta H} u ).
SpectralField F_theta(double theta, const SpectralField& u, int sigma,
                      const CouplingFn& lambda, double x_scale);

/// Period average of F_theta. Precondition: rule.n_nodes >= 2 N_h (sigma+1).
SpectralField F_av(const SpectralField& u, int sigma, const CouplingFn& lambda,
                   double x_scale, const ThetaRule& rule);

/// G(theta, u) = e^{i theta H} ( x e^{-i theta H} u ).
SpectralField G_theta(double theta, const SpectralField& u);

/// Period average of G_theta; vanishes identically (zero tri-diagonal).
SpectralField G_av(const SpectralField& u, const ThetaRule& rule);

/// Gcal(theta, u) = integral_0^theta G(tau, u) dtau. The integrand's matrix
/// elements carry pure phases e^{+-i b tau} (v is tri-diagonal), so the
/// integral is evaluated element-wise in closed form.
SpectralField Gcal(double theta, const SpectralField& u);
/// Composite-Simpson cross-check of the closed form (n_nodes must be odd).
SpectralField Gcal_quadrature(double theta, const SpectralField& u, int n_nodes);

/// Reusable fast path for F_av: hoists the y-FFTs out of the theta loop and
/// applies the e^{-i theta E_n} filters as row phases in grid-in-y space.
/// Theta nodes run in fixed chunks (parallelizable); the chunk reduction
/// order is independent of the thread count.
class AveragingWorkspace {
  public:
    AveragingWorkspace(std::shared_ptr<const Grid> grid, int sigma, CouplingFn lambda,
                       double x_scale, const ThetaRule& rule);

    const Grid& grid() const { return nonlin_->grid(); }
    const ThetaRule& rule() const { return rule_; }
    const NonlinWorkspace& nonlin() const { return *nonlin_; }

    SpectralField average(const SpectralField& u) const;

  private:
    std::shared_ptr<const NonlinWorkspace> nonlin_;
    ThetaRule rule_;
    CMat phases_;  // n_nodes x n_modes, e^{-i theta_j E_n}
};

/// L^2 size of  -(i b / eps) int_0^t G(s/eps^2, d_y phi(s)) ds
///            -  (1/2)      int_0^t d_y^2 phi(s) ds
/// over a uniformly sampled filtered trajectory. Both integrals use composite
/// Simpson; the oscillatory one integrates the e^{+-i b s / eps^2} phases in
/// closed form against the quadratic interpolant of the field samples, so the
/// fast phase costs no accuracy beyond the interpolation error.
double identity_residual(const Trajectory& filtered, double eps);

/// Filon moments: integral of the quadratic Lagrange basis on {0, h, 2h}
/// against e^{i omega tau} over [0, 2h]. omega = 0 reduces to Simpson.
std::array<cplx, 3> filon_pair_moments(double h, double omega);

}  // namespace iwsk
