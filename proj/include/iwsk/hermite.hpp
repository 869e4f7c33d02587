#pragma once

#include <Eigen/Dense>
#include <vector>

#include "iwsk/util.hpp"

namespace iwsk {

/// Gauss-type quadrature exact for integrands of the form
/// polynomial(x) * exp(-envelope * x^2) on the real line.
struct QuadRule {
    double envelope = 0.0;          // Gaussian decay rate of the target integrands
    Eigen::VectorXd nodes;          // strictly increasing abscissae
    Eigen::VectorXd weights;        // positive; include the envelope factor, so
                                    // sum_j w_j f(x_j) ~ integral of f dx directly
};

/// Builds the rule for weight exp(-c x^2) with n nodes (Golub-Welsch on the
/// symmetric Jacobi matrix of the Hermite polynomials, then rescaled).
/// Exact for polynomial degree <= 2n-1 times the weight.
QuadRule gauss_hermite_rule(double c, int n_nodes);

/// Oscillator eigenfunctions chi_n for H = -1/2 d^2/dx^2 + 1/2 b^2 x^2,
/// tabulated on a Gauss-Hermite rule. The table rows absorb the Gaussian
/// envelope explicitly; quadrature orthonormality holds to ~1e-15.
class HermiteBasis {
  public:
    HermiteBasis(double b, int n_modes, int n_quad);

    double b() const { return b_; }
    int n_modes() const { return n_modes_; }
    int n_quad() const { return n_quad_; }
    const Eigen::VectorXd& nodes() const { return rule_.nodes; }
    const Eigen::VectorXd& weights() const { return rule_.weights; }

    /// N_q x N_h matrix of chi_n(x_j).
    const Eigen::MatrixXd& table() const { return table_; }
    /// N_h x N_q matrix of w_j chi_n(x_j); project = wtable * samples.
    const Eigen::MatrixXd& wtable() const { return wtable_; }

    /// Grid samples -> first n_modes coefficients (quadrature projection).
    Eigen::VectorXcd project(const Eigen::VectorXcd& samples) const;
    /// Coefficients -> grid samples on the quadrature nodes.
    Eigen::VectorXcd synth(const Eigen::VectorXcd& coeffs) const;

  private:
    double b_;
    int n_modes_;
    int n_quad_;
    QuadRule rule_;
    Eigen::MatrixXd table_;
    Eigen::MatrixXd wtable_;
};

/// E_n = b(n + 1/2).
double eigenvalue(int n, double b);

/// <x chi_n, chi_m> = (2b)^{-1/2} (sqrt(n+1) delta_{n+1,m} + sqrt(n) delta_{n-1,m}).
double coupling_v(int n, int m, double b);

/// integral |chi_n|^p dx for even p >= 2, by a rule matched to the
/// exp(-(p/2) b x^2) envelope of the integrand (exact).
double chi_norm_pow(int n, int p, double b);

/// chi_n(x) for n = 0..n_modes-1 at arbitrary points, by the stable
/// normalized three-term recurrence. Returns points.size() x n_modes.
Eigen::MatrixXd hermite_eval(double b, int n_modes, const Eigen::VectorXd& points);

/// d/dx chi_n at arbitrary points via the ladder identity
/// chi_n' = sqrt(b/2) (sqrt(n) chi_{n-1} - sqrt(n+1) chi_{n+1}).
Eigen::MatrixXd hermite_eval_deriv(double b, int n_modes, const Eigen::VectorXd& points);

}  // namespace iwsk
