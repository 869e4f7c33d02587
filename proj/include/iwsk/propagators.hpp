#pragma once

#include <vector>

#include "iwsk/field.hpp"

namespace iwsk {

/// flow_H(u, theta) = e^{-i theta H} u (row n picks up e^{-i theta E_n}).
/// The filtered unknown is flow_H(psi, -t/eps^2).
SpectralField flow_H(const SpectralField& u, double theta);

/// flow_y(u, t) = e^{+i (t/2) d_y^2} u (column k picks up e^{-i t xi_k^2 / 2}).
SpectralField flow_y(const SpectralField& u, double t);

/// Change of basis between {chi_n(x)} and the shifted family {chi_n(x + a_k)},
/// one orthogonal block per Fourier column with a_k = eps xi_k / b. Completing
/// the square in the column symbol H + eps b xi x + (eps xi)^2/2 shows it is
/// exactly the oscillator shifted by a_k, so the full linear flow is diagonal
/// in the shifted basis.
struct DisplacementTable {
    std::shared_ptr<const Grid> grid;
    double eps = 0.0;
    std::vector<double> shifts;           // a_k per stored Fourier column
    std::vector<RMat> blocks;             // D[m][n] = <chi_m, chi_n(. + a_k)>
    Eigen::VectorXd column_leak;          // unitarity deficit of the worst rows, per k
    bool flagged = false;                 // top-2-mode leak beyond 1e-8 somewhere
    double max_leak_top2 = 0.0;
};

/// Builds the per-column overlap blocks by a symmetric-shift quadrature
/// (chi_m(x_j - a/2) chi_n(x_j + a/2) is polynomial times the rule's own
/// Gaussian weight, so the entries are exact).
DisplacementTable build_displacement(std::shared_ptr<const Grid> grid, double eps);

/// e^{-i t H_eps / eps^2} u via the displacement table: per column
/// c -> D diag(e^{-i t E_n / eps^2}) D^T c. The Nyquist column carries no
/// x d_y coupling (a = 0) but keeps its e^{-i t xi^2 / 2} free-dispersion phase.
SpectralField flow_full_linear(const SpectralField& u, double t, double eps,
                               const DisplacementTable& table);

/// Leaked mass of shifted chi_n outside the first n_keep modes (diagnostic).
double displacement_row_leak(const Grid& grid, double shift, int row, int n_extra = 16);

}  // namespace iwsk
