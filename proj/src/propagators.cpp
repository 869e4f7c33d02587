#include "iwsk/propagators.hpp"

#include <cmath>

namespace iwsk {

SpectralField flow_H(const SpectralField& u, double theta) {
    SpectralField out = u;
    const double b = u.grid->b();
    for (int n = 0; n < u.grid->n_modes(); ++n)
        out.coeffs.row(n) *= unit_phase(-theta * b * (n + 0.5));
    return out;
}

SpectralField flow_y(const SpectralField& u, double t) {
    SpectralField out = u;
    const auto& xi = u.grid->xi();
    for (int k = 0; k < u.grid->n_y(); ++k)
        out.coeffs.col(k) *= unit_phase(-0.5 * t * xi[k] * xi[k]);
    return out;
}

namespace {
// <chi_m(.), chi_n(. + a)> for m < n_rows, n < n_cols, by the basis rule with
// the shift split symmetrically: chi_m(x - a/2) chi_n(x + a/2) carries exactly
// the rule's e^{-b x^2} envelope, so the quadrature is exact.
RMat shift_overlap(const Grid& grid, double a, int n_rows, int n_cols) {
    const auto& basis = grid.basis();
    Eigen::VectorXd left = basis.nodes().array() - 0.5 * a;
    Eigen::VectorXd right = basis.nodes().array() + 0.5 * a;
    Eigen::MatrixXd tm = hermite_eval(grid.b(), n_rows, left);
    Eigen::MatrixXd tn = hermite_eval(grid.b(), n_cols, right);
    RMat d(n_rows, n_cols);
    d.noalias() = (tm.array().colwise() * basis.weights().array()).matrix().transpose() * tn;
    return d;
}
}  // namespace

double displacement_row_leak(const Grid& grid, double shift, int row, int n_extra) {
    const int nm = grid.n_modes();
    RMat d = shift_overlap(grid, shift, nm + n_extra, row + 1);
    double kept = d.col(row).head(nm).squaredNorm();
    return std::abs(1.0 - kept);
}

DisplacementTable build_displacement(std::shared_ptr<const Grid> grid, double eps) {
    if (eps <= 0.0) throw ConfigError("build_displacement: eps must be positive");
    const int nm = grid->n_modes();
    const int ny = grid->n_y();
    DisplacementTable table;
    table.grid = grid;
    table.eps = eps;
    table.shifts.resize(ny);
    table.blocks.resize(ny);
    table.column_leak = Eigen::VectorXd::Zero(ny);

    const auto& xic = grid->xi_coupling();
    for (int k = 0; k <= ny / 2; ++k) {
        const double a = eps * xic[k] / grid->b();
        table.shifts[k] = a;
        if (a == 0.0) {
            table.blocks[k] = RMat::Identity(nm, nm);
            continue;
        }
        // Two extra rows to measure the unitarity deficit of the top columns.
        RMat ext = shift_overlap(*grid, a, nm + 16, nm);
        table.blocks[k] = ext.topRows(nm);
        double leak = 0.0;
        for (int n = nm - 2; n < nm; ++n)
            leak = std::max(leak, std::abs(1.0 - ext.col(n).head(nm).squaredNorm()));
        table.column_leak[k] = leak;
    }
    // Negative frequencies mirror: D(-a) = D(a)^T.
    for (int k = ny / 2 + 1; k < ny; ++k) {
        const int mirror = ny - k;
        table.shifts[k] = -table.shifts[mirror];
        table.blocks[k] = table.blocks[mirror].transpose();
        table.column_leak[k] = table.column_leak[mirror];
    }
    table.max_leak_top2 = table.column_leak.maxCoeff();
    table.flagged = table.max_leak_top2 > 1e-8;
    return table;
}

SpectralField flow_full_linear(const SpectralField& u, double t, double eps,
                               const DisplacementTable& table) {
    if (!table.grid || !u.grid->compatible(*table.grid))
        throw ConfigError("flow_full_linear: table built for a different grid");
    if (table.eps != eps) throw ConfigError("flow_full_linear: table built for a different eps");

    const int nm = u.grid->n_modes();
    const int ny = u.grid->n_y();
    const double b = u.grid->b();
    const auto& xi = u.grid->xi();
    const auto& xic = u.grid->xi_coupling();

    Eigen::VectorXcd phases(nm);
    for (int n = 0; n < nm; ++n) phases[n] = unit_phase(-t * b * (n + 0.5) / (eps * eps));

    SpectralField out(u.grid);
    Eigen::VectorXcd col(nm), tmp(nm);
    using RV2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
    for (int k = 0; k < ny; ++k) {
        col = u.coeffs.col(k);
        const RMat& d = table.blocks[k];
        if (table.shifts[k] == 0.0) {
            tmp = col;
        } else {
            Eigen::Map<RV2> c2(reinterpret_cast<double*>(col.data()), nm, 2);
            Eigen::Map<RV2> t2(reinterpret_cast<double*>(tmp.data()), nm, 2);
            t2.noalias() = d.transpose() * c2;
        }
        tmp.array() *= phases.array();
        if (table.shifts[k] == 0.0) {
            col = tmp;
        } else {
            Eigen::Map<RV2> c2(reinterpret_cast<double*>(col.data()), nm, 2);
            Eigen::Map<RV2> t2(reinterpret_cast<double*>(tmp.data()), nm, 2);
            c2.noalias() = d * t2;
        }
        // Residual free-dispersion phase where the x coupling is dropped
        // (Nyquist column; elsewhere it is absorbed by the shifted oscillator).
        const double resid = 0.5 * (xi[k] * xi[k] - xic[k] * xic[k]);
        if (resid != 0.0) col *= unit_phase(-t * resid);
        out.coeffs.col(k) = col;
    }
    return out;
}

}  // namespace iwsk
