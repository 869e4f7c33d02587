#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "iwsk/fourier.hpp"
#include "iwsk/hermite.hpp"
#include "iwsk/util.hpp"

namespace iwsk {

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Coupling function lambda(x, y); constants wrap to a trivial functor.
using CouplingFn = std::function<double(double, double)>;

inline CouplingFn constant_coupling(double v) {
    return [v](double, double) { return v; };
}

/// Discretization domain: Hermite eigenbasis in x, periodic Fourier grid on
/// [-L_y, L_y) in y. Immutable; share via shared_ptr.
class Grid {
  public:
    Grid(double b, int n_modes, int n_y, double l_y, int n_quad = 0);

    static std::shared_ptr<const Grid> make(double b, int n_modes, int n_y, double l_y,
                                            int n_quad = 0) {
        return std::make_shared<const Grid>(b, n_modes, n_y, l_y, n_quad);
    }

    const HermiteBasis& basis() const { return *basis_; }
    double b() const { return basis_->b(); }
    int n_modes() const { return basis_->n_modes(); }
    int n_y() const { return n_y_; }
    double l_y() const { return l_y_; }

    /// Fourier frequency of stored column k (FFT order; Nyquist = -pi N_y / (2 L_y)).
    const Eigen::VectorXd& xi() const { return xi_; }
    /// Frequencies entering first-derivative operators: Nyquist zeroed
    /// (the cosine mode has no representable sine partner).
    const Eigen::VectorXd& xi_coupling() const { return xi_coup_; }
    const Eigen::VectorXd& y_nodes() const { return y_nodes_; }
    const YTransform& ytrans() const { return *yt_; }

    bool compatible(const Grid& other) const;

  private:
    std::shared_ptr<const HermiteBasis> basis_;
    int n_y_;
    double l_y_;
    Eigen::VectorXd xi_, xi_coup_, y_nodes_;
    std::unique_ptr<const YTransform> yt_;
};

/// psi(x,y) = sum_{n,k} c_{n,k} chi_n(x) e^{i xi_k y} / sqrt(2 L_y).
struct SpectralField {
    std::shared_ptr<const Grid> grid;
    CMat coeffs;  // n_modes x n_y

    SpectralField() = default;
    explicit SpectralField(std::shared_ptr<const Grid> g)
        : grid(std::move(g)), coeffs(CMat::Zero(grid->n_modes(), grid->n_y())) {}
};

void require_same_grid(const SpectralField& u, const SpectralField& v);

double l2_norm(const SpectralField& u);
cplx inner(const SpectralField& u, const SpectralField& v);
bool is_finite(const SpectralField& u);
/// sum_k |c_{n,k}|^2 for one Hermite row.
double row_mass(const SpectralField& u, int n);

SpectralField apply_H(const SpectralField& u);
SpectralField apply_dy(const SpectralField& u);
SpectralField apply_x(const SpectralField& u);
/// H_eps = H - i eps b x d_y - (eps^2/2) d_y^2, column-wise
/// H + eps*b*xi~_k*x + (eps^2/2) xi_k^2 (xi~ = coupling convention).
SpectralField apply_Heps(const SpectralField& u, double eps);

/// Sigma^m norm; m = 0 is the plain L^2 norm by convention.
double sigma_norm(const SpectralField& u, int m);
/// eps-dependent analogue with H_eps; odd m via the quadratic form
/// <H_eps^m u, u> (tiny negative rounding clamped, worse raises).
double sigma_eps_norm(const SpectralField& u, int m, double eps);

SpectralField project_Pn(const SpectralField& u, int n);
SpectralField project_Pn_perp(const SpectralField& u, int n);

/// Dealiased pointwise nonlinearity lambda(x_scale*x, y) |u|^{2 sigma} u.
/// The x-product is integrated on a rule exact for the (2 sigma + 2)-fold
/// Hermite-function products; the y-grid is zero-padded by (sigma + 1).
/// Reusable across calls on one grid; also hosts the solver's phase flow.
class NonlinWorkspace {
  public:
    NonlinWorkspace(std::shared_ptr<const Grid> grid, int sigma, CouplingFn lambda,
                    double x_scale);

    const Grid& grid() const { return *grid_; }
    int sigma() const { return sigma_; }
    int n_xd() const { return static_cast<int>(xrule_.nodes.size()); }
    int n_pad() const { return n_pad_; }

    /// lambda(x_scale x, y) |u|^{2 sigma} u, projected back to the field space.
    SpectralField apply(const SpectralField& u) const;
    /// Exact nonlinear phase flow u -> e^{-i tau lambda |u|^{2 sigma}} u (|u| is
    /// pointwise conserved by this sub-flow).
    SpectralField phase_flow(const SpectralField& u, double tau) const;

    // Grid-domain pieces used by the theta-averaging loop (which hoists the
    // y-FFTs out of the inner loop). All matrices row-major, rows x n_pad.
    void to_ygrid(const SpectralField& u, CMat& ygrid) const;       // n_modes rows
    void from_ygrid(const CMat& ygrid, SpectralField& out) const;   // n_modes rows
    /// ygrid (Hermite coeffs on the padded y-grid) -> nonlinear product in the
    /// same representation. Scratch matrices are caller-provided for reuse.
    void nonlin_on_ygrid(const CMat& ygrid, CMat& out, CMat& vals) const;

  private:
    std::shared_ptr<const Grid> grid_;
    int sigma_;
    double x_scale_;
    int n_pad_;
    QuadRule xrule_;                      // envelope (sigma+1) b
    RMat table_;                          // n_xd x n_modes, chi values
    RMat wtable_;                         // n_modes x n_xd, weighted
    RMat lambda_vals_;                    // n_xd x n_pad, for the products
    std::unique_ptr<const YTransform> yt_;  // n_modes rows, N_y -> n_pad
    mutable CMat ubuf_, vbuf_, wbuf_;     // scratch (single-threaded use)
};

/// One-shot variant of the spec operation (builds a transient workspace).
SpectralField pointwise_nonlin(const SpectralField& u, int sigma, const CouplingFn& lambda,
                               double x_scale);

/// Sample a function on (quadrature nodes) x (y grid) and project.
SpectralField field_from_samples(std::shared_ptr<const Grid> grid,
                                 const std::function<cplx(double, double)>& f);
/// Field values on (quadrature nodes) x (y grid).
CMat field_to_samples(const SpectralField& u);
/// Fourier coefficients of a pure y-profile (length n_y).
Eigen::VectorXcd y_profile_coeffs(const Grid& grid, const std::function<cplx(double)>& f);

/// Seeded smooth random field: c_{n,k} proportional to
/// e^{-n/4} e^{-|k|/8} * (unit complex), normalized to ||u|| = 1.
SpectralField random_field(std::shared_ptr<const Grid> grid, std::uint64_t seed);

}  // namespace iwsk
