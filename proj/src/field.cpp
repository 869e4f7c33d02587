#include "iwsk/field.hpp"

#include <cmath>
#include <random>

namespace iwsk {

Grid::Grid(double b, int n_modes, int n_y, double l_y, int n_quad)
    : n_y_(n_y), l_y_(l_y) {
    if (n_y < 4 || n_y % 2 != 0) throw ConfigError("Grid: n_y must be even and >= 4");
    if (l_y <= 0.0) throw ConfigError("Grid: l_y must be positive");
    if (n_quad <= 0) n_quad = 2 * n_modes + 8;
    basis_ = std::make_shared<const HermiteBasis>(b, n_modes, n_quad);

    xi_.resize(n_y);
    xi_coup_.resize(n_y);
    y_nodes_.resize(n_y);
    const double dxi = M_PI / l_y;
    for (int k = 0; k < n_y; ++k) {
        const int k_int = (k < n_y / 2) ? k : k - n_y;
        xi_[k] = dxi * k_int;
        xi_coup_[k] = (k_int == -n_y / 2) ? 0.0 : xi_[k];
        y_nodes_[k] = -l_y + k * (2.0 * l_y / n_y);
    }
    yt_ = std::make_unique<const YTransform>(n_modes, n_y, n_y, l_y);
}

bool Grid::compatible(const Grid& other) const {
    return b() == other.b() && n_modes() == other.n_modes() && n_y_ == other.n_y_ &&
           l_y_ == other.l_y_ && basis().n_quad() == other.basis().n_quad();
}

void require_same_grid(const SpectralField& u, const SpectralField& v) {
    if (!u.grid || !v.grid) throw ConfigError("field has no grid");
    if (u.grid.get() == v.grid.get()) return;
    if (!u.grid->compatible(*v.grid)) throw ConfigError("fields live on different grids");
}

double l2_norm(const SpectralField& u) { return u.coeffs.norm(); }

cplx inner(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u, v);
    cplx acc = 0.0;
    const cplx* a = u.coeffs.data();
    const cplx* b = v.coeffs.data();
    const std::size_t n = static_cast<std::size_t>(u.coeffs.size());
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

bool is_finite(const SpectralField& u) {
    const cplx* a = u.coeffs.data();
    const std::size_t n = static_cast<std::size_t>(u.coeffs.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(a[i].real()) || !std::isfinite(a[i].imag())) return false;
    return true;
}

double row_mass(const SpectralField& u, int n) {
    if (n < 0 || n >= u.grid->n_modes()) throw ConfigError("row_mass: row out of range");
    return u.coeffs.row(n).squaredNorm();
}

SpectralField apply_H(const SpectralField& u) {
    SpectralField out = u;
    const double b = u.grid->b();
    for (int n = 0; n < u.grid->n_modes(); ++n) out.coeffs.row(n) *= b * (n + 0.5);
    return out;
}

SpectralField apply_dy(const SpectralField& u) {
    SpectralField out = u;
    const auto& xi = u.grid->xi_coupling();
    for (int k = 0; k < u.grid->n_y(); ++k) out.coeffs.col(k) *= cplx(0.0, xi[k]);
    return out;
}

SpectralField apply_x(const SpectralField& u) {
    const int nm = u.grid->n_modes();
    const double b = u.grid->b();
    SpectralField out(u.grid);
    // Symmetric tridiagonal coupling; the chi_{N_h-1} -> chi_{N_h} term is
    // outside the truncated space and drops.
    for (int n = 0; n < nm; ++n) {
        if (n > 0) out.coeffs.row(n) += coupling_v(n - 1, n, b) * u.coeffs.row(n - 1);
        if (n + 1 < nm) out.coeffs.row(n) += coupling_v(n + 1, n, b) * u.coeffs.row(n + 1);
    }
    return out;
}

SpectralField apply_Heps(const SpectralField& u, double eps) {
    const int nm = u.grid->n_modes();
    const int ny = u.grid->n_y();
    const double b = u.grid->b();
    const auto& xi = u.grid->xi();
    const auto& xic = u.grid->xi_coupling();
    SpectralField out(u.grid);
    for (int k = 0; k < ny; ++k) {
        const double cx = eps * b * xic[k];
        const double c0 = 0.5 * eps * eps * xi[k] * xi[k];
        for (int n = 0; n < nm; ++n) {
            cplx v = (b * (n + 0.5) + c0) * u.coeffs(n, k);
            if (n > 0) v += cx * coupling_v(n - 1, n, b) * u.coeffs(n - 1, k);
            if (n + 1 < nm) v += cx * coupling_v(n + 1, n, b) * u.coeffs(n + 1, k);
            out.coeffs(n, k) = v;
        }
    }
    return out;
}

double sigma_norm(const SpectralField& u, int m) {
    if (m < 0) throw ConfigError("sigma_norm: m must be >= 0");
    if (m == 0) return l2_norm(u);
    const double b = u.grid->b();
    const auto& xi = u.grid->xi();
    double acc = 0.0;
    for (int n = 0; n < u.grid->n_modes(); ++n) {
        const double en = std::pow(b * (n + 0.5), m);
        for (int k = 0; k < u.grid->n_y(); ++k) {
            const double w = 1.0 + en + std::pow(xi[k] * xi[k], m);
            acc += w * std::norm(u.coeffs(n, k));
        }
    }
    return std::sqrt(acc);
}

double sigma_eps_norm(const SpectralField& u, int m, double eps) {
    if (m < 0) throw ConfigError("sigma_eps_norm: m must be >= 0");
    if (m == 0) return l2_norm(u);
    const double l2sq = u.coeffs.squaredNorm();

    double hterm = 0.0;
    if (m % 2 == 0) {
        SpectralField w = u;
        for (int i = 0; i < m / 2; ++i) w = apply_Heps(w, eps);
        hterm = w.coeffs.squaredNorm();
    } else {
        // ||H_eps^{m/2} u||^2 = <H_eps^m u, u>; H_eps is positive definite, so
        // negative values can only come from rounding.
        SpectralField w = u;
        for (int i = 0; i < (m - 1) / 2; ++i) w = apply_Heps(w, eps);
        hterm = std::real(inner(apply_Heps(w, eps), w));
        if (hterm < 0.0) {
            if (hterm < -1e-12 * l2sq)
                throw NumericError("sigma_eps_norm: quadratic form significantly negative");
            hterm = 0.0;
        }
    }

    double yterm = 0.0;
    const auto& xi = u.grid->xi();
    for (int k = 0; k < u.grid->n_y(); ++k)
        yterm += std::pow(xi[k] * xi[k], m) * u.coeffs.col(k).squaredNorm();

    return std::sqrt(l2sq + hterm + yterm);
}

SpectralField project_Pn(const SpectralField& u, int n) {
    if (n < 0 || n >= u.grid->n_modes()) throw ConfigError("project_Pn: row out of range");
    SpectralField out(u.grid);
    out.coeffs.row(n) = u.coeffs.row(n);
    return out;
}

SpectralField project_Pn_perp(const SpectralField& u, int n) {
    if (n < 0 || n >= u.grid->n_modes()) throw ConfigError("project_Pn_perp: row out of range");
    SpectralField out = u;
    out.coeffs.row(n).setZero();
    return out;
}

NonlinWorkspace::NonlinWorkspace(std::shared_ptr<const Grid> grid, int sigma,
                                 CouplingFn lambda, double x_scale)
    : grid_(std::move(grid)), sigma_(sigma), x_scale_(x_scale) {
    if (sigma_ < 1) throw ConfigError("NonlinWorkspace: sigma must be >= 1");
    const int nm = grid_->n_modes();
    const double b = grid_->b();
    // (sigma + 1)-fold zero padding removes aliasing from the product band;
    // the two extra points keep its extreme mode off the stored Nyquist slot.
    n_pad_ = (sigma_ + 1) * grid_->n_y() + 2;

    // Rule exact for (2 sigma + 2)-fold products of chi's: polynomial degree
    // (2 sigma + 2)(N_h - 1) under envelope e^{-(sigma+1) b x^2}.
    const int n_xd = (sigma_ + 1) * nm + 4;
    xrule_ = gauss_hermite_rule((sigma_ + 1) * b, n_xd);
    table_ = hermite_eval(b, nm, xrule_.nodes);
    wtable_ = (table_.array().colwise() * xrule_.weights.array()).matrix().transpose();

    yt_ = std::make_unique<const YTransform>(nm, grid_->n_y(), n_pad_, grid_->l_y());

    const double dy = 2.0 * grid_->l_y() / n_pad_;
    lambda_vals_.resize(n_xd, n_pad_);
    for (int j = 0; j < n_xd; ++j)
        for (int g = 0; g < n_pad_; ++g)
            lambda_vals_(j, g) = lambda(x_scale_ * xrule_.nodes[j], -grid_->l_y() + g * dy);

}

void NonlinWorkspace::to_ygrid(const SpectralField& u, CMat& ygrid) const {
    ygrid.resize(grid_->n_modes(), n_pad_);
    yt_->to_grid(u.coeffs.data(), ygrid.data());
}

void NonlinWorkspace::from_ygrid(const CMat& ygrid, SpectralField& out) const {
    if (!out.grid) out = SpectralField(grid_);
    yt_->from_grid(ygrid.data(), out.coeffs.data());
}

void NonlinWorkspace::nonlin_on_ygrid(const CMat& ygrid, CMat& out, CMat& vals) const {
    const int nm = grid_->n_modes();
    const int nj = n_xd();
    // Complex matrices viewed as real with doubled columns: the x-transforms
    // are then plain real GEMMs.
    vals.resize(nj, n_pad_);
    Eigen::Map<RMat> v(reinterpret_cast<double*>(vals.data()), nj, 2 * n_pad_);
    Eigen::Map<const RMat> g(reinterpret_cast<const double*>(ygrid.data()), nm, 2 * n_pad_);
    v.noalias() = table_ * g;

    cplx* p = vals.data();
    const double* lam = lambda_vals_.data();
    const std::size_t total = static_cast<std::size_t>(nj) * n_pad_;
    for (std::size_t i = 0; i < total; ++i) {
        const double a2 = std::norm(p[i]);
        double amp = a2;
        for (int s = 1; s < sigma_; ++s) amp *= a2;
        p[i] *= lam[i] * amp;
    }

    out.resize(nm, n_pad_);
    Eigen::Map<RMat> o(reinterpret_cast<double*>(out.data()), nm, 2 * n_pad_);
    Eigen::Map<const RMat> w(reinterpret_cast<const double*>(vals.data()), nj, 2 * n_pad_);
    o.noalias() = wtable_ * w;
}

SpectralField NonlinWorkspace::apply(const SpectralField& u) const {
    if (!u.grid->compatible(*grid_)) throw ConfigError("NonlinWorkspace: grid mismatch");
    to_ygrid(u, ubuf_);
    nonlin_on_ygrid(ubuf_, wbuf_, vbuf_);
    SpectralField out(u.grid);
    from_ygrid(wbuf_, out);
    return out;
}

SpectralField NonlinWorkspace::phase_flow(const SpectralField& u, double tau) const {
    if (!u.grid->compatible(*grid_)) throw ConfigError("NonlinWorkspace: grid mismatch");
    const int nm = grid_->n_modes();
    const int nj = n_xd();
    to_ygrid(u, ubuf_);
    vbuf_.resize(nj, n_pad_);
    Eigen::Map<RMat> v(reinterpret_cast<double*>(vbuf_.data()), nj, 2 * n_pad_);
    Eigen::Map<const RMat> g(reinterpret_cast<const double*>(ubuf_.data()), nm, 2 * n_pad_);
    v.noalias() = table_ * g;

    // e^{i phi} psi is evaluated exactly pointwise, but only the correction
    // (e^{i phi} - 1) psi goes through the projection: its leading term is a
    // (2 sigma + 2)-fold product, which this rule integrates exactly, while
    // the identity part stays untouched (so phi = 0 is exactly the identity).
    cplx* p = vbuf_.data();
    const double* lam = lambda_vals_.data();
    const std::size_t total = static_cast<std::size_t>(nj) * n_pad_;
    for (std::size_t i = 0; i < total; ++i) {
        const double a2 = std::norm(p[i]);
        double amp = a2;
        for (int s = 1; s < sigma_; ++s) amp *= a2;
        const double phi = -tau * lam[i] * amp;
        const double sh = std::sin(0.5 * phi);
        p[i] *= cplx(-2.0 * sh * sh, std::sin(phi));
    }

    wbuf_.resize(nm, n_pad_);
    Eigen::Map<RMat> o(reinterpret_cast<double*>(wbuf_.data()), nm, 2 * n_pad_);
    Eigen::Map<const RMat> w(reinterpret_cast<const double*>(vbuf_.data()), nj, 2 * n_pad_);
    o.noalias() = wtable_ * w;
    wbuf_ += ubuf_;

    SpectralField out(u.grid);
    from_ygrid(wbuf_, out);
    return out;
}

SpectralField pointwise_nonlin(const SpectralField& u, int sigma, const CouplingFn& lambda,
                               double x_scale) {
    NonlinWorkspace ws(u.grid, sigma, lambda, x_scale);
    return ws.apply(u);
}

SpectralField field_from_samples(std::shared_ptr<const Grid> grid,
                                 const std::function<cplx(double, double)>& f) {
    const int nq = grid->basis().n_quad();
    const int ny = grid->n_y();
    CMat vals(nq, ny);
    for (int j = 0; j < nq; ++j)
        for (int g = 0; g < ny; ++g)
            vals(j, g) = f(grid->basis().nodes()[j], grid->y_nodes()[g]);
    // x-projection, then y-analysis row by row.
    CMat xproj(grid->n_modes(), ny);
    {
        Eigen::Map<RMat> o(reinterpret_cast<double*>(xproj.data()), grid->n_modes(), 2 * ny);
        Eigen::Map<const RMat> v(reinterpret_cast<const double*>(vals.data()), nq, 2 * ny);
        o.noalias() = grid->basis().wtable() * v;
    }
    SpectralField out(grid);
    grid->ytrans().from_grid(xproj.data(), out.coeffs.data());
    return out;
}

CMat field_to_samples(const SpectralField& u) {
    const auto& grid = *u.grid;
    const int nq = grid.basis().n_quad();
    const int ny = grid.n_y();
    CMat ygrid(grid.n_modes(), ny);
    grid.ytrans().to_grid(u.coeffs.data(), ygrid.data());
    CMat vals(nq, ny);
    Eigen::Map<RMat> v(reinterpret_cast<double*>(vals.data()), nq, 2 * ny);
    Eigen::Map<const RMat> g(reinterpret_cast<const double*>(ygrid.data()), grid.n_modes(),
                             2 * ny);
    v.noalias() = grid.basis().table() * g;
    return vals;
}

Eigen::VectorXcd y_profile_coeffs(const Grid& grid, const std::function<cplx(double)>& f) {
    const int ny = grid.n_y();
    YTransform yt(1, ny, ny, grid.l_y());
    Eigen::VectorXcd vals(ny), coeffs(ny);
    for (int g = 0; g < ny; ++g) vals[g] = f(grid.y_nodes()[g]);
    yt.from_grid(vals.data(), coeffs.data());
    return coeffs;
}

SpectralField random_field(std::shared_ptr<const Grid> grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unif = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
    SpectralField u(grid);
    for (int n = 0; n < grid->n_modes(); ++n) {
        for (int k = 0; k < grid->n_y(); ++k) {
            const int k_int = (k < grid->n_y() / 2) ? k : k - grid->n_y();
            const double mag = std::exp(-n / 4.0) * std::exp(-std::abs(k_int) / 8.0);
            u.coeffs(n, k) = mag * std::polar(1.0, 2.0 * M_PI * unif());
        }
    }
    u.coeffs /= l2_norm(u);
    return u;
}

}  // namespace iwsk
