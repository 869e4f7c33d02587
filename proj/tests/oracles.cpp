#include "oracles.hpp"

#include <cmath>
#include <vector>

namespace oracle {

using iwsk::cplx;

double chi(int n, double b, double x) {
    const long double z = std::sqrt((long double)b) * x;
    long double p_prev = 0.0L, p = 1.0L;
    for (int k = 0; k < n; ++k) {
        const long double p_next = 2.0L * z * p - 2.0L * k * p_prev;
        p_prev = p;
        p = p_next;
    }
    long double norm = std::pow((long double)b / M_PI, 0.25L);
    for (int k = 1; k <= n; ++k) norm /= std::sqrt(2.0L * k);
    return (double)(norm * std::exp(-0.5L * b * x * x) * p);
}

double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / (n - 1);
    double acc = 0.5 * (f(a) + f(b));
    for (int i = 1; i + 1 < n; ++i) acc += f(a + i * h);
    return acc * h;
}

iwsk::SpectralField linear_strang(const iwsk::SpectralField& u, double t, double eps,
                                  int n_steps) {
    const auto& grid = *u.grid;
    const int nm = grid.n_modes();
    const int ny = grid.n_y();
    const double b = grid.b();
    const double dt = t / n_steps;

    Eigen::VectorXcd half(nm);
    for (int n = 0; n < nm; ++n)
        half[n] = iwsk::unit_phase(-0.5 * dt * b * (n + 0.5) / (eps * eps));

    iwsk::SpectralField out = u;
    Eigen::VectorXcd col(nm), samples;
    for (int k = 0; k < ny; ++k) {
        const double xi = grid.xi()[k];
        const double xic = grid.xi_coupling()[k];
        const cplx disp = iwsk::unit_phase(-0.5 * dt * xi * xi);
        col = out.coeffs.col(k);
        for (int s = 0; s < n_steps; ++s) {
            col.array() *= half.array();
            samples = grid.basis().synth(col);
            for (int j = 0; j < grid.basis().n_quad(); ++j)
                samples[j] *= iwsk::unit_phase(-dt * (b * xic / eps) * grid.basis().nodes()[j]);
            col = grid.basis().project(samples);
            col *= disp;
            col.array() *= half.array();
        }
        out.coeffs.col(k) = col;
    }
    return out;
}

iwsk::SpectralField f_theta_bruteforce(double theta, const iwsk::SpectralField& u, int sigma,
                                       const iwsk::CouplingFn& lambda, double x_scale) {
    const auto& grid = *u.grid;
    const int nm = grid.n_modes();
    const int ny = grid.n_y();
    const double b = grid.b();
    const double ly = grid.l_y();
    const double root = std::sqrt(2.0 * ly);

    const int nx = 3001;
    const double x_lo = -12.0, x_hi = 12.0;
    const double hx = (x_hi - x_lo) / (nx - 1);
    const int my = 8 * ny;  // oversampled, so the product stays band-resolved
    const double hy = 2.0 * ly / my;

    // Filtered coefficients e^{-i theta E_n} c_{n,k}.
    iwsk::CMat c = u.coeffs;
    for (int n = 0; n < nm; ++n) c.row(n) *= iwsk::unit_phase(-theta * b * (n + 0.5));

    std::vector<double> chi_tab(static_cast<std::size_t>(nx) * nm);
    for (int i = 0; i < nx; ++i)
        for (int n = 0; n < nm; ++n)
            chi_tab[static_cast<std::size_t>(i) * nm + n] = chi(n, b, x_lo + i * hx);

    // W(x, y) = lambda(x_scale x, y) |psi|^{2 sigma} psi on the dense grid.
    std::vector<cplx> w(static_cast<std::size_t>(nx) * my);
    for (int g = 0; g < my; ++g) {
        const double y = -ly + g * hy;
        // y-synthesis per Hermite row by direct summation
        Eigen::VectorXcd rows(nm);
        for (int n = 0; n < nm; ++n) {
            cplx acc = 0.0;
            for (int k = 0; k < ny; ++k) {
                const int k_int = (k < ny / 2) ? k : k - ny;
                acc += c(n, k) * std::polar(1.0, M_PI * k_int * y / ly);
            }
            rows[n] = acc / root;
        }
        for (int i = 0; i < nx; ++i) {
            cplx psi = 0.0;
            for (int n = 0; n < nm; ++n)
                psi += chi_tab[static_cast<std::size_t>(i) * nm + n] * rows[n];
            double amp = std::norm(psi);
            double pw = amp;
            for (int s = 1; s < sigma; ++s) pw *= amp;
            w[static_cast<std::size_t>(i) * my + g] =
                lambda(x_scale * (x_lo + i * hx), y) * pw * psi;
        }
    }

    // Project onto chi_m e^{i xi_k y} / sqrt(2 L_y): trapezoid in x (periodic
    // rectangle in y), then unfilter with e^{+i theta E_m}.
    iwsk::SpectralField out(u.grid);
    for (int m = 0; m < nm; ++m) {
        for (int k = 0; k < ny; ++k) {
            const int k_int = (k < ny / 2) ? k : k - ny;
            cplx acc = 0.0;
            for (int i = 0; i < nx; ++i) {
                const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
                const double chim = chi_tab[static_cast<std::size_t>(i) * nm + m];
                cplx yacc = 0.0;
                for (int g = 0; g < my; ++g) {
                    const double y = -ly + g * hy;
                    yacc += w[static_cast<std::size_t>(i) * my + g] *
                            std::polar(1.0, -M_PI * k_int * y / ly);
                }
                acc += wx * chim * yacc;
            }
            out.coeffs(m, k) = acc * hx * hy / root * iwsk::unit_phase(theta * b * (m + 0.5));
        }
    }
    return out;
}

iwsk::SpectralField truncated_random(std::shared_ptr<const iwsk::Grid> grid, int max_row,
                                     std::uint64_t seed) {
    iwsk::SpectralField u = iwsk::random_field(grid, seed);
    for (int n = max_row + 1; n < grid->n_modes(); ++n) u.coeffs.row(n).setZero();
    u.coeffs /= iwsk::l2_norm(u);
    return u;
}

}  // namespace oracle
