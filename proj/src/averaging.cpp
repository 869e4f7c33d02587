#include "iwsk/averaging.hpp"

#include <cmath>

#include "iwsk/propagators.hpp"

namespace iwsk {

ThetaRule default_theta_rule(const Grid& grid, int sigma) {
    return ThetaRule(2 * grid.n_modes() * (sigma + 1) + 1, grid.b());
}

SpectralField F_theta(double theta, const SpectralField& u, int sigma,
                      const CouplingFn& lambda, double x_scale) {
    NonlinWorkspace ws(u.grid, sigma, lambda, x_scale);
    SpectralField filtered = flow_H(u, theta);
    SpectralField nl = ws.apply(filtered);
    return flow_H(nl, -theta);
}

SpectralField G_theta(double theta, const SpectralField& u) {
    return flow_H(apply_x(flow_H(u, theta)), -theta);
}

SpectralField G_av(const SpectralField& u, const ThetaRule& rule) {
    if (rule.b != u.grid->b()) throw ConfigError("G_av: rule period does not match grid b");
    SpectralField acc(u.grid);
    for (int j = 0; j < rule.n_nodes; ++j) acc.coeffs += G_theta(rule.node(j), u).coeffs;
    acc.coeffs /= double(rule.n_nodes);
    return acc;
}

SpectralField Gcal(double theta, const SpectralField& u) {
    const double b = u.grid->b();
    const int nm = u.grid->n_modes();
    // int_0^theta e^{+-i b tau} dtau
    const cplx ip = (std::polar(1.0, b * theta) - 1.0) / cplx(0.0, b);
    const cplx im = (std::polar(1.0, -b * theta) - 1.0) / cplx(0.0, -b);
    SpectralField out(u.grid);
    for (int m = 0; m < nm; ++m) {
        if (m > 0) out.coeffs.row(m) += coupling_v(m - 1, m, b) * ip * u.coeffs.row(m - 1);
        if (m + 1 < nm) out.coeffs.row(m) += coupling_v(m + 1, m, b) * im * u.coeffs.row(m + 1);
    }
    return out;
}

SpectralField Gcal_quadrature(double theta, const SpectralField& u, int n_nodes) {
    if (n_nodes < 3 || n_nodes % 2 == 0)
        throw ConfigError("Gcal_quadrature: need an odd node count >= 3");
    SpectralField acc(u.grid);
    const double h = theta / (n_nodes - 1);
    for (int j = 0; j < n_nodes; ++j) {
        double w = (j == 0 || j == n_nodes - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        acc.coeffs += (w * h / 3.0) * G_theta(j * h, u).coeffs;
    }
    return acc;
}

AveragingWorkspace::AveragingWorkspace(std::shared_ptr<const Grid> grid, int sigma,
                                       CouplingFn lambda, double x_scale,
                                       const ThetaRule& rule)
    : nonlin_(std::make_shared<const NonlinWorkspace>(grid, sigma, std::move(lambda), x_scale)),
      rule_(rule) {
    if (rule_.b != grid->b())
        throw ConfigError("AveragingWorkspace: rule period does not match grid b");
    if (rule_.n_nodes < 2 * grid->n_modes() * (sigma + 1))
        throw ConfigError("AveragingWorkspace: theta rule too coarse for exact averaging");
    const int nm = grid->n_modes();
    phases_.resize(rule_.n_nodes, nm);
    for (int j = 0; j < rule_.n_nodes; ++j)
        for (int n = 0; n < nm; ++n)
            phases_(j, n) = unit_phase(-rule_.node(j) * grid->b() * (n + 0.5));
}

SpectralField AveragingWorkspace::average(const SpectralField& u) const {
    const auto& ws = *nonlin_;
    if (!u.grid->compatible(ws.grid())) throw ConfigError("AveragingWorkspace: grid mismatch");
    const int nm = ws.grid().n_modes();
    const int np = ws.n_pad();
    const int nt = rule_.n_nodes;

    CMat base;
    ws.to_ygrid(u, base);

    // Fixed chunking: the reduction order below never depends on thread count.
    const int n_chunks = std::min(nt, 8);
    std::vector<CMat> partial(n_chunks);
    parallel_for(n_chunks, [&](std::size_t c) {
        const int j0 = static_cast<int>(c * nt / n_chunks);
        const int j1 = static_cast<int>((c + 1) * nt / n_chunks);
        CMat acc = CMat::Zero(nm, np);
        CMat phased(nm, np), prod, vals;
        for (int j = j0; j < j1; ++j) {
            for (int n = 0; n < nm; ++n) phased.row(n) = phases_(j, n) * base.row(n);
            ws.nonlin_on_ygrid(phased, prod, vals);
            for (int n = 0; n < nm; ++n) acc.row(n) += std::conj(phases_(j, n)) * prod.row(n);
        }
        partial[c] = std::move(acc);
    });
    for (int c = 1; c < n_chunks; ++c) partial[0] += partial[c];
    partial[0] /= double(nt);

    SpectralField out(u.grid);
    ws.from_ygrid(partial[0], out);
    return out;
}

SpectralField F_av(const SpectralField& u, int sigma, const CouplingFn& lambda,
                   double x_scale, const ThetaRule& rule) {
    AveragingWorkspace ws(u.grid, sigma, lambda, x_scale, rule);
    return ws.average(u);
}

namespace {
// int_0^L tau^p e^{i omega tau} dtau, p = 0, 1, 2.
std::array<cplx, 3> power_moments(double L, double omega) {
    std::array<cplx, 3> I;
    if (std::abs(omega * L) < 0.05) {
        // Taylor in (i omega); terms decay like (omega L)^k / k!.
        for (int p = 0; p < 3; ++p) {
            cplx term = std::pow(L, p + 1);
            cplx sum = 0.0;
            for (int k = 0; k < 24; ++k) {
                sum += term / double(p + k + 1);
                term *= cplx(0.0, omega) * L / double(k + 1);
                if (std::abs(term) < 1e-20 * std::abs(sum)) break;
            }
            I[p] = sum;
        }
        return I;
    }
    const cplx iw(0.0, omega);
    const cplx e = std::polar(1.0, omega * L);
    I[0] = (e - 1.0) / iw;
    I[1] = (L * e) / iw - I[0] / iw;
    I[2] = (L * L * e) / iw - 2.0 * I[1] / iw;
    return I;
}
}  // namespace

std::array<cplx, 3> filon_pair_moments(double h, double omega) {
    const auto I = power_moments(2.0 * h, omega);
    const double h2 = h * h;
    return {(I[2] - 3.0 * h * I[1] + 2.0 * h2 * I[0]) / (2.0 * h2),
            (2.0 * h * I[1] - I[2]) / h2,
            (I[2] - h * I[1]) / (2.0 * h2)};
}

namespace {
// Linear end-segment moments over [0, h].
std::array<cplx, 2> filon_linear_moments(double h, double omega) {
    const auto I = power_moments(h, omega);
    return {I[0] - I[1] / h, I[1] / h};
}

// acc += e^{i omega s0} sum_j m_j f_j  (matrix-valued samples)
void accumulate(CMat& acc, double s0, double omega, const std::array<cplx, 3>& m,
                const CMat& f0, const CMat& f1, const CMat& f2) {
    const cplx ph = unit_phase(omega * s0);
    acc += ph * (m[0] * f0 + m[1] * f1 + m[2] * f2);
}
}  // namespace

double identity_residual(const Trajectory& filtered, double eps) {
    const std::size_t ns = filtered.size();
    if (ns < 3) throw ConfigError("identity_residual: need at least 3 samples");
    const auto grid = filtered.fields[0].grid;
    const double b = grid->b();
    const double h = filtered.times[1] - filtered.times[0];
    for (std::size_t i = 1; i < ns; ++i) {
        const double d = filtered.times[i] - filtered.times[i - 1];
        if (std::abs(d - h) > 1e-9 * h)
            throw ConfigError("identity_residual: samples must be uniformly spaced");
    }

    const double om = b / (eps * eps);
    const auto mp = filon_pair_moments(h, om);    // e^{+i b s / eps^2}
    const auto mm = filon_pair_moments(h, -om);
    const auto m0 = filon_pair_moments(h, 0.0);   // plain Simpson

    const int nm = grid->n_modes();
    CMat accp = CMat::Zero(nm, grid->n_y());
    CMat accm = accp, acc0 = accp;

    auto dy = [](const SpectralField& f) { return apply_dy(f); };
    SpectralField w0 = dy(filtered.fields[0]);
    std::size_t i = 0;
    for (; i + 2 < ns; i += 2) {
        SpectralField w1 = dy(filtered.fields[i + 1]);
        SpectralField w2 = dy(filtered.fields[i + 2]);
        const double s0 = filtered.times[i];
        accumulate(accp, s0, om, mp, w0.coeffs, w1.coeffs, w2.coeffs);
        accumulate(accm, s0, -om, mm, w0.coeffs, w1.coeffs, w2.coeffs);
        acc0 += m0[0] * w0.coeffs + m0[1] * w1.coeffs + m0[2] * w2.coeffs;
        w0 = std::move(w2);
    }
    if (i + 2 == ns) {
        // Odd segment count: close with a linear Filon segment.
        SpectralField w1 = dy(filtered.fields[i + 1]);
        const double s0 = filtered.times[i];
        const auto lp = filon_linear_moments(h, om);
        const auto lm = filon_linear_moments(h, -om);
        const auto l0 = filon_linear_moments(h, 0.0);
        accp += unit_phase(om * s0) * (lp[0] * w0.coeffs + lp[1] * w1.coeffs);
        accm += unit_phase(-om * s0) * (lm[0] * w0.coeffs + lm[1] * w1.coeffs);
        acc0 += l0[0] * w0.coeffs + l0[1] * w1.coeffs;
    }

    // Assemble both sides. G row m couples rows m -/+ 1 with phase frequency
    // +-b/eps^2; the right side is (1/2) int d_y^2 phi = (1/2) d_y (acc0).
    CMat lhs = CMat::Zero(nm, grid->n_y());
    const cplx pref = cplx(0.0, -b / eps);
    for (int m = 0; m < nm; ++m) {
        if (m > 0) lhs.row(m) += pref * coupling_v(m - 1, m, b) * accp.row(m - 1);
        if (m + 1 < nm) lhs.row(m) += pref * coupling_v(m + 1, m, b) * accm.row(m + 1);
    }
    CMat rhs(nm, grid->n_y());
    for (int k = 0; k < grid->n_y(); ++k)
        rhs.col(k) = cplx(0.0, 0.5 * grid->xi_coupling()[k]) * acc0.col(k);

    return (lhs - rhs).norm();
}

}  // namespace iwsk
