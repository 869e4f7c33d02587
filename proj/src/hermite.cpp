#include "iwsk/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace iwsk {

QuadRule gauss_hermite_rule(double c, int n_nodes) {
    if (c <= 0.0) throw ConfigError("gauss_hermite_rule: envelope must be positive");
    if (n_nodes < 1) throw ConfigError("gauss_hermite_rule: need at least one node");

    // Golub-Welsch nodes: eigenvalues of the Jacobi matrix for the monic
    // Hermite polynomials (weight e^{-z^2}; off-diagonal beta_k = sqrt(k/2)).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n_nodes);
    Eigen::VectorXd sub(n_nodes > 1 ? n_nodes - 1 : 0);
    for (int k = 1; k < n_nodes; ++k) sub[k - 1] = std::sqrt(0.5 * k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("gauss_hermite_rule: tridiagonal eigensolve failed");
    Eigen::VectorXd z = es.eigenvalues();

    // Enforce the +/- symmetry exactly, then polish each node as a zero of
    // the orthonormal Hermite function h_N.
    for (int j = 0; j < n_nodes / 2; ++j) {
        const int j2 = n_nodes - 1 - j;
        const double zs = 0.5 * (z[j2] - z[j]);
        z[j] = -zs;
        z[j2] = zs;
    }
    if (n_nodes % 2 == 1) z[n_nodes / 2] = 0.0;
    {
        Eigen::MatrixXd h, dh;
        for (int iter = 0; iter < 2; ++iter) {
            h = hermite_eval(1.0, n_nodes + 1, z);
            dh = hermite_eval_deriv(1.0, n_nodes + 1, z);
            for (int j = 0; j < n_nodes; ++j) z[j] -= h(j, n_nodes) / dh(j, n_nodes);
        }
    }

    // The classical weights carry e^{-z^2}; the envelope-absorbed weights
    // w e^{+z^2} = 1 / (N h_{N-1}(z)^2) are evaluated through the normalized
    // recurrence, which keeps full relative accuracy in the tails (the naive
    // eigenvector route underflows there). The e^{-z^2/2} seed limits rules
    // to a few hundred nodes, far beyond any size used here.
    Eigen::MatrixXd h = hermite_eval(1.0, n_nodes, z);
    const double s = std::sqrt(c);
    QuadRule rule;
    rule.envelope = c;
    rule.nodes = z / s;
    rule.weights.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        const double hn1 = h(j, n_nodes - 1);
        rule.weights[j] = 1.0 / (n_nodes * hn1 * hn1 * s);
    }
    return rule;
}

Eigen::MatrixXd hermite_eval(double b, int n_modes, const Eigen::VectorXd& points) {
    if (b <= 0.0) throw ConfigError("hermite_eval: b must be positive");
    if (n_modes < 1) throw ConfigError("hermite_eval: n_modes must be positive");
    const auto np = points.size();
    Eigen::MatrixXd t(np, n_modes);
    const double c0 = std::pow(b / M_PI, 0.25);
    for (Eigen::Index j = 0; j < np; ++j) {
        const double x = points[j];
        double prev = 0.0;
        double cur = c0 * std::exp(-0.5 * b * x * x);
        t(j, 0) = cur;
        for (int n = 0; n + 1 < n_modes; ++n) {
            double next = x * std::sqrt(2.0 * b / (n + 1)) * cur -
                          std::sqrt(double(n) / (n + 1)) * prev;
            prev = cur;
            cur = next;
            t(j, n + 1) = cur;
        }
    }
    return t;
}

Eigen::MatrixXd hermite_eval_deriv(double b, int n_modes, const Eigen::VectorXd& points) {
    Eigen::MatrixXd t = hermite_eval(b, n_modes + 1, points);
    Eigen::MatrixXd d(points.size(), n_modes);
    const double s = std::sqrt(0.5 * b);
    for (int n = 0; n < n_modes; ++n) {
        d.col(n) = -s * std::sqrt(double(n + 1)) * t.col(n + 1);
        if (n > 0) d.col(n) += s * std::sqrt(double(n)) * t.col(n - 1);
    }
    return d;
}

HermiteBasis::HermiteBasis(double b, int n_modes, int n_quad)
    : b_(b), n_modes_(n_modes), n_quad_(n_quad) {
    if (b <= 0.0) throw ConfigError("HermiteBasis: b must be positive");
    if (n_modes < 1) throw ConfigError("HermiteBasis: n_modes must be positive");
    if (n_quad < n_modes) throw ConfigError("HermiteBasis: n_quad < n_modes");
    rule_ = gauss_hermite_rule(b, n_quad);
    table_ = hermite_eval(b, n_modes, rule_.nodes);
    wtable_ = (table_.array().colwise() * rule_.weights.array()).matrix().transpose();
}

Eigen::VectorXcd HermiteBasis::project(const Eigen::VectorXcd& samples) const {
    if (samples.size() != n_quad_) throw ConfigError("project: sample count mismatch");
    return wtable_ * samples;
}

Eigen::VectorXcd HermiteBasis::synth(const Eigen::VectorXcd& coeffs) const {
    if (coeffs.size() != n_modes_) throw ConfigError("synth: coefficient count mismatch");
    return table_ * coeffs;
}

double eigenvalue(int n, double b) {
    if (n < 0) throw ConfigError("eigenvalue: n must be >= 0");
    if (b <= 0.0) throw ConfigError("eigenvalue: b must be positive");
    return b * (n + 0.5);
}

double coupling_v(int n, int m, double b) {
    if (n < 0 || m < 0) throw ConfigError("coupling_v: indices must be >= 0");
    if (b <= 0.0) throw ConfigError("coupling_v: b must be positive");
    const double s = 1.0 / std::sqrt(2.0 * b);
    if (m == n + 1) return s * std::sqrt(double(n + 1));
    if (m == n - 1) return s * std::sqrt(double(n));
    return 0.0;
}

double chi_norm_pow(int n, int p, double b) {
    if (n < 0) throw ConfigError("chi_norm_pow: n must be >= 0");
    if (p < 2 || p % 2 != 0) throw ConfigError("chi_norm_pow: p must be even and >= 2");
    if (b <= 0.0) throw ConfigError("chi_norm_pow: b must be positive");
    // |chi_n|^p = polynomial of degree p*n times e^{-(p/2) b x^2}.
    const int n_nodes = p * n / 2 + 2;
    QuadRule rule = gauss_hermite_rule(0.5 * p * b, n_nodes);
    Eigen::MatrixXd t = hermite_eval(b, n + 1, rule.nodes);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < rule.nodes.size(); ++j)
        acc += rule.weights[j] * std::pow(t(j, n), p);
    return acc;
}

}  // namespace iwsk
