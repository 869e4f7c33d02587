#pragma once

#include <vector>

#include "iwsk/field.hpp"

namespace iwsk {

/// Time-stamped field snapshots plus scalar diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> fields;
    std::vector<double> mass;         // ||psi||^2 per sample
    std::vector<double> sigma2;       // Sigma^2 norm per sample

    std::size_t size() const { return times.size(); }
    void push(double t, SpectralField f) {
        times.push_back(t);
        mass.push_back(f.coeffs.squaredNorm());
        sigma2.push_back(sigma_norm(f, 2));
        fields.push_back(std::move(f));
    }
};

}  // namespace iwsk
