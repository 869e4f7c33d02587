#pragma once

#include <string>

#include "iwsk/field.hpp"

namespace iwsk {

/// Binary snapshot: magic "IWSK", u32 version = 1, u32 N_h, u32 N_y, f64 b,
/// f64 L_y, then N_h * N_y little-endian f64 (re, im) pairs, row-major with
/// Hermite index outer and Fourier index inner (FFT-standard order).
void write_snapshot(const std::string& path, const SpectralField& u);

/// Reads a snapshot; the grid is reconstructed with default quadrature size.
SpectralField read_snapshot(const std::string& path);

}  // namespace iwsk
