#pragma once

#include <complex>
#include <vector>

#include "fdkp/grid.hpp"

namespace fdkp::spectral::fft {

/// Unnormalized 2D DFTs (FFTW convention): forward applies e^{-ik.x}, backward
/// e^{+ik.x}; backward(forward(f)) == Nx*Ny*f. Layout is iy*Nx + ix. Plans are
/// cached per (Nx, Ny) behind a mutex; the transforms themselves are pure.
void forward(const Grid& grid, const std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out);
void backward(const Grid& grid, const std::vector<std::complex<double>>& in,
              std::vector<std::complex<double>>& out);

}  // namespace fdkp::spectral::fft
