#pragma once

#include <cstddef>

namespace fdkp::spectral {

/// Rectangular periodic domain [-Lx, Lx) x [-Ly, Ly) with Nx x Ny samples and
/// the matching discrete wavenumber lattice k1 in (pi/Lx)*{-Nx/2, ..., Nx/2-1}.
///
/// Storage convention everywhere in this library: row-major with y as the slow
/// index, i.e. flat index = iy*Nx + ix, and the same layout for spectral
/// coefficients (my*Nx + mx).
struct Grid {
  double half_width_x = 0.0;  // Lx
  double half_width_y = 0.0;  // Ly
  int points_x = 0;           // Nx, power of two >= 16
  int points_y = 0;           // Ny, power of two >= 16

  bool operator==(const Grid&) const = default;

  std::size_t size() const { return static_cast<std::size_t>(points_x) * points_y; }

  double dx() const { return 2.0 * half_width_x / points_x; }
  double dy() const { return 2.0 * half_width_y / points_y; }
  double dk1() const;  // pi / Lx
  double dk2() const;  // pi / Ly

  double x(int ix) const { return -half_width_x + ix * dx(); }
  double y(int iy) const { return -half_width_y + iy * dy(); }

  /// Signed wavenumber index: mx in [0, Nx) -> {-Nx/2, ..., Nx/2-1}.
  /// The single Nyquist index Nx/2 maps to -Nx/2; it is zeroed by every
  /// operation in this library.
  int signed_index_x(int mx) const { return mx < points_x / 2 ? mx : mx - points_x; }
  int signed_index_y(int my) const { return my < points_y / 2 ? my : my - points_y; }

  double k1(int mx) const { return dk1() * signed_index_x(mx); }
  double k2(int my) const { return dk2() * signed_index_y(my); }

  bool is_nyquist_x(int mx) const { return mx == points_x / 2; }
  bool is_nyquist_y(int my) const { return my == points_y / 2; }

  /// Index of the reflected sample/mode (x -> -x respectively k1 -> -k1);
  /// exact on the lattice except at the Nyquist index, which is self-paired
  /// only because it is always zero.
  int reflect_x(int ix) const { return ix == 0 ? 0 : points_x - ix; }
  int reflect_y(int iy) const { return iy == 0 ? 0 : points_y - iy; }
};

/// Validates and builds a Grid. Rejects non-power-of-two counts (< 16) and
/// nonpositive half-widths.
Grid make_grid(double half_width_x, double half_width_y, int points_x, int points_y);

}  // namespace fdkp::spectral
