#pragma once

#include <memory>
#include <vector>

#include "fdkp/grid.hpp"
#include "fdkp/symbol_params.hpp"

namespace fdkp::symbols {

/// tanh(r)/r with the removable singularity resolved; even Taylor series for
/// |r| < 1e-4 to avoid cancellation.
double tanc(double r);

/// Full dispersion symbol
///   m(k) = (1 + beta|k|^2)^(1/2) (tanh|k|/|k|)^(1/2) (1 + 2 k2^2/k1^2)^(1/2),
/// evaluated through (k1, k2/k1) so m is finite wherever the ratio is;
/// m(0,0) = 1. Throws SymbolError for k1 = 0, k2 != 0.
double m_symbol(double k1, double k2, const SymbolParams& p);

/// n = m - 1.
double n_symbol(double k1, double k2, const SymbolParams& p);

/// mtilde(k) = 1 + k2^2/k1^2 + (1/2)(beta - 1/3) k1^2, and its inverse in (0, 1].
double mtilde_symbol(double k1, double k2, const SymbolParams& p);
double mtilde_inverse(double k1, double k2, const SymbolParams& p);

/// n_eps(K) = n(eps K1, eps^2 K2) on the KP-scaled lattice; requires eps > 0.
double n_eps_symbol(double K1, double K2, const SymbolParams& p);

/// eps^2 / (eps^2 + n_eps(K)) in (0, 1].
double resolvent_symbol(double K1, double K2, const SymbolParams& p);

/// Two-dimensional wave-train dispersion curve c(k1) = m(k1, 0); c(0) = 1.
double dispersion_speed(double k1, const SymbolParams& p);

/// Cone indicators. The physical cone C is |k1| <= delta and |k2/k1| <= delta
/// with k = 0 included and the k1 = 0, k2 != 0 line excluded; the scaled cone
/// C_eps replaces delta by delta/eps.
bool in_cone_physical(double k1, double k2, const SymbolParams& p);
bool in_cone_scaled(double K1, double K2, const SymbolParams& p);

/// Per-grid symbol tables. All arrays are indexed like spectra (my*Nx + mx).
/// On the shared KP-scaled grid a Physical-frame field's own wavenumbers are
/// (eps K1, eps^2 K2), so `n_phys` doubles as the n_eps table and `cone` as
/// both chi (physical frame) and chi_eps (KP frame); see Frame.
struct SymbolTable {
  spectral::Grid grid;
  SymbolParams params;
  std::vector<double> n_phys;       // n(eps K1, eps^2 K2); 0 on dropped modes
  std::vector<double> resolvent;    // eps^2/(eps^2 + n_eps)
  std::vector<double> mtilde;       // mtilde(K) on the KP lattice
  std::vector<double> mtilde_inv;   // 1/mtilde(K); 0 on dropped modes
  std::vector<char> cone;           // chi_eps on the KP lattice
  std::vector<char> retained;       // 0 for Nyquist and the k1 = 0, k2 != 0 line
};

/// Memoized per (grid, beta, delta, epsilon); keyed immutably.
std::shared_ptr<const SymbolTable> symbol_table(const spectral::Grid& grid,
                                                const SymbolParams& params);

}  // namespace fdkp::symbols
