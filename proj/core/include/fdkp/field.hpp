#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "fdkp/grid.hpp"
#include "fdkp/symbol_params.hpp"

namespace fdkp::spectral {

/// Coordinate frame a field's samples live in.
///
/// Everything is stored on one shared grid. A KPScaled field holds
/// zeta(X, Y) on the grid coordinates directly; its wavenumber lattice is the
/// grid lattice (K1, K2). A Physical field holds u at the stretched sample
/// points (X/eps, Y/eps^2), so its wavenumber lattice is (eps*K1, eps^2*K2)
/// and its quadrature cells carry a factor eps^-3. The scaling isomorphism
/// u(x, y) = eps^2 zeta(eps x, eps^2 y) is then exact bookkeeping: samples
/// scale by eps^2 and the tag flips, no interpolation.
enum class Frame { Physical, KPScaled };

enum class Direction { Forward, Backward };

enum class ConeSide { Inside, Outside };

/// Real scalar field with physical samples and/or spectral coefficients.
///
/// Spectral convention: c(K) = (dx*dy/(2*pi)) * DFT(samples), quadrature
/// weight dk1*dk2 on coefficients, so the discrete Parseval identity
/// sum |f|^2 dx dy = sum |c|^2 dk1 dk2 is exact in exact arithmetic.
///
/// Invariants maintained by every constructor and operation:
///   - samples are real (spectra conjugate-symmetric),
///   - the Nyquist row and column are zero,
///   - modes with k1 = 0, k2 != 0 are zero (required for finiteness of the
///     k2^2/k1^2-weighted norms; the mean mode k = 0 is retained).
///
/// Fields are immutable values; all operations return new fields.
class Field {
 public:
  using Spectrum = std::vector<std::complex<double>>;
  using Samples = std::vector<double>;

  Field() = default;

  static Field zeros(const Grid& grid, Frame frame);
  static Field from_samples(const Grid& grid, Frame frame, Samples samples);
  /// Enforces conjugate symmetry and the zeroing invariants on construction.
  static Field from_spectrum(const Grid& grid, Frame frame, Spectrum spectrum);

  const Grid& grid() const { return grid_; }
  Frame frame() const { return frame_; }

  bool has_samples() const { return has_samples_; }
  bool has_spectrum() const { return has_spectrum_; }

  const Samples& samples() const;
  const Spectrum& spectrum() const;

  /// Copy of this field carrying the requested representation (computed via
  /// the transform if missing). If the forward transform's invariant
  /// enforcement removes spectral content, the stale samples are dropped so
  /// the two representations never disagree.
  Field with_samples() const;
  Field with_spectrum() const;

  /// Same data, other frame tag. Pure bookkeeping; see Frame.
  Field retagged(Frame frame) const;

  double sup_norm() const;  // max |sample|

  friend Field transform(const Field& f, Direction direction);

 private:
  Grid grid_;
  Frame frame_ = Frame::KPScaled;
  Samples samples_;
  Spectrum spectrum_;
  bool has_samples_ = false;
  bool has_spectrum_ = false;
};

/// Populates the representation the direction points at: Forward fills the
/// spectrum from samples, Backward fills samples from the spectrum.
Field transform(const Field& f, Direction direction);

/// Pointwise multiplication of the spectrum by sigma(k), where k is the
/// field's own wavenumber lattice (frame-resolved via params for Physical
/// fields). sigma is never evaluated on the zeroed k1 = 0, k2 != 0 line or
/// on Nyquist modes; a non-finite value on any retained mode throws.
Field apply_multiplier(const Field& f, const std::function<double(double, double)>& sigma,
                       const SymbolParams& params);

/// Dealiased square: spectra outside the 2/3 band are zeroed before and after
/// the pointwise product (exact dealiasing for quadratic terms).
Field pointwise_square(const Field& f);

/// Dealiased product of two fields on the same grid and frame.
Field pointwise_multiply(const Field& f, const Field& g);

/// Average over the four reflections (x,y), (-x,y), (x,-y), (-x,-y).
Field symmetrize(const Field& f);

/// sup |f - symmetrize(f)| / sup |f|; zero for the zero field.
double asymmetry(const Field& f);

/// Spectral cut-off to the cone C (|k1| <= delta, |k2/k1| <= delta; k = 0
/// in, k1 = 0 with k2 != 0 out) for Physical fields, to the scaled cone
/// C_eps (delta -> delta/eps) for KPScaled fields. Inside + Outside is the
/// identity bit-exactly.
Field project_cone(const Field& f, ConeSide side, const SymbolParams& params);

// --- linear arithmetic (same grid and frame; spectral when available) ---
Field add(const Field& a, const Field& b);
Field subtract(const Field& a, const Field& b);
Field scale(const Field& a, double factor);
Field axpy(double alpha, const Field& x, const Field& y);  // alpha*x + y

/// Deterministic random field for property tests and probe fields: Gaussian
/// coefficients shaped by |c(K)| ~ (1 + K1^2 + (K2/K1)^2)^(-y1_weight/2),
/// optionally band-limited to |K1| <= k1_band (0 = no band limit), invariants
/// enforced, unit Y0 norm.
Field random_field(const Grid& grid, Frame frame, unsigned seed, double y1_weight = 0.0,
                   double k1_band = 0.0);

}  // namespace fdkp::spectral
