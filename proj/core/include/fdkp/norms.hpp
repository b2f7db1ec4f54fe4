#pragma once

#include "fdkp/field.hpp"
#include "fdkp/symbol_params.hpp"

namespace fdkp::spectral {

/// Which norm to evaluate.
///
/// Yr(r) is the anisotropic scale with weight (1 + k1^2 + k2^2/k1^2)^r, a
/// KP-frame norm (Y0 is the KP-frame L2). L2, EpsScaled, X and Z are
/// physical-frame norms:
///   |u|_eps^2 = sum (1 + k1^2/eps^2 + (k2/k1)^2/eps^2) |c|^2 dk,
///   |u|_X^2   = sum (1 + (k2/k1)^2 + k2^4/k1^2 + |k|^{2s}) |c|^2 dk,
///   |u|_Z^2   = sum (1 + |k| + k1^2 |k|^{2s-3}) |c|^2 dk.
struct NormKind {
  enum class Tag { L2, Yr, EpsScaled, X, Z };
  Tag tag = Tag::L2;
  double exponent = 0.0;  // r for Yr, s for X/Z

  static NormKind l2() { return {Tag::L2, 0.0}; }
  static NormKind yr(double r) { return {Tag::Yr, r}; }
  static NormKind eps_scaled() { return {Tag::EpsScaled, 0.0}; }
  static NormKind x(double s) { return {Tag::X, s}; }
  static NormKind z(double s) { return {Tag::Z, s}; }
};

/// Weight the norm applies at wavevector k (frame-resolved by the caller).
/// The k = 0 mode carries weight 1 in every kind.
double norm_weight(NormKind kind, double k1, double k2, const SymbolParams& params);

/// Discrete quadrature of the defining integral. Frame conversion is exact:
/// asking for a physical-frame norm of a KPScaled field returns the norm of
/// its physical image u = eps^2 zeta(eps x, eps^2 y) (substitution
/// k -> (eps k1, eps^2 k2), measure factor eps^3, amplitude eps^2), and
/// conversely for Yr norms of Physical fields, so the scaling identity
/// |u1|_eps^2 = eps |zeta|_{Y1}^2 holds mode by mode.
///
/// Rejects mismatched params: X/Z exponents must equal params.sobolev_s,
/// Yr needs r >= 0, and cross-frame or EpsScaled evaluation needs eps > 0.
double norm(const Field& f, NormKind kind, const SymbolParams& params);

/// Y0 (KP-frame L2) inner product of spectra; the Hilbert structure used by
/// the Krylov solvers.
double inner_y0(const Field& a, const Field& b);

}  // namespace fdkp::spectral
