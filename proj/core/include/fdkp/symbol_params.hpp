#pragma once

namespace fdkp {

/// Physical and numerical parameters governing every Fourier multiplier.
///
/// beta    Bond-type dispersion parameter; beta > 1/3 selects the strong
///         surface tension branch.
/// delta   half-width of the spectral cone C, in (0, 1).
/// epsilon amplitude parameter, 0 <= epsilon < eps0; wave speed c = 1 - eps^2.
/// theta   regularity exponent in (1/2, 1) for the Y^{1+theta} scale.
/// sobolev_s  Sobolev index s with 3/2 < 1 + theta < s < 2.
/// ball_m  admissibility radius M > 1 for seeds (|zeta|_{Y^1} < M).
/// eps0    upper limit of the epsilon range the solver accepts.
struct SymbolParams {
  double beta = 2.0;
  double delta = 0.5;
  double epsilon = 0.1;
  double theta = 0.75;
  double sobolev_s = 1.9;
  double ball_m = 50.0;
  double eps0 = 0.25;

  /// Throws SymbolError naming the first violated constraint.
  void validate() const;

  /// The theoretical admissibility condition eps < min(eps0, M^-2) under
  /// which the reduction's unit-ball hypotheses hold. With the default
  /// M = 50 this excludes every practical sweep epsilon, so it is reported
  /// in diagnostics rather than enforced.
  bool in_theoretical_regime() const;

  SymbolParams with_epsilon(double eps) const {
    SymbolParams q = *this;
    q.epsilon = eps;
    return q;
  }
};

}  // namespace fdkp
