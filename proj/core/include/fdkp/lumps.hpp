#pragma once

#include <array>
#include <memory>

#include "fdkp/field.hpp"
#include "fdkp/grid.hpp"
#include "fdkp/symbol_params.hpp"
#include "fdkp/tau_polynomial.hpp"

namespace fdkp::lumps {

/// Maximum derivative order of zeta the calculus provides (per variable and
/// in total).
inline constexpr int max_derivative_order = 4;

/// Lump family zeta_k(x, y) = -6 d^2/dx^2 log tau_k(x, y), k in {1, 2},
/// with an exact derivative calculus up to total order 4.
///
/// Derivatives are evaluated by propagating the exact integer tau tables
/// through truncated-Taylor (jet) recurrences at the evaluation point:
/// algebraically exact quotient/log rules, no grids, no finite differences.
class LumpFamily {
 public:
  explicit LumpFamily(int k_index);

  int k_index() const { return k_index_; }
  const TauPolynomial& tau() const { return tau_; }

  double eval_tau(double x, double y) const { return tau_.eval(x, y); }

  /// d^a/dx^a d^b/dy^b zeta at (x, y); requires a, b >= 0 and a + b <= 4.
  double eval_zeta(double x, double y, int a = 0, int b = 0) const;

  /// All derivatives with a + b <= 4 in one jet evaluation; deriv[a][b].
  std::array<std::array<double, 5>, 5> zeta_jet(double x, double y) const;

  /// Pointwise residual of d^2/dx^2(-zeta_xx + zeta + zeta^2) + zeta_yy,
  /// assembled from exact derivatives (the zeta^2 term via Leibniz:
  /// (zeta^2)_xx = 2 zeta zeta_xx + 2 zeta_x^2). Machine-precision zero on
  /// the lump families.
  double kp_residual(double x, double y) const;

 private:
  int k_index_;
  TauPolynomial tau_;
  // d^i/dx^i d^j/dy^j tau for i + j <= 6, exact integer tables.
  std::array<std::array<TauPolynomial, 7>, 7> tau_derivatives_;
};

const LumpFamily& lump_family(int k_index);  // cached instances, k in {1, 2}

/// Pointwise residual of the same equation assembled from an arbitrary tau
/// (bug detector: a non-solution tau gives an O(1) residual through the same
/// pipeline).
double kp_residual_of_tau(const TauPolynomial& tau, double x, double y);

/// Sampler for the lump rescaled to solve mtilde(D) zeta + zeta^2 = 0:
/// zeta(x, y) = zeta_k(b x, b y). The exponent of b = (1/2 (beta - 1/3))^p,
/// p in {+1/2, -1/2}, is resolved at construction by an exact pointwise
/// residual check on the x-differentiated (local) form of the equation; the
/// reading that survives is recorded, not assumed.
class MTildeLump {
 public:
  MTildeLump(int k_index, const SymbolParams& params);

  double operator()(double x, double y) const;
  /// Derivatives of the rescaled lump (chain rule is exact).
  double eval(double x, double y, int a, int b) const;

  double scale_factor() const { return b_; }
  /// +1 if the direct (+1/2) exponent reading survived the residual check,
  /// -1 if the inverse did.
  int resolved_exponent_sign() const { return exponent_sign_; }
  /// Residual of the local form at the check points for the surviving b.
  double residual_at_check() const { return residual_; }

 private:
  const LumpFamily* family_;
  double b_ = 1.0;
  int exponent_sign_ = 0;
  double residual_ = 0.0;
  SymbolParams params_;
};

enum class LumpScaling {
  NormalisedKP,  // raw zeta_k (solves the tilde-free normalized KP form)
  MTilde,        // rescaled (solves mtilde(D) zeta + zeta^2 = 0)
};

struct LumpSample {
  spectral::Field field;
  /// Fraction of spectral energy removed by zeroing the k1 = 0, k2 != 0 line
  /// (and Nyquist) after the forward transform.
  double removed_energy_fraction = 0.0;
};

/// Samples the requested lump on the grid. KPScaled yields zeta itself;
/// Physical yields its image eps^2 zeta at the stretched sample points
/// (the solver seed u1).
LumpSample sample_lump(const spectral::Grid& grid, int k_index, spectral::Frame frame,
                       const SymbolParams& params, LumpScaling scaling = LumpScaling::MTilde);

}  // namespace fdkp::lumps
