#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fdkp/field.hpp"
#include "fdkp/solver_config.hpp"
#include "fdkp/symbol_params.hpp"

namespace fdkp::solver {

using spectral::Field;

/// Exact frame bookkeeping for the scaling isomorphism
/// u(x, y) = eps^2 zeta(eps x, eps^2 y) on the shared grid: samples scale by
/// eps^{+-2} and the tag flips.
Field to_physical_frame(const Field& zeta, const SymbolParams& p);
Field to_kp_frame(const Field& u, const SymbolParams& p);

struct ContractionDiagnostics {
  int iterations = 0;
  double final_increment_x = 0.0;
  /// Geometric mean of successive X-norm increment ratios; the per-step rate.
  double contraction_factor = 0.0;
  double contraction_factor_max = 0.0;
  /// Fitted constant sigma in |u2|_X <= sigma * eps * |u1|_eps^2.
  double sigma_fitted = 0.0;
  bool converged = false;
};

/// Split state u = u1 + u2 with supports inside/outside the cone, plus the
/// norms and admissibility flags the theory tracks.
struct ReductionState {
  Field u1;
  Field u2;
  double epsilon = 0.0;
  ContractionDiagnostics contraction;
  double u1_eps_norm = 0.0;
  double u2_x_norm = 0.0;
  bool in_unit_ball = false;  // |u1|_eps <= 1 (recorded, not enforced)
};

/// One application of the high-frequency fixed-point map
///   F(u1, u2) = -n(D)^{-1}(1 - chi(D))(eps^2 u2 + (u1 + u2)^2),
/// computed in the working frame through the scaled symbols. The output is
/// supported outside the cone. Throws if any retained outside-cone mode has
/// n(k) < 1e-10.
Field F_map(const Field& u1, const Field& u2, const SymbolParams& p, const SolverConfig& cfg);

/// Picard iteration u2 <- F(u1, u2) from u2 = 0 until the X-norm increment
/// falls below fixed_point_tol. Throws SolverError on non-contraction
/// (increment ratio >= 1 three times in a row), contraction factor above 0.9,
/// or iteration exhaustion.
std::pair<Field, ContractionDiagnostics> solve_u2(const Field& u1, const SymbolParams& p,
                                                  const SolverConfig& cfg);

/// Cone-projected remainder R_eps(u1) = chi(D)(2 u1 u2(u1) + u2(u1)^2).
Field R_eps(const Field& u1, const SymbolParams& p, const SolverConfig& cfg);

/// Scaled remainder S_eps(zeta) = eps^{-4} R_eps(u1) pulled back through the
/// scaling isomorphism; since the grid is shared the pullback is exact
/// bookkeeping. Input and output are KPScaled; the input is cone-projected
/// before use.
Field S_eps(const Field& zeta, const SymbolParams& p, const SolverConfig& cfg);

/// Residual of the reduced fixed-point equation
///   zeta + eps^2 (n_eps(D) + eps^2)^{-1} (chi_eps(D) zeta^2 + S_eps(zeta)),
/// returned with its Y0 norm.
std::pair<Field, double> reduced_residual(const Field& zeta, const SymbolParams& p,
                                          const SolverConfig& cfg);

/// Frechet derivative of reduced_residual at zeta applied to w:
///   w + eps^2 (n_eps + eps^2)^{-1} (2 chi_eps(zeta w) + dS_eps[zeta] w),
/// with dS by one-sided finite differences. Shares the S_eps(zeta) base value
/// across applications; see ReducedOperator.
class ReducedOperator {
 public:
  ReducedOperator(Field zeta, const SymbolParams& p, const SolverConfig& cfg);

  const Field& zeta() const { return zeta_; }
  const Field& residual() const { return residual_; }
  double residual_norm() const { return residual_norm_; }

  /// J(zeta) w. Throws on |w| = 0. `include_ds` = false drops the dS term
  /// (used by gradient checks); `eps_limit` replaces the resolvent by
  /// mtilde(D)^{-1} and drops dS (the eps -> 0 operator
  /// w + 2 mtilde(D)^{-1} chi_eps(zeta w)).
  Field apply(const Field& w, bool include_ds = true, bool eps_limit = false) const;

 private:
  Field zeta_;
  Field s_base_;
  Field u2_base_;  // fixed point at zeta, reused to warm-start dS solves
  Field residual_;
  double residual_norm_ = 0.0;
  double zeta_y0_ = 0.0;
  SymbolParams params_;
  SolverConfig config_;
};

/// Convenience wrapper constructing a one-shot operator.
Field linearization_apply(const Field& zeta, const Field& w, const SymbolParams& p,
                          const SolverConfig& cfg);

struct NewtonStepRecord {
  int step = 0;
  double residual = 0.0;
  int krylov_iterations = 0;
  double krylov_relative_residual = 0.0;
  int damping_halvings = 0;
};

struct NewtonDiagnostics {
  std::vector<NewtonStepRecord> steps;
  bool converged = false;
  double final_residual = 0.0;
  std::string to_json() const;
};

/// Damped Newton(-Krylov) iteration on the reduced fixed-point equation in
/// the symmetric cone-projected subspace. Every iterate is re-symmetrized and
/// re-projected. `jsonl` (optional) receives one JSON line per step. Throws
/// SolverError (with diagnostics) on divergence or exhaustion.
std::pair<Field, NewtonDiagnostics> newton_solve(const Field& zeta0, const SymbolParams& p,
                                                 const SolverConfig& cfg,
                                                 std::ostream* jsonl = nullptr);

struct AssembledSolution {
  Field u;        // full solitary wave, Physical frame
  double speed;   // c = 1 - eps^2
  ReductionState state;
};

/// Reassembly u = u1 + u2(u1), u1 = eps^2 zeta_eps(eps x, eps^2 y), c = 1 - eps^2.
AssembledSolution assemble_solution(const Field& zeta_eps, const SymbolParams& p,
                                    const SolverConfig& cfg);

struct FdkpResidual {
  double l2 = 0.0;        // |-c u + m(D) u + u^2|_{L^2}
  double z = 0.0;         // same in the Z norm
  double relative = 0.0;  // l2 / |u|_{L^2}
};

/// The residual field -c u + m(D) u + u^2 itself (Physical frame); its cone
/// projection is the first split-system residual and its complement the
/// second, to roundoff.
Field fdkp_residual_field(const Field& u, double speed, const SymbolParams& p);

/// End-to-end correctness oracle, independent of the reduction path.
FdkpResidual fdkp_residual(const Field& u, double speed, const SymbolParams& p);

}  // namespace fdkp::solver
