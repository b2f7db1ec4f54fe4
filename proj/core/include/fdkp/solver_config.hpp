#pragma once

namespace fdkp::solver {

/// Numerical surrogates for the exact contraction/implicit-function steps.
struct SolverConfig {
  double fixed_point_tol = 1e-12;     // X-norm of successive u2 increments
  int fixed_point_max_iter = 200;
  double newton_tol = 1e-10;          // Y0 residual of the reduced fixed-point eqn
  int newton_max_iter = 30;
  double linear_solver_tol = 1e-8;    // relative, GMRES
  int linear_solver_max_iter = 400;
  double jacobian_fd_step = 1e-7;     // one-sided difference step for dS
  int max_damping_halvings = 8;
  bool use_picard = false;            // fidelity mode: plain Picard on the reduced eqn

  void validate() const;
};

}  // namespace fdkp::solver
