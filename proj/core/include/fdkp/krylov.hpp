#pragma once

#include <functional>

#include "fdkp/field.hpp"

namespace fdkp::solver {

struct KrylovResult {
  spectral::Field solution;
  double relative_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Restarted GMRES over the Y0 inner product for operators of the form
/// identity + compact, which is what every linearization in this library
/// looks like. `op` must be linear on the shared grid/frame of `rhs`.
KrylovResult gmres(const std::function<spectral::Field(const spectral::Field&)>& op,
                   const spectral::Field& rhs, double relative_tolerance, int max_iterations,
                   int restart = 50);

}  // namespace fdkp::solver
