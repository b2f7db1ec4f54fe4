#include "fdkp/krylov.hpp"

#include <cmath>
#include <vector>

#include "fdkp/errors.hpp"
#include "fdkp/norms.hpp"

namespace fdkp::solver {

using spectral::Field;

KrylovResult gmres(const std::function<Field(const Field&)>& op, const Field& rhs,
                   double relative_tolerance, int max_iterations, int restart) {
  const double rhs_norm = std::sqrt(spectral::inner_y0(rhs, rhs));
  KrylovResult result;
  result.solution = Field::zeros(rhs.grid(), rhs.frame());
  if (rhs_norm == 0.0) {
    result.converged = true;
    return result;
  }

  Field x = result.solution;
  bool x_is_zero = true;  // op is linear; never evaluate it at the zero field
  int total_iterations = 0;

  while (total_iterations < max_iterations) {
    Field r = x_is_zero ? rhs : spectral::subtract(rhs, op(x));
    double beta = std::sqrt(spectral::inner_y0(r, r));
    if (beta <= relative_tolerance * rhs_norm) {
      result.converged = true;
      result.relative_residual = beta / rhs_norm;
      break;
    }

    const int m = std::min(restart, max_iterations - total_iterations);
    std::vector<Field> basis;
    basis.reserve(m + 1);
    basis.push_back(spectral::scale(r, 1.0 / beta));

    // Hessenberg kept column-major; Givens rotations applied on the fly.
    std::vector<std::vector<double>> h(m, std::vector<double>(m + 1, 0.0));
    std::vector<double> cs(m, 0.0), sn(m, 0.0);
    std::vector<double> g(m + 1, 0.0);
    g[0] = beta;

    int k = 0;
    for (; k < m; ++k) {
      Field w = op(basis[k]);
      for (int i = 0; i <= k; ++i) {
        h[k][i] = spectral::inner_y0(w, basis[i]);
        w = spectral::axpy(-h[k][i], basis[i], w);
      }
      h[k][k + 1] = std::sqrt(spectral::inner_y0(w, w));
      ++total_iterations;

      for (int i = 0; i < k; ++i) {
        const double tmp = cs[i] * h[k][i] + sn[i] * h[k][i + 1];
        h[k][i + 1] = -sn[i] * h[k][i] + cs[i] * h[k][i + 1];
        h[k][i] = tmp;
      }
      const double subdiag = h[k][k + 1];  // Arnoldi value, before the rotation
      const double denom = std::hypot(h[k][k], subdiag);
      if (denom == 0.0) break;  // null column; drop it and fall out to restart
      cs[k] = h[k][k] / denom;
      sn[k] = subdiag / denom;
      h[k][k] = denom;
      h[k][k + 1] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      if (std::abs(g[k + 1]) <= relative_tolerance * rhs_norm || subdiag == 0.0 ||
          total_iterations >= max_iterations) {
        ++k;
        break;
      }
      basis.push_back(spectral::scale(w, 1.0 / subdiag));
    }

    // Back-substitute the k x k triangular system and update x.
    std::vector<double> yk(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double sum = g[i];
      for (int j = i + 1; j < k; ++j) sum -= h[j][i] * yk[j];
      yk[i] = sum / h[i][i];
    }
    for (int i = 0; i < k && i < static_cast<int>(basis.size()); ++i) {
      x = spectral::axpy(yk[i], basis[i], x);
      x_is_zero = false;
    }

    Field check = x_is_zero ? rhs : spectral::subtract(rhs, op(x));
    const double res = std::sqrt(spectral::inner_y0(check, check));
    result.relative_residual = res / rhs_norm;
    if (res <= relative_tolerance * rhs_norm) {
      result.converged = true;
      break;
    }
  }

  result.solution = x;
  result.iterations = total_iterations;
  if (!result.converged) {
    Field check = x_is_zero ? rhs : spectral::subtract(rhs, op(x));
    result.relative_residual = std::sqrt(spectral::inner_y0(check, check)) / rhs_norm;
  }
  return result;
}

}  // namespace fdkp::solver
