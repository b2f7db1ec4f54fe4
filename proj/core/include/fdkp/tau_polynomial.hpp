#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fdkp::lumps {

/// Bivariate polynomial with exact integer coefficients, stored as a dense
/// table coeff[i][j] for the monomial x^i y^j. The tau polynomials generating
/// the lump families are even in x and y separately and have no real zeros.
class TauPolynomial {
 public:
  TauPolynomial() = default;
  /// monomials: list of (i, j, coefficient).
  TauPolynomial(int degree, std::vector<std::tuple<int, int, std::int64_t>> monomials);

  int degree() const { return degree_; }

  double eval(double x, double y) const;

  /// Exact partial derivative (integer coefficient table).
  TauPolynomial derivative(int dx_order, int dy_order) const;

  bool even_in_x_and_y() const;

  /// Coefficient export for documentation (array of [i, j, c] triples).
  std::string to_json() const;

  std::int64_t coefficient(int i, int j) const;

 private:
  int degree_ = 0;
  int size_ = 1;                         // degree + 1 rows/cols
  std::vector<std::int64_t> coeff_;      // coeff_[i*size_ + j]
};

/// tau_1 = x^2 + y^2 + 3 (degree 2 = 1*2).
TauPolynomial tau_star_1();

/// tau_2 = x^6 + 3x^4y^2 + 3x^2y^4 + y^6 + 25x^4 + 90x^2y^2 + 17y^4
///         - 125x^2 + 475y^2 + 1875 (degree 6 = 2*3).
TauPolynomial tau_star_2();

}  // namespace fdkp::lumps
