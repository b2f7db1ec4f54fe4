#include "fdkp/tau_polynomial.hpp"

#include <sstream>
#include <tuple>

#include "fdkp/errors.hpp"

namespace fdkp::lumps {

TauPolynomial::TauPolynomial(int degree, std::vector<std::tuple<int, int, std::int64_t>> monomials)
    : degree_(degree), size_(degree + 1), coeff_(static_cast<std::size_t>(size_) * size_, 0) {
  for (const auto& [i, j, c] : monomials) {
    if (i < 0 || j < 0 || i + j > degree) throw Error("TauPolynomial: monomial outside degree");
    coeff_[static_cast<std::size_t>(i) * size_ + j] += c;
  }
}

std::int64_t TauPolynomial::coefficient(int i, int j) const {
  if (i < 0 || j < 0 || i >= size_ || j >= size_) return 0;
  return coeff_[static_cast<std::size_t>(i) * size_ + j];
}

double TauPolynomial::eval(double x, double y) const {
  // Horner in x over Horner-in-y row polynomials.
  double result = 0.0;
  for (int i = size_ - 1; i >= 0; --i) {
    double row = 0.0;
    for (int j = size_ - 1; j >= 0; --j) {
      row = row * y + static_cast<double>(coeff_[static_cast<std::size_t>(i) * size_ + j]);
    }
    result = result * x + row;
  }
  return result;
}

TauPolynomial TauPolynomial::derivative(int dx_order, int dy_order) const {
  std::vector<std::tuple<int, int, std::int64_t>> monomials;
  for (int i = 0; i < size_; ++i) {
    for (int j = 0; j < size_; ++j) {
      std::int64_t c = coeff_[static_cast<std::size_t>(i) * size_ + j];
      if (c == 0 || i < dx_order || j < dy_order) continue;
      for (int a = 0; a < dx_order; ++a) c *= (i - a);
      for (int b = 0; b < dy_order; ++b) c *= (j - b);
      monomials.emplace_back(i - dx_order, j - dy_order, c);
    }
  }
  const int new_degree = degree_ >= dx_order + dy_order ? degree_ - dx_order - dy_order : 0;
  return TauPolynomial(new_degree, std::move(monomials));
}

bool TauPolynomial::even_in_x_and_y() const {
  for (int i = 0; i < size_; ++i) {
    for (int j = 0; j < size_; ++j) {
      if (coeff_[static_cast<std::size_t>(i) * size_ + j] != 0 && (i % 2 != 0 || j % 2 != 0)) {
        return false;
      }
    }
  }
  return true;
}

std::string TauPolynomial::to_json() const {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (int i = 0; i < size_; ++i) {
    for (int j = 0; j < size_; ++j) {
      const std::int64_t c = coeff_[static_cast<std::size_t>(i) * size_ + j];
      if (c == 0) continue;
      if (!first) os << ",";
      first = false;
      os << "[" << i << "," << j << "," << c << "]";
    }
  }
  os << "]";
  return os.str();
}

TauPolynomial tau_star_1() {
  return TauPolynomial(2, {{2, 0, 1}, {0, 2, 1}, {0, 0, 3}});
}

TauPolynomial tau_star_2() {
  return TauPolynomial(6, {{6, 0, 1},
                           {4, 2, 3},
                           {2, 4, 3},
                           {0, 6, 1},
                           {4, 0, 25},
                           {2, 2, 90},
                           {0, 4, 17},
                           {2, 0, -125},
                           {0, 2, 475},
                           {0, 0, 1875}});
}

}  // namespace fdkp::lumps
