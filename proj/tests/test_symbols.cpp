#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fdkp/errors.hpp"
#include "fdkp/symbols.hpp"
#include "test_support.hpp"

using namespace fdkp;
using namespace fdkp::symbols;
using fdkp::test::default_params;

TEST_CASE("m symbol values and limits") {
  const SymbolParams p = default_params();  // beta = 2

  CHECK(m_symbol(0.0, 0.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m_symbol(1.0, 0.0, p) ==
        doctest::Approx(std::sqrt(3.0 * std::tanh(1.0))).epsilon(1e-14));
  CHECK(m_symbol(1.0, 0.0, p) == doctest::Approx(1.511549).epsilon(1e-6));
  CHECK_THROWS_AS(m_symbol(0.0, 1.0, p), SymbolError);

  SUBCASE("fourth-order agreement with the long-wave expansion") {
    // m(k1, 0) - 1 - (1/2)(beta - 1/3) k1^2 decays like k1^4.
    auto defect = [&](double k1) {
      return std::abs(m_symbol(k1, 0.0, p) - 1.0 - 0.5 * (p.beta - 1.0 / 3.0) * k1 * k1);
    };
    const double d1 = defect(0.1), d2 = defect(0.05), d3 = defect(0.025);
    CHECK(d1 / d2 > 12.0);
    CHECK(d1 / d2 < 20.0);
    CHECK(d2 / d3 > 12.0);
    CHECK(d2 / d3 < 20.0);
  }

  SUBCASE("m - mtilde is fourth order in (k1, k2/k1)") {
    // Rays in the pair space: (k1, rho) = t (a, b), i.e. k2 = t^2 a b.
    const double rays[3][2] = {{1.0, 0.0}, {0.7, 0.7}, {0.2, 1.0}};
    for (const auto& ray : rays) {
      double bound = 0.0;
      for (double t : {0.4, 0.2, 0.1, 0.05, 0.025}) {
        const double k1 = t * ray[0];
        if (k1 == 0.0) continue;
        const double k2 = t * t * ray[0] * ray[1];
        const double diff = std::abs(m_symbol(k1, k2, p) - mtilde_symbol(k1, k2, p));
        const double scale = std::pow(t * std::hypot(ray[0], ray[1]), 4.0);
        const double ratio = diff / scale;
        if (bound == 0.0) {
          bound = ratio;
        } else {
          CHECK(ratio <= 3.0 * bound);  // bounded, no blow-up along the ray
        }
      }
    }
  }
}

TEST_CASE("mtilde arithmetic and inverse pair") {
  const SymbolParams p = default_params();
  CHECK(mtilde_symbol(0.0, 0.0, p) == 1.0);
  CHECK(mtilde_inverse(0.0, 0.0, p) == 1.0);
  CHECK(mtilde_symbol(1.0, 1.0, p) == doctest::Approx(1.0 + 1.0 + 5.0 / 6.0).epsilon(1e-15));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double k1 = -4.0 + 8.0 * (rng() >> 11) * 0x1.0p-53;
    const double k2 = -4.0 + 8.0 * (rng() >> 11) * 0x1.0p-53;
    if (k1 == 0.0) continue;
    const double product = mtilde_symbol(k1, k2, p) * mtilde_inverse(k1, k2, p);
    CHECK(product == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mtilde_inverse(k1, k2, p) > 0.0);
    CHECK(mtilde_inverse(k1, k2, p) <= 1.0);
  }
}

TEST_CASE("n_eps and resolvent") {
  SUBCASE("resolvent is 1 at the origin and bounded by the weighted inverse") {
    for (double eps : {0.2, 0.1, 0.05}) {
      const SymbolParams p = default_params(eps);
      CHECK(resolvent_symbol(0.0, 0.0, p) == doctest::Approx(1.0).epsilon(1e-15));
      // resolvent <= C (1 + k1^2 + (k2/k1)^2)^{-1} on the scaled cone
      double c_fit = 0.0;
      const double half = p.delta / eps;
      for (double K1 = half / 64.0; K1 <= half; K1 *= 2.0) {
        for (double rho = 0.0; rho <= half; rho += half / 8.0) {
          const double K2 = rho * K1;
          const double weight = 1.0 + K1 * K1 + rho * rho;
          c_fit = std::max(c_fit, resolvent_symbol(K1, K2, p) * weight);
        }
      }
      CHECK(c_fit <= 2.0);
    }
  }

  SUBCASE("replacement estimates: weighted sup differences shrink with eps") {
    // sup |resolvent - mtilde^{-1}| (1 + |(k1, k2/k1)|^2)^{w} over the scaled
    // cone behaves like eps for w = 1/2 and like eps^{1-theta} for
    // w = (1+theta)/2.
    auto weighted_sup = [](const SymbolParams& p, double w) {
      const double half = p.delta / p.epsilon;
      double sup = 0.0;
      for (double K1 = half / 256.0; K1 <= half; K1 *= 1.5) {
        for (double rho = 0.0; rho <= half; rho += half / 16.0) {
          const double K2 = rho * K1;
          const double diff =
              std::abs(resolvent_symbol(K1, K2, p) - mtilde_inverse(K1, K2, p));
          sup = std::max(sup, diff * std::pow(1.0 + K1 * K1 + rho * rho, w));
        }
      }
      return sup;
    };

    const std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
    std::vector<double> prop15, cor16;
    const double theta = default_params().theta;
    for (double eps : epsilons) {
      const SymbolParams p = default_params(eps);
      prop15.push_back(weighted_sup(p, 0.5));
      cor16.push_back(weighted_sup(p, 0.5 * (1.0 + theta)));
    }
    // Fitted log-log exponents over the sweep; paper exponents 1 and 1-theta,
    // accepted with 0.25 slack (a sampled sup carries quantization jitter).
    auto fitted_exponent = [&](const std::vector<double>& values) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = std::log(epsilons[i]);
        const double y = std::log(values[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
      }
      const double n = static_cast<double>(values.size());
      return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    CHECK(fitted_exponent(prop15) >= 1.0 - 0.25);
    CHECK(fitted_exponent(cor16) >= (1.0 - theta) - 0.25);
    // C fitted at the prop-15 weight is stable under eps halving
    CHECK(prop15[1] / 0.1 < 4.0 * (prop15[0] / 0.2));
    CHECK(prop15[1] / 0.1 > 0.25 * (prop15[0] / 0.2));
  }

  SUBCASE("n lower bound on the physical cone") {
    const SymbolParams p = default_params();
    double c0 = 1e300;
    for (double k1 = p.delta / 128.0; k1 <= p.delta; k1 *= 1.3) {
      for (double rho = 0.0; rho <= p.delta; rho += p.delta / 16.0) {
        const double k2 = rho * k1;
        const double n = n_symbol(k1, k2, p);
        c0 = std::min(c0, n / (k1 * k1 + rho * rho));
      }
    }
    CHECK(c0 > 0.25);
  }
}

TEST_CASE("symbols are even in k1 and k2 separately") {
  const SymbolParams p = default_params(0.1);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const double k1 = 0.01 + 3.0 * (rng() >> 11) * 0x1.0p-53;
    const double k2 = 0.01 + 3.0 * (rng() >> 11) * 0x1.0p-53;
    CHECK(m_symbol(k1, k2, p) == doctest::Approx(m_symbol(-k1, k2, p)).epsilon(1e-15));
    CHECK(m_symbol(k1, k2, p) == doctest::Approx(m_symbol(k1, -k2, p)).epsilon(1e-15));
    CHECK(mtilde_symbol(k1, k2, p) ==
          doctest::Approx(mtilde_symbol(-k1, -k2, p)).epsilon(1e-15));
    CHECK(n_eps_symbol(k1, k2, p) == doctest::Approx(n_eps_symbol(-k1, k2, p)).epsilon(1e-15));
  }
}

TEST_CASE("dispersion speed") {
  const SymbolParams p = default_params();
  CHECK(dispersion_speed(0.0, p) == 1.0);
  CHECK(dispersion_speed(1.0, p) ==
        doctest::Approx(std::sqrt(3.0 * std::tanh(1.0))).epsilon(1e-14));

  double prev = dispersion_speed(0.0, p);
  for (int i = 1; i <= 1000; ++i) {
    const double c = dispersion_speed(10.0 * i / 1000.0, p);
    CHECK(c > prev);
    prev = c;
  }
}
