#include <doctest.h>

#include <cmath>
#include <random>

#include "fdkp/errors.hpp"
#include "fdkp/lumps.hpp"
#include "fdkp/norms.hpp"
#include "fdkp/symbols.hpp"
#include "test_support.hpp"

using namespace fdkp;
using namespace fdkp::lumps;
using fdkp::spectral::Field;
using fdkp::spectral::Frame;
using fdkp::spectral::NormKind;
using fdkp::test::default_params;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_CASE("tau values and structure") {
  const auto& k1 = lump_family(1);
  const auto& k2 = lump_family(2);
  CHECK(k1.eval_tau(0.0, 0.0) == 3.0);
  CHECK(k2.eval_tau(0.0, 0.0) == 1875.0);
  CHECK(k1.eval_tau(1.0, 2.0) == 8.0);
  CHECK(k1.tau().degree() == 2);
  CHECK(k2.tau().degree() == 6);
  CHECK(k1.tau().even_in_x_and_y());
  CHECK(k2.tau().even_in_x_and_y());
  CHECK_THROWS_AS(lump_family(3), Error);
}

TEST_CASE("zeta values and closed form for k = 1") {
  const auto& family = lump_family(1);
  CHECK(family.eval_zeta(0.0, 0.0) == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(family.eval_zeta(0.0, 0.0, 1, 0) == doctest::Approx(0.0).epsilon(1e-14));

  // zeta_1 = (12 x^2 - 12 y^2 - 36) / tau^2, exact rational identity.
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const double x = uniform(rng, -20.0, 20.0);
    const double y = uniform(rng, -20.0, 20.0);
    const double tau = x * x + y * y + 3.0;
    const double closed = (12.0 * x * x - 12.0 * y * y - 36.0) / (tau * tau);
    CHECK(family.eval_zeta(x, y) == doctest::Approx(closed).epsilon(1e-12));
  }

  // decay: |zeta (1 + x^2 + y^2)| stays under the closed-form constant
  const double far = family.eval_zeta(1e6, 0.0) * (1.0 + 1e12);
  CHECK(std::abs(far) <= 20.0);

  CHECK_THROWS_AS(family.eval_zeta(0.0, 0.0, 3, 2), Error);
}

TEST_CASE("kp residual is a machine-precision oracle") {
  for (int k : {1, 2}) {
    const auto& family = lump_family(k);
    CHECK(std::abs(family.kp_residual(0.0, 0.0)) <= 1e-10);
    CHECK(std::abs(family.kp_residual(0.7, -1.3)) <= 1e-10);

    std::mt19937_64 rng(100u + k);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = uniform(rng, -30.0, 30.0);
      const double y = uniform(rng, -30.0, 30.0);
      worst = std::max(worst, std::abs(family.kp_residual(x, y)));
    }
    CHECK(worst <= 1e-10);
  }

  SUBCASE("perturbed tau fails loudly through the same pipeline") {
    const TauPolynomial wrong(2, {{2, 0, 1}, {0, 2, 1}, {0, 0, 1}});
    CHECK(std::abs(kp_residual_of_tau(wrong, 0.0, 0.0)) > 0.1);
  }
}

TEST_CASE("derivatives agree with central finite differences") {
  const double h = 1e-4;
  for (int k : {1, 2}) {
    const auto& family = lump_family(k);
    std::mt19937_64 rng(7u + k);
    for (int i = 0; i < 100; ++i) {
      const double x = uniform(rng, -5.0, 5.0);
      const double y = uniform(rng, -5.0, 5.0);
      for (int a = 0; a <= 4; ++a) {
        for (int b = 0; a + b <= 4; ++b) {
          if (a == 0 && b == 0) continue;
          const double exact = family.eval_zeta(x, y, a, b);
          const double fd =
              a > 0 ? (family.eval_zeta(x + h, y, a - 1, b) -
                       family.eval_zeta(x - h, y, a - 1, b)) /
                          (2.0 * h)
                    : (family.eval_zeta(x, y + h, a, b - 1) -
                       family.eval_zeta(x, y - h, a, b - 1)) /
                          (2.0 * h);
          CHECK(std::abs(fd - exact) / std::max(std::abs(exact), 1.0) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("mtilde rescaling resolved by the residual check") {
  const SymbolParams p = default_params();
  const MTildeLump lump(1, p);

  // direct substitution gives b = (1/2 (beta - 1/3))^{-1/2}
  const double c2 = 0.5 * (p.beta - 1.0 / 3.0);
  CHECK(lump.resolved_exponent_sign() == -1);
  CHECK(lump.scale_factor() == doctest::Approx(1.0 / std::sqrt(c2)).epsilon(1e-15));
  CHECK(lump.residual_at_check() <= 1e-8);

  SUBCASE("beta = 1/3 + 2 makes the sampler the lump itself") {
    SymbolParams q = p;
    q.beta = 1.0 / 3.0 + 2.0;
    const MTildeLump unit(1, q);
    CHECK(unit.scale_factor() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unit(0.3, -0.4) ==
          doctest::Approx(lump_family(1).eval_zeta(0.3, -0.4)).epsilon(1e-14));
  }

  SUBCASE("sampler inherits both reflection symmetries") {
    CHECK(lump(0.7, 1.1) == doctest::Approx(lump(-0.7, 1.1)).epsilon(1e-15));
    CHECK(lump(0.7, 1.1) == doctest::Approx(lump(0.7, -1.1)).epsilon(1e-15));
  }
}

TEST_CASE("sample_lump") {
  const SymbolParams p = default_params();
  const auto grid = spectral::make_grid(100.0, 100.0, 256, 256);

  for (int k : {1, 2}) {
    const auto sample = sample_lump(grid, k, Frame::KPScaled, p);
    CHECK(spectral::asymmetry(sample.field) <= 1e-14);
    CHECK(sample.removed_energy_fraction <= 1e-3);
    CHECK(sample.removed_energy_fraction >= 0.0);
  }

  SUBCASE("removed energy decreases as the box grows (resolution fixed)") {
    const auto big = spectral::make_grid(200.0, 200.0, 512, 512);
    const double small_frac = sample_lump(grid, 1, Frame::KPScaled, p).removed_energy_fraction;
    const double big_frac = sample_lump(big, 1, Frame::KPScaled, p).removed_energy_fraction;
    CHECK(big_frac < small_frac);
  }

  SUBCASE("Y2 norm finite and stable under N-doubling") {
    const auto fine = spectral::make_grid(100.0, 100.0, 512, 512);
    const double coarse_norm =
        spectral::norm(sample_lump(grid, 1, Frame::KPScaled, p).field, NormKind::yr(2.0), p);
    const double fine_norm =
        spectral::norm(sample_lump(fine, 1, Frame::KPScaled, p).field, NormKind::yr(2.0), p);
    CHECK(std::abs(fine_norm - coarse_norm) <= 0.02 * coarse_norm);
  }

  SUBCASE("seed admissibility: |zeta_k|_{Y^{1+theta}} < M") {
    for (int k : {1, 2}) {
      const auto sample = sample_lump(grid, k, Frame::KPScaled, p);
      CHECK(spectral::norm(sample.field, NormKind::yr(1.0 + p.theta), p) < p.ball_m);
    }
  }

  SUBCASE("physical frame carries the eps^2 amplitude") {
    const auto kp = sample_lump(grid, 1, Frame::KPScaled, p);
    const auto phys = sample_lump(grid, 1, Frame::Physical, p);
    CHECK(phys.field.frame() == Frame::Physical);
    CHECK(phys.field.sup_norm() ==
          doctest::Approx(p.epsilon * p.epsilon * kp.field.sup_norm()).epsilon(1e-12));
  }
}

TEST_CASE("discrete mtilde residual of the rescaled lump") {
  const SymbolParams p = default_params();

  // Residual of the fixed-point form zeta + mtilde(D)^{-1} zeta^2 (the form
  // the equation holds in on Y^2): the strong form m~ zeta + zeta^2 amplifies
  // periodization noise near the k1 = 0 line by k2^2/k1^2 and is not a usable
  // discrete oracle.
  auto relative_residual = [&](const spectral::Grid& grid) {
    const auto sample = sample_lump(grid, 1, Frame::KPScaled, p);
    const MTildeLump lump(1, p);
    Field::Samples square(grid.size());
    for (int iy = 0; iy < grid.points_y; ++iy) {
      for (int ix = 0; ix < grid.points_x; ++ix) {
        const double v = lump(grid.x(ix), grid.y(iy));
        square[static_cast<std::size_t>(iy) * grid.points_x + ix] = v * v;
      }
    }
    const Field square_smoothed = spectral::apply_multiplier(
        Field::from_samples(grid, Frame::KPScaled, std::move(square)).with_spectrum(),
        [&](double k1, double k2) { return symbols::mtilde_inverse(k1, k2, p); }, p);
    const Field residual = spectral::add(sample.field.with_spectrum(), square_smoothed);
    // The k = 0 cell carries no continuum information (mtilde has no limit
    // there); its row is an artifact of the removable-limit convention and is
    // excluded from the fidelity measure.
    Field::Spectrum c = residual.spectrum();
    c[0] = 0.0;
    const Field away_from_mean = Field::from_spectrum(grid, Frame::KPScaled, std::move(c));
    return spectral::norm(away_from_mean, NormKind::yr(0.0), p) /
           spectral::norm(sample.field, NormKind::yr(0.0), p);
  };

  // Frozen from running this oracle: the default grid sits at ~1.0e-2
  // (sampling alias of the lump at dx = 0.78 dominates); refining the
  // sampling reaches 5e-3 and growing the box at fixed dx keeps improving.
  const double at_default = relative_residual(spectral::make_grid(100.0, 100.0, 256, 256));
  CHECK(at_default <= 2e-2);
  const double refined = relative_residual(spectral::make_grid(100.0, 100.0, 512, 512));
  CHECK(refined <= 5e-3);
  const double at_large = relative_residual(spectral::make_grid(200.0, 200.0, 512, 512));
  CHECK(at_large < at_default);
}
