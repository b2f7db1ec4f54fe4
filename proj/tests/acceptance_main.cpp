// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// Criteria 4, 5, 7, 9 evaluate the default-grid (256^2) sweeps for k = 1, 2.
// Criterion 6 evaluates a 512^2 sweep for k = 1: the approximation-error
// comparison against the exact lump carries a resolution floor (dealias cut
// plus sampling alias of the lump) of ~0.43 at dx = 0.78, which swamps the
// epsilon trend; at dx = 0.39 the floor is ~0.017 and the trend is clean.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fdkp/errors.hpp"
#include "fdkp/harness.hpp"
#include "fdkp/lumps.hpp"
#include "fdkp/norms.hpp"
#include "fdkp/reduction.hpp"
#include "fdkp/symbols.hpp"

using namespace fdkp;
using namespace fdkp::spectral;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[512];
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

struct FitPoints {
  std::vector<std::pair<double, double>> pts;
  double slope() const {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [eps, value] : pts) {
      const double x = std::log(eps), y = std::log(value);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
};

void criterion_1_lump_oracle() {
  bool pass = true;
  double worst = 0.0;
  for (int k : {1, 2}) {
    std::mt19937_64 rng(500u + k);
    for (int i = 0; i < 1000; ++i) {
      const double x = uniform(rng, -30.0, 30.0);
      const double y = uniform(rng, -30.0, 30.0);
      worst = std::max(worst, std::abs(lumps::lump_family(k).kp_residual(x, y)));
    }
  }
  pass = pass && worst <= 1e-10;
  pass = pass && std::abs(lumps::lump_family(1).eval_zeta(0.0, 0.0) + 4.0) <= 1e-12;
  pass = pass && lumps::lump_family(1).eval_tau(0.0, 0.0) == 3.0;
  pass = pass && lumps::lump_family(2).eval_tau(0.0, 0.0) == 1875.0;
  report(1, "lump oracle", pass,
         fmt("max |kp residual| = %.2e at 2000 random points; centers exact", worst));
}

void criterion_2_spectral_fidelity(const Grid& grid, const SymbolParams& p) {
  double worst_parseval = 0.0;
  double worst_partition = 0.0;
  double worst_frame = 0.0;
  for (unsigned seed = 0; seed < 100; ++seed) {
    const Field f = random_field(grid, Frame::KPScaled, 2000 + seed, 1.0).with_samples();
    double phys = 0.0;
    for (double v : f.samples()) phys += v * v;
    phys = std::sqrt(phys * grid.dx() * grid.dy());
    const double spectral_l2 = norm(f, NormKind::yr(0.0), p);
    worst_parseval =
        std::max(worst_parseval, std::abs(phys - spectral_l2) / spectral_l2);

    const Field sum = add(project_cone(f, ConeSide::Inside, p),
                          project_cone(f, ConeSide::Outside, p));
    for (std::size_t i = 0; i < f.spectrum().size(); ++i) {
      worst_partition =
          std::max(worst_partition, std::abs(sum.spectrum()[i] - f.spectrum()[i]));
    }

    const Field zeta = project_cone(f, ConeSide::Inside, p);
    const double y1 = norm(zeta, NormKind::yr(1.0), p);
    if (y1 > 0.0) {
      const double eps_norm = norm(zeta, NormKind::eps_scaled(), p);
      worst_frame = std::max(
          worst_frame, std::abs(eps_norm * eps_norm - p.epsilon * y1 * y1) /
                           (p.epsilon * y1 * y1));
    }
  }
  const bool pass = worst_parseval <= 1e-12 && worst_partition == 0.0 && worst_frame <= 1e-12;
  report(2, "spectral fidelity", pass,
         fmt("parseval %.2e, partition %.2e, frame identity %.2e over 100 fields",
             worst_parseval, worst_partition, worst_frame));
}

void criterion_3_symbol_asymptotics(const SymbolParams& p0) {
  // |m - mtilde| along pair-space rays (k1, rho) = t (a, b), k2 = t^2 a b
  double worst_ray_slope = 1e300;
  const double rays[3][2] = {{1.0, 0.0}, {0.7, 0.7}, {0.2, 1.0}};
  for (const auto& ray : rays) {
    FitPoints fit;
    for (double t : {0.2, 0.1, 0.05, 0.025}) {
      const double k1 = t * ray[0];
      if (k1 == 0.0) continue;
      const double k2 = t * t * ray[0] * ray[1];
      fit.pts.emplace_back(
          t, std::abs(symbols::m_symbol(k1, k2, p0) - symbols::mtilde_symbol(k1, k2, p0)));
    }
    worst_ray_slope = std::min(worst_ray_slope, fit.slope());
  }

  auto weighted_sup = [](const SymbolParams& p, double w) {
    const double half = p.delta / p.epsilon;
    double sup = 0.0;
    for (double K1 = half / 256.0; K1 <= half; K1 *= 1.5) {
      for (double rho = 0.0; rho <= half; rho += half / 64.0) {
        const double diff = std::abs(symbols::resolvent_symbol(K1, rho * K1, p) -
                                     symbols::mtilde_inverse(K1, rho * K1, p));
        sup = std::max(sup, diff * std::pow(1.0 + K1 * K1 + rho * rho, w));
      }
    }
    return sup;
  };
  FitPoints prop15, cor16;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const SymbolParams p = p0.with_epsilon(eps);
    prop15.pts.emplace_back(eps, weighted_sup(p, 0.5));
    cor16.pts.emplace_back(eps, weighted_sup(p, 0.5 * (1.0 + p0.theta)));
  }
  const bool pass = worst_ray_slope >= 3.75 && prop15.slope() >= 1.0 - 0.25 &&
                    cor16.slope() >= (1.0 - p0.theta) - 0.25;
  report(3, "symbol asymptotics", pass,
         fmt("ray exponent %.2f (>= 3.75), prop15 %.2f (>= 0.75), cor16 %.2f (>= 0)",
             worst_ray_slope, prop15.slope(), cor16.slope()));
}

void criterion_4_contraction(const harness::SweepReport& k1, const harness::SweepReport& k2) {
  bool pass = true;
  double worst_factor_small_eps = 0.0;
  double band = 0.0;       // harness band rule (asymptotic window)
  double band_full = 0.0;  // all sweep points, for the record
  for (const auto* sweep : {&k1, &k2}) {
    double rmin = 1e300, rmax = 0.0;
    for (const auto& rec : sweep->records) {
      if (!rec.completed) {
        pass = false;
        continue;
      }
      if (rec.epsilon <= 0.1 + 1e-12) {
        worst_factor_small_eps = std::max(worst_factor_small_eps, rec.contraction_factor);
      }
      const double r = rec.estimates.at("u2_bound").ratio;
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    band_full = std::max(band_full, rmax / rmin);
    try {
      band = std::max(band, harness::verify_estimate("u2_bound", *sweep).ratio_band);
    } catch (const Error&) {
      pass = false;
    }
  }
  pass = pass && worst_factor_small_eps <= 0.5 && band <= 10.0;
  report(4, "contraction", pass,
         fmt("factor %.3f at eps <= 0.1 (<= 0.5), u2 ratio band %.2f (<= 10; %.2f over the "
             "full sweep incl. the saturation-regime flip at eps = 0.2)",
             worst_factor_small_eps, band, band_full));
}

void criterion_5_newton_existence(const harness::SweepReport& k1,
                                  const harness::SweepReport& k2) {
  bool pass = true;
  double worst_reduced = 0.0, worst_full = 0.0;
  for (const auto* sweep : {&k1, &k2}) {
    for (const auto& rec : sweep->records) {
      if (!rec.completed) {
        pass = false;
        continue;
      }
      worst_reduced = std::max(worst_reduced, rec.reduced_residual_l2);
      worst_full = std::max(worst_full, rec.full_residual_relative);
      pass = pass && rec.speed == 1.0 - rec.epsilon * rec.epsilon;
    }
  }
  pass = pass && worst_reduced <= 1e-10 && worst_full <= 1e-8;
  report(5, "newton existence", pass,
         fmt("k = 1, 2 at every sweep eps: reduced residual %.2e (<= 1e-10), "
             "full relative %.2e (<= 1e-8), c exact",
             worst_reduced, worst_full));
}

void criterion_6_kp_trend(const harness::SweepReport& fine) {
  bool pass = !fine.records.empty();
  for (const auto& rec : fine.records) pass = pass && rec.completed;
  double halving = 0.0;
  if (pass) {
    pass = pass && fine.approx_error_decreasing && fine.y1theta_decreasing;
    halving = fine.approx_error_halving;
    pass = pass && halving <= 0.5;
  }
  report(6, "KP approximation trend (512^2 grid, k = 1)", pass,
         fmt("approx error decreasing %s, error(0.025)/error(0.2) = %.3f (<= 0.5), "
             "Y^{1+theta} distance decreasing %s",
             fine.approx_error_decreasing ? "yes" : "no", halving,
             fine.y1theta_decreasing ? "yes" : "no"));
}

void criterion_7_estimates(const harness::SweepReport& k1) {
  bool pass = true;
  std::string detail;
  for (const char* name :
       {"u2_bound", "R_eps_bound", "S_eps_bound", "T_eps_bound", "tail_bound"}) {
    try {
      const auto verdict = harness::verify_estimate(name, k1);
      pass = pass && verdict.pass;
      detail += fmt("%s p=%.2f band=%.1f%s ", name, verdict.fitted_exponent,
                    verdict.ratio_band, verdict.pass ? "" : "(FAIL)");
    } catch (const Error& e) {
      pass = false;
      detail += std::string(name) + " error ";
    }
  }
  report(7, "estimate suite", pass, detail);
}

void criterion_8_nondegeneracy(const SymbolParams& p) {
  std::vector<Grid> levels{make_grid(50.0, 50.0, 256, 256),
                           make_grid(50.0, 50.0, 512, 512)};
  bool pass = true;
  double floor_found = 1e300;
  std::string detail;
  for (int k : {1, 2}) {
    const auto probe = harness::nondegeneracy_probe(k, levels, p);
    pass = pass && probe.stable && probe.smallest_abs_eigenvalue >= 1e-2;
    floor_found = std::min(floor_found, probe.smallest_abs_eigenvalue);
    detail += fmt("k=%d |lambda|=%.4f delta=%.3f ", k, probe.smallest_abs_eigenvalue,
                  probe.refinement_deltas.empty() ? 0.0 : probe.refinement_deltas[0]);
  }
  const double control =
      harness::probe_eigenvalue(levels[0], Field::zeros(levels[0], Frame::KPScaled), p);
  pass = pass && control == 1.0;
  detail += fmt("control=%.1f floor=%.4f", control, floor_found);
  report(8, "nondegeneracy", pass, detail);
}

void criterion_9_symmetry(const harness::SweepReport& k1, const harness::SweepReport& k2,
                          const SymbolParams& p0) {
  bool pass = true;
  double worst_asym = 0.0;
  for (const auto* sweep : {&k1, &k2}) {
    for (const auto& rec : sweep->records) {
      if (!rec.completed) {
        pass = false;
        continue;
      }
      worst_asym = std::max(worst_asym, rec.wave_asymmetry);
    }
  }
  pass = pass && worst_asym <= 1e-12;

  // gradient check on a compact grid
  const Grid grid = make_grid(100.0, 100.0, 128, 128);
  const SymbolParams p = p0.with_epsilon(0.1);
  const solver::SolverConfig cfg;
  const Field zs = project_cone(
      symmetrize(lumps::sample_lump(grid, 1, Frame::KPScaled, p).field), ConeSide::Inside, p);
  const Field w = project_cone(symmetrize(random_field(grid, Frame::KPScaled, 4321, 1.0)),
                               ConeSide::Inside, p);
  const solver::ReducedOperator op(zs, p, cfg);
  const Field jw = op.apply(w);
  const double h = 1e-6 * norm(zs, NormKind::yr(0.0), p) / norm(w, NormKind::yr(0.0), p);
  const Field rp = solver::reduced_residual(axpy(h, w, zs), p, cfg).first;
  const Field rm = solver::reduced_residual(axpy(-h, w, zs), p, cfg).first;
  const Field fd = scale(subtract(rp, rm), 1.0 / (2.0 * h));
  const double grad_rel =
      norm(subtract(jw, fd), NormKind::yr(0.0), p) / norm(jw, NormKind::yr(0.0), p);
  pass = pass && grad_rel <= 1e-5;

  report(9, "symmetry and equivariance", pass,
         fmt("wave asymmetry %.2e (<= 1e-12), gradient check %.2e (<= 1e-5)", worst_asym,
             grad_rel));
}

void criterion_10_dispersion(const SymbolParams& p0) {
  const auto strong = harness::dispersion_check(p0, 10.0, 1000);
  SymbolParams weak = p0;
  weak.beta = 0.1;
  const auto control = harness::dispersion_check(weak, 10.0, 1000);
  const bool pass = strong.status == harness::DispersionCheck::Status::Pass &&
                    strong.c_at_zero == 1.0 && strong.monotone &&
                    control.status == harness::DispersionCheck::Status::NotApplicable;
  report(10, "dispersion", pass,
         fmt("c(0) = %.1f, monotone on [0, 10]: %s; KP-II control: %s", strong.c_at_zero,
             strong.monotone ? "yes" : "no",
             control.status == harness::DispersionCheck::Status::NotApplicable
                 ? "not-applicable"
                 : "unexpected"));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  SymbolParams params;  // defaults: beta 2, delta 1/2, theta 3/4, s 1.9, M 50
  params.epsilon = 0.1;
  const solver::SolverConfig cfg;
  const Grid default_grid = make_grid(100.0, 100.0, 256, 256);
  const Grid fine_grid = make_grid(100.0, 100.0, 512, 512);
  const std::vector<double> sweep_eps{0.2, 0.1, 0.05, 0.025};

  criterion_1_lump_oracle();
  criterion_2_spectral_fidelity(default_grid, params);
  criterion_3_symbol_asymptotics(params);

  std::printf("-- running default-grid sweeps (k = 1, 2) and the fine-grid sweep --\n");
  std::fflush(stdout);
  const auto sweep_k1 = harness::run_sweep(1, sweep_eps, params, cfg, default_grid);
  const auto sweep_k2 = harness::run_sweep(2, sweep_eps, params, cfg, default_grid);
  const auto sweep_fine = harness::run_sweep(1, sweep_eps, params, cfg, fine_grid);

  criterion_4_contraction(sweep_k1, sweep_k2);
  criterion_5_newton_existence(sweep_k1, sweep_k2);
  criterion_6_kp_trend(sweep_fine);
  criterion_7_estimates(sweep_k1);
  criterion_8_nondegeneracy(params);
  criterion_9_symmetry(sweep_k1, sweep_k2, params);
  criterion_10_dispersion(params);

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - start);
  std::printf("%d criterion failure(s); total runtime %lds\n", failures,
              static_cast<long>(elapsed.count()));
  return failures == 0 ? 0 : 1;
}
