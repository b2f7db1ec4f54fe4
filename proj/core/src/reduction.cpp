#include "fdkp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "fdkp/errors.hpp"
#include "fdkp/krylov.hpp"
#include "fdkp/norms.hpp"
#include "fdkp/symbols.hpp"

namespace fdkp::solver {

using spectral::ConeSide;
using spectral::Frame;
using spectral::NormKind;

namespace {

Field multiply_table(const Field& f, const std::vector<double>& table) {
  const Field src = f.with_spectrum();
  Field::Spectrum c = src.spectrum();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= table[i];
  return Field::from_spectrum(src.grid(), src.frame(), std::move(c));
}

double y0_norm(const Field& f) { return std::sqrt(spectral::inner_y0(f, f)); }

}  // namespace

void SolverConfig::validate() const {
  if (!(fixed_point_tol > 0.0) || !(newton_tol > 0.0) || !(linear_solver_tol > 0.0) ||
      !(jacobian_fd_step > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (fixed_point_max_iter < 1 || newton_max_iter < 1 || linear_solver_max_iter < 1 ||
      max_damping_halvings < 0) {
    throw ConfigError("solver iteration limits must be >= 1");
  }
}

Field to_physical_frame(const Field& zeta, const SymbolParams& p) {
  if (zeta.frame() != Frame::KPScaled) throw FieldError("to_physical_frame: expected KPScaled");
  if (!(p.epsilon > 0.0)) throw FieldError("to_physical_frame: requires epsilon > 0");
  return spectral::scale(zeta, p.epsilon * p.epsilon).retagged(Frame::Physical);
}

Field to_kp_frame(const Field& u, const SymbolParams& p) {
  if (u.frame() != Frame::Physical) throw FieldError("to_kp_frame: expected Physical");
  if (!(p.epsilon > 0.0)) throw FieldError("to_kp_frame: requires epsilon > 0");
  return spectral::scale(u, 1.0 / (p.epsilon * p.epsilon)).retagged(Frame::KPScaled);
}

Field F_map(const Field& u1, const Field& u2, const SymbolParams& p, const SolverConfig&) {
  if (u1.frame() != Frame::Physical || u2.frame() != Frame::Physical) {
    throw FieldError("F_map: expects Physical-frame fields");
  }
  const auto table = symbols::symbol_table(u1.grid(), p);
  const Field square = spectral::pointwise_square(spectral::add(u1, u2)).with_spectrum();
  const Field u2s = u2.with_spectrum();

  const double e2 = p.epsilon * p.epsilon;
  Field::Spectrum c(square.grid().size(), 0.0);
  const auto& sq = square.spectrum();
  const auto& cu2 = u2s.spectrum();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!table->retained[i] || table->cone[i]) continue;
    const double n = table->n_phys[i];
    if (n < 1e-10) {
      throw SolverError("F_map: n(k) below 1e-10 on a retained outside-cone mode", "{}");
    }
    c[i] = -(e2 * cu2[i] + sq[i]) / n;
  }
  return Field::from_spectrum(u1.grid(), Frame::Physical, std::move(c));
}

namespace {

std::pair<Field, ContractionDiagnostics> solve_u2_from(const Field& u1, Field u2,
                                                       const SymbolParams& p,
                                                       const SolverConfig& cfg) {
  const NormKind x_norm = NormKind::x(p.sobolev_s);
  ContractionDiagnostics diag;

  double prev_increment = 0.0;
  double first_increment = 0.0;
  int ratio_count = 0;
  int consecutive_expanding = 0;
  for (int iter = 1; iter <= cfg.fixed_point_max_iter; ++iter) {
    Field next = F_map(u1, u2, p, cfg);
    const double increment = spectral::norm(spectral::subtract(next, u2), x_norm, p);
    u2 = std::move(next);
    diag.iterations = iter;
    diag.final_increment_x = increment;

    if (iter == 1) {
      first_increment = increment;
    } else if (prev_increment > 0.0) {
      const double ratio = increment / prev_increment;
      diag.contraction_factor_max = std::max(diag.contraction_factor_max, ratio);
      ++ratio_count;
      consecutive_expanding = ratio >= 1.0 ? consecutive_expanding + 1 : 0;
      if (consecutive_expanding >= 3) {
        throw SolverError("solve_u2: increments grew three steps in a row (non-contraction)",
                          "{\"iterations\":" + std::to_string(iter) + "}");
      }
    }
    prev_increment = increment;

    if (increment <= cfg.fixed_point_tol) {
      diag.converged = true;
      break;
    }
  }
  if (!diag.converged) {
    throw SolverError("solve_u2: fixed-point iteration exhausted",
                      "{\"iterations\":" + std::to_string(diag.iterations) + "}");
  }
  if (ratio_count > 0 && first_increment > 0.0) {
    diag.contraction_factor =
        std::pow(diag.final_increment_x / first_increment, 1.0 / ratio_count);
    if (diag.contraction_factor > 0.9) {
      throw SolverError("solve_u2: empirical contraction factor above 0.9",
                        "{\"factor\":" + std::to_string(diag.contraction_factor) + "}");
    }
  }

  const double u1_eps = spectral::norm(u1, NormKind::eps_scaled(), p);
  diag.sigma_fitted =
      u1_eps > 0.0
          ? spectral::norm(u2, x_norm, p) / (p.epsilon * u1_eps * u1_eps)
          : 0.0;
  return {std::move(u2), diag};
}

}  // namespace

std::pair<Field, ContractionDiagnostics> solve_u2(const Field& u1, const SymbolParams& p,
                                                  const SolverConfig& cfg) {
  return solve_u2_from(u1, Field::zeros(u1.grid(), Frame::Physical), p, cfg);
}

namespace {

Field R_eps_impl(const Field& u1, const SymbolParams& p, const SolverConfig& cfg,
                 const Field* u2_guess, Field* u2_out) {
  auto [u2, diag] = u2_guess ? solve_u2_from(u1, *u2_guess, p, cfg) : solve_u2(u1, p, cfg);
  // 2 u1 u2 + u2^2 = (u1 + u2)^2 - u1^2; the dealias projection is linear so
  // the fused form agrees with the expanded one.
  const Field total = spectral::pointwise_square(spectral::add(u1, u2));
  const Field head = spectral::pointwise_square(u1);
  if (u2_out) *u2_out = std::move(u2);
  return spectral::project_cone(spectral::subtract(total, head), ConeSide::Inside, p);
}

Field S_eps_impl(const Field& zeta, const SymbolParams& p, const SolverConfig& cfg,
                 const Field* u2_guess, Field* u2_out) {
  const Field zc = spectral::project_cone(zeta, ConeSide::Inside, p);
  const Field u1 = to_physical_frame(zc, p);
  const Field r = R_eps_impl(u1, p, cfg, u2_guess, u2_out);
  const double e = p.epsilon;
  return spectral::scale(r, 1.0 / (e * e * e * e)).retagged(Frame::KPScaled);
}

}  // namespace

Field R_eps(const Field& u1, const SymbolParams& p, const SolverConfig& cfg) {
  return R_eps_impl(u1, p, cfg, nullptr, nullptr);
}

Field S_eps(const Field& zeta, const SymbolParams& p, const SolverConfig& cfg) {
  if (zeta.frame() != Frame::KPScaled) throw FieldError("S_eps: expected KPScaled zeta");
  // eps^{-4} pullback with no amplitude factor: the grid is shared, so the
  // sample array is reused verbatim under the retag.
  return S_eps_impl(zeta, p, cfg, nullptr, nullptr);
}

std::pair<Field, double> reduced_residual(const Field& zeta, const SymbolParams& p,
                                          const SolverConfig& cfg) {
  ReducedOperator op(zeta, p, cfg);
  return {op.residual(), op.residual_norm()};
}

ReducedOperator::ReducedOperator(Field zeta, const SymbolParams& p, const SolverConfig& cfg)
    : zeta_(std::move(zeta)), params_(p), config_(cfg) {
  if (zeta_.frame() != Frame::KPScaled) throw FieldError("ReducedOperator: expected KPScaled");
  const auto table = symbols::symbol_table(zeta_.grid(), params_);
  const Field zc = spectral::project_cone(zeta_, ConeSide::Inside, params_);
  s_base_ = S_eps_impl(zc, params_, config_, nullptr, &u2_base_);
  const Field quad =
      spectral::project_cone(spectral::pointwise_square(zc), ConeSide::Inside, params_);
  residual_ = spectral::add(zeta_, multiply_table(spectral::add(quad, s_base_), table->resolvent));
  residual_norm_ = y0_norm(residual_);
  zeta_y0_ = y0_norm(zeta_);
}

Field ReducedOperator::apply(const Field& w, bool include_ds, bool eps_limit) const {
  const double w_norm = y0_norm(w);
  if (w_norm == 0.0) throw FieldError("linearization: zero-norm direction rejected");
  const auto table = symbols::symbol_table(zeta_.grid(), params_);

  Field core = spectral::scale(
      spectral::project_cone(spectral::pointwise_multiply(zeta_, w), ConeSide::Inside, params_),
      2.0);
  if (eps_limit) {
    return spectral::add(w, multiply_table(core, table->mtilde_inv));
  }
  if (include_ds) {
    const double h = config_.jacobian_fd_step * (zeta_y0_ > 0.0 ? zeta_y0_ : 1.0) / w_norm;
    // warm-start the inner fixed point from the base u2: the contraction has
    // a unique fixed point, so this changes nothing but the iteration count
    const Field shifted =
        S_eps_impl(spectral::axpy(h, w, zeta_), params_, config_, &u2_base_, nullptr);
    core = spectral::axpy(1.0 / h, spectral::subtract(shifted, s_base_), core);
  }
  return spectral::add(w, multiply_table(core, table->resolvent));
}

Field linearization_apply(const Field& zeta, const Field& w, const SymbolParams& p,
                          const SolverConfig& cfg) {
  return ReducedOperator(zeta, p, cfg).apply(w);
}

std::string NewtonDiagnostics::to_json() const {
  nlohmann::json j;
  j["converged"] = converged;
  j["final_residual"] = final_residual;
  j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    j["steps"].push_back({{"step", s.step},
                          {"residual", s.residual},
                          {"krylov_iterations", s.krylov_iterations},
                          {"krylov_relative_residual", s.krylov_relative_residual},
                          {"damping_halvings", s.damping_halvings}});
  }
  return j.dump();
}

namespace {

Field project_symmetric(const Field& f, const SymbolParams& p) {
  return spectral::project_cone(spectral::symmetrize(f), ConeSide::Inside, p);
}

void emit_step(std::ostream* jsonl, const NewtonStepRecord& rec) {
  if (!jsonl) return;
  nlohmann::json j{{"step", rec.step},
                   {"residual", rec.residual},
                   {"krylov_iterations", rec.krylov_iterations},
                   {"krylov_relative_residual", rec.krylov_relative_residual},
                   {"damping_halvings", rec.damping_halvings}};
  (*jsonl) << j.dump() << "\n";
}

std::pair<Field, NewtonDiagnostics> picard_solve(const Field& zeta0, const SymbolParams& p,
                                                 const SolverConfig& cfg, std::ostream* jsonl) {
  Field zeta = project_symmetric(zeta0, p);
  NewtonDiagnostics diag;
  for (int step = 1; step <= cfg.newton_max_iter; ++step) {
    ReducedOperator op(zeta, p, cfg);
    NewtonStepRecord rec;
    rec.step = step;
    rec.residual = op.residual_norm();
    diag.steps.push_back(rec);
    emit_step(jsonl, rec);
    diag.final_residual = rec.residual;
    if (rec.residual <= cfg.newton_tol) {
      diag.converged = true;
      return {zeta, diag};
    }
    // zeta <- -(n_eps + eps^2)^{-1} eps^2 (chi zeta^2 + S(zeta)), i.e. the
    // plain fixed-point sweep on the reduced equation.
    zeta = project_symmetric(spectral::subtract(zeta, op.residual()), p);
  }
  throw SolverError("picard: reduced fixed-point iteration did not reach tolerance",
                    diag.to_json());
}

}  // namespace

std::pair<Field, NewtonDiagnostics> newton_solve(const Field& zeta0, const SymbolParams& p,
                                                 const SolverConfig& cfg, std::ostream* jsonl) {
  cfg.validate();
  if (cfg.use_picard) return picard_solve(zeta0, p, cfg, jsonl);

  NewtonDiagnostics diag;
  Field zeta = project_symmetric(zeta0, p);
  std::optional<ReducedOperator> op(std::in_place, zeta, p, cfg);

  for (int step = 1; step <= cfg.newton_max_iter; ++step) {
    NewtonStepRecord rec;
    rec.step = step;
    rec.residual = op->residual_norm();
    diag.final_residual = rec.residual;
    if (rec.residual <= cfg.newton_tol) {
      diag.steps.push_back(rec);
      emit_step(jsonl, rec);
      diag.converged = true;
      return {zeta, diag};
    }

    const Field rhs = spectral::scale(op->residual(), -1.0);
    const KrylovResult kry = gmres([&](const Field& w) { return op->apply(w); }, rhs,
                                   cfg.linear_solver_tol, cfg.linear_solver_max_iter);
    rec.krylov_iterations = kry.iterations;
    rec.krylov_relative_residual = kry.relative_residual;

    // Halving line search on the Y0 residual; the accepted candidate's
    // operator is reused for the next step.
    bool accepted = false;
    double alpha = 1.0;
    for (int halving = 0; halving <= cfg.max_damping_halvings; ++halving) {
      Field candidate = project_symmetric(spectral::axpy(alpha, kry.solution, zeta), p);
      ReducedOperator cand_op(candidate, p, cfg);
      if (cand_op.residual_norm() < rec.residual) {
        zeta = std::move(candidate);
        op.emplace(std::move(cand_op));
        rec.damping_halvings = halving;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    diag.steps.push_back(rec);
    emit_step(jsonl, rec);
    if (!accepted) {
      throw SolverError("newton: residual did not decrease after full damping", diag.to_json());
    }
  }
  throw SolverError("newton: iteration limit reached before tolerance", diag.to_json());
}

AssembledSolution assemble_solution(const Field& zeta_eps, const SymbolParams& p,
                                    const SolverConfig& cfg) {
  const Field u1 = to_physical_frame(
      spectral::project_cone(zeta_eps, ConeSide::Inside, p), p);
  auto [u2, contraction] = solve_u2(u1, p, cfg);

  AssembledSolution out;
  out.speed = 1.0 - p.epsilon * p.epsilon;
  out.state.epsilon = p.epsilon;
  out.state.contraction = contraction;
  out.state.u1_eps_norm = spectral::norm(u1, NormKind::eps_scaled(), p);
  out.state.u2_x_norm = spectral::norm(u2, NormKind::x(p.sobolev_s), p);
  out.state.in_unit_ball = out.state.u1_eps_norm <= 1.0;
  out.u = spectral::add(u1.with_spectrum(), u2.with_spectrum()).with_samples();
  out.state.u1 = std::move(u1);
  out.state.u2 = std::move(u2);
  return out;
}

Field fdkp_residual_field(const Field& u, double speed, const SymbolParams& p) {
  if (u.frame() != Frame::Physical) throw FieldError("fdkp_residual: expected Physical frame");
  const auto table = symbols::symbol_table(u.grid(), p);
  const Field us = u.with_spectrum();
  const Field square = spectral::pointwise_square(us);

  Field::Spectrum c(us.grid().size(), 0.0);
  const auto& cu = us.spectrum();
  const auto& sq = square.spectrum();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!table->retained[i]) continue;
    const double m = table->n_phys[i] + 1.0;
    c[i] = (m - speed) * cu[i] + sq[i];
  }
  return Field::from_spectrum(us.grid(), Frame::Physical, std::move(c));
}

FdkpResidual fdkp_residual(const Field& u, double speed, const SymbolParams& p) {
  const Field residual = fdkp_residual_field(u, speed, p);

  FdkpResidual out;
  out.l2 = spectral::norm(residual, NormKind::l2(), p);
  out.z = spectral::norm(residual, NormKind::z(p.sobolev_s), p);
  const double u_l2 = spectral::norm(u, NormKind::l2(), p);
  out.relative = u_l2 > 0.0 ? out.l2 / u_l2 : out.l2;
  return out;
}

}  // namespace fdkp::solver
