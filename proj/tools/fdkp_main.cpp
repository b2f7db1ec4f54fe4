#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fdkp/config.hpp"
#include "fdkp/errors.hpp"
#include "fdkp/field_io.hpp"
#include "fdkp/harness.hpp"
#include "fdkp/lumps.hpp"
#include "fdkp/norms.hpp"
#include "fdkp/reduction.hpp"
#include "fdkp/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int exit_pass = 0;
constexpr int exit_criterion_failure = 1;
constexpr int exit_usage = 2;

struct CommandContext {
  fdkp::io::Config config;
  fs::path out;
};

void write_failure_record(const CommandContext& ctx, const std::string& command,
                          const json& detail) {
  json record{{"command", command}, {"ok", false}, {"detail", detail}};
  fdkp::io::write_text(record.dump(2), (ctx.out / (command + "_failure.json")).string());
}

int run_lump_check(const CommandContext& ctx) {
  const auto report = fdkp::harness::lump_check(ctx.config.params, ctx.config.grid());
  for (const auto& line : report.lines) {
    std::cout << (line.pass ? "PASS " : "FAIL ") << line.name << " (value " << line.value
              << ", threshold " << line.threshold << ")\n";
  }
  fdkp::io::write_text(report.to_json(), (ctx.out / "lump_check.json").string());
  if (!report.pass) {
    write_failure_record(ctx, "lump-check", json::parse(report.to_json()));
    return exit_criterion_failure;
  }
  return exit_pass;
}

int run_dispersion(const CommandContext& ctx) {
  const auto check = fdkp::harness::dispersion_check(
      ctx.config.params, ctx.config.dispersion_k1_max, ctx.config.dispersion_samples);
  fdkp::io::write_curve(check.curve, (ctx.out / "dispersion_curve.tsv").string());
  const char* status = check.status == fdkp::harness::DispersionCheck::Status::Pass
                           ? "pass"
                           : (check.status == fdkp::harness::DispersionCheck::Status::Fail
                                  ? "fail"
                                  : "not-applicable");
  json summary{{"status", status},
               {"c_at_zero", check.c_at_zero},
               {"monotone", check.monotone},
               {"beta", ctx.config.params.beta}};
  fdkp::io::write_text(summary.dump(2), (ctx.out / "dispersion.json").string());
  std::cout << "dispersion: " << status << " (c(0) = " << check.c_at_zero << ", monotone "
            << (check.monotone ? "yes" : "no") << ")\n";
  if (check.status == fdkp::harness::DispersionCheck::Status::Fail) {
    write_failure_record(ctx, "dispersion", summary);
    return exit_criterion_failure;
  }
  return exit_pass;
}

int run_solve(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  const auto grid = cfg.grid();
  const auto p = cfg.params;
  const auto seed =
      fdkp::lumps::sample_lump(grid, cfg.k_index, fdkp::spectral::Frame::KPScaled, p);

  std::ofstream jsonl((ctx.out / "newton_steps.jsonl").string());
  auto [zeta, diag] = fdkp::solver::newton_solve(seed.field, p, cfg.solver, &jsonl);
  const auto assembled = fdkp::solver::assemble_solution(zeta, p, cfg.solver);
  const auto residual = fdkp::solver::fdkp_residual(assembled.u, assembled.speed, p);

  fdkp::io::FieldMetadata meta;
  meta.epsilon = p.epsilon;
  meta.k_index = cfg.k_index;
  meta.command = "solve";
  meta.config_hash = cfg.hash();
  fdkp::io::write_field(assembled.u, (ctx.out / "u.f64").string(), meta);
  fdkp::io::write_field(zeta, (ctx.out / "zeta.f64").string(), meta);

  json manifest{{"schema_version", 1},
                {"epsilon", p.epsilon},
                {"k_index", cfg.k_index},
                {"speed", assembled.speed},
                {"newton", json::parse(diag.to_json())},
                {"full_residual_l2", residual.l2},
                {"full_residual_relative", residual.relative},
                {"full_residual_z", residual.z},
                {"u1_eps_norm", assembled.state.u1_eps_norm},
                {"u2_x_norm", assembled.state.u2_x_norm},
                {"in_theoretical_regime", p.in_theoretical_regime()},
                {"config_hash", cfg.hash()},
                {"build", fdkp::build_version}};
  fdkp::io::write_text(manifest.dump(2), (ctx.out / "solve_manifest.json").string());
  std::cout << "solve: converged in " << diag.steps.size() << " steps, c = " << assembled.speed
            << ", reduced residual " << diag.final_residual << ", full relative residual "
            << residual.relative << "\n";
  return exit_pass;
}

int run_sweep_cmd(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  const auto report = fdkp::harness::run_sweep(cfg.k_index, cfg.epsilons, cfg.params, cfg.solver,
                                               cfg.grid());
  fdkp::io::write_report(report, (ctx.out / "sweep_report.json").string(),
                         (ctx.out / "sweep_report.csv").string());
  bool all_completed = !report.records.empty();
  for (const auto& rec : report.records) {
    std::cout << (rec.completed ? "PASS " : "FAIL ") << "epsilon " << rec.epsilon;
    if (rec.completed) {
      std::cout << ": newton " << rec.newton_steps << " steps, reduced residual "
                << rec.reduced_residual_l2 << ", approx error " << rec.approx_error_sup;
    } else {
      std::cout << ": " << rec.failure_reason;
    }
    std::cout << "\n";
    all_completed = all_completed && rec.completed;
  }
  if (!all_completed) {
    write_failure_record(ctx, "sweep", json::parse(report.to_json()));
    return exit_criterion_failure;
  }
  return exit_pass;
}

int run_probe(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  std::vector<fdkp::spectral::Grid> levels;
  for (int n : cfg.probe_grid_points) {
    levels.push_back(fdkp::spectral::make_grid(cfg.probe_half_width, cfg.probe_half_width, n, n));
  }
  const auto result = fdkp::harness::nondegeneracy_probe(cfg.k_index, levels, cfg.params);
  fdkp::io::write_text(result.to_json(), (ctx.out / "probe.json").string());
  std::cout << "probe k = " << cfg.k_index << ": smallest |eigenvalue| "
            << result.smallest_abs_eigenvalue << ", stable "
            << (result.stable ? "yes" : "no") << "\n";
  const bool pass = result.stable && result.smallest_abs_eigenvalue >= 1e-2;
  if (!pass) {
    write_failure_record(ctx, "probe", json::parse(result.to_json()));
    return exit_criterion_failure;
  }
  return exit_pass;
}

int run_estimates(const CommandContext& ctx) {
  if (ctx.config.report_path.empty()) {
    throw fdkp::ConfigError("estimates: report_path (or --report) must name a stored report");
  }
  const auto report = fdkp::io::read_report(ctx.config.report_path);
  bool all_pass = true;
  json summary = json::array();
  for (const auto& [name, exponents] : fdkp::harness::estimate_catalogue(report.params)) {
    const auto verdict = fdkp::harness::verify_estimate(name, report);
    all_pass = all_pass && verdict.pass;
    std::cout << (verdict.pass ? "PASS " : "FAIL ") << name << " (fitted exponent "
              << verdict.fitted_exponent << " vs " << verdict.paper_exponent << " - 0.25, band "
              << verdict.ratio_band << ")\n";
    summary.push_back({{"name", name},
                       {"pass", verdict.pass},
                       {"fitted_exponent", verdict.fitted_exponent},
                       {"paper_exponent", verdict.paper_exponent},
                       {"fitted_constant", verdict.fitted_constant},
                       {"ratio_band", verdict.ratio_band}});
  }
  fdkp::io::write_text(summary.dump(2), (ctx.out / "estimates.json").string());
  if (!all_pass) {
    write_failure_record(ctx, "estimates", summary);
    return exit_criterion_failure;
  }
  return exit_pass;
}

int run_plot_data(const CommandContext& ctx) {
  // Raw closed-form lump surfaces (no projection) and the dispersion curve.
  const auto grid = fdkp::spectral::make_grid(20.0, 20.0, 128, 128);
  for (int k = 1; k <= 2; ++k) {
    const auto& family = fdkp::lumps::lump_family(k);
    fdkp::spectral::Field::Samples samples(grid.size());
    for (int iy = 0; iy < grid.points_y; ++iy) {
      for (int ix = 0; ix < grid.points_x; ++ix) {
        samples[static_cast<std::size_t>(iy) * grid.points_x + ix] =
            family.eval_zeta(grid.x(ix), grid.y(iy));
      }
    }
    const auto field = fdkp::spectral::Field::from_samples(
        grid, fdkp::spectral::Frame::KPScaled, std::move(samples));
    fdkp::io::write_surface(field,
                            (ctx.out / ("lump_k" + std::to_string(k) + ".tsv")).string());
  }
  const auto check = fdkp::harness::dispersion_check(
      ctx.config.params, ctx.config.dispersion_k1_max, ctx.config.dispersion_samples);
  fdkp::io::write_curve(check.curve, (ctx.out / "dispersion_curve.tsv").string());
  for (int k = 1; k <= 2; ++k) {
    fdkp::io::write_text(fdkp::lumps::lump_family(k).tau().to_json(),
                         (ctx.out / ("tau_k" + std::to_string(k) + ".json")).string());
  }
  std::cout << "plot-data: wrote lump_k{1,2}.tsv, tau_k{1,2}.json, dispersion_curve.tsv\n";
  return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver for fully localised FDKP-I solitary waves"};
  app.set_version_flag("--version", std::string(fdkp::build_version));

  std::string config_path;
  std::string out_dir_flag;
  std::string report_flag;
  std::string command_flag;
  std::string command_positional;
  app.add_option("--config", config_path, "JSON config file (flat object)");
  app.add_option("--out", out_dir_flag, "output directory (overrides config)");
  app.add_option("--report", report_flag, "stored sweep report (estimates command)");
  app.add_option("--command", command_flag, "command name (overridden by the positional)");
  app.add_option("subcommand", command_positional,
                 "one of: lump-check dispersion solve sweep probe estimates plot-data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_pass : exit_usage;
  }

  const std::string command =
      !command_positional.empty() ? command_positional : command_flag;
  const std::set<std::string> known{"lump-check", "dispersion", "solve",    "sweep",
                                    "probe",      "estimates",  "plot-data"};
  if (!known.count(command)) {
    std::cerr << "usage: fdkp [--config PATH] [--out DIR] COMMAND\n"
              << "commands: lump-check dispersion solve sweep probe estimates plot-data\n";
    return exit_usage;
  }

  try {
    CommandContext ctx;
    if (!config_path.empty()) {
      ctx.config = fdkp::io::load_config(config_path);
    } else {
      ctx.config.validate();
    }
    if (!report_flag.empty()) ctx.config.report_path = report_flag;
    if (!out_dir_flag.empty()) ctx.config.out_dir = out_dir_flag;
    if (const char* env = std::getenv("FDKP_OUT_DIR"); env && *env) ctx.config.out_dir = env;
    ctx.out = fs::path(ctx.config.out_dir);
    fs::create_directories(ctx.out);
    fdkp::io::write_text(ctx.config.to_json(), (ctx.out / "config_used.json").string());

    if (command == "lump-check") return run_lump_check(ctx);
    if (command == "dispersion") return run_dispersion(ctx);
    if (command == "solve") return run_solve(ctx);
    if (command == "sweep") return run_sweep_cmd(ctx);
    if (command == "probe") return run_probe(ctx);
    if (command == "estimates") return run_estimates(ctx);
    if (command == "plot-data") return run_plot_data(ctx);
  } catch (const fdkp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const fdkp::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n"
              << e.diagnostics_json << "\n";
    return exit_criterion_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_criterion_failure;
  }
  return exit_usage;
}
