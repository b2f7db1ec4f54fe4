#pragma once

#include <string>

#include "fdkp/config.hpp"
#include "fdkp/field.hpp"
#include "fdkp/harness.hpp"

namespace fdkp::io {

/// Binary field format: row-major float64 little-endian samples at `path`,
/// plus a JSON sidecar `path + ".json"` carrying grid, frame, epsilon,
/// k_index, build version, config hash and provenance. Round-trips are
/// bit-exact.
struct FieldMetadata {
  double epsilon = 0.0;
  int k_index = 0;
  std::string command;
  std::uint64_t config_hash = 0;
};

void write_field(const spectral::Field& field, const std::string& path,
                 const FieldMetadata& meta);
spectral::Field read_field(const std::string& path);

/// Sweep report as JSON plus a per-criterion CSV table
/// (criterion, epsilon, ratio, fitted_exponent, pass) at `csv_path`.
void write_report(const harness::SweepReport& report, const std::string& json_path,
                  const std::string& csv_path);
harness::SweepReport read_report(const std::string& json_path);

/// (x, y, value) grid rows, tab-separated, for surface plots.
void write_surface(const spectral::Field& field, const std::string& path);

/// (k1, c) rows for the dispersion curve.
void write_curve(const std::vector<std::pair<double, double>>& curve, const std::string& path);

void write_text(const std::string& text, const std::string& path);

}  // namespace fdkp::io
