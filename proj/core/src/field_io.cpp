#include "fdkp/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fdkp/errors.hpp"
#include "fdkp/version.hpp"

namespace fdkp::io {

using nlohmann::json;
using spectral::Field;
using spectral::Frame;

namespace {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; byte swapping is not implemented");

void write_bytes(const std::string& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("short write to '" + path + "'");
}

std::string frame_name(Frame frame) {
  return frame == Frame::Physical ? "physical" : "kp_scaled";
}

Frame frame_from_name(const std::string& name) {
  if (name == "physical") return Frame::Physical;
  if (name == "kp_scaled") return Frame::KPScaled;
  throw IoError("unknown frame '" + name + "' in sidecar");
}

}  // namespace

void write_field(const Field& field, const std::string& path, const FieldMetadata& meta) {
  const Field f = field.with_samples();
  const auto& samples = f.samples();
  write_bytes(path, samples.data(), samples.size() * sizeof(double));

  json sidecar;
  sidecar["schema_version"] = 1;
  sidecar["grid"] = {{"half_width_x", f.grid().half_width_x},
                     {"half_width_y", f.grid().half_width_y},
                     {"points_x", f.grid().points_x},
                     {"points_y", f.grid().points_y}};
  sidecar["frame"] = frame_name(f.frame());
  sidecar["epsilon"] = meta.epsilon;
  sidecar["k_index"] = meta.k_index;
  sidecar["build"] = build_version;
  sidecar["config_hash"] = meta.config_hash;
  sidecar["provenance"] = {{"command", meta.command}, {"format", "float64-le-row-major"}};
  write_text(sidecar.dump(2), path + ".json");
}

Field read_field(const std::string& path) {
  std::ifstream sidecar_in(path + ".json");
  if (!sidecar_in) throw IoError("cannot open sidecar '" + path + ".json'");
  json sidecar = json::parse(sidecar_in);
  const auto& g = sidecar.at("grid");
  const spectral::Grid grid = spectral::make_grid(g.at("half_width_x"), g.at("half_width_y"),
                                                  g.at("points_x"), g.at("points_y"));
  const Frame frame = frame_from_name(sidecar.at("frame"));

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  Field::Samples samples(grid.size());
  in.read(reinterpret_cast<char*>(samples.data()),
          static_cast<std::streamsize>(samples.size() * sizeof(double)));
  if (!in || in.gcount() != static_cast<std::streamsize>(samples.size() * sizeof(double))) {
    throw IoError("field file '" + path + "' is shorter than the grid demands");
  }
  return Field::from_samples(grid, frame, std::move(samples));
}

void write_report(const harness::SweepReport& report, const std::string& json_path,
                  const std::string& csv_path) {
  write_text(report.to_json(), json_path);

  std::ostringstream csv;
  csv << "criterion,epsilon,ratio,fitted_exponent,pass\n";
  csv << std::setprecision(12);
  for (const auto& [name, exponents] : harness::estimate_catalogue(report.params)) {
    bool pass = false;
    double fitted = 0.0;
    try {
      const auto verdict = harness::verify_estimate(name, report);
      pass = verdict.pass;
      fitted = verdict.fitted_exponent;
    } catch (const Error&) {
      // insufficient data rows are emitted with pass = false, no exponent
    }
    for (const auto& rec : report.records) {
      if (!rec.completed || !rec.estimates.count(name)) continue;
      csv << name << "," << rec.epsilon << "," << rec.estimates.at(name).ratio << ","
          << fitted << "," << (pass ? "true" : "false") << "\n";
    }
  }
  write_text(csv.str(), csv_path);
}

harness::SweepReport read_report(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open report '" + json_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return harness::SweepReport::from_json(buffer.str());
}

void write_surface(const Field& field, const std::string& path) {
  const Field f = field.with_samples();
  const auto& grid = f.grid();
  std::ostringstream os;
  os << std::setprecision(12);
  for (int iy = 0; iy < grid.points_y; ++iy) {
    for (int ix = 0; ix < grid.points_x; ++ix) {
      os << grid.x(ix) << "\t" << grid.y(iy) << "\t"
         << f.samples()[static_cast<std::size_t>(iy) * grid.points_x + ix] << "\n";
    }
    os << "\n";
  }
  write_text(os.str(), path);
}

void write_curve(const std::vector<std::pair<double, double>>& curve, const std::string& path) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (const auto& [k1, c] : curve) os << k1 << "\t" << c << "\n";
  write_text(os.str(), path);
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace fdkp::io
