#include "fdkp/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "fdkp/errors.hpp"
#include "fdkp/fft.hpp"
#include "fdkp/symbols.hpp"

namespace fdkp::spectral {

namespace {

// Zero the Nyquist row/column and the k1 = 0, k2 != 0 line, and make the
// spectrum exactly conjugate-symmetric. Every Field constructed from spectral
// data (including forward transforms) passes through here, so partition
// identities like Inside + Outside = f hold bit-exactly afterwards.
void enforce_invariants(const Grid& grid, Field::Spectrum& c) {
  const int nx = grid.points_x;
  const int ny = grid.points_y;
  for (int my = 0; my < ny; ++my) {
    c[static_cast<std::size_t>(my) * nx + nx / 2] = 0.0;
  }
  for (int mx = 0; mx < nx; ++mx) {
    c[static_cast<std::size_t>(ny / 2) * nx + mx] = 0.0;
  }
  for (int my = 1; my < ny; ++my) {
    c[static_cast<std::size_t>(my) * nx] = 0.0;  // k1 = 0, k2 != 0
  }
  for (int my = 0; my < ny; ++my) {
    const int ry = grid.reflect_y(my);
    for (int mx = 0; mx < nx; ++mx) {
      const int rx = grid.reflect_x(mx);
      const std::size_t a = static_cast<std::size_t>(my) * nx + mx;
      const std::size_t b = static_cast<std::size_t>(ry) * nx + rx;
      if (b < a) continue;
      const auto avg = 0.5 * (c[a] + std::conj(c[b]));
      c[a] = avg;
      c[b] = std::conj(avg);
    }
  }
}

void require_same_shape(const Field& a, const Field& b, const char* op) {
  if (!(a.grid() == b.grid()) || a.frame() != b.frame()) {
    throw FieldError(std::string(op) + ": grid/frame mismatch");
  }
}

bool in_dealias_band(const Grid& grid, int mx, int my) {
  return std::abs(grid.signed_index_x(mx)) <= grid.points_x / 3 &&
         std::abs(grid.signed_index_y(my)) <= grid.points_y / 3;
}

Field::Spectrum dealias(const Grid& grid, const Field::Spectrum& c) {
  Field::Spectrum out(c.size(), 0.0);
  for (int my = 0; my < grid.points_y; ++my) {
    for (int mx = 0; mx < grid.points_x; ++mx) {
      const std::size_t idx = static_cast<std::size_t>(my) * grid.points_x + mx;
      if (in_dealias_band(grid, mx, my)) out[idx] = c[idx];
    }
  }
  return out;
}

Field::Samples spectrum_to_samples(const Grid& grid, const Field::Spectrum& c) {
  Field::Spectrum work;
  fft::backward(grid, c, work);
  const double factor = grid.dk1() * grid.dk2() / (2.0 * std::numbers::pi);
  Field::Samples samples(grid.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = factor * work[i].real();
  return samples;
}

Field::Spectrum samples_to_spectrum(const Grid& grid, const Field::Samples& s) {
  Field::Spectrum in(grid.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = s[i];
  Field::Spectrum out;
  fft::forward(grid, in, out);
  const double factor = grid.dx() * grid.dy() / (2.0 * std::numbers::pi);
  for (auto& v : out) v *= factor;
  return out;
}

double spectrum_energy(const Grid& grid, const Field::Spectrum& c) {
  double sum = 0.0;
  for (const auto& v : c) sum += std::norm(v);
  return sum * grid.dk1() * grid.dk2();
}

}  // namespace

Field Field::zeros(const Grid& grid, Frame frame) {
  Field f;
  f.grid_ = grid;
  f.frame_ = frame;
  f.samples_.assign(grid.size(), 0.0);
  f.spectrum_.assign(grid.size(), 0.0);
  f.has_samples_ = true;
  f.has_spectrum_ = true;
  return f;
}

Field Field::from_samples(const Grid& grid, Frame frame, Samples samples) {
  if (samples.size() != grid.size()) throw FieldError("from_samples: size mismatch");
  Field f;
  f.grid_ = grid;
  f.frame_ = frame;
  f.samples_ = std::move(samples);
  f.has_samples_ = true;
  return f;
}

Field Field::from_spectrum(const Grid& grid, Frame frame, Spectrum spectrum) {
  if (spectrum.size() != grid.size()) throw FieldError("from_spectrum: size mismatch");
  Field f;
  f.grid_ = grid;
  f.frame_ = frame;
  enforce_invariants(grid, spectrum);
  f.spectrum_ = std::move(spectrum);
  f.has_spectrum_ = true;
  return f;
}

const Field::Samples& Field::samples() const {
  if (!has_samples_) throw FieldError("field has no sample representation; transform first");
  return samples_;
}

const Field::Spectrum& Field::spectrum() const {
  if (!has_spectrum_) throw FieldError("field has no spectral representation; transform first");
  return spectrum_;
}

Field Field::with_samples() const {
  return has_samples_ ? *this : transform(*this, Direction::Backward);
}

Field Field::with_spectrum() const {
  return has_spectrum_ ? *this : transform(*this, Direction::Forward);
}

Field Field::retagged(Frame frame) const {
  Field f = *this;
  f.frame_ = frame;
  return f;
}

double Field::sup_norm() const {
  const Field f = with_samples();
  double sup = 0.0;
  for (double v : f.samples_) sup = std::max(sup, std::abs(v));
  return sup;
}

Field transform(const Field& f, Direction direction) {
  Field out = f;
  if (direction == Direction::Forward) {
    if (!f.has_samples_) throw FieldError("forward transform requires samples");
    if (f.has_spectrum_) return out;
    out.spectrum_ = samples_to_spectrum(f.grid_, f.samples_);
    const double before = spectrum_energy(f.grid_, out.spectrum_);
    enforce_invariants(f.grid_, out.spectrum_);
    const double after = spectrum_energy(f.grid_, out.spectrum_);
    out.has_spectrum_ = true;
    // If enforcement removed content, the original samples no longer match
    // the spectrum; drop them so the representations cannot disagree.
    if (before > 0.0 && (before - after) > 1e-28 * before) {
      out.samples_.clear();
      out.has_samples_ = false;
    }
  } else {
    if (!f.has_spectrum_) throw FieldError("backward transform requires a spectrum");
    if (f.has_samples_) return out;
    out.samples_ = spectrum_to_samples(f.grid_, f.spectrum_);
    out.has_samples_ = true;
  }
  return out;
}

Field apply_multiplier(const Field& f, const std::function<double(double, double)>& sigma,
                       const SymbolParams& params) {
  const Field src = f.with_spectrum();
  const Grid& grid = src.grid();
  const bool physical = src.frame() == Frame::Physical;
  if (physical && !(params.epsilon > 0.0)) {
    throw FieldError("apply_multiplier: Physical frame requires epsilon > 0");
  }
  Field::Spectrum c = src.spectrum();
  const double eps = params.epsilon;
  for (int my = 0; my < grid.points_y; ++my) {
    for (int mx = 0; mx < grid.points_x; ++mx) {
      const std::size_t idx = static_cast<std::size_t>(my) * grid.points_x + mx;
      if (grid.is_nyquist_x(mx) || grid.is_nyquist_y(my)) continue;
      const double K1 = grid.k1(mx);
      const double K2 = grid.k2(my);
      if (K1 == 0.0 && K2 != 0.0) continue;  // zeroed line, sigma never evaluated
      const double k1 = physical ? eps * K1 : K1;
      const double k2 = physical ? eps * eps * K2 : K2;
      const double value = sigma(k1, k2);
      if (!std::isfinite(value)) {
        throw SymbolError("apply_multiplier: non-finite symbol at retained mode (k1 = " +
                          std::to_string(k1) + ", k2 = " + std::to_string(k2) + ")");
      }
      c[idx] *= value;
    }
  }
  return Field::from_spectrum(grid, src.frame(), std::move(c));
}

Field pointwise_square(const Field& f) {
  const Field src = f.with_spectrum();
  const Grid& grid = src.grid();
  Field::Spectrum banded = dealias(grid, src.spectrum());
  Field::Samples s = spectrum_to_samples(grid, banded);
  for (auto& v : s) v *= v;
  Field::Spectrum c = dealias(grid, samples_to_spectrum(grid, s));
  return Field::from_spectrum(grid, src.frame(), std::move(c));
}

Field pointwise_multiply(const Field& f, const Field& g) {
  require_same_shape(f, g, "pointwise_multiply");
  const Grid& grid = f.grid();
  Field::Samples a = spectrum_to_samples(grid, dealias(grid, f.with_spectrum().spectrum()));
  const Field::Samples b = spectrum_to_samples(grid, dealias(grid, g.with_spectrum().spectrum()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  Field::Spectrum c = dealias(grid, samples_to_spectrum(grid, a));
  return Field::from_spectrum(grid, f.frame(), std::move(c));
}

Field symmetrize(const Field& f) {
  const Field src = f.with_samples();
  const Grid& grid = src.grid();
  const Field::Samples& s = src.samples();
  Field::Samples out(s.size());
  for (int iy = 0; iy < grid.points_y; ++iy) {
    const int ry = grid.reflect_y(iy);
    for (int ix = 0; ix < grid.points_x; ++ix) {
      const int rx = grid.reflect_x(ix);
      const std::size_t idx = static_cast<std::size_t>(iy) * grid.points_x + ix;
      out[idx] = 0.25 * (s[idx] +
                         s[static_cast<std::size_t>(iy) * grid.points_x + rx] +
                         s[static_cast<std::size_t>(ry) * grid.points_x + ix] +
                         s[static_cast<std::size_t>(ry) * grid.points_x + rx]);
    }
  }
  return Field::from_samples(grid, src.frame(), std::move(out));
}

double asymmetry(const Field& f) {
  const Field src = f.with_samples();
  const double sup = src.sup_norm();
  if (sup == 0.0) return 0.0;
  const Field sym = symmetrize(src);
  double diff = 0.0;
  const auto& a = src.samples();
  const auto& b = sym.samples();
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff / sup;
}

Field project_cone(const Field& f, ConeSide side, const SymbolParams& params) {
  const Field src = f.with_spectrum();
  const Grid& grid = src.grid();
  if (!(params.epsilon > 0.0)) {
    throw FieldError("project_cone: requires epsilon > 0 (both frames resolve through it)");
  }
  // On the shared grid the physical-frame cone chi(eps K1, eps^2 K2) and the
  // KP-frame scaled cone chi_eps(K1, K2) test the same lattice condition.
  const auto table = symbols::symbol_table(grid, params);
  Field::Spectrum c = src.spectrum();
  const bool keep_inside = side == ConeSide::Inside;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    const bool inside = table->cone[idx] != 0;
    if (inside != keep_inside) c[idx] = 0.0;
  }
  return Field::from_spectrum(grid, src.frame(), std::move(c));
}

Field add(const Field& a, const Field& b) { return axpy(1.0, a, b); }

Field subtract(const Field& a, const Field& b) { return axpy(-1.0, b, a); }

Field scale(const Field& a, double factor) {
  if (a.has_spectrum()) {
    Field::Spectrum c = a.spectrum();
    for (auto& v : c) v *= factor;
    return Field::from_spectrum(a.grid(), a.frame(), std::move(c));
  }
  Field::Samples s = a.samples();
  for (auto& v : s) v *= factor;
  return Field::from_samples(a.grid(), a.frame(), std::move(s));
}

Field axpy(double alpha, const Field& x, const Field& y) {
  require_same_shape(x, y, "axpy");
  if (x.has_spectrum() && y.has_spectrum()) {
    Field::Spectrum c = y.spectrum();
    const auto& cx = x.spectrum();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += alpha * cx[i];
    return Field::from_spectrum(x.grid(), x.frame(), std::move(c));
  }
  if (x.has_samples() && y.has_samples()) {
    Field::Samples s = y.samples();
    const auto& sx = x.samples();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += alpha * sx[i];
    return Field::from_samples(x.grid(), x.frame(), std::move(s));
  }
  return axpy(alpha, x.with_spectrum(), y.with_spectrum());
}

Field random_field(const Grid& grid, Frame frame, unsigned seed, double y1_weight,
                   double k1_band) {
  std::mt19937_64 rng(seed);
  // Box-Muller over raw 64-bit draws: identical streams on every platform.
  auto gaussian = [&rng]() {
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };

  Field::Spectrum c(grid.size(), 0.0);
  for (int my = 0; my < grid.points_y; ++my) {
    for (int mx = 0; mx < grid.points_x; ++mx) {
      const std::size_t idx = static_cast<std::size_t>(my) * grid.points_x + mx;
      const double re = gaussian();
      const double im = gaussian();
      if (grid.is_nyquist_x(mx) || grid.is_nyquist_y(my)) continue;
      const double K1 = grid.k1(mx);
      const double K2 = grid.k2(my);
      if (K1 == 0.0 && K2 != 0.0) continue;
      if (k1_band > 0.0 && std::abs(K1) > k1_band) continue;
      double amp = 1.0;
      if (y1_weight != 0.0) {
        const double rho = K1 == 0.0 ? 0.0 : K2 / K1;
        amp = std::pow(1.0 + K1 * K1 + rho * rho, -0.5 * y1_weight);
      }
      c[idx] = amp * std::complex<double>(re, im);
    }
  }
  Field f = Field::from_spectrum(grid, frame, std::move(c));
  const double energy = spectrum_energy(grid, f.spectrum());
  if (energy > 0.0) f = scale(f, 1.0 / std::sqrt(energy));
  return f;
}

}  // namespace fdkp::spectral
