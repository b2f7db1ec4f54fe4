#include "fdkp/norms.hpp"

#include <cmath>

#include "fdkp/errors.hpp"

namespace fdkp::spectral {

namespace {

bool physical_kind(NormKind kind) { return kind.tag != NormKind::Tag::Yr; }

void check_kind(NormKind kind, const SymbolParams& params) {
  switch (kind.tag) {
    case NormKind::Tag::Yr:
      if (!(kind.exponent >= 0.0)) throw SymbolError("norm: Yr exponent must be >= 0");
      return;
    case NormKind::Tag::X:
    case NormKind::Tag::Z:
      if (kind.exponent != params.sobolev_s) {
        throw SymbolError("norm: X/Z exponent does not match params.sobolev_s");
      }
      return;
    case NormKind::Tag::EpsScaled:
      if (!(params.epsilon > 0.0)) throw SymbolError("norm: EpsScaled requires epsilon > 0");
      return;
    case NormKind::Tag::L2:
      return;
  }
}

}  // namespace

double norm_weight(NormKind kind, double k1, double k2, const SymbolParams& params) {
  const double rho = k1 == 0.0 ? 0.0 : k2 / k1;
  const double rho2 = rho * rho;
  switch (kind.tag) {
    case NormKind::Tag::L2:
      return 1.0;
    case NormKind::Tag::Yr:
      return std::pow(1.0 + k1 * k1 + rho2, kind.exponent);
    case NormKind::Tag::EpsScaled: {
      const double inv_e2 = 1.0 / (params.epsilon * params.epsilon);
      return 1.0 + inv_e2 * k1 * k1 + inv_e2 * rho2;
    }
    case NormKind::Tag::X: {
      const double ksq = k1 * k1 + k2 * k2;
      const double k2sq = k2 * k2;
      const double ratio4 = k1 == 0.0 ? 0.0 : k2sq * k2sq / (k1 * k1);
      return 1.0 + rho2 + ratio4 + std::pow(ksq, kind.exponent);
    }
    case NormKind::Tag::Z: {
      const double ksq = k1 * k1 + k2 * k2;
      return 1.0 + std::sqrt(ksq) + k1 * k1 * std::pow(ksq, kind.exponent - 1.5);
    }
  }
  return 1.0;
}

double norm(const Field& f, NormKind kind, const SymbolParams& params) {
  check_kind(kind, params);
  const Field src = f.with_spectrum();
  const Grid& grid = src.grid();
  const bool field_physical = src.frame() == Frame::Physical;
  const bool kind_physical = physical_kind(kind);
  const double eps = params.epsilon;

  // Spectral weights are evaluated at the wavevectors of the frame the norm
  // is defined in; the measure/amplitude conversion is an exact power of eps.
  //   physical norm of a Physical field : k = (eps K1, eps^2 K2), factor eps^-3
  //   physical norm of a KPScaled field : k = (eps K1, eps^2 K2), factor eps
  //   Yr norm of a KPScaled field       : k = (K1, K2),           factor 1
  //   Yr norm of a Physical field       : k = (K1, K2),           factor eps^-4
  double frame_factor = 1.0;
  bool substitute = false;
  if (kind_physical) {
    substitute = true;
    if (!(eps > 0.0)) throw SymbolError("norm: physical-frame norms require epsilon > 0");
    frame_factor = field_physical ? 1.0 / (eps * eps * eps) : eps;
  } else if (field_physical) {
    if (!(eps > 0.0)) throw SymbolError("norm: Yr norm of a Physical field requires epsilon > 0");
    frame_factor = 1.0 / (eps * eps * eps * eps);
  }

  const auto& c = src.spectrum();
  double sum = 0.0;
  for (int my = 0; my < grid.points_y; ++my) {
    for (int mx = 0; mx < grid.points_x; ++mx) {
      const std::size_t idx = static_cast<std::size_t>(my) * grid.points_x + mx;
      const double mag2 = std::norm(c[idx]);
      if (mag2 == 0.0) continue;
      double k1 = grid.k1(mx);
      double k2 = grid.k2(my);
      if (substitute) {
        k1 *= eps;
        k2 *= eps * eps;
      }
      sum += norm_weight(kind, k1, k2, params) * mag2;
    }
  }
  return std::sqrt(frame_factor * sum * grid.dk1() * grid.dk2());
}

double inner_y0(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw FieldError("inner_y0: grid mismatch");
  const Field fa = a.with_spectrum();
  const Field fb = b.with_spectrum();
  const auto& ca = fa.spectrum();
  const auto& cb = fb.spectrum();
  double sum = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    sum += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
  }
  return sum * a.grid().dk1() * a.grid().dk2();
}

}  // namespace fdkp::spectral
