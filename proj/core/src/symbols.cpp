#include "fdkp/symbols.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "fdkp/errors.hpp"

namespace fdkp::symbols {

namespace {

void require_ratio_defined(double k1, double k2) {
  if (k1 == 0.0 && k2 != 0.0) {
    throw SymbolError("symbol undefined on the line k1 = 0, k2 != 0 (k2 = " +
                      std::to_string(k2) + ")");
  }
}

double ratio(double k1, double k2) { return k1 == 0.0 ? 0.0 : k2 / k1; }

}  // namespace

double tanc(double r) {
  r = std::abs(r);
  if (r < 1e-4) {
    const double r2 = r * r;
    return 1.0 - r2 / 3.0 + 2.0 * r2 * r2 / 15.0;
  }
  return std::tanh(r) / r;
}

double m_symbol(double k1, double k2, const SymbolParams& p) {
  require_ratio_defined(k1, k2);
  const double rho = ratio(k1, k2);
  // |k|^2 = k1^2 (1 + rho^2), so the evaluation depends on (k1, rho) only.
  const double ksq = k1 * k1 * (1.0 + rho * rho);
  const double k = std::sqrt(ksq);
  return std::sqrt((1.0 + p.beta * ksq) * tanc(k) * (1.0 + 2.0 * rho * rho));
}

double n_symbol(double k1, double k2, const SymbolParams& p) {
  return m_symbol(k1, k2, p) - 1.0;
}

double mtilde_symbol(double k1, double k2, const SymbolParams& p) {
  require_ratio_defined(k1, k2);
  const double rho = ratio(k1, k2);
  return 1.0 + rho * rho + 0.5 * (p.beta - 1.0 / 3.0) * k1 * k1;
}

double mtilde_inverse(double k1, double k2, const SymbolParams& p) {
  return 1.0 / mtilde_symbol(k1, k2, p);
}

double n_eps_symbol(double K1, double K2, const SymbolParams& p) {
  if (!(p.epsilon > 0.0)) throw SymbolError("n_eps requires epsilon > 0");
  return n_symbol(p.epsilon * K1, p.epsilon * p.epsilon * K2, p);
}

double resolvent_symbol(double K1, double K2, const SymbolParams& p) {
  const double e2 = p.epsilon * p.epsilon;
  return e2 / (e2 + n_eps_symbol(K1, K2, p));
}

double dispersion_speed(double k1, const SymbolParams& p) {
  return std::sqrt((1.0 + p.beta * k1 * k1) * tanc(k1));
}

bool in_cone_physical(double k1, double k2, const SymbolParams& p) {
  if (k1 == 0.0) return k2 == 0.0;
  return std::abs(k1) <= p.delta && std::abs(k2 / k1) <= p.delta;
}

bool in_cone_scaled(double K1, double K2, const SymbolParams& p) {
  if (!(p.epsilon > 0.0)) throw SymbolError("scaled cone requires epsilon > 0");
  if (K1 == 0.0) return K2 == 0.0;
  const double half_width = p.delta / p.epsilon;
  return std::abs(K1) <= half_width && std::abs(K2 / K1) <= half_width;
}

void SymbolParams_validate_impl(const SymbolParams& p) {
  if (!(p.beta > 1.0 / 3.0)) throw SymbolError("beta must exceed 1/3 (strong surface tension)");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw SymbolError("delta must lie in (0, 1)");
  if (!(p.theta > 0.5 && p.theta < 1.0)) throw SymbolError("theta must lie in (1/2, 1)");
  if (!(p.sobolev_s > 1.5 && p.sobolev_s < 2.0)) throw SymbolError("sobolev_s must lie in (3/2, 2)");
  if (!(1.0 + p.theta < p.sobolev_s)) throw SymbolError("1 + theta must be below sobolev_s");
  if (!(p.ball_m > 1.0)) throw SymbolError("ball_M must exceed 1");
  if (!(p.eps0 > 0.0)) throw SymbolError("eps0 must be positive");
  if (!(p.epsilon >= 0.0 && p.epsilon < p.eps0)) throw SymbolError("epsilon must lie in [0, eps0)");
}

std::shared_ptr<const SymbolTable> symbol_table(const spectral::Grid& grid,
                                                const SymbolParams& params) {
  using Key = std::tuple<int, int, double, double, double, double, double>;
  static std::map<Key, std::shared_ptr<const SymbolTable>> cache;
  static std::mutex cache_mutex;

  Key key{grid.points_x, grid.points_y, grid.half_width_x, grid.half_width_y,
          params.beta, params.delta, params.epsilon};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  auto table = std::make_shared<SymbolTable>();
  table->grid = grid;
  table->params = params;
  const std::size_t n = grid.size();
  table->n_phys.assign(n, 0.0);
  table->resolvent.assign(n, 0.0);
  table->mtilde.assign(n, 0.0);
  table->mtilde_inv.assign(n, 0.0);
  table->cone.assign(n, 0);
  table->retained.assign(n, 0);

  const double eps = params.epsilon;
  for (int my = 0; my < grid.points_y; ++my) {
    for (int mx = 0; mx < grid.points_x; ++mx) {
      const std::size_t idx = static_cast<std::size_t>(my) * grid.points_x + mx;
      if (grid.is_nyquist_x(mx) || grid.is_nyquist_y(my)) continue;
      const double K1 = grid.k1(mx);
      const double K2 = grid.k2(my);
      if (K1 == 0.0 && K2 != 0.0) continue;
      table->retained[idx] = 1;
      table->mtilde[idx] = mtilde_symbol(K1, K2, params);
      table->mtilde_inv[idx] = 1.0 / table->mtilde[idx];
      if (eps > 0.0) {
        table->n_phys[idx] = n_symbol(eps * K1, eps * eps * K2, params);
        const double e2 = eps * eps;
        table->resolvent[idx] = e2 / (e2 + table->n_phys[idx]);
        table->cone[idx] = in_cone_scaled(K1, K2, params) ? 1 : 0;
      }
    }
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace fdkp::symbols

namespace fdkp {

void SymbolParams::validate() const { symbols::SymbolParams_validate_impl(*this); }

bool SymbolParams::in_theoretical_regime() const {
  return epsilon < eps0 && epsilon < 1.0 / (ball_m * ball_m);
}

}  // namespace fdkp
