#include "fdkp/grid.hpp"

#include <numbers>
#include <string>

#include "fdkp/errors.hpp"

namespace fdkp::spectral {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double Grid::dk1() const { return std::numbers::pi / half_width_x; }
double Grid::dk2() const { return std::numbers::pi / half_width_y; }

Grid make_grid(double half_width_x, double half_width_y, int points_x, int points_y) {
  if (!(half_width_x > 0.0) || !(half_width_y > 0.0)) {
    throw FieldError("make_grid: half-widths must be positive");
  }
  if (!power_of_two(points_x) || !power_of_two(points_y) || points_x < 16 || points_y < 16) {
    throw FieldError("make_grid: point counts must be powers of two >= 16, got " +
                     std::to_string(points_x) + " x " + std::to_string(points_y));
  }
  return Grid{half_width_x, half_width_y, points_x, points_y};
}

}  // namespace fdkp::spectral
