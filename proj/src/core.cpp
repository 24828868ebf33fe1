#include "elfv/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elfv {

Grid1D Grid1D::make(double x_lo, double x_hi, int n_cells, Boundary boundary) {
  if (!(x_hi > x_lo)) {
    throw InvalidArgument("grid: x_hi must exceed x_lo");
  }
  if (n_cells < 7) {
    throw InvalidArgument("grid: need at least 7 cells, got " + std::to_string(n_cells));
  }
  Grid1D g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.n_cells = n_cells;
  g.dx = (x_hi - x_lo) / n_cells;
  g.boundary = boundary;
  return g;
}

long Grid1D::wrap(long j) const {
  const long n = n_cells;
  if (boundary == Boundary::Periodic) {
    long r = j % n;
    return r < 0 ? r + n : r;
  }
  return std::clamp(j, 0L, n - 1);
}

Bounds Bounds::of(std::span<const double> values) {
  if (values.empty()) {
    throw InvalidArgument("bounds of an empty state");
  }
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return Bounds{*hi, *lo};
}

TimeStep time_step_size(const Bounds& bounds, const Grid1D& grid, const SchemeConfig& config) {
  if (!(config.c_factor > 0.0)) {
    throw InvalidArgument("time_step_size: c_factor must be positive");
  }
  if (bounds.a < bounds.b) {
    throw InvalidArgument("time_step_size: upper bound below lower bound");
  }
  TimeStep ts;
  if (bounds.a == bounds.b) {
    ts.dt = grid.dx;
    ts.degenerate = true;
    ts.guaranteed = true;
    return ts;
  }
  ts.dt = config.c_factor * grid.dx / bounds.width();
  ts.guaranteed = config.c_factor < 4.0;
  return ts;
}

double classical_cfl(double dt, const Grid1D& grid, const CellState& state) {
  double speed = 0.0;
  for (double u : state.values) {
    speed = std::max(speed, std::abs(u));
  }
  return dt / grid.dx * speed;
}

double total_variation(std::span<const double> values, Boundary boundary) {
  const std::size_t n = values.size();
  if (n < 2) {
    return 0.0;
  }
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    tv += std::abs(values[j + 1] - values[j]);
  }
  if (boundary == Boundary::Periodic) {
    tv += std::abs(values[0] - values[n - 1]);
  }
  return tv;
}

double total_variation(const CellState& state, const Grid1D& grid) {
  return total_variation(state.values, grid.boundary);
}

double total_mass(const CellState& state, const Grid1D& grid) {
  double sum = 0.0;
  for (double u : state.values) {
    sum += u;
  }
  return grid.dx * sum;
}

double guarantee_lambda(const Bounds& bounds) {
  if (bounds.width() <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 4.0 / bounds.width();
}

double detection_lambda(const Bounds& bounds, double dt, double dx) {
  return std::max(guarantee_lambda(bounds), dt / dx);
}

void check_state(const CellState& state, const Grid1D& grid) {
  if (state.values.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw InvalidArgument("state has " + std::to_string(state.values.size()) +
                          " values for a grid of " + std::to_string(grid.n_cells) + " cells");
  }
  for (double u : state.values) {
    if (!std::isfinite(u)) {
      throw InvalidArgument("state has a non-finite value");
    }
  }
}

std::string to_string(Boundary boundary) {
  return boundary == Boundary::Periodic ? "periodic" : "constant";
}

std::string to_string(MergingMode mode) {
  return mode == MergingMode::FullDefinition ? "full" : "five_cell_only";
}

std::string to_string(BoundsMode mode) {
  return mode == BoundsMode::Global ? "global" : "local";
}

}  // namespace elfv
