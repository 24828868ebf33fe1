#include "elfv/split2d.hpp"

#include <algorithm>
#include <cmath>

namespace elfv {

Grid2D Grid2D::make(double x_lo, double x_hi, int nx, double y_lo, double y_hi, int ny, Boundary boundary) {
  return Grid2D{Grid1D::make(x_lo, x_hi, nx, boundary), Grid1D::make(y_lo, y_hi, ny, boundary)};
}

void check_state(const CellState2D& state, const Grid2D& grid) {
  if (state.nx != grid.x.n_cells || state.ny != grid.y.n_cells ||
      state.values.size() != static_cast<std::size_t>(grid.cell_count())) {
    throw InvalidArgument("2D state does not match the grid");
  }
  for (double u : state.values) {
    if (!std::isfinite(u)) {
      throw InvalidArgument("2D state has a non-finite entry");
    }
  }
}

TimeStep time_step_size_2d(const Bounds& bounds, const Grid2D& grid, const SchemeConfig& config) {
  // The 1D rule on the finer direction.
  Grid1D finer = grid.x.dx <= grid.y.dx ? grid.x : grid.y;
  return time_step_size(bounds, finer, config);
}

namespace {

double max_speed(const CellState2D& state) {
  double s = 0.0;
  for (double u : state.values) {
    s = std::max(s, std::abs(u));
  }
  return s;
}

}  // namespace

double cfl_2d(double dt, const Grid2D& grid, const CellState2D& state) {
  const double s = max_speed(state);
  return dt * (s / grid.x.dx + s / grid.y.dx);
}

double c_factor_for_cfl(double cfl, const Bounds& bounds, const Grid2D& grid, const CellState2D& state) {
  const double s = max_speed(state);
  if (!(s > 0.0) || !(bounds.width() > 0.0)) {
    throw InvalidArgument("c_factor_for_cfl: needs a nonzero, nonconstant state");
  }
  const double dt = cfl / (s / grid.x.dx + s / grid.y.dx);
  return dt * bounds.width() / std::min(grid.x.dx, grid.y.dx);
}

double total_mass(const CellState2D& state, const Grid2D& grid) {
  double sum = 0.0;
  for (double u : state.values) {
    sum += u;
  }
  return grid.x.dx * grid.y.dx * sum;
}

double total_variation_2d(const CellState2D& state, const Grid2D& grid) {
  check_state(state, grid);
  double tv = 0.0;
  std::vector<double> line(static_cast<std::size_t>(state.nx));
  for (int j = 0; j < state.ny; ++j) {
    for (int i = 0; i < state.nx; ++i) {
      line[static_cast<std::size_t>(i)] = state.at(i, j);
    }
    tv += total_variation(line, grid.x.boundary);
  }
  line.resize(static_cast<std::size_t>(state.ny));
  for (int i = 0; i < state.nx; ++i) {
    for (int j = 0; j < state.ny; ++j) {
      line[static_cast<std::size_t>(j)] = state.at(i, j);
    }
    tv += total_variation(line, grid.y.boundary);
  }
  return tv;
}

namespace {

void sweep_x(CellState2D& s, const Grid2D& grid, const Bounds& bounds, double dt, const SchemeConfig& config,
             const FluxModel& model, StrangStats& stats) {
  CellState row;
  row.values.resize(static_cast<std::size_t>(s.nx));
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      row.values[static_cast<std::size_t>(i)] = s.at(i, j);
    }
    const StepResult r = el_fv_step_dt(row, grid.x, bounds, dt, config, model);
    stats.n_etcs += r.diagnostics.n_etcs;
    stats.edge_inflow += grid.y.dx * r.diagnostics.edge_inflow;
    for (int i = 0; i < s.nx; ++i) {
      s.at(i, j) = r.state.values[static_cast<std::size_t>(i)];
    }
  }
}

void sweep_y(CellState2D& s, const Grid2D& grid, const Bounds& bounds, double dt, const SchemeConfig& config,
             const FluxModel& model, StrangStats& stats) {
  CellState col;
  col.values.resize(static_cast<std::size_t>(s.ny));
  for (int i = 0; i < s.nx; ++i) {
    for (int j = 0; j < s.ny; ++j) {
      col.values[static_cast<std::size_t>(j)] = s.at(i, j);
    }
    const StepResult r = el_fv_step_dt(col, grid.y, bounds, dt, config, model);
    stats.n_etcs += r.diagnostics.n_etcs;
    stats.edge_inflow += grid.x.dx * r.diagnostics.edge_inflow;
    for (int j = 0; j < s.ny; ++j) {
      s.at(i, j) = r.state.values[static_cast<std::size_t>(j)];
    }
  }
}

}  // namespace

CellState2D strang_step(const CellState2D& state, const Grid2D& grid, const Bounds& bounds, double dt,
                        const SchemeConfig& config, const FluxModel& model, StrangStats* stats) {
  check_state(state, grid);
  if (!(dt > 0.0)) {
    throw InvalidArgument("strang_step: dt must be positive");
  }
  SchemeConfig slice = config;
  slice.record_diagnostics = stats != nullptr;
  StrangStats local;
  CellState2D next = state;
  sweep_x(next, grid, bounds, 0.5 * dt, slice, model, local);
  sweep_y(next, grid, bounds, dt, slice, model, local);
  sweep_x(next, grid, bounds, 0.5 * dt, slice, model, local);
  next.time = state.time + dt;
  if (stats != nullptr) {
    *stats = local;
  }
  return next;
}

}  // namespace elfv
