#pragma once

#include <vector>

#include "elfv/core.hpp"
#include "elfv/evolve.hpp"
#include "elfv/flux.hpp"

namespace elfv {

/// Tensor-product mesh. Both directions share one boundary kind.
struct Grid2D {
  Grid1D x;
  Grid1D y;

  static Grid2D make(double x_lo, double x_hi, int nx, double y_lo, double y_hi, int ny, Boundary boundary);
  long cell_count() const { return static_cast<long>(x.n_cells) * y.n_cells; }
};

/// Cell averages stored row by row: values[j * nx + i] is cell (i, j),
/// i along x and j along y.
struct CellState2D {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
  double time = 0.0;

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

void check_state(const CellState2D& state, const Grid2D& grid);

/// dt = C min(dx, dy) / (a - b).
TimeStep time_step_size_2d(const Bounds& bounds, const Grid2D& grid, const SchemeConfig& config);

/// dt (max|u| / dx + max|u| / dy) for Burgers.
double cfl_2d(double dt, const Grid2D& grid, const CellState2D& state);

/// C giving the requested 2D CFL number for this state.
double c_factor_for_cfl(double cfl, const Bounds& bounds, const Grid2D& grid, const CellState2D& state);

/// dx dy sum u.
double total_mass(const CellState2D& state, const Grid2D& grid);

struct StrangStats {
  /// ETCs over all slice steps.
  long n_etcs = 0;
  /// Mass entering the domain through its edges, summed over slice steps.
  double edge_inflow = 0.0;
};

/// x half step, y full step, x half step; every slice advances with the 1D
/// EL FV step and the global bounds.
CellState2D strang_step(const CellState2D& state, const Grid2D& grid, const Bounds& bounds, double dt,
                        const SchemeConfig& config, const FluxModel& model = FluxModel::burgers(),
                        StrangStats* stats = nullptr);

/// Sum of |jumps| along every row and column, no wrap for constant grids.
double total_variation_2d(const CellState2D& state, const Grid2D& grid);

}  // namespace elfv
