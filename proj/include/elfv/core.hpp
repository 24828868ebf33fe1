#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace elfv {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, state or configuration handed to a public entry point.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

enum class Boundary { Periodic, Constant };

enum class BoundsMode { Global, LocalPerRegion };

/// FiveCellOnly replaces every influence region by the 5 cells centred at
/// the ETC. It exists only to demonstrate why the 4- and 6-cell cases are
/// needed and voids the TVD/MPP guarantee.
enum class MergingMode { FullDefinition, FiveCellOnly };

/// Uniform 1D background mesh.
///
/// Cells are indexed 0..n_cells-1, cell j covers
/// [x_lo + j dx, x_lo + (j+1) dx]. Face k sits at x_lo + k dx, so face j is
/// the left face of cell j.
struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_cells = 0;
  double dx = 0.0;
  Boundary boundary = Boundary::Periodic;

  /// Throws InvalidArgument unless x_hi > x_lo and n_cells >= 7.
  static Grid1D make(double x_lo, double x_hi, int n_cells, Boundary boundary);

  double cell_center(long j) const { return x_lo + (static_cast<double>(j) + 0.5) * dx; }
  double face(long k) const { return x_lo + static_cast<double>(k) * dx; }
  double length() const { return x_hi - x_lo; }

  /// Maps an arbitrary index onto a stored cell: modulo n for periodic
  /// grids, clamped for constant-extension grids.
  long wrap(long j) const;
};

struct CellState {
  std::vector<double> values;
  double time = 0.0;

  std::size_t size() const { return values.size(); }
  /// Value seen through the grid's boundary handling.
  double at(const Grid1D& grid, long j) const { return values[static_cast<std::size_t>(grid.wrap(j))]; }
};

/// Global bounds b <= u <= a of the admitted data.
struct Bounds {
  double a = 0.0;
  double b = 0.0;

  static Bounds of(std::span<const double> values);
  double width() const { return a - b; }
  double mid() const { return 0.5 * (a + b); }
};

struct SchemeConfig {
  double c_factor = 3.9;
  BoundsMode bounds_mode = BoundsMode::Global;
  double t_final = 1.0;
  bool record_diagnostics = true;
  MergingMode merging_mode = MergingMode::FullDefinition;
};

struct TimeStep {
  double dt = 0.0;
  /// a == b: the state is constant and dt was set to dx.
  bool degenerate = false;
  /// dt < 4 dx / (a - b), i.e. c_factor < 4.
  bool guaranteed = false;
};

/// dt = C dx / (a - b).
TimeStep time_step_size(const Bounds& bounds, const Grid1D& grid, const SchemeConfig& config);

/// Classical CFL number (dt/dx) max_j |u_j| for Burgers.
double classical_cfl(double dt, const Grid1D& grid, const CellState& state);

double total_variation(const CellState& state, const Grid1D& grid);
double total_variation(std::span<const double> values, Boundary boundary);

/// dx * sum_j u_j.
double total_mass(const CellState& state, const Grid1D& grid);

/// lambda = 4 / (a - b), the largest dt/dx for which the scheme is proven
/// TVD and MPP. Infinite when a == b.
double guarantee_lambda(const Bounds& bounds);

/// Lambda used to classify troubled cells for a step of size dt: the
/// guarantee lambda, or dt/dx when the step exceeds the guarantee so that
/// every pair of intersecting partition lines is still flagged.
double detection_lambda(const Bounds& bounds, double dt, double dx);

void check_state(const CellState& state, const Grid1D& grid);

std::string to_string(Boundary boundary);
std::string to_string(MergingMode mode);
std::string to_string(BoundsMode mode);

}  // namespace elfv
