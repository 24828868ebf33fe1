#pragma once

#include <span>
#include <vector>

#include "elfv/core.hpp"
#include "elfv/detect.hpp"
#include "elfv/flux.hpp"

namespace elfv {

/// A starred cell collapsed to zero or negative width, or the projected
/// tiling does not cover the background mesh.
class MeshError : public Error {
public:
  using Error::Error;
};

/// One cell of the space-time partition, either a background cell or a
/// merged influence region. Positions are at t^n.
struct PartitionedCell {
  double left_x = 0.0;
  double right_x = 0.0;
  double left_speed = 0.0;
  double right_speed = 0.0;
  double avg = 0.0;
  double left_flux = 0.0;
  double right_flux = 0.0;
  bool is_merged = false;
  /// Background cells covered, as an unwrapped inclusive index range.
  long first = 0;
  long last = 0;

  double width() const { return right_x - left_x; }
  double starred_width(double dt) const { return width() + (right_speed - left_speed) * dt; }
};

/// Partition covering the domain once, ordered left to right. On periodic
/// grids the first cell starts at a face that no region straddles, so the
/// sequence may run past x_hi.
struct MergedMesh {
  std::vector<PartitionedCell> cells;
};

struct StarredCell {
  double left = 0.0;
  double right = 0.0;
  double avg = 0.0;
};

/// Merges every region of `report` into one cell. Interface speeds and
/// fluxes are always computed from the untouched background averages; a
/// merged cell keeps those of its two outer faces.
MergedMesh build_merged_mesh(const CellState& state, const TroubleReport& report, const Grid1D& grid,
                             const FluxModel& model);

/// Forward Euler update on the moving cells:
/// dx* u* = dx u - dt (F_right - F_left). Throws MeshError on dx* < 0 or on
/// dx* = 0 with nonzero mass; a massless zero-width cell is kept as is.
std::vector<StarredCell> advance(const MergedMesh& mesh, double dt);

/// Overlap-weighted average of the starred solution on the background
/// cells. Periodic grids wrap the starred tiling; constant grids clip it and
/// extend the end states over any uncovered margin.
CellState project_back(std::span<const StarredCell> starred, const Grid1D& grid);

struct RegionLogEntry {
  long first = 0;
  long last = 0;
  RegionCase case_tag = RegionCase::I4;
};

struct StepDiagnostics {
  long step = 0;
  double time = 0.0;
  double dt = 0.0;
  double tv_before = 0.0;
  double tv = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double mass = 0.0;
  int n_etcs = 0;
  /// Mass that crossed into [x_lo, x_hi] through the domain edges during the
  /// step, measured on the starred tiling. Zero on periodic grids.
  double edge_inflow = 0.0;
  std::vector<RegionLogEntry> regions;
};

struct StepResult {
  CellState state;
  StepDiagnostics diagnostics;
};

/// Intermediate products of one step. For constant-boundary grids the
/// pipeline runs on `work_grid`, the background grid padded with
/// `ghost_layers` constant cells on each side, and report/mesh/starred are
/// expressed in that padded indexing.
struct StepTrace {
  Grid1D work_grid;
  long ghost_layers = 0;
  double dt = 0.0;
  double lambda = 0.0;
  TroubleReport report;
  MergedMesh mesh;
  std::vector<StarredCell> starred;
  CellState next;
  /// See StepDiagnostics::edge_inflow.
  double edge_inflow = 0.0;
};

/// Full step pipeline with an explicit dt: detect, merge overlaps, build
/// the merged mesh, advance and project back.
StepTrace el_fv_trace(const CellState& state, const Grid1D& grid, const Bounds& bounds, double dt,
                      const SchemeConfig& config, const FluxModel& model = FluxModel::burgers());

StepResult el_fv_step_dt(const CellState& state, const Grid1D& grid, const Bounds& bounds, double dt,
                         const SchemeConfig& config, const FluxModel& model = FluxModel::burgers());

/// One step with dt from time_step_size, shortened to land on t_final.
StepResult el_fv_step(const CellState& state, const Grid1D& grid, const Bounds& bounds,
                      const SchemeConfig& config, const FluxModel& model = FluxModel::burgers());

/// Background-cell lambda_j = dt / dx*_j for the unmerged partition.
std::vector<double> starred_lambdas(const CellState& state, const Grid1D& grid, double dt,
                                    const FluxModel& model = FluxModel::burgers());

}  // namespace elfv
