#include "elfv/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace elfv {

namespace {

// Face k separates cells k-1 and k.
InterfaceData face_data(const CellState& state, const Grid1D& grid, long k, const FluxModel& model) {
  return numerical_flux(state.at(grid, k - 1), state.at(grid, k), model);
}

// A periodic face that no region straddles.
long seam_face(const std::vector<InfluenceRegion>& regions, const Grid1D& grid) {
  const long n = grid.n_cells;
  auto straddled = [&](long f) {
    for (const auto& r : regions) {
      const long offset = ((f - r.first) % n + n) % n;
      if (offset >= 1 && offset <= r.size() - 1) {
        return true;
      }
    }
    return false;
  };
  if (!straddled(0)) {
    return 0;
  }
  for (const auto& r : regions) {
    const long f = grid.wrap(r.last + 1);
    if (!straddled(f)) {
      return f;
    }
  }
  throw DetectionError("no face outside the influence regions");
}

}  // namespace

MergedMesh build_merged_mesh(const CellState& state, const TroubleReport& report, const Grid1D& grid,
                             const FluxModel& model) {
  check_state(state, grid);
  const long n = grid.n_cells;
  const bool periodic = grid.boundary == Boundary::Periodic;

  // Region lookup by (wrapped) first cell.
  std::unordered_map<long, const InfluenceRegion*> by_first;
  for (const auto& r : report.regions) {
    by_first.emplace(grid.wrap(r.first), &r);
  }

  const long start = periodic ? seam_face(report.regions, grid) : 0;
  const long end = start + n;

  MergedMesh mesh;
  mesh.cells.reserve(static_cast<std::size_t>(n));
  InterfaceData left = face_data(state, grid, start, model);
  long k = start;
  while (k < end) {
    long count = 1;
    bool merged = false;
    double sum = state.at(grid, k);
    if (auto it = by_first.find(grid.wrap(k)); it != by_first.end()) {
      count = it->second->size();
      merged = true;
      sum = 0.0;
      for (long m = 0; m < count; ++m) {
        sum += state.at(grid, k + m);
      }
    }
    if (k + count > end) {
      throw DetectionError("influence region crosses the partition seam");
    }
    const InterfaceData right = face_data(state, grid, k + count, model);
    PartitionedCell c;
    c.left_x = grid.face(k);
    c.right_x = grid.face(k + count);
    c.left_speed = left.nu;
    c.right_speed = right.nu;
    c.left_flux = left.fhat;
    c.right_flux = right.fhat;
    c.avg = merged ? sum / static_cast<double>(count) : sum;
    c.is_merged = merged;
    c.first = k;
    c.last = k + count - 1;
    mesh.cells.push_back(c);
    left = right;
    k += count;
  }
  return mesh;
}

std::vector<StarredCell> advance(const MergedMesh& mesh, double dt) {
  std::vector<StarredCell> out;
  out.reserve(mesh.cells.size());
  for (const auto& c : mesh.cells) {
    const double l = c.left_x + c.left_speed * dt;
    const double r = c.right_x + c.right_speed * dt;
    const double width = c.starred_width(dt);
    const double mass = c.width() * c.avg - dt * (c.right_flux - c.left_flux);
    // Lines meeting exactly at the new time level (C = 4 on a shock) leave a
    // cell of zero width and zero mass.
    const double tol = 1e-12 * c.width();
    if (std::abs(width) <= tol && std::abs(mass) <= tol * (1.0 + std::abs(c.avg))) {
      out.push_back(StarredCell{l, std::max(l, r), 0.0});
      continue;
    }
    if (!(width > 0.0)) {
      std::ostringstream msg;
      msg << "starred cell over background cells " << c.first << ".." << c.last << " has width " << width
          << " (faces move at " << c.left_speed << " and " << c.right_speed << ", dt = " << dt << ")";
      throw MeshError(msg.str());
    }
    out.push_back(StarredCell{l, r, mass / width});
  }
  return out;
}

CellState project_back(std::span<const StarredCell> starred, const Grid1D& grid) {
  const long n = grid.n_cells;
  const double length = grid.length();
  std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
  std::vector<double> cover(static_cast<std::size_t>(n), 0.0);
  if (starred.empty()) {
    throw MeshError("project_back: empty starred partition");
  }

  auto deposit = [&](double l, double r, double avg, bool wrap) {
    if (!(r > l)) {
      return;
    }
    long k = static_cast<long>(std::floor((l - grid.x_lo) / grid.dx)) - 1;
    for (; grid.face(k) < r; ++k) {
      const double overlap = std::min(r, grid.face(k + 1)) - std::max(l, grid.face(k));
      if (overlap <= 0.0) {
        continue;
      }
      long j = k;
      if (wrap) {
        j = grid.wrap(k);
      } else if (k < 0 || k >= n) {
        continue;
      }
      mass[static_cast<std::size_t>(j)] += overlap * avg;
      cover[static_cast<std::size_t>(j)] += overlap;
    }
  };

  if (grid.boundary == Boundary::Periodic) {
    for (const auto& s : starred) {
      const double shift = std::floor((s.left - grid.x_lo) / length) * length;
      deposit(s.left - shift, s.right - shift, s.avg, true);
    }
  } else {
    for (const auto& s : starred) {
      deposit(std::max(s.left, grid.x_lo), std::min(s.right, grid.x_hi), s.avg, false);
    }
    // Far-field states fill whatever the moving end faces uncovered.
    deposit(grid.x_lo, std::min(starred.front().left, grid.x_hi), starred.front().avg, false);
    deposit(std::max(starred.back().right, grid.x_lo), grid.x_hi, starred.back().avg, false);
  }

  CellState out;
  out.values.resize(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (std::abs(cover[idx] - grid.dx) > 1e-10 * grid.dx) {
      std::ostringstream msg;
      msg << "project_back: cell " << j << " covered by " << cover[idx] << " instead of " << grid.dx;
      throw MeshError(msg.str());
    }
    // Dividing by the measured coverage keeps each value an exact convex
    // combination, so constant far fields do not drift over many steps.
    out.values[idx] = mass[idx] / cover[idx];
  }
  return out;
}

StepTrace el_fv_trace(const CellState& state, const Grid1D& grid, const Bounds& bounds, double dt,
                      const SchemeConfig& config, const FluxModel& model) {
  check_state(state, grid);
  if (!(dt > 0.0)) {
    throw InvalidArgument("el_fv_step: dt must be positive");
  }
  StepTrace trace;
  trace.dt = dt;
  trace.lambda = detection_lambda(bounds, dt, grid.dx);

  CellState work = state;
  trace.work_grid = grid;
  if (grid.boundary == Boundary::Constant) {
    double speed = std::max(std::abs(bounds.a), std::abs(bounds.b));
    for (double u : state.values) {
      speed = std::max(speed, std::abs(u));
    }
    const long ghosts = static_cast<long>(std::ceil(speed * dt / grid.dx)) + 4;
    trace.ghost_layers = ghosts;
    trace.work_grid = Grid1D::make(grid.x_lo - static_cast<double>(ghosts) * grid.dx,
                                   grid.x_hi + static_cast<double>(ghosts) * grid.dx,
                                   grid.n_cells + 2 * static_cast<int>(ghosts), Boundary::Constant);
    work.values.assign(static_cast<std::size_t>(trace.work_grid.n_cells), 0.0);
    for (long j = 0; j < trace.work_grid.n_cells; ++j) {
      work.values[static_cast<std::size_t>(j)] = state.at(grid, j - ghosts);
    }
  }

  DetectOptions options{config.merging_mode, config.bounds_mode};
  if (std::isfinite(trace.lambda)) {
    trace.report = detect(work, trace.lambda, trace.work_grid, bounds, options);
  } else {
    trace.report.per_cell.assign(work.values.size(), std::nullopt);
  }
  trace.mesh = build_merged_mesh(work, trace.report, trace.work_grid, model);
  trace.starred = advance(trace.mesh, dt);
  CellState projected = project_back(trace.starred, trace.work_grid);

  if (trace.ghost_layers > 0) {
    double inside = 0.0;
    for (const auto& c : trace.starred) {
      const double overlap = std::min(c.right, grid.x_hi) - std::max(c.left, grid.x_lo);
      if (overlap > 0.0) {
        inside += c.avg * overlap;
      }
    }
    trace.edge_inflow = inside - total_mass(state, grid);
    const auto g = static_cast<std::ptrdiff_t>(trace.ghost_layers);
    trace.next.values.assign(projected.values.begin() + g, projected.values.begin() + g + grid.n_cells);
  } else {
    trace.next.values = std::move(projected.values);
  }
  trace.next.time = state.time + dt;
  return trace;
}

StepResult el_fv_step_dt(const CellState& state, const Grid1D& grid, const Bounds& bounds, double dt,
                         const SchemeConfig& config, const FluxModel& model) {
  StepTrace trace = el_fv_trace(state, grid, bounds, dt, config, model);
  StepResult result;
  result.state = std::move(trace.next);
  auto& d = result.diagnostics;
  d.time = result.state.time;
  d.dt = dt;
  d.edge_inflow = trace.edge_inflow;
  if (config.record_diagnostics) {
    d.tv_before = total_variation(state, grid);
    d.tv = total_variation(result.state, grid);
    auto [lo, hi] = std::minmax_element(result.state.values.begin(), result.state.values.end());
    d.min_u = *lo;
    d.max_u = *hi;
    d.mass = total_mass(result.state, grid);
    d.n_etcs = static_cast<int>(trace.report.etcs.size());
    for (const auto& r : trace.report.regions) {
      RegionLogEntry e;
      e.first = r.first - trace.ghost_layers;
      e.last = r.last - trace.ghost_layers;
      if (grid.boundary == Boundary::Periodic) {
        const long shift = grid.wrap(e.first) - e.first;
        e.first += shift;
        e.last += shift;
      }
      e.case_tag = r.case_tag;
      d.regions.push_back(e);
    }
  }
  return result;
}

StepResult el_fv_step(const CellState& state, const Grid1D& grid, const Bounds& bounds,
                      const SchemeConfig& config, const FluxModel& model) {
  const TimeStep ts = time_step_size(bounds, grid, config);
  double dt = ts.dt;
  const double remaining = config.t_final - state.time;
  if (remaining > 0.0 && remaining < dt) {
    dt = remaining;
  }
  return el_fv_step_dt(state, grid, bounds, dt, config, model);
}

std::vector<double> starred_lambdas(const CellState& state, const Grid1D& grid, double dt,
                                    const FluxModel& model) {
  check_state(state, grid);
  const long n = grid.n_cells;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    const double nl = rh_speed(state.at(grid, j - 1), state.at(grid, j), model);
    const double nr = rh_speed(state.at(grid, j), state.at(grid, j + 1), model);
    out[static_cast<std::size_t>(j)] = dt / (grid.dx + (nr - nl) * dt);
  }
  return out;
}

}  // namespace elfv
