#include "elfv/detect.hpp"

#include <algorithm>
#include <array>

namespace elfv {

std::optional<TroubleType> classify_cell(double u_prev, double u_cell, double u_next, double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("classify_cell: lambda must be positive");
  }
  const double gap = 2.0 / lambda;
  if (u_prev > u_next + gap) {
    return TroubleType::TypeI;
  }
  if (u_prev > u_cell + gap && u_prev >= u_next && u_next >= u_cell) {
    return TroubleType::TypeII;
  }
  if (u_cell > u_next + gap && u_cell >= u_prev && u_prev >= u_next) {
    return TroubleType::TypeIII;
  }
  if (u_prev > u_cell + gap) {
    return TroubleType::TypeIV;
  }
  if (u_cell > u_next + gap) {
    return TroubleType::TypeV;
  }
  return std::nullopt;
}

namespace {

std::optional<TroubleType> classify_at(const CellState& state, const Grid1D& grid, long j, double lambda) {
  return classify_cell(state.at(grid, j - 1), state.at(grid, j), state.at(grid, j + 1), lambda);
}

InfluenceRegion clamp_to_line(InfluenceRegion r, const Grid1D& grid) {
  if (grid.boundary == Boundary::Constant) {
    const long n = grid.n_cells;
    r.first = std::clamp(r.first, 0L, n - 1);
    r.last = std::clamp(r.last, 0L, n - 1);
    r.etc_index = std::clamp(r.etc_index, r.first, r.last);
  }
  return r;
}

}  // namespace

InfluenceRegion build_influence_region(long etc, const CellState& state, const Grid1D& grid, const Bounds& bounds,
                                       double lambda, const DetectOptions& options) {
  InfluenceRegion r;
  r.etc_index = etc;
  if (options.merging == MergingMode::FiveCellOnly) {
    r.first = etc - 2;
    r.last = etc + 2;
    r.case_tag = RegionCase::I4;
    return clamp_to_line(r, grid);
  }

  if (classify_at(state, grid, etc, lambda) == TroubleType::TypeIV) {
    r.first = etc - 2;
    r.last = etc + 1;
    r.case_tag = RegionCase::I1;
    return clamp_to_line(r, grid);
  }

  // s_l, z_l, z1, z2, z3, z_r, s_r
  std::array<double, 7> w{};
  for (long k = 0; k < 7; ++k) {
    w[static_cast<std::size_t>(k)] = state.at(grid, etc - 3 + k);
  }
  double a = bounds.a;
  double b = bounds.b;
  if (options.bounds_mode == BoundsMode::LocalPerRegion) {
    auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    a = *hi;
    b = *lo;
  }
  const double s_l = w[0], z_l = w[1], z_r = w[5], s_r = w[6];
  const double sum = w[2] + w[3] + w[4];

  if (sum > (7 * a + 5 * b) / 4 && (z_r < (a + 3 * b) / 4 || s_r + z_r < (a + 3 * b) / 2)) {
    r.first = etc - 2;
    r.last = etc + 3;
    r.case_tag = RegionCase::I2;
  } else if (sum < (5 * a + 7 * b) / 4 && (z_l > (3 * a + b) / 4 || s_l + z_l > (3 * a + b) / 2)) {
    r.first = etc - 3;
    r.last = etc + 2;
    r.case_tag = RegionCase::I3;
  } else {
    r.first = etc - 2;
    r.last = etc + 2;
    r.case_tag = RegionCase::I4;
  }
  return clamp_to_line(r, grid);
}

TroubleReport select_etcs(const CellState& state, double lambda, const Grid1D& grid, const Bounds& bounds,
                          const DetectOptions& options) {
  check_state(state, grid);
  if (!(lambda > 0.0)) {
    throw InvalidArgument("select_etcs: lambda must be positive");
  }
  const long n = grid.n_cells;
  TroubleReport report;
  report.per_cell.resize(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    report.per_cell[static_cast<std::size_t>(j)] = classify_at(state, grid, j, lambda);
  }

  long start = 0;
  if (grid.boundary == Boundary::Periodic) {
    auto it = std::find(report.per_cell.begin(), report.per_cell.end(), std::nullopt);
    if (it == report.per_cell.end()) {
      throw DetectionError("every cell is troubled: the time step violates the method's assumptions");
    }
    start = it - report.per_cell.begin();
  }

  long i = start;
  const long end = start + n;
  while (i < end) {
    const auto type = report.per_cell[static_cast<std::size_t>(grid.wrap(i))];
    if (!type) {
      ++i;
      continue;
    }
    long etc = *type == TroubleType::TypeV ? i + 1 : i;
    if (grid.boundary == Boundary::Constant) {
      etc = std::min(etc, n - 1);
    }
    const InfluenceRegion region = build_influence_region(etc, state, grid, bounds, lambda, options);
    report.etcs.push_back(etc);
    report.regions.push_back(region);
    i = std::max(i + 1, region.last);
  }
  return report;
}

std::vector<InfluenceRegion> merge_overlaps(std::vector<InfluenceRegion> regions, const Grid1D& grid) {
  if (regions.empty()) {
    return regions;
  }
  std::stable_sort(regions.begin(), regions.end(),
                   [](const InfluenceRegion& l, const InfluenceRegion& r) { return l.first < r.first; });

  auto unite = [](InfluenceRegion& into, const InfluenceRegion& other, long shift) {
    into.first = std::min(into.first, other.first + shift);
    into.last = std::max(into.last, other.last + shift);
    into.case_tag = RegionCase::Overlap;
  };

  std::vector<InfluenceRegion> merged;
  merged.push_back(regions.front());
  for (std::size_t k = 1; k < regions.size(); ++k) {
    if (regions[k].first <= merged.back().last) {
      unite(merged.back(), regions[k], 0);
    } else {
      merged.push_back(regions[k]);
    }
  }

  const long n = grid.n_cells;
  if (grid.boundary == Boundary::Periodic) {
    while (merged.size() > 1 && merged.back().last >= merged.front().first + n) {
      unite(merged.back(), merged.front(), n);
      merged.erase(merged.begin());
    }
  }
  for (const auto& r : merged) {
    if (r.size() >= n - 2) {
      throw DetectionError("merged influence region spans " + std::to_string(r.size()) + " of " +
                           std::to_string(n) + " cells: mesh too coarse for this time step");
    }
  }
  return merged;
}

TroubleReport detect(const CellState& state, double lambda, const Grid1D& grid, const Bounds& bounds,
                     const DetectOptions& options) {
  TroubleReport report = select_etcs(state, lambda, grid, bounds, options);
  report.regions = merge_overlaps(std::move(report.regions), grid);
  return report;
}

std::string to_string(TroubleType type) {
  switch (type) {
    case TroubleType::TypeI: return "I";
    case TroubleType::TypeII: return "II";
    case TroubleType::TypeIII: return "III";
    case TroubleType::TypeIV: return "IV";
    case TroubleType::TypeV: return "V";
  }
  return "?";
}

std::string to_string(RegionCase tag) {
  switch (tag) {
    case RegionCase::I1: return "I1";
    case RegionCase::I2: return "I2";
    case RegionCase::I3: return "I3";
    case RegionCase::I4: return "I4";
    case RegionCase::Overlap: return "Overlap";
  }
  return "?";
}

}  // namespace elfv
