#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elfv/core.hpp"

namespace elfv {

enum class TroubleType { TypeI, TypeII, TypeIII, TypeIV, TypeV };

enum class RegionCase { I1, I2, I3, I4, Overlap };

/// Cells merged around an effective troubled cell (ETC).
///
/// Indices are unwrapped: on a periodic grid `first` may be negative and
/// `last` may reach past n_cells - 1; Grid1D::wrap maps them back.
struct InfluenceRegion {
  long etc_index = 0;
  long first = 0;
  long last = 0;
  RegionCase case_tag = RegionCase::I4;

  long size() const { return last - first + 1; }
  /// Cell adjacent to the region on the left (the s_l cell).
  long left_neighbor() const { return first - 1; }
  /// Cell adjacent to the region on the right (the s_r cell).
  long right_neighbor() const { return last + 1; }
};

struct TroubleReport {
  std::vector<std::optional<TroubleType>> per_cell;
  std::vector<long> etcs;
  std::vector<InfluenceRegion> regions;
};

/// Raised when the step size is too large for influence regions to stay
/// local (no untroubled anchor, or a merged region wrapping the domain).
class DetectionError : public Error {
public:
  using Error::Error;
};

struct DetectOptions {
  MergingMode merging = MergingMode::FullDefinition;
  BoundsMode bounds_mode = BoundsMode::Global;
};

/// Classifies the middle cell of (u_prev, u_cell, u_next). The five types
/// are tested in order I, II, III, IV, V, so at most one is returned.
std::optional<TroubleType> classify_cell(double u_prev, double u_cell, double u_next, double lambda);

/// Left-to-right ETC scan. Regions are returned as found, before overlap
/// merging; after each region the scan resumes at the region's last cell.
TroubleReport select_etcs(const CellState& state, double lambda, const Grid1D& grid, const Bounds& bounds,
                          const DetectOptions& options = {});

/// Influence region of `etc` (cases I1-I4). With BoundsMode::LocalPerRegion
/// the thresholds use the extrema of the 7-cell window etc-3..etc+3.
InfluenceRegion build_influence_region(long etc, const CellState& state, const Grid1D& grid, const Bounds& bounds,
                                       double lambda, const DetectOptions& options = {});

/// Replaces intersecting regions by their union (tagged Overlap), including
/// the last/first pair across a periodic seam. Throws DetectionError when a
/// union covers n_cells - 2 cells or more.
std::vector<InfluenceRegion> merge_overlaps(std::vector<InfluenceRegion> regions, const Grid1D& grid);

/// select_etcs followed by merge_overlaps.
TroubleReport detect(const CellState& state, double lambda, const Grid1D& grid, const Bounds& bounds,
                     const DetectOptions& options = {});

std::string to_string(TroubleType type);
std::string to_string(RegionCase tag);

}  // namespace elfv
