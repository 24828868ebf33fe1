#pragma once

#include <array>
#include <span>
#include <vector>

#include "elfv/core.hpp"
#include "elfv/detect.hpp"
#include "elfv/flux.hpp"

/// Checks of the reassignment argument behind the TVD/MPP time-step bound.
/// Nothing here runs on the solver path.
namespace elfv::theory {

/// Thrown when inputs violate a hypothesis; the message names the failed
/// inequality.
class HypothesisError : public Error {
public:
  using Error::Error;
};

/// The seven values around an ETC, left to right.
struct RegionValues {
  double s_l = 0.0;
  double z_l = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double z3 = 0.0;
  double z_r = 0.0;
  double s_r = 0.0;

  double sum() const { return z1 + z2 + z3; }
  std::array<double, 7> as_array() const { return {s_l, z_l, z1, z2, z3, z_r, s_r}; }
  static RegionValues from_array(const std::array<double, 7>& v);
};

using Triple = std::array<double, 3>;

/// TV of a finite sequence, no wrap.
double tv_sequence(std::span<const double> values);

/// (max, sum - max - min, min). Requires max{z1,z2} >= max{z2,z3}.
Triple sort_descend_representative(double z1, double z2, double z3);

struct GBounds {
  double z1_min = 0.0;
  double z3_max = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
  /// G is empty (a == b).
  bool empty = false;
};

/// Lower bound of z1, upper bound of z3, and the range of A = z1 + z2 + z3
/// over G for lambda = 4 / (a - b).
GBounds bounds_of_G(double a, double b);

/// True iff (z1, z2, z3) lies in G up to `tol`.
bool in_G(const Triple& z, double a, double b, double lambda, double tol = 1e-12);

struct MinTvResult {
  Triple z{};
  int case_id = 0;
};

/// Minimum-TV representative of G with the same sum, dispatched on the
/// ten-row table in printed order. Expects z1 >= z2 >= z3, z1 >= z3 + 2/lambda.
MinTvResult min_tv_representative(const RegionValues& vals, double a, double b, double lambda);

/// Grid search of min TV(z_l, p1, p2, p3, z_r) over G with p1 + p2 + p3 = A.
/// p1 runs over grid_steps + 1 points of [b, a]; for each p1 the feasible p3
/// interval is sampled on the same grid plus both endpoints.
double brute_force_min_tv(const RegionValues& vals, double a, double b, double lambda, int grid_steps = 200);

/// Middle swap for a type IV ETC: (z1, z3, z2, z4).
std::array<double, 4> reassign_type4(double z1, double z2, double z3, double z4, double a, double b);

/// Region case from the seven values (I2, I3 or I4; I1 is a type IV matter).
RegionCase influence_case(const RegionValues& vals, double a, double b);

struct Reassigned {
  /// s_l, z_l/r_l, r1, r2, r3, z_r/r_r, s_r.
  std::array<double, 7> values{};
  int table_case = 0;
  RegionCase tag = RegionCase::I4;
};

/// Reassigns the interior of an I2/I3/I4 influence region so that no
/// partition lines cross for lambda = 4/(a-b). The raw values are first
/// sorted and mapped to the table representative. Boundary cells of the
/// region are copied bitwise.
Reassigned redefine_influence(const RegionValues& vals, RegionCase tag, double a, double b, double lambda);

/// True iff lambda_tilde * (v[i-1] - v[i+1]) < 2 for every interior i;
/// nonpositive differences never constrain.
bool check_no_intersection(std::span<const double> values, double lambda_tilde);

struct HartenForm {
  /// Indexed by face: c[j] = C_{j+1/2}, d[j] = D_{j+1/2}.
  std::vector<double> c;
  std::vector<double> d;
  /// Faces where a coefficient is negative or
  /// lambda_j C_{j+1/2} + lambda_{j+1} D_{j+1/2} > 1.
  std::vector<long> violations;
};

/// Incremental-form coefficients of the unmerged update.
HartenForm harten_step_form(const CellState& state, const Grid1D& grid, const FluxModel& model,
                            std::span<const double> lambda_j);

/// u_j + lambda_j (C_{j+1/2} (u_{j+1} - u_j) - D_{j-1/2} (u_j - u_{j-1})).
std::vector<double> harten_update(const CellState& state, const Grid1D& grid, const HartenForm& form,
                                  std::span<const double> lambda_j);

}  // namespace elfv::theory
