#pragma once

#include <optional>
#include <utility>

#include "elfv/core.hpp"

namespace elfv {

/// Reference solution for error measurement.
struct ExactSolution {
  enum class Kind { SmoothSin, RiemannShock, RiemannRarefaction };

  Kind kind = Kind::SmoothSin;
  double u_left = 0.0;
  double u_right = 0.0;

  static ExactSolution smooth_sin() { return ExactSolution{}; }
  /// Throws InvalidArgument unless u_left > u_right.
  static ExactSolution shock(double u_left, double u_right);
  /// Throws InvalidArgument unless u_left < u_right.
  static ExactSolution rarefaction(double u_left, double u_right);

  /// Breaking time (1 for sin data), none for Riemann data.
  std::optional<double> shock_time() const;
  /// Discontinuity position at time t, if one exists.
  std::optional<double> shock_position(double t) const;

  double operator()(double x, double t) const;
};

/// Burgers with u0 = sin x, 2pi-periodic. Solves xi + t sin(xi) = x for the
/// foot of the characteristic; after breaking (t > 1) the entropy solution
/// is taken from the branch on [0, pi] and extended by u(x) = -u(2pi - x).
/// At x = pi (mod 2pi) the shock value 0 is returned.
double eval_sin_exact(double x, double t, double tol = 1e-14);

/// Riemann data with the jump at x = 0 at t = 0.
double eval_riemann(const ExactSolution& kind, double x, double t);

/// dx * sum |u_j - exact(center_j, t)| over cells not touching the closed
/// exclusion interval.
double l1_error(const CellState& state, const Grid1D& grid, const ExactSolution& exact, double t,
                std::optional<std::pair<double, double>> exclusion = std::nullopt);

/// l1_error divided by the domain length, i.e. (1/N) sum |e_j| over the
/// measured cells.
double mean_l1_error(const CellState& state, const Grid1D& grid, const ExactSolution& exact, double t,
                     std::optional<std::pair<double, double>> exclusion = std::nullopt);

}  // namespace elfv
