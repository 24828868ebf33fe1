#pragma once

#include <functional>

namespace elfv {

/// Strictly convex flux f together with its derivative.
struct FluxModel {
  std::function<double(double)> flux;
  std::function<double(double)> dflux;
  /// Optional closed form of [f]/[u]; avoids cancellation for small jumps.
  std::function<double(double, double)> jump_speed;

  /// f(u) = u^2 / 2.
  static FluxModel burgers();
};

/// Quantities attached to one cell interface.
struct InterfaceData {
  double nu = 0.0;     ///< partition-line speed
  double alpha = 0.0;  ///< viscosity, zero across shocks
  double fhat = 0.0;   ///< numerical flux of f - nu u
};

/// Rankine-Hugoniot speed [f]/[u]; f'(u_left) when the jump vanishes.
double rh_speed(double u_left, double u_right, const FluxModel& model);

/// max{f'(u_right) - nu, nu - f'(u_left), 0}.
double viscosity(double u_left, double u_right, const FluxModel& model);

/// Modified Lax-Friedrichs flux F - (alpha/2)(u_right - u_left) with
/// F = f(u_left) - nu u_left.
InterfaceData numerical_flux(double u_left, double u_right, const FluxModel& model);

}  // namespace elfv
