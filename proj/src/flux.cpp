#include "elfv/flux.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace elfv {

FluxModel FluxModel::burgers() {
  return FluxModel{[](double u) { return 0.5 * u * u; }, [](double u) { return u; },
                   [](double ul, double ur) { return 0.5 * (ul + ur); }};
}

namespace {

bool is_jump(double u_left, double u_right) {
  const double eps = 1e-13 * (1.0 + std::abs(u_left) + std::abs(u_right));
  return std::abs(u_right - u_left) > eps;
}

}  // namespace

double rh_speed(double u_left, double u_right, const FluxModel& model) {
  if (model.jump_speed) {
    return model.jump_speed(u_left, u_right);
  }
  if (is_jump(u_left, u_right)) {
    return (model.flux(u_right) - model.flux(u_left)) / (u_right - u_left);
  }
  return model.dflux(u_left);
}

double viscosity(double u_left, double u_right, const FluxModel& model) {
  const double nu = rh_speed(u_left, u_right, model);
  return std::max({model.dflux(u_right) - nu, nu - model.dflux(u_left), 0.0});
}

InterfaceData numerical_flux(double u_left, double u_right, const FluxModel& model) {
  InterfaceData d;
  d.nu = rh_speed(u_left, u_right, model);
  d.alpha = std::max({model.dflux(u_right) - d.nu, d.nu - model.dflux(u_left), 0.0});
  const double f_left = model.flux(u_left) - d.nu * u_left;
  assert(std::abs(f_left - (model.flux(u_right) - d.nu * u_right)) <=
         1e-10 * (1.0 + std::abs(model.flux(u_left)) + std::abs(model.flux(u_right))));
  d.fhat = f_left - 0.5 * d.alpha * (u_right - u_left);
  return d;
}

}  // namespace elfv
