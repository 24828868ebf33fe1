#include "elfv/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace elfv {

ExactSolution ExactSolution::shock(double u_left, double u_right) {
  if (!(u_left > u_right)) {
    throw InvalidArgument("shock data needs u_left > u_right");
  }
  return ExactSolution{Kind::RiemannShock, u_left, u_right};
}

ExactSolution ExactSolution::rarefaction(double u_left, double u_right) {
  if (!(u_left < u_right)) {
    throw InvalidArgument("rarefaction data needs u_left < u_right");
  }
  return ExactSolution{Kind::RiemannRarefaction, u_left, u_right};
}

std::optional<double> ExactSolution::shock_time() const {
  if (kind == Kind::SmoothSin) {
    return 1.0;
  }
  return std::nullopt;
}

std::optional<double> ExactSolution::shock_position(double t) const {
  switch (kind) {
    case Kind::SmoothSin:
      if (t > 1.0) {
        return std::numbers::pi;
      }
      return std::nullopt;
    case Kind::RiemannShock:
      return 0.5 * (u_left + u_right) * t;
    case Kind::RiemannRarefaction:
      return std::nullopt;
  }
  return std::nullopt;
}

double ExactSolution::operator()(double x, double t) const {
  if (kind == Kind::SmoothSin) {
    return eval_sin_exact(x, t);
  }
  return eval_riemann(*this, x, t);
}

namespace {

// Root of xi + t sin(xi) = x on [0, xi_max], where g is increasing.
double characteristic_foot(double x, double t, double tol) {
  constexpr double pi = std::numbers::pi;
  const double xi_max = t <= 1.0 ? pi : std::acos(-1.0 / t);
  double lo = 0.0;
  double hi = xi_max;
  double xi = std::clamp(x / (1.0 + t), lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double g = xi + t * std::sin(xi) - x;
    if (std::abs(g) <= tol) {
      return xi;
    }
    if (g < 0.0) {
      lo = xi;
    } else {
      hi = xi;
    }
    const double dg = 1.0 + t * std::cos(xi);
    double next = dg > 0.0 ? xi - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(xi))) {
      return next;
    }
    xi = next;
  }
  throw Error("eval_sin_exact: characteristic solve did not converge");
}

}  // namespace

double eval_sin_exact(double x, double t, double tol) {
  constexpr double pi = std::numbers::pi;
  constexpr double two_pi = 2.0 * pi;
  if (t < 0.0) {
    throw InvalidArgument("eval_sin_exact: t must be nonnegative");
  }
  double y = std::fmod(x, two_pi);
  if (y < 0.0) {
    y += two_pi;
  }
  if (y == 0.0 || y == pi) {
    return 0.0;
  }
  if (y > pi) {
    return -eval_sin_exact(two_pi - y, t, tol);
  }
  if (t == 0.0) {
    return std::sin(y);
  }
  return std::sin(characteristic_foot(y, t, tol));
}

double eval_riemann(const ExactSolution& kind, double x, double t) {
  if (t < 0.0) {
    throw InvalidArgument("eval_riemann: t must be nonnegative");
  }
  const double ul = kind.u_left;
  const double ur = kind.u_right;
  switch (kind.kind) {
    case ExactSolution::Kind::RiemannShock:
      return x < 0.5 * (ul + ur) * t ? ul : ur;
    case ExactSolution::Kind::RiemannRarefaction:
      if (x <= ul * t) {
        return ul;
      }
      if (x >= ur * t) {
        return ur;
      }
      return x / t;
    case ExactSolution::Kind::SmoothSin:
      break;
  }
  throw InvalidArgument("eval_riemann: not a Riemann solution");
}

double l1_error(const CellState& state, const Grid1D& grid, const ExactSolution& exact, double t,
                std::optional<std::pair<double, double>> exclusion) {
  check_state(state, grid);
  double sum = 0.0;
  for (long j = 0; j < grid.n_cells; ++j) {
    if (exclusion) {
      const double l = grid.face(j);
      const double r = grid.face(j + 1);
      if (r >= exclusion->first && l <= exclusion->second) {
        continue;
      }
    }
    sum += std::abs(state.values[static_cast<std::size_t>(j)] - exact(grid.cell_center(j), t));
  }
  return grid.dx * sum;
}

double mean_l1_error(const CellState& state, const Grid1D& grid, const ExactSolution& exact, double t,
                     std::optional<std::pair<double, double>> exclusion) {
  return l1_error(state, grid, exact, t, exclusion) / grid.length();
}

}  // namespace elfv
