#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "elfv/split2d.hpp"

using namespace elfv;
using doctest::Approx;

namespace {

CellState2D make_state(int nx, int ny) {
  CellState2D s;
  s.nx = nx;
  s.ny = ny;
  s.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  return s;
}

}  // namespace

TEST_CASE("2D time step and CFL") {
  const Grid2D g = Grid2D::make(0, 2, 100, 0, 2, 100, Boundary::Constant);
  SchemeConfig cfg;
  cfg.c_factor = 3.8;
  const TimeStep ts = time_step_size_2d(Bounds{1, 0}, g, cfg);
  CHECK(ts.dt == Approx(3.8 * g.x.dx));
  CellState2D s = make_state(100, 100);
  s.values[123] = 1.0;
  CHECK(cfl_2d(ts.dt, g, s) == Approx(7.6));
  CHECK(c_factor_for_cfl(7.6, Bounds{1, 0}, g, s) == Approx(3.8));
  // Finer direction sets the step.
  const Grid2D h = Grid2D::make(0, 1, 10, 0, 1, 20, Boundary::Periodic);
  CHECK(time_step_size_2d(Bounds{1, 0}, h, cfg).dt == Approx(3.8 * h.y.dx));
}

TEST_CASE("constant 2D state is unchanged") {
  const Grid2D g = Grid2D::make(0, 1, 10, 0, 1, 12, Boundary::Periodic);
  CellState2D s = make_state(10, 12);
  std::fill(s.values.begin(), s.values.end(), 0.7);
  const CellState2D n = strang_step(s, g, Bounds{0.7, 0.7}, 0.05, SchemeConfig{});
  for (double v : n.values) CHECK(v == Approx(0.7));
  CHECK(n.time == Approx(0.05));
}

TEST_CASE("y-constant data follows the 1D x evolution") {
  const Grid2D g = Grid2D::make(0, 1, 24, 0, 1, 9, Boundary::Periodic);
  CellState2D s = make_state(24, 9);
  CellState row;
  for (int i = 0; i < 24; ++i) {
    const double v = std::sin(6.283185307179586 * g.x.cell_center(i));
    row.values.push_back(v);
    for (int j = 0; j < 9; ++j) s.at(i, j) = v;
  }
  const Bounds b = Bounds::of(s.values);
  SchemeConfig cfg;
  const double dt = time_step_size_2d(b, g, cfg).dt;
  const CellState2D n = strang_step(s, g, b, dt, cfg);
  CellState half = el_fv_step_dt(row, g.x, b, 0.5 * dt, cfg).state;
  half = el_fv_step_dt(half, g.x, b, 0.5 * dt, cfg).state;
  for (int j = 0; j < 9; ++j) {
    for (int i = 0; i < 24; ++i) {
      CHECK(std::abs(n.at(i, j) - half.values[static_cast<std::size_t>(i)]) <= 1e-12);
    }
  }
}

TEST_CASE("property: periodic 2D mass is conserved") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid2D g = Grid2D::make(0, 1, 16, 0, 1, 16, Boundary::Periodic);
    CellState2D s = make_state(16, 16);
    const double a1 = u(rng), a2 = u(rng);
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i)
        s.at(i, j) = a1 * std::sin(6.283185307179586 * g.x.cell_center(i)) +
                     a2 * std::cos(6.283185307179586 * g.y.cell_center(j));
    const Bounds b = Bounds::of(s.values);
    SchemeConfig cfg;
    cfg.c_factor = 3.0;
    StrangStats stats;
    const CellState2D n = strang_step(s, g, b, time_step_size_2d(b, g, cfg).dt, cfg, FluxModel::burgers(), &stats);
    CHECK(std::abs(total_mass(n, g) - total_mass(s, g)) <= 1e-12 * 256);
    CHECK(stats.edge_inflow == 0.0);
    const auto [lo, hi] = std::minmax_element(n.values.begin(), n.values.end());
    CHECK(*lo >= b.b - 1e-12);
    CHECK(*hi <= b.a + 1e-12);
  }
}

TEST_CASE("constant-boundary 2D mass changes by the edge inflow") {
  const Grid2D g = Grid2D::make(-0.5, 0.5, 20, -0.5, 0.5, 20, Boundary::Constant);
  CellState2D s = make_state(20, 20);
  for (int j = 0; j < 20; ++j)
    for (int i = 0; i < 20; ++i) s.at(i, j) = g.x.cell_center(i) < 0 ? 2.0 : 1.0;
  const Bounds b = Bounds::of(s.values);
  SchemeConfig cfg;
  StrangStats stats;
  const double dt = 0.01;
  const CellState2D n = strang_step(s, g, b, dt, cfg, FluxModel::burgers(), &stats);
  // Far-field inflow: rows carry f(2) - f(1) per unit length in y; columns carry nothing.
  CHECK(stats.edge_inflow == Approx(dt * 1.0 * 1.5));
  CHECK(total_mass(n, g) - total_mass(s, g) == Approx(stats.edge_inflow));
}

TEST_CASE("2D total variation") {
  const Grid2D g = Grid2D::make(0, 1, 8, 0, 1, 8, Boundary::Constant);
  CellState2D s = make_state(8, 8);
  for (int j = 0; j < 8; ++j)
    for (int i = 4; i < 8; ++i) s.at(i, j) = 1.0;
  CHECK(total_variation_2d(s, g) == Approx(8.0));
}

TEST_CASE("mismatched 2D state is rejected") {
  const Grid2D g = Grid2D::make(0, 1, 8, 0, 1, 8, Boundary::Constant);
  CellState2D s = make_state(8, 7);
  CHECK_THROWS_AS(check_state(s, g), InvalidArgument);
}
