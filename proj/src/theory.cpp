#include "elfv/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace elfv::theory {

namespace {

[[noreturn]] void fail(const std::string& what) { throw HypothesisError(what); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

RegionValues mirror(const RegionValues& v, double a, double b) {
  const double s = a + b;
  return RegionValues{s - v.s_r, s - v.z_r, s - v.z3, s - v.z2, s - v.z1, s - v.z_l, s - v.s_l};
}

Triple mirror(const Triple& z, double a, double b) {
  const double s = a + b;
  return {s - z[2], s - z[1], s - z[0]};
}

RegionCase mirror(RegionCase tag) {
  if (tag == RegionCase::I2) {
    return RegionCase::I3;
  }
  if (tag == RegionCase::I3) {
    return RegionCase::I2;
  }
  return tag;
}

// Interior values r1, r2, r3 and, for six-cell regions, the value r_r that
// replaces z_r.
struct Interior {
  Triple r{};
  std::optional<double> r_right;
};

// Case-3 form (z1 = z2 = A/3 + L/3, z3 = A/3 - 2L/3) with A >= a + 2b.
Interior special_right(const Triple& z, const RegionValues& v, RegionCase tag, double a, double b,
                       double lambda) {
  const double L = 2.0 / lambda;
  const double m = 0.5 * (a + b);
  const double A = z[0] + z[1] + z[2];
  Interior out;
  if (A <= (7 * a + 5 * b) / 4) {
    out.r = {z[0], m, z[1] + z[2] - m};
    return out;
  }
  if (tag != RegionCase::I2) {
    if (z[1] <= v.z_r + L) {
      out.r = z;
    } else {
      out.r = {z[0], v.z_r + L, z[1] + z[2] - (v.z_r + L)};
    }
    return out;
  }
  // Six cells: the extra cell z_r is reassigned as well.
  const double h = 1.0 / lambda;
  const double z2 = z[1] + z[2] - m;
  const double zr = v.z_r;
  double r2 = z2;
  double rr = zr;
  if (z2 >= m + h && zr <= m - h) {
    r2 = z2 - h;
    rr = zr + h;
  } else if (z2 <= m + h && zr <= m - h) {
    r2 = m;
    rr = z2 + zr - m;
  } else if (z2 >= m + h && zr >= m - h) {
    rr = m;
    r2 = z2 + zr - m;
  }
  out.r = {z[0], r2, m};
  out.r_right = rr;
  return out;
}

// Case-6 form, handled as the reflection of special_right.
Interior special_left(const Triple& z, const RegionValues& v, RegionCase tag, double a, double b,
                      double lambda) {
  Interior m = special_right(mirror(z, a, b), mirror(v, a, b), mirror(tag), a, b, lambda);
  if (m.r_right) {
    fail("special_left: six-cell reflection reached from a left-biased table case");
  }
  return Interior{mirror(m.r, a, b), std::nullopt};
}

// Redefinition for I2 and I4 regions (I3 is reflected onto I2 by the caller).
Reassigned redefine_right(const RegionValues& raw, RegionCase tag, double a, double b, double lambda) {
  const double L = 2.0 / lambda;
  RegionValues v = raw;
  const Triple s = sort_descend_representative(raw.z1, raw.z2, raw.z3);
  v.z1 = s[0];
  v.z2 = s[1];
  v.z3 = s[2];
  const MinTvResult rep = min_tv_representative(v, a, b, lambda);
  const Triple& z = rep.z;
  const double A = z[0] + z[1] + z[2];

  Interior in;
  switch (rep.case_id) {
    case 3:
      in = A >= a + 2 * b ? special_right(z, v, tag, a, b, lambda) : Interior{z, std::nullopt};
      break;
    case 6:
      in = A <= 2 * a + b ? special_left(z, v, tag, a, b, lambda) : Interior{z, std::nullopt};
      break;
    case 7:
      if (A / 3 + L / 3 >= v.z_r + L) {
        in = special_right({A / 3 + L / 3, A / 3 + L / 3, A / 3 - 2 * L / 3}, v, tag, a, b, lambda);
      } else if (A / 3 + 2 * L / 3 <= v.z_l) {
        in = special_left({A / 3 + 2 * L / 3, A / 3 - L / 3, A / 3 - L / 3}, v, tag, a, b, lambda);
      } else {
        in.r = {v.z_r + L, A - 2 * v.z_r - L, v.z_r};
      }
      break;
    default:
      in.r = z;
      break;
  }

  Reassigned out;
  out.table_case = rep.case_id;
  out.tag = tag;
  out.values = {raw.s_l, raw.z_l, in.r[0], in.r[1], in.r[2], in.r_right.value_or(raw.z_r), raw.s_r};
  return out;
}

}  // namespace

RegionValues RegionValues::from_array(const std::array<double, 7>& v) {
  return RegionValues{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

double tv_sequence(std::span<const double> values) {
  double tv = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    tv += std::abs(values[i] - values[i - 1]);
  }
  return tv;
}

Triple sort_descend_representative(double z1, double z2, double z3) {
  if (!(std::max(z1, z2) >= std::max(z2, z3))) {
    fail("sort_descend_representative: needs max{z1,z2} >= max{z2,z3}, got z1=" + fmt(z1) + " z2=" + fmt(z2) +
         " z3=" + fmt(z3));
  }
  const double hi = std::max({z1, z2, z3});
  const double lo = std::min({z1, z2, z3});
  return {hi, z1 + z2 + z3 - hi - lo, lo};
}

GBounds bounds_of_G(double a, double b) {
  if (a < b) {
    throw InvalidArgument("bounds_of_G: a < b");
  }
  GBounds g;
  if (a == b) {
    g = GBounds{a, a, 3 * a, 3 * a, true};
    return g;
  }
  g.z1_min = 0.5 * (a + b);
  g.z3_max = 0.5 * (a + b);
  g.a_min = 0.5 * (a + 5 * b);
  g.a_max = 0.5 * (5 * a + b);
  return g;
}

bool in_G(const Triple& z, double a, double b, double lambda, double tol) {
  return a + tol >= z[0] && z[0] + tol >= z[1] && z[1] + tol >= z[2] && z[2] + tol >= b &&
         z[0] + tol >= z[2] + 2.0 / lambda;
}

MinTvResult min_tv_representative(const RegionValues& v, double a, double b, double lambda) {
  const double L = 2.0 / lambda;
  const double A = v.sum();
  const double zl = v.z_l;
  const double zr = v.z_r;
  if (!(v.z1 >= v.z2 && v.z2 >= v.z3)) {
    fail("min_tv_representative: needs z1 >= z2 >= z3");
  }
  if (!(v.z1 - v.z3 >= L * (1 - 1e-12))) {
    fail("min_tv_representative: needs z1 >= z3 + 2/lambda, got z1 - z3 = " + fmt(v.z1 - v.z3));
  }

  if (A >= 3 * zl - L) {
    if (v.z3 >= zr && A / 3 - 2 * L / 3 <= zr) {
      if (zr > A / 3 - L / 3) {
        fail("min_tv_representative: z_r > A/3 - 2/(3 lambda) with z3 >= z_r is infeasible");
      }
      return {{zr + L, A - 2 * zr - L, zr}, 1};
    }
    if (v.z3 <= zr && A <= a + 2 * b) {
      return {{0.5 * (a + b), A - 0.5 * (a + 3 * b), b}, 2};
    }
    return {{A / 3 + L / 3, A / 3 + L / 3, A / 3 - 2 * L / 3}, 3};
  }
  if (A <= 3 * zr + L) {
    if (v.z1 <= zl && A / 3 + 2 * L / 3 >= zl) {
      return {{zl, A - 2 * zl + L, zl - L}, 4};
    }
    if (v.z1 >= zl && A >= 2 * a + b) {
      return {{a, A - 0.5 * (3 * a + b), 0.5 * (a + b)}, 5};
    }
    return {{A / 3 + 2 * L / 3, A / 3 - L / 3, A / 3 - L / 3}, 6};
  }
  if (zl >= zr + L) {
    const double lo = std::max(zr + L, A / 3 + L / 3);
    const double hi = std::min(A / 3 + 2 * L / 3, zl);
    const double t1 = 0.5 * (lo + hi);
    const double t3 = t1 - L;
    return {{t1, A - t1 - t3, t3}, 7};
  }
  if (zr + L <= a && v.z1 >= zl) {
    return {{zr + L, A - 2 * zr - L, zr}, 8};
  }
  if (a <= zr + L && v.z1 >= zl) {
    return {{a, A - 0.5 * (3 * a + b), 0.5 * (a + b)}, 9};
  }
  if (v.z1 <= zl) {
    return {{zl, A - 2 * zl + L, zl - L}, 10};
  }
  fail("min_tv_representative: no table row matches");
}

double brute_force_min_tv(const RegionValues& v, double a, double b, double lambda, int grid_steps) {
  if (grid_steps < 50) {
    throw InvalidArgument("brute_force_min_tv: grid_steps must be at least 50");
  }
  const double L = 2.0 / lambda;
  const double A = v.sum();
  const double h = (a - b) / grid_steps;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double p1, double p3) {
    const double p2 = A - p1 - p3;
    const std::array<double, 5> seq{v.z_l, p1, p2, p3, v.z_r};
    best = std::min(best, tv_sequence(seq));
  };
  for (int i = 0; i <= grid_steps; ++i) {
    const double p1 = i == grid_steps ? a : b + i * h;
    const double lo = std::max(b, A - 2 * p1);
    const double hi = std::min(p1 - L, 0.5 * (A - p1));
    if (lo > hi) {
      continue;
    }
    consider(p1, lo);
    consider(p1, hi);
    for (int k = static_cast<int>(std::ceil((lo - b) / h)); k <= grid_steps; ++k) {
      const double p3 = b + k * h;
      if (p3 > hi) {
        break;
      }
      if (p3 >= lo) {
        consider(p1, p3);
      }
    }
  }
  if (!std::isfinite(best)) {
    throw HypothesisError("brute_force_min_tv: no admissible point with sum " + fmt(A));
  }
  return best;
}

std::array<double, 4> reassign_type4(double z1, double z2, double z3, double z4, double a, double b) {
  if (!(b <= z1 && z1 <= z3 && z3 <= z2 && z2 <= z4 && z4 <= a)) {
    fail("reassign_type4: needs b <= z1 <= z3 <= z2 <= z4 <= a, got (" + fmt(z1) + ", " + fmt(z2) + ", " +
         fmt(z3) + ", " + fmt(z4) + ")");
  }
  return {z1, z3, z2, z4};
}

RegionCase influence_case(const RegionValues& v, double a, double b) {
  const double A = v.sum();
  if (A > (7 * a + 5 * b) / 4 && (v.z_r < (a + 3 * b) / 4 || v.s_r + v.z_r < (a + 3 * b) / 2)) {
    return RegionCase::I2;
  }
  if (A < (5 * a + 7 * b) / 4 && (v.z_l > (3 * a + b) / 4 || v.s_l + v.z_l > (3 * a + b) / 2)) {
    return RegionCase::I3;
  }
  return RegionCase::I4;
}

Reassigned redefine_influence(const RegionValues& vals, RegionCase tag, double a, double b, double lambda) {
  if (tag == RegionCase::I1 || tag == RegionCase::Overlap) {
    fail("redefine_influence: only I2, I3 and I4 regions are reassigned here");
  }
  const auto seq = vals.as_array();
  for (double u : seq) {
    if (u < b || u > a) {
      fail("redefine_influence: value " + fmt(u) + " outside [b, a]");
    }
  }
  if (!(vals.z3 <= std::max(vals.z1, vals.z2))) {
    fail("redefine_influence: needs max{z1,z2} >= z3");
  }
  if (!(vals.z1 >= std::min(vals.z2, vals.z3))) {
    fail("redefine_influence: needs z1 >= min{z2,z3}");
  }
  const double spread = std::max({vals.z1, vals.z2, vals.z3}) - std::min({vals.z1, vals.z2, vals.z3});
  if (!(spread >= 2.0 / lambda * (1 - 1e-12))) {
    fail("redefine_influence: needs max z - min z >= 2/lambda, got " + fmt(spread));
  }
  const RegionCase expected = influence_case(vals, a, b);
  if (expected != tag) {
    fail("redefine_influence: tag " + to_string(tag) + " but the region inequalities give " + to_string(expected));
  }

  Reassigned out;
  if (tag == RegionCase::I3) {
    Reassigned m = redefine_right(mirror(vals, a, b), RegionCase::I2, a, b, lambda);
    for (std::size_t i = 0; i < 7; ++i) {
      out.values[i] = (a + b) - m.values[6 - i];
    }
    out.table_case = m.table_case;
    out.tag = RegionCase::I3;
    // Cells outside the reassigned span keep their exact bits.
    out.values[0] = vals.s_l;
    out.values[5] = vals.z_r;
    out.values[6] = vals.s_r;
    return out;
  }
  out = redefine_right(vals, tag, a, b, lambda);
  return out;
}

bool check_no_intersection(std::span<const double> values, double lambda_tilde) {
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double d = values[i - 1] - values[i + 1];
    if (d > 0.0 && lambda_tilde * d >= 2.0) {
      return false;
    }
  }
  return true;
}

HartenForm harten_step_form(const CellState& state, const Grid1D& grid, const FluxModel& model,
                            std::span<const double> lambda_j) {
  check_state(state, grid);
  const long n = grid.n_cells;
  if (lambda_j.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("harten_step_form: one lambda per cell expected");
  }
  HartenForm form;
  form.c.resize(static_cast<std::size_t>(n));
  form.d.resize(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    const double ul = state.at(grid, j);
    const double ur = state.at(grid, j + 1);
    const InterfaceData face = numerical_flux(ul, ur, model);
    // [F]/[u] with F(u) = f(u) - nu u; zero up to roundoff for the R-H speed.
    double jump = 0.0;
    if (ur != ul) {
      jump = ((model.flux(ur) - face.nu * ur) - (model.flux(ul) - face.nu * ul)) / (ur - ul);
    }
    const auto k = static_cast<std::size_t>(j);
    form.c[k] = 0.5 * face.alpha - 0.5 * jump;
    form.d[k] = 0.5 * face.alpha + 0.5 * jump;
    const double lam_l = lambda_j[k];
    const double lam_r = lambda_j[static_cast<std::size_t>(grid.wrap(j + 1))];
    const double tol = 1e-12;
    if (form.c[k] < -tol || form.d[k] < -tol || lam_l * form.c[k] + lam_r * form.d[k] > 1.0 + tol) {
      form.violations.push_back(j);
    }
  }
  return form;
}

std::vector<double> harten_update(const CellState& state, const Grid1D& grid, const HartenForm& form,
                                  std::span<const double> lambda_j) {
  check_state(state, grid);
  const long n = grid.n_cells;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double u = state.values[k];
    const double up = state.at(grid, j + 1) - u;
    const double um = u - state.at(grid, j - 1);
    const double d_left = form.d[static_cast<std::size_t>(grid.wrap(j - 1))];
    out[k] = u + lambda_j[k] * (form.c[k] * up - d_left * um);
  }
  return out;
}

}  // namespace elfv::theory
