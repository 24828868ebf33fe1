#include <algorithm>
#include <random>

#include "doctest.h"
#include "elfv/detect.hpp"

using namespace elfv;

namespace {

CellState state_of(std::vector<double> v) {
  CellState s;
  s.values = std::move(v);
  return s;
}

/// Independent restatement of the five conditions with their precedence.
std::optional<TroubleType> oracle_type(double p, double c, double n, double lambda) {
  const double g = 2.0 / lambda;
  const bool t1 = p > n + g;
  const bool t2 = p > c + g && p >= n && n >= c;
  const bool t3 = c > n + g && c >= p && p >= n;
  const bool t4 = p > c + g;
  const bool t5 = c > n + g;
  if (t1) return TroubleType::TypeI;
  if (t2) return TroubleType::TypeII;
  if (t3) return TroubleType::TypeIII;
  if (t4) return TroubleType::TypeIV;
  if (t5) return TroubleType::TypeV;
  return std::nullopt;
}

}  // namespace

TEST_CASE("classify_cell examples") {
  CHECK(classify_cell(2, -0.6, -2, 1.0) == TroubleType::TypeI);
  CHECK_FALSE(classify_cell(0, 0, 0, 3.0).has_value());
  CHECK(classify_cell(2, -1, -1, 4.0 / 3.0) == TroubleType::TypeI);
  CHECK(classify_cell(1, -0.5, 0.2, 2.0) == TroubleType::TypeII);
  CHECK(classify_cell(0.2, 1, -0.5, 2.0) == TroubleType::TypeIII);
  CHECK(classify_cell(1, -0.5, 1.5, 2.0) == TroubleType::TypeIV);
  CHECK(classify_cell(-1, 1, -0.5, 2.0) == TroubleType::TypeV);
  CHECK_THROWS_AS(classify_cell(0, 0, 0, 0.0), InvalidArgument);
}

TEST_CASE("property: classification precedence and shift invariance") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_real_distribution<double> lam(0.5, 4);
  for (int i = 0; i < 20000; ++i) {
    const double p = u(rng), c = u(rng), n = u(rng), l = lam(rng);
    const auto t = classify_cell(p, c, n, l);
    CHECK(t == oracle_type(p, c, n, l));
    // Shifting by a dyadic constant keeps the differences exact.
    const double shift = 0.25 * static_cast<int>(u(rng) * 8);
    CHECK(classify_cell(p + shift, c + shift, n + shift, l) == oracle_type(p + shift, c + shift, n + shift, l));
  }
}

TEST_CASE("Riemann shock selects the last left-state cell") {
  const Grid1D g = Grid1D::make(-1, 1, 20, Boundary::Constant);
  CellState s;
  for (int j = 0; j < 20; ++j) s.values.push_back(j < 10 ? 2.0 : -1.0);
  const TroubleReport r = select_etcs(s, 4.0 / 3.0, g, Bounds{2, -1});
  REQUIRE(r.etcs.size() == 1);
  CHECK(r.etcs[0] == 9);
  CHECK(r.per_cell[9] == TroubleType::TypeI);
}

TEST_CASE("monotone data has no ETC") {
  const Grid1D g = Grid1D::make(0, 1, 30, Boundary::Constant);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    CellState s;
    for (int j = 0; j < 30; ++j) s.values.push_back(u(rng) * 10);
    std::sort(s.values.begin(), s.values.end());
    const TroubleReport r = select_etcs(s, 0.5 + u(rng) * 10, g, Bounds::of(s.values));
    CHECK(r.etcs.empty());
    CHECK(std::none_of(r.per_cell.begin(), r.per_cell.end(), [](auto t) { return t.has_value(); }));
  }
}

TEST_CASE("type V followed by type IV moves the ETC right") {
  const Grid1D g = Grid1D::make(0, 1, 12, Boundary::Constant);
  const CellState s = state_of({-1, -1, -1, -1, 1, -0.5, 1.5, 1.5, 1.5, 1.5, 1.5, 1.5});
  const TroubleReport r = select_etcs(s, 2.0, g, Bounds::of(s.values));
  CHECK(r.per_cell[4] == TroubleType::TypeV);
  CHECK(r.per_cell[5] == TroubleType::TypeIV);
  REQUIRE(r.etcs.size() == 1);
  CHECK(r.etcs[0] == 5);
  REQUIRE(r.regions.size() == 1);
  CHECK(r.regions[0].case_tag == RegionCase::I1);
  CHECK(r.regions[0].first == 3);
  CHECK(r.regions[0].last == 6);
  CHECK(r.regions[0].size() == 4);
}

TEST_CASE("I2 region extends right") {
  const Grid1D g = Grid1D::make(0, 1, 12, Boundary::Constant);
  const CellState s = state_of({2, 2, 2, 2, 2, 2, 1.9, -2, -2, -2, -2, -2});
  const InfluenceRegion r = build_influence_region(5, s, g, Bounds{2, -2}, 1.0);
  CHECK(r.case_tag == RegionCase::I2);
  CHECK(r.first == 3);
  CHECK(r.last == 8);
}

TEST_CASE("I3 region extends left") {
  // Mirror image of the I2 data under u -> -u, x -> -x.
  const Grid1D g = Grid1D::make(0, 1, 12, Boundary::Constant);
  const CellState s = state_of({2, 2, 2, 2, 2, -1.9, -2, -2, -2, -2, -2, -2});
  const InfluenceRegion r = build_influence_region(6, s, g, Bounds{2, -2}, 1.0);
  CHECK(r.case_tag == RegionCase::I3);
  CHECK(r.first == 3);
  CHECK(r.last == 8);
}

TEST_CASE("I4 region is five cells") {
  const Grid1D g = Grid1D::make(0, 1, 12, Boundary::Constant);
  const CellState s = state_of({1, 1, 1, 1, -0.2, -1, -1, -1, -1, -1, -1, -1});
  const InfluenceRegion r = build_influence_region(4, s, g, Bounds{1, -1}, 2.0);
  CHECK(r.case_tag == RegionCase::I4);
  CHECK(r.first == 2);
  CHECK(r.last == 6);
}

TEST_CASE("I2 threshold equality falls to I4") {
  // A = (7a + 5b)/4 = 0.5 for a = 1, b = -1.
  const Grid1D g = Grid1D::make(0, 1, 12, Boundary::Constant);
  const CellState s = state_of({1, 1, 1, 1, 0.5, -1, -1, -1, -1, -1, -1, -1});
  const InfluenceRegion r = build_influence_region(4, s, g, Bounds{1, -1}, 2.0);
  CHECK(r.case_tag == RegionCase::I4);
}

TEST_CASE("merge_overlaps") {
  const Grid1D g = Grid1D::make(0, 1, 30, Boundary::Periodic);
  auto region = [](long first, long last) {
    InfluenceRegion r;
    r.first = first;
    r.last = last;
    r.etc_index = (first + last) / 2;
    return r;
  };
  SUBCASE("disjoint unchanged") {
    const auto out = merge_overlaps({region(2, 6), region(10, 14)}, g);
    REQUIRE(out.size() == 2);
    CHECK(out[0].first == 2);
    CHECK(out[1].last == 14);
    CHECK(out[0].case_tag == RegionCase::I4);
  }
  SUBCASE("intersecting spans become one Overlap") {
    const auto out = merge_overlaps({region(8, 12), region(11, 15)}, g);
    REQUIRE(out.size() == 1);
    CHECK(out[0].first == 8);
    CHECK(out[0].last == 15);
    CHECK(out[0].case_tag == RegionCase::Overlap);
  }
  SUBCASE("single region unchanged") {
    const auto out = merge_overlaps({region(3, 7)}, g);
    REQUIRE(out.size() == 1);
    CHECK(out[0].first == 3);
    CHECK(out[0].last == 7);
  }
  SUBCASE("last region wraps onto the first") {
    const auto out = merge_overlaps({region(0, 4), region(27, 31)}, g);
    REQUIRE(out.size() == 1);
    CHECK(out[0].case_tag == RegionCase::Overlap);
    CHECK(out[0].size() == 8);
  }
  SUBCASE("union covering the circle is rejected") {
    CHECK_THROWS_AS(merge_overlaps({region(0, 14), region(14, 28)}, g), DetectionError);
  }
}

TEST_CASE("property: detected regions are disjoint and cover their ETCs") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1, 1);
  int with_regions = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto bc = trial % 2 == 0 ? Boundary::Periodic : Boundary::Constant;
    const Grid1D g = Grid1D::make(0, 1, 40, bc);
    CellState s;
    double v = 0;
    for (int j = 0; j < 40; ++j) {
      v = std::clamp(v + u(rng) * 0.8, -1.0, 1.0);
      s.values.push_back(v);
    }
    const Bounds b = Bounds::of(s.values);
    TroubleReport r;
    try {
      r = detect(s, guarantee_lambda(b), g, b);
    } catch (const DetectionError&) {
      continue;
    }
    with_regions += r.regions.empty() ? 0 : 1;
    std::vector<int> cover(40, 0);
    for (const auto& reg : r.regions) {
      // Constant grids clamp spans at the domain ends.
      const bool clamped = bc == Boundary::Constant && (reg.first == 0 || reg.last == 39);
      CHECK((reg.size() >= 4 || clamped));
      CHECK(reg.size() < 40);
      for (long k = reg.first; k <= reg.last; ++k) {
        cover[static_cast<std::size_t>(g.wrap(k))] += 1;
      }
    }
    CHECK(std::all_of(cover.begin(), cover.end(), [](int c) { return c <= 1; }));
    for (long e : r.etcs) {
      CHECK(cover[static_cast<std::size_t>(g.wrap(e))] == 1);
    }
  }
  CHECK(with_regions > 100);
}
