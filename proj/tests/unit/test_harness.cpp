#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "elfv/harness.hpp"

using namespace elfv;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("elfv_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"(
; comment
name = demo
problem = shock
n_cells = 100
c_factor = 2.6
t_final = 3.6
merging_mode = five_cell_only
outputs = tv_history, region_log
snapshot_times = 1, 2

[converge]
n_list = 50, 100

[sweep]
c_values = 0.5, 1.5

[theory]
instances = 20
seed = 9
)");
  CHECK(c.name == "demo");
  CHECK(c.problem == Problem::RiemannShock);
  CHECK(c.n_cells == 100);
  CHECK(c.c_factor == Approx(2.6));
  CHECK(*c.t_final == Approx(3.6));
  CHECK(c.merging_mode == MergingMode::FiveCellOnly);
  CHECK_FALSE(c.outputs.snapshots);
  CHECK(c.outputs.tv_history);
  CHECK(c.outputs.region_log);
  CHECK(c.snapshot_times == std::vector<double>{1, 2});
  CHECK(c.n_list == std::vector<int>{50, 100});
  CHECK(c.c_values == std::vector<double>{0.5, 1.5});
  CHECK(c.theory_instances == 20);
  CHECK(c.seed == 9);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config("problem = nonsense\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("n_cells = 5\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("c_factr = 3\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("c_factor = abc\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("problem = comet\nmerging_mode = five\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("problem = sin\ncfl = 2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("problem = custom\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("[sweep]\nbogus = 1\n"), InvalidArgument);
  CHECK_THROWS_AS(load_config("/nonexistent/elfv.ini"), InvalidArgument);
}

TEST_CASE("problem setup") {
  ExperimentConfig c;
  c.problem = Problem::Extreme1D;
  c.n_cells = 100;
  const Problem1D p = make_problem_1d(c);
  CHECK(total_variation(p.u0, p.grid) == Approx(4.0));
  CHECK(p.t_final == Approx(3.0));
  CHECK_FALSE(p.exact.has_value());

  c.problem = Problem::Sin1D;
  c.t_final = 1.3;
  const Problem1D s = make_problem_1d(c);
  REQUIRE(s.exclusion.has_value());
  CHECK(s.exclusion->first == Approx(3.14159265358979 - 0.1));

  c.problem = Problem::Quadrant2D;
  c.t_final.reset();
  const Problem2D q = make_problem_2d(c);
  CHECK(q.cfl == Approx(8.6));
  CHECK(q.u0.at(99, 99) == 1.0);
  CHECK(q.u0.at(0, 99) == 2.0);
  CHECK(q.u0.at(0, 0) == 3.0);
  CHECK(q.u0.at(99, 0) == 4.0);
  CHECK_THROWS_AS(make_problem_1d(c), InvalidArgument);
}

TEST_CASE("run writes the documented CSV schemas") {
  const fs::path dir = scratch_dir("schemas");
  ExperimentConfig c;
  c.name = "shock";
  c.problem = Problem::RiemannShock;
  c.n_cells = 100;
  c.outputs = OutputSet{true, true, true, true};
  const RunSummary s = run_experiment(c, dir);
  CHECK(s.exit_code() == 0);
  CHECK(s.guaranteed);
  CHECK(first_line(dir / "shock_diagnostics.csv") == "step,time,tv,min,max,mass,n_etcs");
  CHECK(first_line(dir / "shock_regions.csv") == "step,first,last,case_tag");
  CHECK(first_line(dir / "shock_snapshot_t3.6.csv") == "x,u");
  CHECK(first_line(dir / "shock_error.csv") == "N,error,order");
  CHECK(s.files.size() == 4);

  c.name = "quad";
  c.problem = Problem::Quadrant2D;
  c.n_cells = 20;
  c.snapshot_times = {0.05};
  const RunSummary q = run_experiment(c, dir);
  CHECK(first_line(dir / "quad_snapshot_t0.05.csv") == "x,y,u");
  CHECK(first_line(dir / "quad_snapshot_t0.1.csv") == "x,y,u");
  CHECK(q.mass_drift < 1e-12);

  write_sweep_csv(dir / "sweep.csv", {SweepRow{1.0, 0.5, 0.01, ""}});
  CHECK(first_line(dir / "sweep.csv") == "C,CFL,error");
  TheoryReport rep;
  rep.rows.push_back(TheoryRow{0, 3, 1.0, 1.0, true, true, true, true});
  write_theory_csv(dir / "theory.csv", rep);
  CHECK(first_line(dir / "theory.csv") == "instance,case_id,table_tv,oracle_tv,separation_ok");
  CHECK(slurp(dir / "theory.csv").find("1.00000000000000000e+00") != std::string::npos);
}

TEST_CASE("identical configs give identical files") {
  const fs::path a = scratch_dir("det_a");
  const fs::path b = scratch_dir("det_b");
  ExperimentConfig c;
  c.name = "sin";
  c.n_cells = 64;
  run_experiment(c, a);
  run_experiment(c, b);
  CHECK(slurp(a / "sin_diagnostics.csv") == slurp(b / "sin_diagnostics.csv"));
  CHECK(slurp(a / "sin_snapshot_t0.8.csv") == slurp(b / "sin_snapshot_t0.8.csv"));
}

TEST_CASE("exit status follows the guarantee") {
  ExperimentConfig c;
  c.problem = Problem::RiemannShock;
  c.n_cells = 100;
  c.c_factor = 4.9;
  RunSummary s = run_experiment(c);
  CHECK_FALSE(s.guaranteed);
  CHECK(s.exit_code() == 0);

  c.problem = Problem::Extreme1D;
  c.c_factor = 3.9;
  c.merging_mode = MergingMode::FiveCellOnly;
  s = run_experiment(c);
  CHECK_FALSE(s.guaranteed);
  CHECK(s.history[1].tv > 4.0 + 1e-6);
  CHECK(s.exit_code() == 0);

  c.merging_mode = MergingMode::FullDefinition;
  s = run_experiment(c);
  CHECK(s.guaranteed);
  CHECK(s.exit_code() == 0);
}

TEST_CASE("sweep rows are deterministic") {
  ExperimentConfig c;
  c.n_cells = 100;
  const auto rows = cfl_sweep(c, {2.0, 2.0, 0.5});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].error == rows[1].error);
  CHECK(rows[0].cfl == Approx(1.0));
  CHECK(rows[2].error > rows[0].error);
}

TEST_CASE("convergence orders") {
  ExperimentConfig c;
  const auto rows = convergence_study(c, {100, 200});
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].order.has_value());
  REQUIRE(rows[1].order.has_value());
  CHECK(*rows[1].order == Approx(std::log(rows[0].error / rows[1].error) / std::log(2.0)));
  c.problem = Problem::Extreme1D;
  CHECK_THROWS_AS(convergence_study(c, {100}), InvalidArgument);
}

TEST_CASE("custom initial data") {
  const fs::path dir = scratch_dir("custom");
  {
    std::ofstream out(dir / "u0.csv");
    out << "x,u\n";
    for (int j = 0; j < 16; ++j) out << j << ',' << (j < 8 ? 1.0 : 0.0) << '\n';
  }
  ExperimentConfig c;
  c.problem = Problem::Custom;
  c.initial_csv = dir / "u0.csv";
  c.x_lo = 0;
  c.x_hi = 1;
  c.boundary = Boundary::Constant;
  c.t_final = 0.2;
  const RunSummary s = run_experiment(c);
  CHECK(s.final_1d.values.size() == 16);
  CHECK(s.exit_code() == 0);
  CHECK_FALSE(s.error.has_value());
}

TEST_CASE("verify_theory small batch") {
  const TheoryReport r = verify_theory(300, 5);
  CHECK(r.rows.size() == 300);
  CHECK(r.type4_checked == 300);
  CHECK(r.all_ok());
}
