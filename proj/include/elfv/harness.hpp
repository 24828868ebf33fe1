#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elfv/core.hpp"
#include "elfv/evolve.hpp"
#include "elfv/exact.hpp"
#include "elfv/split2d.hpp"

namespace elfv {

enum class Problem { Sin1D, RiemannShock, RiemannRarefaction, Extreme1D, Comet2D, Quadrant2D, Custom };

/// Mean: dx sum |e_j| divided by the length of the measured part of the
/// domain. Integral: dx sum |e_j|.
enum class ErrorNorm { Mean, Integral };

struct OutputSet {
  bool snapshots = true;
  bool tv_history = true;
  bool error_table = false;
  bool region_log = false;
};

struct ExperimentConfig {
  std::string name = "run";
  Problem problem = Problem::Sin1D;
  int n_cells = 200;
  /// 2D only; 0 means n_cells.
  int n_y = 0;
  double c_factor = 3.9;
  /// 2D only: pick C so that the initial 2D CFL equals this value.
  std::optional<double> cfl;
  /// Problem default when unset.
  std::optional<double> t_final;
  MergingMode merging_mode = MergingMode::FullDefinition;
  BoundsMode bounds_mode = BoundsMode::Global;
  OutputSet outputs;
  /// Extra output times besides t_final.
  std::vector<double> snapshot_times;
  ErrorNorm error_norm = ErrorNorm::Mean;

  std::vector<int> n_list{100, 200, 300, 400};
  std::vector<double> c_values;

  int theory_instances = 10000;
  int theory_grid_steps = 200;
  std::uint64_t seed = 1;

  // Custom problem: a one-column CSV (header u) of initial cell averages.
  std::filesystem::path initial_csv;
  double x_lo = 0.0;
  double x_hi = 1.0;
  Boundary boundary = Boundary::Periodic;
};

bool is_2d(Problem p);
std::string to_string(Problem p);
Problem parse_problem(const std::string& s);

/// Reads a flat INI file: top-level keys plus optional [converge], [sweep]
/// and [theory] sections. Unknown keys are rejected.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

/// Throws InvalidArgument on inconsistent settings.
void validate(const ExperimentConfig& config);

struct Problem1D {
  Grid1D grid;
  CellState u0;
  std::optional<ExactSolution> exact;
  double t_final = 1.0;
  /// Band left out of the error once the smooth solution has a shock.
  std::optional<std::pair<double, double>> exclusion;
};

struct Problem2D {
  Grid2D grid;
  CellState2D u0;
  double t_final = 1.0;
  double cfl = 1.0;
};

/// Initial data sampled at cell centres.
Problem1D make_problem_1d(const ExperimentConfig& config);
Problem2D make_problem_2d(const ExperimentConfig& config);

/// Error of `state` against the problem's exact solution at time t, using
/// the exclusion band when t is past the breaking time.
double solution_error(const Problem1D& problem, const CellState& state, double t, ErrorNorm norm);

/// Raised by run_experiment when a solver step fails; carries step context.
class RunError : public Error {
public:
  using Error::Error;
};

struct RunSummary {
  std::string name;
  long steps = 0;
  double t_final = 0.0;
  double dt = 0.0;
  double c_factor = 0.0;
  double cfl = 0.0;
  bool guaranteed = false;
  std::vector<StepDiagnostics> history;
  double initial_tv = 0.0;
  double initial_min = 0.0;
  double initial_max = 0.0;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  /// |mass(T) - mass(0) - summed edge inflow| / (cell volume * sum |u0|).
  double mass_drift = 0.0;
  std::optional<double> error;
  CellState final_1d;
  CellState2D final_2d;
  /// Broken guaranteed invariants, one line each.
  std::vector<std::string> violations;
  std::vector<std::filesystem::path> files;

  int exit_code() const { return violations.empty() ? 0 : 1; }
};

/// Runs one experiment and writes the requested CSVs into out_dir (nothing
/// is written when out_dir is empty). Solver failures surface as RunError.
RunSummary run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir = {});

struct ErrorRow {
  int n = 0;
  double error = 0.0;
  std::optional<double> order;
};

/// order_k = log(e_{k-1} / e_k) / log(N_k / N_{k-1}).
std::vector<ErrorRow> convergence_study(const ExperimentConfig& base, const std::vector<int>& n_list);

struct SweepRow {
  double c_factor = 0.0;
  double cfl = 0.0;
  double error = 0.0;
  /// Empty on success; the solver message otherwise (error is then NaN).
  std::string failure;
};

std::vector<SweepRow> cfl_sweep(const ExperimentConfig& base, const std::vector<double>& c_values);

struct TheoryRow {
  long instance = 0;
  int case_id = 0;
  double table_tv = 0.0;
  double oracle_tv = 0.0;
  bool separation_ok = false;
  bool sum_ok = false;
  bool tv_ok = false;
  bool table_ok = false;
};

struct TheoryReport {
  std::vector<TheoryRow> rows;
  long type4_checked = 0;
  long type4_failures = 0;

  bool all_ok() const;
};

/// Random instances with a = 1, b = -1, lambda = 2: the table versus the
/// grid oracle, reassignment safety, and the type IV swap.
TheoryReport verify_theory(long instances, std::uint64_t seed, int grid_steps = 200);

// CSV writers. Every file has a header row and %.17e numbers.
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<StepDiagnostics>& history);
void write_region_csv(const std::filesystem::path& path, const std::vector<StepDiagnostics>& history);
void write_snapshot_csv(const std::filesystem::path& path, const Grid1D& grid, const CellState& state);
void write_snapshot_csv(const std::filesystem::path& path, const Grid2D& grid, const CellState2D& state);
void write_error_csv(const std::filesystem::path& path, const std::vector<ErrorRow>& rows);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
void write_theory_csv(const std::filesystem::path& path, const TheoryReport& report);

}  // namespace elfv
