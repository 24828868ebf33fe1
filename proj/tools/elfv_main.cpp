// Command-line driver: run, converge, sweep, verify-theory.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "elfv/harness.hpp"

namespace fs = std::filesystem;

namespace {

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) {
    return flag;
  }
  if (const char* env = std::getenv("ELFV_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return fs::current_path();
}

elfv::ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? elfv::ExperimentConfig{} : elfv::load_config(path);
}

int cmd_run(const std::string& config_path, const fs::path& out) {
  const auto config = config_from(config_path);
  const auto s = elfv::run_experiment(config, out);
  std::printf("%s: problem=%s steps=%ld dt=%.6e C=%.6g CFL=%.6g guaranteed=%s\n", s.name.c_str(),
              elfv::to_string(config.problem).c_str(), s.steps, s.dt, s.c_factor, s.cfl, s.guaranteed ? "yes" : "no");
  const auto& last = s.history.back();
  std::printf("  t=%.6g tv=%.12g min=%.17g max=%.17g mass_drift=%.3e\n", last.time, last.tv, last.min_u, last.max_u,
              s.mass_drift);
  if (s.error) {
    std::printf("  L1 error=%.6e\n", *s.error);
  }
  for (const auto& f : s.files) {
    std::printf("  wrote %s\n", f.string().c_str());
  }
  for (const auto& v : s.violations) {
    std::fprintf(stderr, "VIOLATION %s\n", v.c_str());
  }
  return s.exit_code();
}

int cmd_converge(const std::string& config_path, const fs::path& out) {
  const auto config = config_from(config_path);
  const auto rows = elfv::convergence_study(config, config.n_list);
  std::printf("%6s %14s %8s\n", "N", "error", "order");
  for (const auto& r : rows) {
    if (r.order) {
      std::printf("%6d %14.6e %8.3f\n", r.n, r.error, *r.order);
    } else {
      std::printf("%6d %14.6e %8s\n", r.n, r.error, "-");
    }
  }
  const fs::path path = out / (config.name + "_convergence.csv");
  elfv::write_error_csv(path, rows);
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_sweep(const std::string& config_path, const fs::path& out) {
  auto config = config_from(config_path);
  if (config.c_values.empty()) {
    config.c_values = {0.1, 0.5, 1, 2, 3, 3.9, 4, 5, 6, 8, 10, 12, 14, 16, 16.5};
  }
  const auto rows = elfv::cfl_sweep(config, config.c_values);
  int failures = 0;
  std::printf("%8s %8s %14s\n", "C", "CFL", "error");
  for (const auto& r : rows) {
    std::printf("%8.3g %8.3g %14.6e %s\n", r.c_factor, r.cfl, r.error, r.failure.c_str());
    failures += r.failure.empty() ? 0 : 1;
  }
  const fs::path path = out / (config.name + "_sweep.csv");
  elfv::write_sweep_csv(path, rows);
  std::printf("wrote %s\n", path.string().c_str());
  return failures == 0 ? 0 : 1;
}

int cmd_theory(const std::string& config_path, const fs::path& out, std::optional<std::uint64_t> seed,
               std::optional<long> instances) {
  const auto config = config_from(config_path);
  const auto report = elfv::verify_theory(instances.value_or(config.theory_instances), seed.value_or(config.seed),
                                          config.theory_grid_steps);
  long table = 0, sep = 0, sum = 0, tv = 0;
  for (const auto& r : report.rows) {
    table += r.table_ok ? 0 : 1;
    sep += r.separation_ok ? 0 : 1;
    sum += r.sum_ok ? 0 : 1;
    tv += r.tv_ok ? 0 : 1;
  }
  std::printf("instances=%zu table>oracle=%ld separation=%ld sum=%ld tv=%ld type4=%ld/%ld failures\n",
              report.rows.size(), table, sep, sum, tv, report.type4_failures, report.type4_checked);
  const fs::path path = out / (config.name + "_theory.csv");
  elfv::write_theory_csv(path, report);
  std::printf("wrote %s\n", path.string().c_str());
  return report.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eulerian-Lagrangian finite volume solver for Burgers' equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::optional<std::uint64_t> seed;
  std::optional<long> instances;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI experiment file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_flag, "output directory (default $ELFV_OUT_DIR, then .)");
  };
  auto* run = app.add_subcommand("run", "run one experiment");
  add_common(run);
  run->get_option("--config")->required();
  auto* converge = app.add_subcommand("converge", "mesh refinement study");
  add_common(converge);
  auto* sweep = app.add_subcommand("sweep", "error versus C");
  add_common(sweep);
  auto* theory = app.add_subcommand("verify-theory", "random checks of the reassignment argument");
  add_common(theory);
  theory->add_option("--seed", seed, "RNG seed");
  theory->add_option("--instances", instances, "number of random instances");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out = output_root(out_flag);
    if (*run) {
      return cmd_run(config_path, out);
    }
    if (*converge) {
      return cmd_converge(config_path, out);
    }
    if (*sweep) {
      return cmd_sweep(config_path, out);
    }
    return cmd_theory(config_path, out, seed, instances);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
