// spvqe: bond-length scans, N_s sweeps and random-start studies from a JSON config.

#include "spvqe/errors.hpp"
#include "spvqe/exact.hpp"
#include "spvqe/fcidump.hpp"
#include "spvqe/scan.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace spvqe;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> method;
  std::optional<double> mu_max;
  std::optional<int> n_steps;
  std::optional<int> shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
  std::optional<int> jobs;
  std::string out = ".";
};

void add_common(CLI::App* cmd, Overrides& o, bool run_flags) {
  cmd->add_option("--config", o.config, "JSON scan config")->required()->check(CLI::ExistingFile);
  if (!run_flags) return;
  cmd->add_option("--method", o.method, "vqe, cvqe or spvqe");
  cmd->add_option("--mu-max", o.mu_max, "final penalty multiplier");
  cmd->add_option("--n-steps", o.n_steps, "schedule steps N_s");
  cmd->add_option("--shots", o.shots, "shots per expectation (0 = exact)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--repeats", o.repeats, "random starts per point");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--jobs", o.jobs, "worker threads");
}

ScanConfig load(const Overrides& o) {
  ScanConfig cfg = load_scan_config(o.config);
  if (o.method) cfg.method = method_from_string(*o.method);
  if (o.mu_max) cfg.mu_max = *o.mu_max;
  if (o.n_steps) cfg.n_steps = *o.n_steps;
  if (o.shots) cfg.shots = *o.shots;
  if (o.seed) cfg.seed = *o.seed;
  if (o.repeats) cfg.repeats = *o.repeats;
  if (o.jobs) cfg.jobs = *o.jobs;
  cfg.validate();
  return cfg;
}

int emit(const std::string& command, const ScanConfig& cfg, const ScanReport& report, const fs::path& out_dir,
         double wall_seconds, nlohmann::json extra = nlohmann::json::object()) {
  fs::create_directories(out_dir);
  write_atomically(out_dir / "records.csv", records_csv(report));
  write_atomically(out_dir / "summary.csv", summary_csv(summarize(report)));
  nlohmann::json manifest = to_json(report);
  manifest["command"] = command;
  manifest["config"] = to_json(cfg);
  manifest["wall_seconds"] = wall_seconds;
  manifest.update(extra);
  write_atomically(out_dir / "manifest.json", manifest.dump(2) + "\n");

  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::size_t failed = 0;
  for (const auto& r : report.records) {
    if (r.ok()) continue;
    ++failed;
    std::cerr << "record " << r.label << " repeat " << r.repeat << " (" << to_string(r.method) << ") failed: " << r.error
              << '\n';
  }
  std::cout << report.records.size() << " records, " << failed << " failed, written to " << out_dir.string() << '\n';
  return failed == 0 ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_oracle(const ScanConfig& cfg) {
  for (const auto& point : cfg.points) {
    const PreparedPoint pp = prepare_point(point, cfg);
    const std::vector<QubitOperator> obs{pp.number, pp.spin};
    const auto spec = exact_spectrum(pp.hamiltonian, obs);
    std::printf("# %s  (%s, %d qubits, N=%d, ms2=%d)\n", point.label.c_str(), point.fcidump.filename().c_str(),
                pp.hamiltonian.n_qubits(), pp.n_electrons, pp.ms2);
    std::printf("%6s %20s %12s %12s\n", "index", "energy", "N", "S2");
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
      const auto& v = spec.observable_values[static_cast<std::size_t>(j)];
      std::printf("%6ld %20.12f %12.6f %12.6f\n", static_cast<long>(j), spec.eigenvalues[j], v[0], v[1]);
    }
    std::printf("constrained ground state: %.12f\n\n", pp.reference.energy);
  }
  return 0;
}

int run_validate(const ScanConfig& cfg) {
  int problems = 0;
  for (const auto& point : cfg.points) {
    try {
      const FermionIntegrals ints = load_fcidump(point.fcidump);
      const double sym = ints.symmetry_violation();
      const PreparedPoint pp = prepare_point(point, cfg);
      const double cn = commutator_norm(pp.hamiltonian, pp.number);
      const double cs = commutator_norm(pp.hamiltonian, pp.spin);
      const bool ok = sym <= 1e-10 && cn <= 1e-10 && cs <= 1e-10 && pp.hamiltonian.is_hermitian(1e-10);
      std::printf("%s %s: norb=%d nelec=%d qubits=%d symmetry=%.1e [H,N]=%.1e [H,S2]=%.1e E_ref=%.12f\n",
                  ok ? "ok  " : "FAIL", point.label.c_str(), ints.n_spatial(), ints.n_electrons(),
                  pp.hamiltonian.n_qubits(), sym, cn, cs, pp.reference.energy);
      if (!ok) ++problems;
    } catch (const std::exception& e) {
      std::printf("FAIL %s: %s\n", point.label.c_str(), e.what());
      ++problems;
    }
  }
  std::printf("%zu points, %d problems\n", cfg.points.size(), problems);
  return problems == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-of-penalties VQE experiments"};
  app.require_subcommand(1);

  Overrides scan_o, sweep_o, robust_o, oracle_o, validate_o;
  std::vector<int> ns_values{1, 2, 5, 10};
  int n_starts = 100;

  auto* scan = app.add_subcommand("scan", "bond-length scan with one method");
  add_common(scan, scan_o, true);
  auto* sweep = app.add_subcommand("steps-sweep", "SPVQE scans over a list of N_s values");
  add_common(sweep, sweep_o, true);
  sweep->add_option("--ns-values", ns_values, "comma-separated N_s values")->delimiter(',');
  auto* robust = app.add_subcommand("robustness", "CVQE vs SPVQE from matched random starts");
  add_common(robust, robust_o, true);
  robust->add_option("--n-starts", n_starts, "random starts per point and method");
  auto* oracle = app.add_subcommand("oracle", "print constrained exact spectra");
  add_common(oracle, oracle_o, false);
  auto* validate = app.add_subcommand("validate", "lint a config and its FCIDUMP files");
  add_common(validate, validate_o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (*scan) {
      const auto cfg = load(scan_o);
      const auto report = run_scan(cfg);
      return emit("scan", cfg, report, scan_o.out, seconds_since(t0));
    }
    if (*sweep) {
      const auto cfg = load(sweep_o);
      const auto report = steps_sweep(cfg, ns_values);
      return emit("steps-sweep", cfg, report, sweep_o.out, seconds_since(t0), {{"ns_values", ns_values}});
    }
    if (*robust) {
      const auto cfg = load(robust_o);
      const auto report = robustness_study(cfg, n_starts);
      return emit("robustness", cfg, report, robust_o.out, seconds_since(t0), {{"n_starts", n_starts}});
    }
    if (*oracle) return run_oracle(load(oracle_o));
    if (*validate) return run_validate(load(validate_o));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
