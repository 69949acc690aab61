#pragma once

#include "spvqe/exact.hpp"
#include "spvqe/fcidump.hpp"
#include "spvqe/fermion.hpp"
#include "spvqe/optimizers.hpp"
#include "spvqe/vqe.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spvqe {

enum class Method { Vqe, Cvqe, Spvqe };

Method method_from_string(const std::string& name);
std::string to_string(Method m);

struct GeometryPoint {
  std::string label;
  double bond_length = 0.0;  ///< Angstrom
  std::filesystem::path fcidump;
};

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::TotalSpin;
  double target = 0.0;
  /// Overrides ScanConfig::mu_max for this constraint.
  std::optional<double> mu_max;
};

/**
 * @brief One experiment: a set of geometries run with a single method.
 *
 * Mirrors the JSON config document field for field (see README). Relative
 * FCIDUMP paths are resolved against the config file's directory.
 */
struct ScanConfig {
  std::vector<GeometryPoint> points;
  Method method = Method::Spvqe;
  std::vector<ConstraintSpec> constraints;
  Mapping mapping = Mapping::ParityReduced;
  /// 2*S_z of the targeted sector; defaults to the FCIDUMP MS2 (adjusted to the target electron parity).
  std::optional<int> ms2;
  int depth = 3;
  OptimizerConfig optimizer;
  double mu_max = 1.0;
  int n_steps = 10;
  BudgetMode budget = BudgetMode::PerStep;
  int shots = 0;
  int repeats = 1;
  /// Random starts per repeat; the lowest final cost is kept.
  int restarts = 1;
  std::uint64_t seed = 0;
  int jobs = 1;

  /// Throws StructuralError for inconsistent settings or missing files.
  void validate() const;
};

ScanConfig scan_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ScanConfig load_scan_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScanConfig& cfg);

struct ScanRecord {
  std::string label;
  double bond_length = 0.0;
  Method method = Method::Spvqe;
  int repeat = 0;
  std::uint64_t seed = 0;
  double energy = 0.0;
  double cost = 0.0;
  double penalty = 0.0;
  double spin_expval = 0.0;
  double number_expval = 0.0;
  double energy_error = 0.0;
  double spin_error = 0.0;
  double number_error = 0.0;
  /// max_i |<A_i> - a_i| over the configured constraints.
  double constraint_error = 0.0;
  long evaluations = 0;
  int ns = 0;
  double mu_max = 0.0;
  int shots = 0;
  double reference_energy = 0.0;
  /// Standard error of the final energy estimate (sampled mode only).
  double energy_stderr = 0.0;
  std::vector<double> params;
  double wall_seconds = 0.0;
  /// Empty when the record succeeded.
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

struct ScanReport {
  std::vector<ScanRecord> records;
  /// One line per (point, constraint) whose mu_max is below its penalty bound.
  std::vector<std::string> warnings;

  bool ok() const;
};

/// Mapped operators and oracle reference for one geometry.
struct PreparedPoint {
  QubitOperator hamiltonian;
  QubitOperator number;
  QubitOperator spin;
  std::vector<Constraint> constraints;
  /// Effective mu_max per constraint.
  std::vector<double> mu_max;
  ReferenceState reference;
  /// Per constraint: bound on mu_max from the exact spectrum, empty when the
  /// unconstrained ground state already satisfies the constraint.
  std::vector<std::optional<double>> mu_bound;
  int n_electrons = 0;
  int ms2 = 0;
};

/// Loads and maps one geometry for `cfg` and computes its constrained reference.
PreparedPoint prepare_point(const GeometryPoint& point, const ScanConfig& cfg);

/// Warnings for constraints whose configured mu_max is below max(0, bound).
std::vector<std::string> mu_max_warnings(const std::string& label, const PreparedPoint& pp);

/// Electron count and 2*S_z selecting the parity sector for a geometry.
std::pair<int, int> target_occupation(const FermionIntegrals& ints, const ScanConfig& cfg);

/// Uniform random start on [-pi, pi) per angle.
std::vector<double> random_start(int n_params, std::uint64_t seed);

/// Seed of record (point, repeat) for `method`.
std::uint64_t record_seed(std::uint64_t master, std::size_t point, int repeat, Method method);

/**
 * Runs every (point, repeat) pair of `cfg`. Failures are recorded per record
 * and do not stop the scan. Output order is (point, repeat) regardless of
 * cfg.jobs.
 */
ScanReport run_scan(const ScanConfig& cfg);

/// One SPVQE scan per N_s value, concatenated in the given order.
ScanReport steps_sweep(const ScanConfig& cfg, const std::vector<int>& ns_values);

/**
 * CVQE and SPVQE each run from the same n_starts random starting points per
 * geometry. CVQE receives the configured optimiser budget; SPVQE receives the
 * same budget split evenly over its N_s steps.
 */
ScanReport robustness_study(const ScanConfig& cfg, int n_starts);

struct ErrorSummary {
  std::string label;
  Method method = Method::Spvqe;
  int ns = 0;
  std::size_t count = 0;
  double mean_energy_error = 0.0;
  double mean_spin_error = 0.0;
  double mean_number_error = 0.0;
  double mean_constraint_error = 0.0;
  double std_energy_error = 0.0;
};

/// Means over successful records grouped by (label, method, ns), in first-seen order.
std::vector<ErrorSummary> summarize(const ScanReport& report);

/// Fixed-column CSV of the records.
std::string records_csv(const ScanReport& report);
std::string summary_csv(const std::vector<ErrorSummary>& summary);
nlohmann::json to_json(const ScanReport& report);

/// Writes `content` to `path` via a temporary file and rename.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace spvqe
