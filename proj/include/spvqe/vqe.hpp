#pragma once

#include "spvqe/circuit.hpp"
#include "spvqe/errors.hpp"
#include "spvqe/optimizers.hpp"
#include "spvqe/pauli.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spvqe {

enum class ConstraintKind { TotalSpin, ParticleNumber, Custom };

ConstraintKind constraint_kind_from_string(const std::string& name);
std::string to_string(ConstraintKind k);

/// Observable A with the eigenvalue a it should take.
struct Constraint {
  QubitOperator op;
  double target = 0.0;
  ConstraintKind kind = ConstraintKind::Custom;
};

/// F = E + P with P = sum_i mu_i (<A_i> - a_i)^2.
struct CostBreakdown {
  double cost = 0.0;
  double energy = 0.0;
  double penalty = 0.0;
  std::vector<double> constraint_values;
};

/// Evaluates the penalised cost on a prepared state.
CostBreakdown penalized_cost(const QubitOperator& ham, std::span<const Constraint> constraints,
                             std::span<const double> mus, const Statevector& state);

/// How expectations are obtained during optimisation. shots == 0 is exact.
struct Sampling {
  int shots = 0;
  std::uint64_t seed = 0;
};

/**
 * @brief Penalised objective over ansatz parameters.
 *
 * Wraps (H, constraints, mus, ansatz) into the callables the optimisers
 * consume. In sampled mode each expectation draws fresh shots from a seed
 * derived from (sampling seed, call index, operator index), so a run is
 * reproducible as long as the call sequence is.
 */
class PenalizedObjective {
 public:
  PenalizedObjective(const QubitOperator& ham, std::span<const Constraint> constraints, std::vector<double> mus,
                     const Ansatz& ansatz, Sampling sampling = {});

  CostBreakdown evaluate(std::span<const double> params);
  /// {E, <A_1>, ..., <A_m>}.
  std::vector<double> components(std::span<const double> params);
  /// Parameter-shift gradient of F.
  std::vector<double> gradient(std::span<const double> params);

  PenaltyStructure structure() const;

 private:
  std::vector<double> expectations(const Statevector& state);

  const QubitOperator& ham_;
  std::span<const Constraint> constraints_;
  std::vector<double> mus_;
  const Ansatz& ansatz_;
  Sampling sampling_;
  std::uint64_t calls_ = 0;
};

struct VqeResult {
  std::vector<double> params;
  double energy = 0.0;
  double cost = 0.0;
  double penalty = 0.0;
  std::vector<double> constraint_values;
  std::vector<double> mus;
  OptimizationTrace trace;
};

/// Plain VQE: minimises <H> only.
VqeResult vqe_run(const QubitOperator& ham, const Ansatz& ansatz, std::vector<double> x0,
                  const OptimizerConfig& cfg, Sampling sampling = {});

/// Fixed-penalty constrained VQE.
VqeResult cvqe_run(const QubitOperator& ham, std::span<const Constraint> constraints, std::vector<double> mus,
                   const Ansatz& ansatz, std::vector<double> x0, const OptimizerConfig& cfg, Sampling sampling = {});

/**
 * @brief Linear multiplier ramp mu_k = mu_max * k / n_steps, k = 1..n_steps.
 *
 * `mu_max` holds one value per constraint; a single value is broadcast to
 * every constraint.
 */
struct PenaltySchedule {
  std::vector<double> mu_max;
  int n_steps = 10;

  PenaltySchedule() = default;
  PenaltySchedule(double mu_max_all, int steps) : mu_max{mu_max_all}, n_steps(steps) {}
  PenaltySchedule(std::vector<double> mu_max_each, int steps) : mu_max(std::move(mu_max_each)), n_steps(steps) {}

  void validate() const;
  double step(std::size_t constraint = 0) const;
  /// Multipliers at step k (1-based). Step n_steps returns mu_max exactly.
  std::vector<double> mus_at(int k, std::size_t n_constraints) const;
};

/// Whether OptimizerConfig budgets apply to each schedule step or to the whole sequence.
enum class BudgetMode { PerStep, Total };

BudgetMode budget_mode_from_string(const std::string& name);
std::string to_string(BudgetMode m);

/// Config with its iteration, sweep and evaluation budgets divided across n_steps.
OptimizerConfig split_budget(const OptimizerConfig& cfg, int n_steps);

struct SpvqeStep {
  int k = 0;
  std::vector<double> mus;
  std::vector<double> start;
  VqeResult result;
  /// Cost of this step's optimum re-weighted with the final multipliers; steps are ranked by it.
  double selection_cost = 0.0;
};

struct SpvqeResult {
  std::vector<SpvqeStep> steps;
  std::size_t best_index = 0;

  const VqeResult& best() const { return steps.at(best_index).result; }
  long evaluations() const;
};

/// Thrown when a step fails; carries the steps that completed.
class SpvqeAbortedError : public Error {
 public:
  SpvqeAbortedError(const std::string& what, SpvqeResult partial) : Error(what), partial_(std::move(partial)) {}
  const SpvqeResult& partial() const noexcept { return partial_; }

 private:
  SpvqeResult partial_;
};

/**
 * Sequence of constrained runs with multipliers ramped linearly to mu_max,
 * each warm-started from the previous optimum. Steps are compared on the
 * cost they reach under the final multipliers mu_max, so an early step with
 * a cheap penalty cannot win just because its multiplier was small. The best
 * step is the one with the lowest such cost (earliest on ties); its energy is
 * reported as F - P.
 */
SpvqeResult spvqe_run(const QubitOperator& ham, std::span<const Constraint> constraints,
                      const PenaltySchedule& schedule, const Ansatz& ansatz, std::vector<double> x0,
                      const OptimizerConfig& cfg, BudgetMode budget = BudgetMode::PerStep, Sampling sampling = {});

/// (E_gs - E_target) / (<A>_gs - a)^2. Throws DegenerateConstraintError when <A>_gs == a.
double mu_max_lower_bound(double e_gs, double e_target, double a_gs_expval, double a_target);

/// Re-estimates <H> alone at the final parameters (shots == 0 gives the exact value).
SampledEstimate final_remeasure(const QubitOperator& ham, const Ansatz& ansatz, std::span<const double> params,
                                int shots, std::uint64_t seed);

}  // namespace spvqe
