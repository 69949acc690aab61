#include "spvqe/vqe.hpp"

#include "spvqe/seed.hpp"

#include <algorithm>
#include <cmath>

namespace spvqe {

ConstraintKind constraint_kind_from_string(const std::string& name) {
  if (name == "total_spin") return ConstraintKind::TotalSpin;
  if (name == "particle_number") return ConstraintKind::ParticleNumber;
  if (name == "custom") return ConstraintKind::Custom;
  throw StructuralError("unknown constraint label '" + name + "'");
}

std::string to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::TotalSpin: return "total_spin";
    case ConstraintKind::ParticleNumber: return "particle_number";
    case ConstraintKind::Custom: return "custom";
  }
  return "custom";
}

CostBreakdown penalized_cost(const QubitOperator& ham, std::span<const Constraint> constraints,
                             std::span<const double> mus, const Statevector& state) {
  if (mus.size() != constraints.size()) throw StructuralError("penalized_cost: one multiplier per constraint required");
  CostBreakdown out;
  out.energy = expval(state, ham);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (mus[i] < 0.0) throw StructuralError("penalized_cost: multipliers must be non-negative");
    const double v = expval(state, constraints[i].op);
    out.constraint_values.push_back(v);
    if (mus[i] == 0.0) continue;
    const double r = v - constraints[i].target;
    out.penalty += mus[i] * r * r;
  }
  out.cost = out.energy + out.penalty;
  return out;
}

PenalizedObjective::PenalizedObjective(const QubitOperator& ham, std::span<const Constraint> constraints,
                                       std::vector<double> mus, const Ansatz& ansatz, Sampling sampling)
    : ham_(ham), constraints_(constraints), mus_(std::move(mus)), ansatz_(ansatz), sampling_(sampling) {
  if (mus_.size() != constraints_.size()) throw StructuralError("PenalizedObjective: one multiplier per constraint required");
  if (std::any_of(mus_.begin(), mus_.end(), [](double m) { return !(m >= 0.0); })) {
    throw StructuralError("PenalizedObjective: multipliers must be non-negative");
  }
  if (ham_.n_qubits() != ansatz_.n_qubits()) throw StructuralError("PenalizedObjective: Hamiltonian and ansatz sizes differ");
  for (const auto& c : constraints_) {
    if (c.op.n_qubits() != ham_.n_qubits()) throw StructuralError("PenalizedObjective: constraint size differs from Hamiltonian");
  }
}

std::vector<double> PenalizedObjective::expectations(const Statevector& state) {
  std::vector<double> out;
  out.reserve(constraints_.size() + 1);
  const std::uint64_t call = calls_++;
  const auto measure = [&](const QubitOperator& op, std::uint64_t index) {
    if (sampling_.shots == 0) return expval(state, op);
    return sampled_expval(state, op, sampling_.shots, derive_seed({sampling_.seed, call, index})).mean;
  };
  out.push_back(measure(ham_, 0));
  for (std::size_t i = 0; i < constraints_.size(); ++i) out.push_back(measure(constraints_[i].op, i + 1));
  return out;
}

std::vector<double> PenalizedObjective::components(std::span<const double> params) {
  return expectations(apply_ansatz(ansatz_, params));
}

CostBreakdown PenalizedObjective::evaluate(std::span<const double> params) {
  const auto c = components(params);
  CostBreakdown out;
  out.energy = c[0];
  out.constraint_values.assign(c.begin() + 1, c.end());
  for (std::size_t i = 0; i < mus_.size(); ++i) {
    if (mus_[i] == 0.0) continue;
    const double r = c[i + 1] - constraints_[i].target;
    out.penalty += mus_[i] * r * r;
  }
  out.cost = out.energy + out.penalty;
  return out;
}

std::vector<double> PenalizedObjective::gradient(std::span<const double> params) {
  constexpr double shift = 1.5707963267948966;  // pi / 2
  const bool penalised = std::any_of(mus_.begin(), mus_.end(), [](double m) { return m != 0.0; });
  std::vector<double> residual(mus_.size(), 0.0);
  if (penalised) {
    const auto c = components(params);
    for (std::size_t i = 0; i < mus_.size(); ++i) residual[i] = c[i + 1] - constraints_[i].target;
  }
  std::vector<double> theta(params.begin(), params.end());
  std::vector<double> grad(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double saved = theta[k];
    theta[k] = saved + shift;
    const auto plus = components(theta);
    theta[k] = saved - shift;
    const auto minus = components(theta);
    theta[k] = saved;
    double g = 0.5 * (plus[0] - minus[0]);
    for (std::size_t i = 0; i < mus_.size(); ++i) {
      if (mus_[i] == 0.0) continue;
      g += 2.0 * mus_[i] * residual[i] * 0.5 * (plus[i + 1] - minus[i + 1]);
    }
    grad[k] = g;
  }
  return grad;
}

PenaltyStructure PenalizedObjective::structure() const {
  PenaltyStructure s;
  s.mus = mus_;
  for (const auto& c : constraints_) s.targets.push_back(c.target);
  return s;
}

VqeResult cvqe_run(const QubitOperator& ham, std::span<const Constraint> constraints, std::vector<double> mus,
                   const Ansatz& ansatz, std::vector<double> x0, const OptimizerConfig& cfg, Sampling sampling) {
  if (static_cast<int>(x0.size()) != ansatz.num_parameters()) {
    throw StructuralError("cvqe_run: starting point has " + std::to_string(x0.size()) + " entries, ansatz needs " +
                          std::to_string(ansatz.num_parameters()));
  }
  PenalizedObjective objective(ham, constraints, mus, ansatz, sampling);
  VqeResult result;
  if (cfg.method == OptimizerMethod::CG) {
    result.trace = cg_minimize([&](std::span<const double> p) { return objective.evaluate(p).cost; },
                               [&](std::span<const double> p) { return objective.gradient(p); }, std::move(x0), cfg);
  } else {
    result.trace = nft_minimize([&](std::span<const double> p) { return objective.components(p); },
                                objective.structure(), std::move(x0), cfg);
  }
  const auto at_best = objective.evaluate(result.trace.best_params);
  result.params = result.trace.best_params;
  result.cost = at_best.cost;
  result.penalty = at_best.penalty;
  result.energy = at_best.cost - at_best.penalty;
  result.constraint_values = at_best.constraint_values;
  result.mus = std::move(mus);
  return result;
}

VqeResult vqe_run(const QubitOperator& ham, const Ansatz& ansatz, std::vector<double> x0, const OptimizerConfig& cfg,
                  Sampling sampling) {
  return cvqe_run(ham, {}, {}, ansatz, std::move(x0), cfg, sampling);
}

void PenaltySchedule::validate() const {
  if (n_steps < 1) throw StructuralError("PenaltySchedule: n_steps must be >= 1");
  if (mu_max.empty()) throw StructuralError("PenaltySchedule: mu_max is empty");
  if (std::any_of(mu_max.begin(), mu_max.end(), [](double m) { return !(m >= 0.0) || !std::isfinite(m); })) {
    throw StructuralError("PenaltySchedule: mu_max must be finite and >= 0");
  }
}

double PenaltySchedule::step(std::size_t constraint) const {
  const double m = mu_max.size() == 1 ? mu_max.front() : mu_max.at(constraint);
  return m / n_steps;
}

std::vector<double> PenaltySchedule::mus_at(int k, std::size_t n_constraints) const {
  if (k < 1 || k > n_steps) throw StructuralError("PenaltySchedule: step index out of range");
  if (mu_max.size() != 1 && mu_max.size() != n_constraints) {
    throw StructuralError("PenaltySchedule: need one mu_max or one per constraint");
  }
  std::vector<double> out(n_constraints);
  for (std::size_t i = 0; i < n_constraints; ++i) {
    const double m = mu_max.size() == 1 ? mu_max.front() : mu_max[i];
    out[i] = k == n_steps ? m : m * k / n_steps;
  }
  return out;
}

BudgetMode budget_mode_from_string(const std::string& name) {
  if (name == "per_step") return BudgetMode::PerStep;
  if (name == "total") return BudgetMode::Total;
  throw StructuralError("unknown budget mode '" + name + "'");
}

std::string to_string(BudgetMode m) { return m == BudgetMode::PerStep ? "per_step" : "total"; }

OptimizerConfig split_budget(const OptimizerConfig& cfg, int n_steps) {
  if (n_steps < 1) throw StructuralError("split_budget: n_steps must be >= 1");
  OptimizerConfig out = cfg;
  out.max_iterations = std::max(1, cfg.max_iterations / n_steps);
  out.sweeps = std::max(1, cfg.sweeps / n_steps);
  if (cfg.max_evaluations > 0) out.max_evaluations = std::max(1L, cfg.max_evaluations / n_steps);
  return out;
}

long SpvqeResult::evaluations() const {
  long total = 0;
  for (const auto& s : steps) total += s.result.trace.evaluations;
  return total;
}

SpvqeResult spvqe_run(const QubitOperator& ham, std::span<const Constraint> constraints,
                      const PenaltySchedule& schedule, const Ansatz& ansatz, std::vector<double> x0,
                      const OptimizerConfig& cfg, BudgetMode budget, Sampling sampling) {
  schedule.validate();
  const OptimizerConfig step_cfg = budget == BudgetMode::Total ? split_budget(cfg, schedule.n_steps) : cfg;
  SpvqeResult out;
  const std::vector<double> final_mus = schedule.mus_at(schedule.n_steps, constraints.size());
  std::vector<double> start = std::move(x0);
  for (int k = 1; k <= schedule.n_steps; ++k) {
    SpvqeStep step;
    step.k = k;
    step.mus = schedule.mus_at(k, constraints.size());
    step.start = start;
    // step 1 keeps the caller's seed so a one-step run matches cvqe_run
    Sampling step_sampling = sampling;
    if (k > 1) step_sampling.seed = derive_seed({sampling.seed, static_cast<std::uint64_t>(k)});
    try {
      step.result = cvqe_run(ham, constraints, step.mus, ansatz, start, step_cfg, step_sampling);
    } catch (const Error& e) {
      throw SpvqeAbortedError("spvqe_run: step " + std::to_string(k) + " failed: " + e.what(), std::move(out));
    }
    start = step.result.params;
    step.selection_cost = step.result.energy;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      if (final_mus[i] == 0.0) continue;
      const double r = step.result.constraint_values[i] - constraints[i].target;
      step.selection_cost += final_mus[i] * r * r;
    }
    if (out.steps.empty() || step.selection_cost < out.steps[out.best_index].selection_cost) {
      out.best_index = out.steps.size();
    }
    out.steps.push_back(std::move(step));
  }
  return out;
}

double mu_max_lower_bound(double e_gs, double e_target, double a_gs_expval, double a_target) {
  const double gap = a_gs_expval - a_target;
  if (gap == 0.0) {
    throw DegenerateConstraintError("mu_max_lower_bound: the ground state already satisfies the constraint");
  }
  return (e_gs - e_target) / (gap * gap);
}

SampledEstimate final_remeasure(const QubitOperator& ham, const Ansatz& ansatz, std::span<const double> params,
                                int shots, std::uint64_t seed) {
  return sampled_expval(apply_ansatz(ansatz, params), ham, shots, seed);
}

}  // namespace spvqe
