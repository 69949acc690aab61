#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spvqe {

enum class OptimizerMethod { CG, NFT };

OptimizerMethod optimizer_method_from_string(const std::string& name);
std::string to_string(OptimizerMethod m);

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::CG;
  int max_iterations = 200;
  double gradient_tolerance = 1e-9;
  /// NFT: full passes over the parameters.
  int sweeps = 40;
  /// NFT: shuffle the parameter visit order each sweep with this seed.
  bool shuffle = false;
  std::uint64_t seed = 0;
  /// Hard cap on objective evaluations; 0 means unlimited.
  long max_evaluations = 0;
  /// NFT: allowed mismatch between a fitted sinusoid's prediction and the next measurement.
  /// Must be loosened (or disabled with +inf) when expectations are sampled.
  double fit_tolerance = 1e-8;

  /// Throws StructuralError on a non-positive budget or tolerance.
  void validate() const;
};

struct OptimizationTrace {
  std::vector<double> best_params;
  double best_value = 0.0;
  /// Objective evaluations (CG counts every value and gradient call, NFT every component probe).
  long evaluations = 0;
  std::vector<std::pair<int, double>> history;
  int iterations = 0;

  friend bool operator==(const OptimizationTrace&, const OptimizationTrace&) = default;
};

using ValueFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

/**
 * Nonlinear conjugate gradient (Polak-Ribiere, reset to steepest descent
 * whenever beta < 0 or the direction is not a descent direction).
 *
 * Each line search tries the unit step, then the minimiser of the quadratic
 * interpolating f(0), f'(0) and f(1); the best trial satisfying the Armijo
 * condition (c = 1e-4) wins. If neither does, the step is halved until one
 * does. Stops when |grad| <= gradient_tolerance, after max_iterations, when
 * the evaluation budget runs out, or when even a steepest-descent line
 * search cannot make progress.
 *
 * Throws OptimizationError on a non-finite value or gradient.
 */
OptimizationTrace cg_minimize(const ValueFn& value_fn, const GradientFn& gradient_fn, std::vector<double> x0,
                              const OptimizerConfig& cfg);

/// Penalty weights and targets for F = c[0] + sum_i mus[i] * (c[i+1] - targets[i])^2.
struct PenaltyStructure {
  std::vector<double> mus;
  std::vector<double> targets;
};

/// Returns {E, A_1, ..., A_m} at a parameter vector.
using ComponentFn = std::function<std::vector<double>(std::span<const double>)>;

/**
 * Sequential single-angle minimisation exploiting that every component
 * expectation is a + b cos(theta_k - c) in any one angle.
 *
 * For each angle the components are probed at theta_k and theta_k +/- 2pi/3,
 * each fitted exactly, and the penalised cost rebuilt as a degree-2
 * trigonometric polynomial. Its global minimiser on [-pi, pi) (1024-point
 * grid plus one Newton step) replaces theta_k unless it would raise the
 * cost. The measured components at the next probe are compared with the fit
 * prediction; a mismatch above fit_tolerance throws StructuralError.
 */
OptimizationTrace nft_minimize(const ComponentFn& component_fn, const PenaltyStructure& structure,
                               std::vector<double> x0, const OptimizerConfig& cfg);

/// Penalised cost of a component vector.
double penalized_value(std::span<const double> components, const PenaltyStructure& structure);

}  // namespace spvqe
