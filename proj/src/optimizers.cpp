#include "spvqe/optimizers.hpp"

#include "spvqe/errors.hpp"
#include "spvqe/seed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace spvqe {

namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxBacktracks = 60;
constexpr double kMaxInterpolatedStep = 1e3;
constexpr int kNftGrid = 1024;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> axpy(std::span<const double> x, double alpha, std::span<const double> d) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * d[i];
  return out;
}

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  w -= std::numbers::pi;
  return w >= std::numbers::pi ? -std::numbers::pi : w;
}

/// a + p cos t + q sin t, fitted through t = 0, +2pi/3, -2pi/3.
struct Sinusoid {
  double a = 0.0;
  double p = 0.0;
  double q = 0.0;

  static Sinusoid fit(double f0, double f_plus, double f_minus) {
    return {(f0 + f_plus + f_minus) / 3.0, (2.0 * f0 - f_plus - f_minus) / 3.0,
            (f_plus - f_minus) / std::numbers::sqrt3};
  }
  double value(double c, double s) const { return a + p * c + q * s; }
  double d1(double c, double s) const { return -p * s + q * c; }
  double d2(double c, double s) const { return -p * c - q * s; }
  double scale() const { return std::abs(a) + std::hypot(p, q); }
};

/// Penalised cost rebuilt from fitted components, as a function of the shift t.
class TrigCost {
 public:
  TrigCost(std::vector<Sinusoid> fits, const PenaltyStructure& s) : fits_(std::move(fits)), s_(s) {}

  double value(double t) const {
    const double c = std::cos(t);
    const double sn = std::sin(t);
    double f = fits_[0].value(c, sn);
    for (std::size_t i = 0; i < s_.mus.size(); ++i) {
      if (s_.mus[i] == 0.0) continue;
      const double r = fits_[i + 1].value(c, sn) - s_.targets[i];
      f += s_.mus[i] * r * r;
    }
    return f;
  }

  /// First and second derivative at t.
  std::pair<double, double> derivatives(double t) const {
    const double c = std::cos(t);
    const double sn = std::sin(t);
    double g = fits_[0].d1(c, sn);
    double h = fits_[0].d2(c, sn);
    for (std::size_t i = 0; i < s_.mus.size(); ++i) {
      if (s_.mus[i] == 0.0) continue;
      const auto& fit = fits_[i + 1];
      const double r = fit.value(c, sn) - s_.targets[i];
      const double d1 = fit.d1(c, sn);
      g += 2.0 * s_.mus[i] * r * d1;
      h += 2.0 * s_.mus[i] * (d1 * d1 + r * fit.d2(c, sn));
    }
    return {g, h};
  }

  std::vector<double> components(double t) const {
    const double c = std::cos(t);
    const double sn = std::sin(t);
    std::vector<double> out;
    out.reserve(fits_.size());
    for (const auto& f : fits_) out.push_back(f.value(c, sn));
    return out;
  }

 private:
  std::vector<Sinusoid> fits_;
  const PenaltyStructure& s_;
};

}  // namespace

OptimizerMethod optimizer_method_from_string(const std::string& name) {
  if (name == "CG" || name == "cg") return OptimizerMethod::CG;
  if (name == "NFT" || name == "nft") return OptimizerMethod::NFT;
  throw StructuralError("unknown optimizer '" + name + "'");
}

std::string to_string(OptimizerMethod m) { return m == OptimizerMethod::CG ? "CG" : "NFT"; }

void OptimizerConfig::validate() const {
  if (max_iterations < 1) throw StructuralError("OptimizerConfig: max_iterations must be >= 1");
  if (!(gradient_tolerance > 0.0)) throw StructuralError("OptimizerConfig: gradient_tolerance must be > 0");
  if (sweeps < 1) throw StructuralError("OptimizerConfig: sweeps must be >= 1");
  if (max_evaluations < 0) throw StructuralError("OptimizerConfig: max_evaluations must be >= 0");
  if (!(fit_tolerance > 0.0)) throw StructuralError("OptimizerConfig: fit_tolerance must be > 0");
}

double penalized_value(std::span<const double> components, const PenaltyStructure& structure) {
  if (components.size() != structure.mus.size() + 1 || structure.targets.size() != structure.mus.size()) {
    throw StructuralError("penalized_value: component count does not match the penalty structure");
  }
  double f = components[0];
  for (std::size_t i = 0; i < structure.mus.size(); ++i) {
    if (structure.mus[i] == 0.0) continue;
    const double r = components[i + 1] - structure.targets[i];
    f += structure.mus[i] * r * r;
  }
  return f;
}

OptimizationTrace cg_minimize(const ValueFn& value_fn, const GradientFn& gradient_fn, std::vector<double> x0,
                              const OptimizerConfig& cfg) {
  cfg.validate();
  OptimizationTrace trace;
  std::vector<double> x = std::move(x0);

  const auto value_at = [&](std::span<const double> p) {
    ++trace.evaluations;
    const double v = value_fn(p);
    if (!std::isfinite(v)) throw OptimizationError("cg_minimize: non-finite objective value", x);
    return v;
  };
  const auto gradient_at = [&](std::span<const double> p) {
    ++trace.evaluations;
    auto g = gradient_fn(p);
    if (g.size() != p.size()) throw StructuralError("cg_minimize: gradient has the wrong dimension");
    if (!all_finite(g)) throw OptimizationError("cg_minimize: non-finite gradient", x);
    return g;
  };
  const auto budget_left = [&] { return cfg.max_evaluations == 0 || trace.evaluations < cfg.max_evaluations; };

  double f = value_at(x);
  std::vector<double> g = gradient_at(x);
  std::vector<double> d(g.size());
  std::transform(g.begin(), g.end(), d.begin(), std::negate<>());
  bool steepest = true;
  trace.history.emplace_back(0, f);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (std::sqrt(dot(g, g)) <= cfg.gradient_tolerance || !budget_left()) break;

    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      std::transform(g.begin(), g.end(), d.begin(), std::negate<>());
      slope = -dot(g, g);
      steepest = true;
    }

    // Line search: unit step, quadratic interpolant, then halving.
    double best_alpha = 0.0;
    double best_f = f;
    std::vector<double> best_x;
    const auto try_step = [&](double alpha) {
      auto xt = axpy(x, alpha, d);
      const double ft = value_at(xt);
      if (ft <= f + kArmijoC * alpha * slope && ft < best_f) {
        best_alpha = alpha;
        best_f = ft;
        best_x = std::move(xt);
      }
      return ft;
    };
    const double f_unit = try_step(1.0);
    const double curvature = f_unit - f - slope;
    if (curvature > 0.0) {
      const double alpha_q = -slope / (2.0 * curvature);
      if (alpha_q > 0.0 && alpha_q <= kMaxInterpolatedStep && alpha_q != 1.0 && budget_left()) try_step(alpha_q);
    }
    for (double alpha = kBacktrack; best_alpha == 0.0 && alpha > 0.0 && budget_left();) {
      try_step(alpha);
      alpha *= kBacktrack;
      if (alpha < std::pow(kBacktrack, kMaxBacktracks)) break;
    }

    if (best_alpha == 0.0) {
      if (steepest) break;  // no progress even along -g
      std::transform(g.begin(), g.end(), d.begin(), std::negate<>());
      steepest = true;
      continue;
    }

    x = std::move(best_x);
    f = best_f;
    trace.iterations = it;
    trace.history.emplace_back(it, f);
    if (!budget_left()) break;

    std::vector<double> g_new = gradient_at(x);
    double beta = 0.0;
    const double gg = dot(g, g);
    if (gg > 0.0) {
      double num = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) num += g_new[i] * (g_new[i] - g[i]);
      beta = num / gg;
    }
    if (beta < 0.0) beta = 0.0;
    steepest = beta == 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -g_new[i] + beta * d[i];
    g = std::move(g_new);
  }

  trace.best_params = std::move(x);
  trace.best_value = f;
  return trace;
}

OptimizationTrace nft_minimize(const ComponentFn& component_fn, const PenaltyStructure& structure,
                               std::vector<double> x0, const OptimizerConfig& cfg) {
  cfg.validate();
  if (structure.mus.size() != structure.targets.size()) {
    throw StructuralError("nft_minimize: mus and targets differ in length");
  }
  const std::size_t n_components = structure.mus.size() + 1;
  OptimizationTrace trace;
  std::vector<double> x = std::move(x0);

  std::vector<double> predicted;  // fit prediction for the components at the current x
  double prediction_scale = 1.0;
  const auto probe = [&](std::span<const double> p) {
    ++trace.evaluations;
    auto c = component_fn(p);
    if (c.size() != n_components) throw StructuralError("nft_minimize: component function returned the wrong count");
    if (!all_finite(c)) throw OptimizationError("nft_minimize: non-finite component value", x);
    return c;
  };
  const auto check_prediction = [&](const std::vector<double>& measured) {
    if (predicted.empty()) return;
    for (std::size_t j = 0; j < measured.size(); ++j) {
      if (std::abs(measured[j] - predicted[j]) > cfg.fit_tolerance * std::max(1.0, prediction_scale)) {
        throw StructuralError("nft_minimize: sinusoid fit residual " + std::to_string(std::abs(measured[j] - predicted[j])) +
                              " exceeds tolerance; component is not sinusoidal in a single angle");
      }
    }
  };
  const auto budget_left = [&] {
    return cfg.max_evaluations == 0 || trace.evaluations + 3 <= cfg.max_evaluations;
  };

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(derive_seed({cfg.seed, 0x6e6674}));

  // history holds measured costs only, one per probe of the current point
  std::vector<double> best_x = x;
  double best_value = std::numeric_limits<double>::infinity();
  const auto record = [&](const std::vector<double>& at, double value) {
    trace.history.emplace_back(static_cast<int>(trace.history.size()), value);
    if (value < best_value) {
      best_value = value;
      best_x = at;
    }
  };
  bool exhausted = false;
  for (int sweep = 0; sweep < cfg.sweeps && !exhausted; ++sweep) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k : order) {
      if (!budget_left()) {
        exhausted = true;
        break;
      }
      const double base = x[k];
      const auto c0 = probe(x);
      check_prediction(c0);
      x[k] = base + 2.0 * std::numbers::pi / 3.0;
      const auto c_plus = probe(x);
      x[k] = base - 2.0 * std::numbers::pi / 3.0;
      const auto c_minus = probe(x);
      x[k] = base;

      std::vector<Sinusoid> fits;
      fits.reserve(n_components);
      prediction_scale = 0.0;
      for (std::size_t j = 0; j < n_components; ++j) {
        fits.push_back(Sinusoid::fit(c0[j], c_plus[j], c_minus[j]));
        prediction_scale = std::max(prediction_scale, fits.back().scale());
      }
      const TrigCost cost(std::move(fits), structure);
      const double f_base = penalized_value(c0, structure);
      record(x, f_base);

      // global minimiser over absolute angle in [-pi, pi)
      double best_theta = base;
      double best_f = f_base;
      double grid_theta = -std::numbers::pi;
      double grid_f = std::numeric_limits<double>::infinity();
      for (int gi = 0; gi < kNftGrid; ++gi) {
        const double theta = -std::numbers::pi + 2.0 * std::numbers::pi * gi / kNftGrid;
        const double v = cost.value(theta - base);
        if (v < grid_f) {
          grid_f = v;
          grid_theta = theta;
        }
      }
      const auto [d1, d2] = cost.derivatives(grid_theta - base);
      if (d2 > 0.0) {
        const double step = -d1 / d2;
        if (std::abs(step) <= 2.0 * std::numbers::pi / kNftGrid) {
          const double polished = grid_theta + step;
          const double v = cost.value(polished - base);
          if (v <= grid_f) {
            grid_theta = polished;
            grid_f = v;
          }
        }
      }
      if (grid_f <= best_f) {
        best_theta = wrap_angle(grid_theta);
        best_f = grid_f;
      }
      x[k] = best_theta;
      predicted = cost.components(best_theta - base);
    }
    trace.iterations = sweep + 1;
  }

  const auto final_c = probe(x);
  check_prediction(final_c);
  record(x, penalized_value(final_c, structure));
  trace.best_params = std::move(best_x);
  trace.best_value = best_value;
  return trace;
}

}  // namespace spvqe
