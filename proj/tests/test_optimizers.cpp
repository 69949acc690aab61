#include "spvqe/circuit.hpp"
#include "spvqe/errors.hpp"
#include "spvqe/optimizers.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace spvqe;

namespace {

constexpr double kPi = 3.141592653589793;

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

std::vector<double> twice(std::span<const double> x) {
  std::vector<double> g(x.begin(), x.end());
  for (auto& v : g) v *= 2.0;
  return g;
}

void check_history(const OptimizationTrace& t) {
  REQUIRE_FALSE(t.history.empty());
  double running = t.history.front().second;
  for (const auto& [it, v] : t.history) running = std::min(running, v);
  CHECK(t.best_value == running);
}

}  // namespace

TEST_CASE("CG on a quadratic bowl") {
  OptimizerConfig cfg;
  cfg.max_iterations = 50;
  const auto t = cg_minimize(sum_sq, twice, {1.0, 1.0}, cfg);
  CHECK(t.best_value < 1e-10);
  CHECK(t.iterations <= 50);
  check_history(t);
}

TEST_CASE("CG on a shifted parabola") {
  const auto t = cg_minimize([](std::span<const double> x) { return (x[0] - 3) * (x[0] - 3); },
                             [](std::span<const double> x) { return std::vector<double>{2 * (x[0] - 3)}; }, {0.0},
                             OptimizerConfig{});
  CHECK(std::abs(t.best_params[0] - 3.0) <= 1e-6);
}

TEST_CASE("CG converges on a convex quadratic in dimension-many iterations") {
  std::mt19937_64 rng(3);
  for (int n : {2, 3, 5, 8}) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = testutil::uniform(rng, -1, 1);
    const Eigen::MatrixXd a = m * m.transpose() + Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = testutil::uniform(rng, -1, 1);
    const Eigen::VectorXd x_star = a.ldlt().solve(b);
    const auto f = [&](std::span<const double> x) {
      const Eigen::Map<const Eigen::VectorXd> v(x.data(), n);
      return 0.5 * v.dot(a * v) - b.dot(v);
    };
    const auto g = [&](std::span<const double> x) {
      const Eigen::Map<const Eigen::VectorXd> v(x.data(), n);
      const Eigen::VectorXd r = a * v - b;
      return std::vector<double>(r.data(), r.data() + n);
    };
    OptimizerConfig cfg;
    cfg.max_iterations = n;
    cfg.gradient_tolerance = 1e-12;
    const auto t = cg_minimize(f, g, std::vector<double>(static_cast<std::size_t>(n), 0.0), cfg);
    const Eigen::Map<const Eigen::VectorXd> x(t.best_params.data(), n);
    CHECK((x - x_star).norm() <= 1e-8);
  }
}

TEST_CASE("CG finds the ground energy of a diagonal two-qubit Hamiltonian") {
  const QubitOperator h(2, {{0.3, "ZI"}, {-0.7, "IZ"}, {0.2, "ZZ"}, {-0.1, "II"}});
  // diagonal: the oracle is the smallest diagonal entry
  const Eigen::MatrixXcd m = to_matrix(h);
  double exact = m(0, 0).real();
  for (int i = 1; i < 4; ++i) exact = std::min(exact, m(i, i).real());
  const Ansatz a = build_ansatz(2, 1);
  const auto t = cg_minimize([&](std::span<const double> p) { return expval(apply_ansatz(a, p), h); },
                             [&](std::span<const double> p) { return parameter_shift_grad(a, p, h); },
                             {0.1, -0.2, 0.3, 0.4}, OptimizerConfig{});
  CHECK(std::abs(t.best_value - exact) <= 1e-8);
}

TEST_CASE("CG reports non-finite values with the last good iterate") {
  // descends along +x until the objective stops being finite beyond x = 2
  const auto f = [](std::span<const double> x) { return x[0] < 2.0 ? -x[0] : std::nan(""); };
  const auto g = [](std::span<const double>) { return std::vector<double>{-1.0}; };
  OptimizerConfig cfg;
  cfg.max_iterations = 100;
  try {
    cg_minimize(f, g, {0.0}, cfg);
    FAIL("expected OptimizationError");
  } catch (const OptimizationError& e) {
    REQUIRE(e.last_good().size() == 1);
    CHECK(e.last_good()[0] < 2.0);
    CHECK(std::isfinite(f(e.last_good())));
  }
  CHECK_THROWS_AS(cg_minimize(sum_sq, [](std::span<const double>) { return std::vector<double>{1.0, 2.0}; }, {1.0},
                              OptimizerConfig{}),
                  StructuralError);
}

TEST_CASE("CG respects the evaluation budget and never ends above the start") {
  std::mt19937_64 rng(9);
  const auto rosen = [](std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto rosen_g = [](std::span<const double> x) {
    return std::vector<double>{-400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]), 200 * (x[1] - x[0] * x[0])};
  };
  for (int t = 0; t < 10; ++t) {
    const std::vector<double> x0{testutil::uniform(rng, -2, 2), testutil::uniform(rng, -2, 2)};
    OptimizerConfig cfg;
    cfg.max_evaluations = 40;
    const auto tr = cg_minimize(rosen, rosen_g, x0, cfg);
    CHECK(tr.evaluations <= 40);
    CHECK(tr.best_value <= rosen(x0));
    check_history(tr);
    CHECK(tr == cg_minimize(rosen, rosen_g, x0, cfg));
  }
}

TEST_CASE("optimizer config validation") {
  OptimizerConfig cfg;
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), StructuralError);
  cfg = {};
  cfg.gradient_tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), StructuralError);
  cfg = {};
  cfg.sweeps = 0;
  CHECK_THROWS_AS(cfg.validate(), StructuralError);
  cfg = {};
  cfg.fit_tolerance = -1.0;
  CHECK_THROWS_AS(cfg.validate(), StructuralError);
  cfg = {};
  cfg.max_evaluations = -1;
  CHECK_THROWS_AS(cfg.validate(), StructuralError);
  CHECK(optimizer_method_from_string("nft") == OptimizerMethod::NFT);
  CHECK(optimizer_method_from_string(to_string(OptimizerMethod::CG)) == OptimizerMethod::CG);
  CHECK_THROWS_AS(optimizer_method_from_string("adam"), StructuralError);
}

TEST_CASE("NFT solves a cosine landscape in one sweep") {
  OptimizerConfig cfg;
  cfg.method = OptimizerMethod::NFT;
  cfg.sweeps = 1;
  const auto t = nft_minimize([](std::span<const double> x) { return std::vector<double>{std::cos(x[0])}; }, {},
                              {0.4}, cfg);
  CHECK(std::abs(std::abs(t.best_params[0]) - kPi) <= 1e-7);
  CHECK(t.best_value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("NFT on a penalty-only cost finds a zero of the cosine") {
  OptimizerConfig cfg;
  cfg.method = OptimizerMethod::NFT;
  cfg.sweeps = 2;
  const auto t = nft_minimize(
      [](std::span<const double> x) { return std::vector<double>{0.0, std::cos(x[0])}; }, {{1.0}, {0.0}}, {0.3}, cfg);
  CHECK(std::abs(std::abs(t.best_params[0]) - kPi / 2) <= 1e-6);
  CHECK(std::abs(t.best_value) <= 1e-12);
}

TEST_CASE("NFT on a penalised two-qubit problem is optimal along every single-angle slice") {
  const QubitOperator h(2, {{0.5, "ZI"}, {-0.3, "IZ"}, {0.4, "XX"}, {0.2, "YY"}});
  const QubitOperator n_op(2, {{1.0, "II"}, {-0.5, "ZI"}, {-0.5, "IZ"}});
  const Ansatz a = build_ansatz(2, 1);
  const PenaltyStructure ps{{2.0}, {1.0}};
  const auto comps = [&](std::span<const double> p) {
    const auto s = apply_ansatz(a, p);
    return std::vector<double>{expval(s, h), expval(s, n_op)};
  };
  OptimizerConfig cfg;
  cfg.method = OptimizerMethod::NFT;
  cfg.sweeps = 60;
  const auto t = nft_minimize(comps, ps, {0.3, -1.0, 2.0, 0.5}, cfg);
  // dense 1-D grid oracle on each slice through the final point
  for (std::size_t k = 0; k < 4; ++k) {
    auto p = t.best_params;
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20000; ++i) {
      p[k] = -kPi + 2 * kPi * i / 20000;
      grid_min = std::min(grid_min, penalized_value(comps(p), ps));
    }
    CHECK(t.best_value <= grid_min + 1e-7);
  }
  CHECK(penalized_value(comps(t.best_params), ps) == doctest::Approx(t.best_value).epsilon(1e-12));
}

TEST_CASE("NFT never raises the measured cost and is deterministic") {
  std::mt19937_64 rng(21);
  const Ansatz a = build_ansatz(3, 2);
  QubitOperator h(3);
  for (int k = 0; k < 8; ++k) h.add(testutil::random_word(rng, 3), testutil::uniform(rng, -1, 1));
  const QubitOperator z(3, {{1.0, "ZZI"}});
  const auto comps = [&](std::span<const double> p) {
    const auto s = apply_ansatz(a, p);
    return std::vector<double>{expval(s, h), expval(s, z)};
  };
  std::vector<double> x0(9);
  for (auto& v : x0) v = testutil::uniform(rng, -kPi, kPi);
  OptimizerConfig cfg;
  cfg.method = OptimizerMethod::NFT;
  cfg.sweeps = 10;
  cfg.shuffle = true;
  cfg.seed = 4;
  const auto t = nft_minimize(comps, {{3.0}, {-1.0}}, x0, cfg);
  for (std::size_t i = 1; i < t.history.size(); ++i) {
    CHECK(t.history[i].second <= t.history[i - 1].second + 1e-10);
  }
  check_history(t);
  // three probes per angle per sweep plus one closing measurement
  CHECK(t.evaluations == 3L * 9 * 10 + 1);
  CHECK(t == nft_minimize(comps, {{3.0}, {-1.0}}, x0, cfg));
  cfg.seed = 5;
  CHECK_FALSE(t == nft_minimize(comps, {{3.0}, {-1.0}}, x0, cfg));
}

TEST_CASE("NFT budget and input errors") {
  OptimizerConfig cfg;
  cfg.method = OptimizerMethod::NFT;
  cfg.max_evaluations = 10;
  const auto cosine = [](std::span<const double> x) { return std::vector<double>{std::cos(x[0]) + std::cos(x[1])}; };
  const auto t = nft_minimize(cosine, {}, {0.1, 0.2}, cfg);
  CHECK(t.evaluations <= 10);

  cfg = {};
  cfg.method = OptimizerMethod::NFT;
  // cos(2x) is not a single-frequency sinusoid
  CHECK_THROWS_AS(nft_minimize([](std::span<const double> x) { return std::vector<double>{std::cos(2 * x[0])}; }, {},
                               {0.2}, cfg),
                  StructuralError);
  CHECK_THROWS_AS(nft_minimize(cosine, {{1.0}, {}}, {0.1, 0.2}, cfg), StructuralError);
  CHECK_THROWS_AS(nft_minimize(cosine, {{1.0}, {0.0}}, {0.1, 0.2}, cfg), StructuralError);
  CHECK_THROWS_AS(nft_minimize([](std::span<const double>) { return std::vector<double>{std::nan("")}; }, {}, {0.1},
                               cfg),
                  OptimizationError);
}

TEST_CASE("penalized_value") {
  const std::vector<double> c{-1.0, 2.5};
  CHECK(penalized_value(c, {{4.0}, {2.0}}) == 0.0);
  CHECK_THROWS_AS(penalized_value(c, {{}, {}}), StructuralError);
}
