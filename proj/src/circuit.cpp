#include "spvqe/circuit.hpp"

#include "spvqe/errors.hpp"
#include "spvqe/seed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace spvqe {

namespace {

constexpr double kHermitianTol = 1e-10;

void check_operator(const Statevector& state, const QubitOperator& op) {
  if (state.n_qubits() != op.n_qubits()) {
    throw StructuralError("expectation: state has " + std::to_string(state.n_qubits()) + " qubits, operator has " +
                          std::to_string(op.n_qubits()));
  }
  if (!op.is_hermitian(kHermitianTol)) throw NonHermitianError("expectation: operator is not Hermitian");
}

/// <psi|P|psi> for one Pauli word (real for Hermitian P).
double pauli_expectation(std::span<const cplx> psi, const PauliMasks& m) {
  cplx acc{};
  for (std::size_t b = 0; b < psi.size(); ++b) {
    const double sign = (std::popcount(b & m.z) & 1) ? -1.0 : 1.0;
    acc += std::conj(psi[b ^ m.x]) * psi[b] * sign;
  }
  // i^{n_y}
  switch (m.n_y & 3) {
    case 0: return acc.real();
    case 1: return -acc.imag();
    case 2: return -acc.real();
    default: return acc.imag();
  }
}

}  // namespace

Ansatz::Ansatz(int n_qubits, int depth) : n_qubits_(n_qubits), depth_(depth) {
  if (n_qubits < 1) throw StructuralError("Ansatz: n_qubits must be >= 1");
  if (depth < 0) throw StructuralError("Ansatz: depth must be >= 0");
}

Ansatz build_ansatz(int n_qubits, int depth) { return Ansatz(n_qubits, depth); }

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxDenseQubits) {
    throw CapacityError("Statevector: " + std::to_string(n_qubits) + " qubits outside [0, " +
                        std::to_string(kMaxDenseQubits) + "]");
  }
  amps_.assign(std::size_t{1} << n_qubits, cplx{});
  amps_[0] = 1.0;
}

Statevector::Statevector(int n_qubits, std::vector<cplx> amplitudes) : Statevector(n_qubits) {
  if (amplitudes.size() != amps_.size()) throw StructuralError("Statevector: amplitude count mismatch");
  amps_ = std::move(amplitudes);
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void Statevector::apply_ry(int qubit, double theta) {
  if (qubit < 0 || qubit >= n_qubits_) throw StructuralError("apply_ry: qubit out of range");
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    if (b & bit) continue;
    const cplx a0 = amps_[b];
    const cplx a1 = amps_[b | bit];
    amps_[b] = c * a0 - s * a1;
    amps_[b | bit] = s * a0 + c * a1;
  }
}

void Statevector::apply_cnot(int control, int target) {
  if (control < 0 || control >= n_qubits_ || target < 0 || target >= n_qubits_ || control == target) {
    throw StructuralError("apply_cnot: bad control/target pair");
  }
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t b = 0; b < amps_.size(); ++b) {
    if ((b & cbit) && !(b & tbit)) std::swap(amps_[b], amps_[b | tbit]);
  }
}

Statevector apply_ansatz(const Ansatz& ansatz, std::span<const double> params) {
  const int n = ansatz.n_qubits();
  if (static_cast<int>(params.size()) != ansatz.num_parameters()) {
    throw StructuralError("apply_ansatz: expected " + std::to_string(ansatz.num_parameters()) + " parameters, got " +
                          std::to_string(params.size()));
  }
  Statevector psi(n);
  std::size_t k = 0;
  for (int layer = 0; layer <= ansatz.depth(); ++layer) {
    for (int q = 0; q < n; ++q) psi.apply_ry(q, params[k++]);
    if (layer == ansatz.depth()) break;
    for (int q = 0; q + 1 < n; ++q) psi.apply_cnot(q, q + 1);
  }
  return psi;
}

double expval(const Statevector& state, const QubitOperator& op) {
  check_operator(state, op);
  double total = 0.0;
  for (const auto& [word, c] : op.terms()) total += c.real() * pauli_expectation(state.amplitudes(), pauli_masks(word));
  return total;
}

SampledEstimate sampled_expval(const Statevector& state, const QubitOperator& op, int shots, std::uint64_t seed) {
  check_operator(state, op);
  if (shots < 0) throw StructuralError("sampled_expval: shots must be >= 0");
  SampledEstimate est;
  est.shots = shots;
  est.seed = seed;
  if (shots == 0) {
    est.mean = expval(state, op);
    return est;
  }
  double variance = 0.0;
  std::uint64_t term_index = 0;
  for (const auto& [word, c] : op.terms()) {
    const double coeff = c.real();
    const auto masks = pauli_masks(word);
    if (masks.x == 0 && masks.z == 0) {
      est.mean += coeff;
      ++term_index;
      continue;
    }
    const double exact = pauli_expectation(state.amplitudes(), masks);
    const double p_plus = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
    std::mt19937_64 rng(derive_seed({seed, term_index++}));
    std::binomial_distribution<int> draw(shots, p_plus);
    const int n_plus = draw(rng);
    const double m = (2.0 * n_plus - shots) / shots;
    est.mean += coeff * m;
    if (shots > 1) {
      // unbiased variance of +/-1 outcomes, divided by shots for the mean
      const double sample_var = (1.0 - m * m) * shots / (shots - 1.0);
      variance += coeff * coeff * sample_var / shots;
    }
  }
  est.std_error = std::sqrt(std::max(variance, 0.0));
  return est;
}

std::vector<double> parameter_shift_grad(const Ansatz& ansatz, std::span<const double> params,
                                         const QubitOperator& op) {
  constexpr double shift = std::numbers::pi / 2.0;
  std::vector<double> theta(params.begin(), params.end());
  std::vector<double> grad(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double saved = theta[k];
    theta[k] = saved + shift;
    const double plus = expval(apply_ansatz(ansatz, theta), op);
    theta[k] = saved - shift;
    const double minus = expval(apply_ansatz(ansatz, theta), op);
    theta[k] = saved;
    grad[k] = 0.5 * (plus - minus);
  }
  return grad;
}

}  // namespace spvqe
