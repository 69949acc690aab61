#pragma once

#include "spvqe/pauli.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace spvqe {

/**
 * @brief Hardware-efficient Ry/CNOT ansatz.
 *
 * Layout: `depth` repetitions of (one Ry per qubit, then a CNOT ladder
 * 0->1, 1->2, ..., n-2->n-1 with control on the lower index), followed by a
 * final Ry layer. Parameter `layer * n_qubits + q` drives the Ry on qubit q
 * in that layer, so there are n_qubits * (depth + 1) parameters.
 */
class Ansatz {
 public:
  Ansatz(int n_qubits, int depth);

  int n_qubits() const noexcept { return n_qubits_; }
  int depth() const noexcept { return depth_; }
  int num_parameters() const noexcept { return n_qubits_ * (depth_ + 1); }

 private:
  int n_qubits_;
  int depth_;
};

Ansatz build_ansatz(int n_qubits, int depth);

/// Unit-norm amplitudes over the 2^n computational basis (bit q of the index is qubit q).
class Statevector {
 public:
  explicit Statevector(int n_qubits);  ///< |0...0>
  Statevector(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::span<cplx> amplitudes() noexcept { return amps_; }
  double norm() const;

  /// Ry(theta) = exp(-i theta Y / 2) on `qubit`.
  void apply_ry(int qubit, double theta);
  void apply_cnot(int control, int target);

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

/// |psi(theta)> = V(theta)|0...0>. Throws StructuralError on a parameter-count mismatch.
Statevector apply_ansatz(const Ansatz& ansatz, std::span<const double> params);

/// Exact <psi|op|psi>. Throws NonHermitianError or StructuralError.
double expval(const Statevector& state, const QubitOperator& op);

struct SampledEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int shots = 1;
  std::uint64_t seed = 0;
};

/**
 * Shot-based estimate of <op>. Every non-identity term is measured
 * independently: `shots` +/-1 outcomes are drawn from the exact outcome
 * distribution in that term's eigenbasis with a generator seeded from
 * (seed, term index). The standard error combines per-term sample variances
 * assuming uncorrelated terms. shots == 0 returns the exact value with zero
 * error.
 */
SampledEstimate sampled_expval(const Statevector& state, const QubitOperator& op, int shots, std::uint64_t seed);

/// Parameter-shift gradient of <op> with respect to every ansatz angle.
std::vector<double> parameter_shift_grad(const Ansatz& ansatz, std::span<const double> params,
                                         const QubitOperator& op);

}  // namespace spvqe
