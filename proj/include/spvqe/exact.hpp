#pragma once

#include "spvqe/circuit.hpp"
#include "spvqe/pauli.hpp"
#include "spvqe/vqe.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace spvqe {

/// Eigenvalues closer than this are treated as one degenerate cluster.
inline constexpr double kDegeneracyGap = 1e-8;
inline constexpr double kSectorTol = 1e-6;

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXcd eigenvectors; ///< column j belongs to eigenvalues[j]
  /// observable_values[j][i] = <v_j|O_i|v_j>
  std::vector<std::vector<double>> observable_values;
};

/**
 * Full dense eigendecomposition of a Hermitian operator (at most 12 qubits).
 *
 * When observables are given, every degenerate eigenvalue cluster is rotated
 * into a simultaneous eigenbasis of those observables (diagonalising each in
 * turn inside the cluster), so per-eigenvector observable values do not
 * depend on the solver's arbitrary choice of basis. Observables are expected
 * to commute with `op`.
 */
SpectrumResult exact_spectrum(const QubitOperator& op, std::span<const QubitOperator> observables = {});

struct ReferenceState {
  double energy = 0.0;
  Eigen::VectorXcd vector;
  std::vector<double> constraint_values;
};

/// Lowest eigenstate with |<A_i> - a_i| <= tol for every constraint. Throws InfeasibleSectorError.
ReferenceState constrained_ground_state(const QubitOperator& ham, std::span<const Constraint> constraints,
                                        double tol = kSectorTol);

struct ObservableError {
  double energy_error = 0.0;
  double spin_error = 0.0;
  double number_error = 0.0;
};

/// Spin and particle-number observables measured alongside every result.
struct Observables {
  QubitOperator spin;
  QubitOperator number;
};

/// |O_result - O_reference| for energy, S^2 and N.
ObservableError observable_error(double energy, const Statevector& state, const ReferenceState& reference,
                                 const Observables& obs);
ObservableError observable_error(const VqeResult& result, const Ansatz& ansatz, const ReferenceState& reference,
                                 const Observables& obs);

Statevector to_statevector(const Eigen::VectorXcd& v);
/// <v|op|v> for a dense vector.
double dense_expval(const Eigen::VectorXcd& v, const QubitOperator& op);

}  // namespace spvqe
