#include "spvqe/exact.hpp"

#include "spvqe/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace spvqe {

namespace {

/// Rotates the columns of `basis` into eigenvectors of each observable in turn.
void refine_cluster(Eigen::MatrixXcd& basis, const std::vector<Eigen::MatrixXcd>& obs, std::size_t level) {
  if (basis.cols() <= 1 || level >= obs.size()) return;
  const Eigen::MatrixXcd restricted = basis.adjoint() * obs[level] * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(restricted);
  basis = basis * es.eigenvectors();
  const auto& vals = es.eigenvalues();
  Eigen::Index start = 0;
  for (Eigen::Index j = 1; j <= vals.size(); ++j) {
    if (j == vals.size() || vals[j] - vals[j - 1] > kDegeneracyGap) {
      Eigen::MatrixXcd sub = basis.middleCols(start, j - start);
      refine_cluster(sub, obs, level + 1);
      basis.middleCols(start, j - start) = sub;
      start = j;
    }
  }
}

}  // namespace

double dense_expval(const Eigen::VectorXcd& v, const QubitOperator& op) {
  return (v.adjoint() * (to_matrix(op) * v))(0).real();
}

Statevector to_statevector(const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(v.size()))));
  return Statevector(n, std::vector<cplx>(v.data(), v.data() + v.size()));
}

SpectrumResult exact_spectrum(const QubitOperator& op, std::span<const QubitOperator> observables) {
  if (!op.is_hermitian(1e-10)) throw NonHermitianError("exact_spectrum: operator is not Hermitian");
  std::vector<Eigen::MatrixXcd> obs;
  for (const auto& o : observables) {
    if (o.n_qubits() != op.n_qubits()) throw StructuralError("exact_spectrum: observable size mismatch");
    if (!o.is_hermitian(1e-10)) throw NonHermitianError("exact_spectrum: observable is not Hermitian");
    obs.push_back(to_matrix(o));
  }
  const Eigen::MatrixXcd m = to_matrix(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw Error("exact_spectrum: eigensolver did not converge");

  SpectrumResult out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  const auto& vals = out.eigenvalues;
  Eigen::Index start = 0;
  for (Eigen::Index j = 1; j <= vals.size(); ++j) {
    if (j == vals.size() || vals[j] - vals[j - 1] > kDegeneracyGap) {
      if (j - start > 1 && !obs.empty()) {
        Eigen::MatrixXcd block = out.eigenvectors.middleCols(start, j - start);
        refine_cluster(block, obs, 0);
        out.eigenvectors.middleCols(start, j - start) = block;
      }
      start = j;
    }
  }
  out.observable_values.resize(static_cast<std::size_t>(vals.size()));
  for (Eigen::Index j = 0; j < vals.size(); ++j) {
    const Eigen::VectorXcd v = out.eigenvectors.col(j);
    for (const auto& o : obs) out.observable_values[static_cast<std::size_t>(j)].push_back((v.adjoint() * o * v)(0).real());
  }
  return out;
}

ReferenceState constrained_ground_state(const QubitOperator& ham, std::span<const Constraint> constraints, double tol) {
  std::vector<QubitOperator> ops;
  for (const auto& c : constraints) ops.push_back(c.op);
  const auto spec = exact_spectrum(ham, ops);
  for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
    const auto& values = spec.observable_values[static_cast<std::size_t>(j)];
    bool ok = true;
    for (std::size_t i = 0; i < constraints.size(); ++i) ok = ok && std::abs(values[i] - constraints[i].target) <= tol;
    if (ok) return {spec.eigenvalues[j], spec.eigenvectors.col(j), values};
  }
  std::ostringstream msg;
  msg << "constrained_ground_state: no eigenstate satisfies the constraints (targets";
  for (const auto& c : constraints) msg << ' ' << to_string(c.kind) << '=' << c.target;
  msg << ", tol " << tol << ')';
  throw InfeasibleSectorError(msg.str());
}

ObservableError observable_error(double energy, const Statevector& state, const ReferenceState& reference,
                                 const Observables& obs) {
  ObservableError e;
  e.energy_error = std::abs(energy - reference.energy);
  e.spin_error = std::abs(expval(state, obs.spin) - dense_expval(reference.vector, obs.spin));
  e.number_error = std::abs(expval(state, obs.number) - dense_expval(reference.vector, obs.number));
  return e;
}

ObservableError observable_error(const VqeResult& result, const Ansatz& ansatz, const ReferenceState& reference,
                                 const Observables& obs) {
  return observable_error(result.energy, apply_ansatz(ansatz, result.params), reference, obs);
}

}  // namespace spvqe
