#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace spvqe {

using cplx = std::complex<double>;

inline constexpr double kDefaultSimplifyTol = 1e-12;
/// Largest register for which dense matrices and statevectors are built.
inline constexpr int kMaxDenseQubits = 12;

/**
 * @brief A single weighted Pauli word.
 *
 * `letters[q]` is the Pauli acting on qubit q (little-endian: index 0 is
 * qubit 0, the least significant bit of a basis index). Letters are drawn
 * from "IXYZ".
 */
struct PauliTerm {
  cplx coeff{1.0, 0.0};
  std::string letters;

  bool is_identity() const noexcept;
};

/// Product of two terms, including the accumulated phase. Throws StructuralError on length mismatch.
PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b);

/// Bit masks of a Pauli word: bit q of `x` is set for X/Y, bit q of `z` for Z/Y.
struct PauliMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int n_y = 0;
};
PauliMasks pauli_masks(std::string_view letters);

/**
 * @brief Weighted sum of Pauli words on a fixed register.
 *
 * Terms are keyed by letter-word, so iteration order is lexicographic and no
 * two terms share a word. Arithmetic does not drop small coefficients; call
 * simplified() for that.
 */
class QubitOperator {
 public:
  using TermMap = std::map<std::string, cplx>;

  QubitOperator() = default;
  explicit QubitOperator(int n_qubits);
  QubitOperator(int n_qubits, std::initializer_list<PauliTerm> terms);

  static QubitOperator identity(int n_qubits, cplx coeff = 1.0);
  /// Single term from a compact spec such as "X0 Z2" (qubits not named are I).
  static QubitOperator from_sparse(int n_qubits, std::string_view spec, cplx coeff = 1.0);

  int n_qubits() const noexcept { return n_qubits_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Adds `term` to the operator, merging with an existing word.
  void add(const PauliTerm& term);
  void add(std::string_view letters, cplx coeff);

  /// Coefficient of a word (0 when absent).
  cplx coeff(std::string_view letters) const;

  /// Like terms merged; |coeff| <= tol dropped.
  QubitOperator simplified(double tol = kDefaultSimplifyTol) const;

  /// True when every coefficient has |imag| <= tol.
  bool is_hermitian(double tol = kDefaultSimplifyTol) const;

  /// Largest |coeff| over all terms (0 for an empty operator).
  double max_abs_coeff() const;

  QubitOperator& operator+=(const QubitOperator& rhs);
  QubitOperator& operator-=(const QubitOperator& rhs);
  QubitOperator& operator*=(cplx s);

  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) { return a -= b; }
  friend QubitOperator operator*(QubitOperator a, cplx s) { return a *= s; }
  friend QubitOperator operator*(cplx s, QubitOperator a) { return a *= s; }
  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b);

  /// Textual dump: one term per line, `<re> <im> <letters>`, lexicographic order.
  std::string dump() const;

 private:
  void check_word(std::string_view letters) const;

  int n_qubits_ = 0;
  TermMap terms_;
};

/// simplify(op, tol) as a free function.
QubitOperator op_simplify(const QubitOperator& op, double tol = kDefaultSimplifyTol);

/// Dense 2^n x 2^n matrix. Throws CapacityError above kMaxDenseQubits.
Eigen::MatrixXcd to_matrix(const QubitOperator& op);

/// Largest coefficient magnitude of simplify(ab - ba).
double commutator_norm(const QubitOperator& a, const QubitOperator& b);

std::ostream& operator<<(std::ostream& os, const QubitOperator& op);

}  // namespace spvqe
