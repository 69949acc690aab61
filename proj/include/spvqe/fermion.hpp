#pragma once

#include "spvqe/fcidump.hpp"
#include "spvqe/pauli.hpp"

#include <map>
#include <string>
#include <vector>

namespace spvqe {

/// One creation (`dagger`) or annihilation operator on a spin-orbital.
struct LadderOp {
  int mode = 0;
  bool dagger = false;

  friend bool operator==(const LadderOp&, const LadderOp&) = default;
  friend auto operator<=>(const LadderOp&, const LadderOp&) = default;
};

using LadderWord = std::vector<LadderOp>;

/**
 * @brief Sum of products of fermionic ladder operators.
 *
 * Storage is always normal-ordered: within a word all creation operators
 * precede annihilation operators, each group sorted by descending mode.
 * Products and sums re-normal-order, so two operators that are equal as
 * operators compare equal term by term. The empty word is the identity.
 *
 * Spin-orbital convention used by the builders below: block ordering, with
 * alpha orbitals on modes 0..n_spatial-1 and beta orbitals on
 * n_spatial..2*n_spatial-1.
 */
class FermionOperator {
 public:
  using TermMap = std::map<LadderWord, cplx>;

  FermionOperator() = default;
  explicit FermionOperator(int n_modes);

  static FermionOperator identity(int n_modes, cplx coeff = 1.0);
  static FermionOperator ladder(int n_modes, int mode, bool dagger);

  int n_modes() const noexcept { return n_modes_; }
  const TermMap& terms() const noexcept { return terms_; }

  /// Adds coeff * (product of `word`), normal-ordering it first.
  void add(const LadderWord& word, cplx coeff);

  /// Drops terms with |coeff| <= tol.
  FermionOperator simplified(double tol = kDefaultSimplifyTol) const;

  FermionOperator& operator+=(const FermionOperator& rhs);
  FermionOperator& operator*=(cplx s);
  friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) { return a += b; }
  friend FermionOperator operator*(FermionOperator a, cplx s) { return a *= s; }
  friend FermionOperator operator*(cplx s, FermionOperator a) { return a *= s; }
  friend FermionOperator operator*(const FermionOperator& a, const FermionOperator& b);

  std::string str() const;

 private:
  int n_modes_ = 0;
  TermMap terms_;
};

/// Alpha/beta parity eigenvalues substituted by the two-qubit reduction.
struct ReductionSector {
  int parity_alpha = 1;
  int parity_beta = 1;

  /// Sector of a state with the given electron count and 2*S_z.
  static ReductionSector from_occupation(int n_electrons, int ms2);
};

enum class Mapping { JordanWigner, Parity, ParityReduced };

Mapping mapping_from_string(const std::string& name);
std::string to_string(Mapping m);

/// Qubit count of the mapped register for `n_modes` spin-orbitals.
int mapped_qubits(int n_modes, Mapping m);

/// Electronic Hamiltonian over spin-orbitals (block ordering), including e0.
FermionOperator build_hamiltonian(const FermionIntegrals& ints);

/// Sum of a_i^dagger a_i over all modes.
FermionOperator number_operator(int n_modes);

/// S^2 = S_- S_+ + S_z (S_z + 1) for `n_spatial` orbitals in block ordering.
FermionOperator total_spin_operator(int n_spatial);

/// S_z = (N_alpha - N_beta) / 2.
FermionOperator spin_z_operator(int n_spatial);

QubitOperator jordan_wigner(const FermionOperator& fop);

/// Parity encoding: qubit j stores the parity of modes 0..j.
QubitOperator parity_map(const FermionOperator& fop);

/**
 * Removes qubits n/2-1 (alpha parity) and n-1 (total parity) of a
 * parity-mapped operator by substituting their Z eigenvalues
 * (parity_alpha and parity_alpha*parity_beta). Throws
 * SymmetryViolationError when either qubit carries X or Y.
 */
QubitOperator two_qubit_reduction(const QubitOperator& qop, const ReductionSector& sector);

/// Applies the chosen mapping; `sector` is only used by ParityReduced.
QubitOperator map_to_qubits(const FermionOperator& fop, Mapping m, const ReductionSector& sector = {});

}  // namespace spvqe
