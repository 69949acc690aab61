#include "spvqe/pauli.hpp"

#include "spvqe/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace spvqe {

namespace {

constexpr cplx kI{0.0, 1.0};

/// Single-qubit product a*b = phase * result.
struct LetterProduct {
  char letter;
  cplx phase;
};

LetterProduct multiply_letters(char a, char b) {
  if (a == 'I') return {b, 1.0};
  if (b == 'I') return {a, 1.0};
  if (a == b) return {'I', 1.0};
  // cyclic X -> Y -> Z -> X gives +i, anticyclic gives -i
  const auto idx = [](char c) { return c == 'X' ? 0 : (c == 'Y' ? 1 : 2); };
  const int ia = idx(a);
  const int ib = idx(b);
  const char rest = "XYZ"[3 - ia - ib];
  return {rest, ((ib - ia + 3) % 3 == 1) ? kI : -kI};
}

bool valid_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

bool PauliTerm::is_identity() const noexcept {
  return std::all_of(letters.begin(), letters.end(), [](char c) { return c == 'I'; });
}

PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b) {
  if (a.letters.size() != b.letters.size()) {
    throw StructuralError("pauli_mul: word length mismatch (" + std::to_string(a.letters.size()) +
                          " vs " + std::to_string(b.letters.size()) + ")");
  }
  PauliTerm out;
  out.coeff = a.coeff * b.coeff;
  out.letters.resize(a.letters.size());
  for (std::size_t q = 0; q < a.letters.size(); ++q) {
    const auto p = multiply_letters(a.letters[q], b.letters[q]);
    out.letters[q] = p.letter;
    out.coeff *= p.phase;
  }
  return out;
}

PauliMasks pauli_masks(std::string_view letters) {
  PauliMasks m;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (letters[q]) {
      case 'X': m.x |= bit; break;
      case 'Y': m.x |= bit; m.z |= bit; ++m.n_y; break;
      case 'Z': m.z |= bit; break;
      default: break;
    }
  }
  return m;
}

QubitOperator::QubitOperator(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 64) throw StructuralError("QubitOperator: qubit count out of range");
}

QubitOperator::QubitOperator(int n_qubits, std::initializer_list<PauliTerm> terms)
    : QubitOperator(n_qubits) {
  for (const auto& t : terms) add(t);
}

QubitOperator QubitOperator::identity(int n_qubits, cplx coeff) {
  QubitOperator op(n_qubits);
  op.add(std::string(static_cast<std::size_t>(n_qubits), 'I'), coeff);
  return op;
}

QubitOperator QubitOperator::from_sparse(int n_qubits, std::string_view spec, cplx coeff) {
  std::string word(static_cast<std::size_t>(n_qubits), 'I');
  std::istringstream in{std::string(spec)};
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || !valid_letter(tok[0])) throw StructuralError("from_sparse: bad token '" + tok + "'");
    const int q = std::stoi(tok.substr(1));
    if (q < 0 || q >= n_qubits) throw StructuralError("from_sparse: qubit index out of range in '" + tok + "'");
    word[static_cast<std::size_t>(q)] = tok[0];
  }
  QubitOperator op(n_qubits);
  op.add(word, coeff);
  return op;
}

void QubitOperator::check_word(std::string_view letters) const {
  if (static_cast<int>(letters.size()) != n_qubits_) {
    throw StructuralError("QubitOperator: word '" + std::string(letters) + "' does not match " +
                          std::to_string(n_qubits_) + " qubits");
  }
  for (char c : letters) {
    if (!valid_letter(c)) throw StructuralError("QubitOperator: invalid letter in '" + std::string(letters) + "'");
  }
}

void QubitOperator::add(const PauliTerm& term) { add(term.letters, term.coeff); }

void QubitOperator::add(std::string_view letters, cplx coeff) {
  check_word(letters);
  auto [it, inserted] = terms_.try_emplace(std::string(letters), coeff);
  if (!inserted) it->second += coeff;
}

cplx QubitOperator::coeff(std::string_view letters) const {
  const auto it = terms_.find(std::string(letters));
  return it == terms_.end() ? cplx{} : it->second;
}

QubitOperator QubitOperator::simplified(double tol) const {
  QubitOperator out(n_qubits_);
  for (const auto& [word, c] : terms_) {
    if (std::abs(c) > tol) out.terms_.emplace(word, c);
  }
  return out;
}

bool QubitOperator::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
}

double QubitOperator::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [word, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

QubitOperator& QubitOperator::operator+=(const QubitOperator& rhs) {
  if (rhs.n_qubits_ != n_qubits_) throw StructuralError("QubitOperator: qubit count mismatch in sum");
  for (const auto& [word, c] : rhs.terms_) add(word, c);
  return *this;
}

QubitOperator& QubitOperator::operator-=(const QubitOperator& rhs) {
  if (rhs.n_qubits_ != n_qubits_) throw StructuralError("QubitOperator: qubit count mismatch in difference");
  for (const auto& [word, c] : rhs.terms_) add(word, -c);
  return *this;
}

QubitOperator& QubitOperator::operator*=(cplx s) {
  for (auto& [word, c] : terms_) c *= s;
  return *this;
}

QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
  if (a.n_qubits() != b.n_qubits()) throw StructuralError("QubitOperator: qubit count mismatch in product");
  QubitOperator out(a.n_qubits());
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) out.add(pauli_mul({ca, wa}, {cb, wb}));
  }
  return out;
}

std::string QubitOperator::dump() const {
  std::string out;
  char buf[96];
  for (const auto& [word, c] : terms_) {
    // normalise negative zero so dumps are stable
    const double re = c.real() == 0.0 ? 0.0 : c.real();
    const double im = c.imag() == 0.0 ? 0.0 : c.imag();
    std::snprintf(buf, sizeof buf, "%.15e %.15e ", re, im);
    out += buf;
    out += word;
    out += '\n';
  }
  return out;
}

QubitOperator op_simplify(const QubitOperator& op, double tol) {
  if (tol < 0.0) throw StructuralError("op_simplify: negative tolerance");
  return op.simplified(tol);
}

Eigen::MatrixXcd to_matrix(const QubitOperator& op) {
  const int n = op.n_qubits();
  if (n > kMaxDenseQubits) {
    throw CapacityError("to_matrix: " + std::to_string(n) + " qubits exceeds the dense limit of " +
                        std::to_string(kMaxDenseQubits));
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [word, c] : op.terms()) {
    const auto masks = pauli_masks(word);
    const cplx base = c * i_power(masks.n_y);
    for (std::size_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & masks.z) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ masks.x), static_cast<Eigen::Index>(b)) += sign * base;
    }
  }
  return m;
}

double commutator_norm(const QubitOperator& a, const QubitOperator& b) {
  if (a.n_qubits() != b.n_qubits()) throw StructuralError("commutator_norm: qubit count mismatch");
  return op_simplify(a * b - b * a).max_abs_coeff();
}

std::ostream& operator<<(std::ostream& os, const QubitOperator& op) { return os << op.dump(); }

}  // namespace spvqe
