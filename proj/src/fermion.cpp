#include "spvqe/fermion.hpp"

#include "spvqe/errors.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace spvqe {

namespace {

/// True when `left` must come after `right` in normal order.
bool out_of_order(const LadderOp& left, const LadderOp& right) {
  if (left.dagger != right.dagger) return right.dagger;
  return right.mode > left.mode;
}

/// Accumulates coeff * word into `terms` in normal-ordered form.
void normal_order_into(FermionOperator::TermMap& terms, LadderWord word, cplx coeff) {
  std::vector<std::pair<LadderWord, cplx>> work;
  work.emplace_back(std::move(word), coeff);
  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    bool zero = false;
    bool sorted = false;
    while (!sorted && !zero) {
      sorted = true;
      for (std::size_t p = 0; p + 1 < w.size(); ++p) {
        const LadderOp left = w[p];
        const LadderOp right = w[p + 1];
        if (left.dagger == right.dagger && left.mode == right.mode) {
          zero = true;  // a a = a^dagger a^dagger = 0
          break;
        }
        if (!out_of_order(left, right)) continue;
        if (!left.dagger && right.dagger && left.mode == right.mode) {
          // a_i a_i^dagger = 1 - a_i^dagger a_i
          LadderWord contracted;
          contracted.reserve(w.size() - 2);
          contracted.insert(contracted.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
          contracted.insert(contracted.end(), w.begin() + static_cast<std::ptrdiff_t>(p) + 2, w.end());
          work.emplace_back(std::move(contracted), c);
        }
        std::swap(w[p], w[p + 1]);
        c = -c;
        sorted = false;
      }
    }
    if (zero) continue;
    auto [it, inserted] = terms.try_emplace(std::move(w), c);
    if (!inserted) it->second += c;
  }
}

/// Mode index of spatial orbital p with spin sigma (0 = alpha, 1 = beta).
int spin_orbital(int p, int sigma, int n_spatial) { return p + sigma * n_spatial; }

template <typename LadderImage>
QubitOperator map_with(const FermionOperator& fop, int n_qubits, LadderImage&& image) {
  std::vector<QubitOperator> creation;
  std::vector<QubitOperator> annihilation;
  for (int j = 0; j < fop.n_modes(); ++j) {
    creation.push_back(image(j, true));
    annihilation.push_back(image(j, false));
  }
  QubitOperator out(n_qubits);
  for (const auto& [word, c] : fop.terms()) {
    QubitOperator prod = QubitOperator::identity(n_qubits, c);
    for (const auto& op : word) {
      prod = prod * (op.dagger ? creation : annihilation)[static_cast<std::size_t>(op.mode)];
    }
    out += prod;
  }
  return out.simplified();
}

}  // namespace

FermionOperator::FermionOperator(int n_modes) : n_modes_(n_modes) {
  if (n_modes < 1) throw StructuralError("FermionOperator: n_modes must be positive");
}

FermionOperator FermionOperator::identity(int n_modes, cplx coeff) {
  FermionOperator op(n_modes);
  op.add({}, coeff);
  return op;
}

FermionOperator FermionOperator::ladder(int n_modes, int mode, bool dagger) {
  FermionOperator op(n_modes);
  op.add({{mode, dagger}}, 1.0);
  return op;
}

void FermionOperator::add(const LadderWord& word, cplx coeff) {
  for (const auto& op : word) {
    if (op.mode < 0 || op.mode >= n_modes_) {
      throw StructuralError("FermionOperator: mode " + std::to_string(op.mode) + " out of range for " +
                            std::to_string(n_modes_) + " modes");
    }
  }
  normal_order_into(terms_, word, coeff);
}

FermionOperator FermionOperator::simplified(double tol) const {
  FermionOperator out(n_modes_);
  for (const auto& [w, c] : terms_) {
    if (std::abs(c) > tol) out.terms_.emplace(w, c);
  }
  return out;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& rhs) {
  if (rhs.n_modes_ != n_modes_) throw StructuralError("FermionOperator: mode count mismatch in sum");
  for (const auto& [w, c] : rhs.terms_) {
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) it->second += c;
  }
  return *this;
}

FermionOperator& FermionOperator::operator*=(cplx s) {
  for (auto& [w, c] : terms_) c *= s;
  return *this;
}

FermionOperator operator*(const FermionOperator& a, const FermionOperator& b) {
  if (a.n_modes() != b.n_modes()) throw StructuralError("FermionOperator: mode count mismatch in product");
  FermionOperator out(a.n_modes());
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      LadderWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add(w, ca * cb);
    }
  }
  return out;
}

std::string FermionOperator::str() const {
  std::ostringstream os;
  for (const auto& [w, c] : terms_) {
    os << '(' << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    for (const auto& op : w) os << ' ' << op.mode << (op.dagger ? "^" : "");
    os << '\n';
  }
  return os.str();
}

ReductionSector ReductionSector::from_occupation(int n_electrons, int ms2) {
  if ((n_electrons + ms2) % 2 != 0 || std::abs(ms2) > n_electrons) {
    throw StructuralError("ReductionSector: inconsistent electron count " + std::to_string(n_electrons) +
                          " and MS2 " + std::to_string(ms2));
  }
  const int n_alpha = (n_electrons + ms2) / 2;
  const int n_beta = (n_electrons - ms2) / 2;
  return {n_alpha % 2 == 0 ? 1 : -1, n_beta % 2 == 0 ? 1 : -1};
}

Mapping mapping_from_string(const std::string& name) {
  if (name == "jordan_wigner") return Mapping::JordanWigner;
  if (name == "parity") return Mapping::Parity;
  if (name == "parity_reduced") return Mapping::ParityReduced;
  throw StructuralError("unknown mapping '" + name + "'");
}

std::string to_string(Mapping m) {
  switch (m) {
    case Mapping::JordanWigner: return "jordan_wigner";
    case Mapping::Parity: return "parity";
    case Mapping::ParityReduced: return "parity_reduced";
  }
  return "unknown";
}

int mapped_qubits(int n_modes, Mapping m) { return m == Mapping::ParityReduced ? n_modes - 2 : n_modes; }

FermionOperator build_hamiltonian(const FermionIntegrals& ints) {
  const int n = ints.n_spatial();
  FermionOperator ham = FermionOperator::identity(2 * n, ints.e0());
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double h = ints.h(p, q);
      if (h == 0.0) continue;
      for (int s = 0; s < 2; ++s) ham.add({{spin_orbital(p, s, n), true}, {spin_orbital(q, s, n), false}}, h);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double g = ints.g(i, j, k, l);
          if (g == 0.0) continue;
          for (int s = 0; s < 2; ++s) {
            for (int t = 0; t < 2; ++t) {
              ham.add({{spin_orbital(i, s, n), true},
                       {spin_orbital(k, t, n), true},
                       {spin_orbital(l, t, n), false},
                       {spin_orbital(j, s, n), false}},
                      0.5 * g);
            }
          }
        }
  return ham.simplified();
}

FermionOperator number_operator(int n_modes) {
  FermionOperator op(n_modes);
  for (int i = 0; i < n_modes; ++i) op.add({{i, true}, {i, false}}, 1.0);
  return op;
}

FermionOperator spin_z_operator(int n_spatial) {
  FermionOperator op(2 * n_spatial);
  for (int p = 0; p < n_spatial; ++p) {
    op.add({{spin_orbital(p, 0, n_spatial), true}, {spin_orbital(p, 0, n_spatial), false}}, 0.5);
    op.add({{spin_orbital(p, 1, n_spatial), true}, {spin_orbital(p, 1, n_spatial), false}}, -0.5);
  }
  return op;
}

FermionOperator total_spin_operator(int n_spatial) {
  const int n_modes = 2 * n_spatial;
  FermionOperator raise(n_modes);
  FermionOperator lower(n_modes);
  for (int p = 0; p < n_spatial; ++p) {
    raise.add({{spin_orbital(p, 0, n_spatial), true}, {spin_orbital(p, 1, n_spatial), false}}, 1.0);
    lower.add({{spin_orbital(p, 1, n_spatial), true}, {spin_orbital(p, 0, n_spatial), false}}, 1.0);
  }
  const FermionOperator sz = spin_z_operator(n_spatial);
  return (lower * raise + sz * (sz + FermionOperator::identity(n_modes))).simplified();
}

QubitOperator jordan_wigner(const FermionOperator& fop) {
  const int n = fop.n_modes();
  return map_with(fop, n, [n](int j, bool dagger) {
    std::string x(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < j; ++q) x[static_cast<std::size_t>(q)] = 'Z';
    std::string y = x;
    x[static_cast<std::size_t>(j)] = 'X';
    y[static_cast<std::size_t>(j)] = 'Y';
    QubitOperator op(n);
    op.add(x, 0.5);
    op.add(y, dagger ? cplx{0.0, -0.5} : cplx{0.0, 0.5});
    return op;
  });
}

QubitOperator parity_map(const FermionOperator& fop) {
  const int n = fop.n_modes();
  return map_with(fop, n, [n](int j, bool dagger) {
    std::string x(static_cast<std::size_t>(n), 'I');
    for (int q = j + 1; q < n; ++q) x[static_cast<std::size_t>(q)] = 'X';
    std::string y = x;
    x[static_cast<std::size_t>(j)] = 'X';
    if (j > 0) x[static_cast<std::size_t>(j - 1)] = 'Z';
    y[static_cast<std::size_t>(j)] = 'Y';
    QubitOperator op(n);
    op.add(x, 0.5);
    op.add(y, dagger ? cplx{0.0, -0.5} : cplx{0.0, 0.5});
    return op;
  });
}

QubitOperator two_qubit_reduction(const QubitOperator& qop, const ReductionSector& sector) {
  const int n = qop.n_qubits();
  if (n < 2 || n % 2 != 0) throw StructuralError("two_qubit_reduction: qubit count must be even and >= 2");
  if (std::abs(sector.parity_alpha) != 1 || std::abs(sector.parity_beta) != 1) {
    throw StructuralError("two_qubit_reduction: sector parities must be +1 or -1");
  }
  const std::size_t alpha_q = static_cast<std::size_t>(n / 2 - 1);
  const std::size_t total_q = static_cast<std::size_t>(n - 1);
  const double eig_alpha = sector.parity_alpha;
  const double eig_total = sector.parity_alpha * sector.parity_beta;

  QubitOperator out(n - 2);
  for (const auto& [word, c] : qop.terms()) {
    cplx coeff = c;
    for (const auto& [q, eig] : {std::pair{alpha_q, eig_alpha}, std::pair{total_q, eig_total}}) {
      const char letter = word[q];
      if (letter == 'X' || letter == 'Y') {
        throw SymmetryViolationError("two_qubit_reduction: term " + word + " acts with " + letter +
                                     " on removed qubit " + std::to_string(q));
      }
      if (letter == 'Z') coeff *= eig;
    }
    std::string reduced;
    reduced.reserve(word.size() - 2);
    for (std::size_t q = 0; q < word.size(); ++q) {
      if (q != alpha_q && q != total_q) reduced += word[q];
    }
    out.add(reduced, coeff);
  }
  return out.simplified();
}

QubitOperator map_to_qubits(const FermionOperator& fop, Mapping m, const ReductionSector& sector) {
  switch (m) {
    case Mapping::JordanWigner: return jordan_wigner(fop);
    case Mapping::Parity: return parity_map(fop);
    case Mapping::ParityReduced: return two_qubit_reduction(parity_map(fop), sector);
  }
  throw StructuralError("map_to_qubits: unknown mapping");
}

}  // namespace spvqe
