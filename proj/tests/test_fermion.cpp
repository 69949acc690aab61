#include "spvqe/errors.hpp"
#include "spvqe/exact.hpp"
#include "spvqe/fermion.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

using namespace spvqe;

namespace {

/// Fock-space matrix of a single ladder operator with bit j = occupation of mode j.
Eigen::MatrixXcd fock_ladder(int n_modes, int mode, bool dagger) {
  const auto dim = Eigen::Index{1} << n_modes;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const bool occupied = (s >> mode) & 1;
    if (occupied == dagger) continue;
    int sign_bits = 0;
    for (int i = 0; i < mode; ++i) sign_bits += (s >> i) & 1;
    m(s ^ (Eigen::Index{1} << mode), s) = sign_bits % 2 ? -1.0 : 1.0;
  }
  return m;
}

Eigen::MatrixXcd fock_matrix(const FermionOperator& op) {
  const int n = op.n_modes();
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [word, c] : op.terms()) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& l : word) t = t * fock_ladder(n, l.mode, l.dagger);
    out += c * t;
  }
  return out;
}

std::vector<double> sorted_eigs(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

double max_diff(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

FermionIntegrals fixture_ints(const std::string& name) { return load_fcidump(testutil::fixture(name)); }

const std::vector<std::string> kFixtures = {"h2_0.300.fcidump", "h2_0.735.fcidump", "h2_2.000.fcidump",
                                            "h3p_0.900.fcidump", "h3p_2.500.fcidump", "toy_1orb.fcidump"};

}  // namespace

TEST_CASE("normal ordering applies the anticommutator") {
  // a_0 a_0^dagger = 1 - a_0^dagger a_0
  FermionOperator op(1);
  op.add({{0, false}, {0, true}}, 1.0);
  FermionOperator expect = FermionOperator::identity(1);
  expect.add({{0, true}, {0, false}}, -1.0);
  CHECK(op.simplified().terms() == expect.simplified().terms());

  // a_1^dagger a_0^dagger = -a_0^dagger a_1^dagger, stored with descending modes
  FermionOperator swap(2);
  swap.add({{0, true}, {1, true}}, 1.0);
  REQUIRE(swap.terms().size() == 1);
  CHECK(swap.terms().begin()->first == LadderWord{{1, true}, {0, true}});
  CHECK(swap.terms().begin()->second == cplx(-1.0));

  FermionOperator pauli(2);
  pauli.add({{1, true}, {1, true}}, 1.0);
  CHECK(pauli.simplified().terms().empty());
}

TEST_CASE("ladder operators reject bad modes") {
  CHECK_THROWS_AS(FermionOperator::ladder(2, 2, true), StructuralError);
  FermionOperator op(2);
  CHECK_THROWS_AS(op.add({{-1, false}}, 1.0), StructuralError);
}

TEST_CASE("normal-ordered products match the Fock-space oracle") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    FermionOperator op(n);
    for (int k = 0; k < 3; ++k) {
      LadderWord w;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int q = 0; q < len; ++q) w.push_back({static_cast<int>(rng() % n), static_cast<bool>(rng() % 2)});
      op.add(w, cplx(testutil::uniform(rng, -1, 1), testutil::uniform(rng, -1, 1)));
    }
    // the oracle multiplies words in their stored order; compare against a raw product instead
    FermionOperator a = FermionOperator::ladder(n, static_cast<int>(rng() % n), true);
    FermionOperator b = FermionOperator::ladder(n, static_cast<int>(rng() % n), false);
    const auto prod = a * op * b;
    CHECK((fock_matrix(prod) - fock_matrix(a) * fock_matrix(op) * fock_matrix(b)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((to_matrix(jordan_wigner(op)) - fock_matrix(op)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("jordan_wigner examples") {
  FermionOperator n0(1);
  n0.add({{0, true}, {0, false}}, 1.0);
  const auto q = jordan_wigner(n0);
  CHECK(q.size() == 2);
  CHECK(q.coeff("I") == cplx(0.5));
  CHECK(q.coeff("Z") == cplx(-0.5));

  FermionOperator hop(2);
  hop.add({{0, true}, {1, false}}, 1.0);
  hop.add({{1, true}, {0, false}}, 1.0);
  const auto qh = jordan_wigner(hop);
  CHECK(qh.size() == 2);
  CHECK(std::abs(qh.coeff("XX") - 0.5) <= 1e-15);
  CHECK(std::abs(qh.coeff("YY") - 0.5) <= 1e-15);
}

TEST_CASE("parity_map examples") {
  FermionOperator n0(1);
  n0.add({{0, true}, {0, false}}, 1.0);
  const auto q = parity_map(n0);
  CHECK(q.coeff("I") == cplx(0.5));
  CHECK(q.coeff("Z") == cplx(-0.5));
  const auto id = parity_map(FermionOperator::identity(3, 2.5));
  CHECK(id.size() == 1);
  CHECK(id.coeff("III") == cplx(2.5));
}

TEST_CASE("mapped ladder operators satisfy the canonical anticommutation relations") {
  for (Mapping m : {Mapping::JordanWigner, Mapping::Parity}) {
    for (int n = 1; n <= 4; ++n) {
      const auto dim = Eigen::Index{1} << n;
      const auto I = Eigen::MatrixXcd::Identity(dim, dim);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const auto ai = to_matrix(map_to_qubits(FermionOperator::ladder(n, i, false), m));
          const auto aj = to_matrix(map_to_qubits(FermionOperator::ladder(n, j, false), m));
          const Eigen::MatrixXcd ajd = aj.adjoint();
          const Eigen::MatrixXcd mixed = ai * ajd + ajd * ai;
          const Eigen::MatrixXcd same = ai * aj + aj * ai;
          CHECK((mixed - (i == j ? Eigen::MatrixXcd(I) : Eigen::MatrixXcd::Zero(dim, dim))).cwiseAbs().maxCoeff() <= 1e-12);
          CHECK(same.cwiseAbs().maxCoeff() <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("mapped creation operator is the adjoint of the annihilation operator") {
  for (Mapping m : {Mapping::JordanWigner, Mapping::Parity}) {
    const auto a = to_matrix(map_to_qubits(FermionOperator::ladder(3, 1, false), m));
    const auto ad = to_matrix(map_to_qubits(FermionOperator::ladder(3, 1, true), m));
    CHECK((ad - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("number operator") {
  const auto n = number_operator(2);
  CHECK(n.terms().size() == 2);
  const auto m = to_matrix(jordan_wigner(n));
  CHECK(m(0, 0).real() == 0.0);  // vacuum |00>
  CHECK(m(3, 3).real() == 2.0);  // |11>
  CHECK_THROWS_AS(number_operator(0), StructuralError);
}

TEST_CASE("total spin on small states") {
  // one spatial orbital: modes 0 (alpha), 1 (beta)
  const auto s2_one = to_matrix(jordan_wigner(total_spin_operator(1)));
  // doubly occupied orbital is the singlet
  CHECK(std::abs(s2_one(3, 3)) <= 1e-15);
  // single alpha electron
  CHECK(s2_one(1, 1).real() == doctest::Approx(0.75));
  CHECK(s2_one(2, 2).real() == doctest::Approx(0.75));

  // two spatial orbitals: alpha modes 0,1 and beta modes 2,3
  const auto s2 = to_matrix(jordan_wigner(total_spin_operator(2)));
  const Eigen::Index aa = 0b0011;
  CHECK(s2(aa, aa).real() == doctest::Approx(2.0));
  // open-shell singlet (|a0 b1> - |b0 a1>)/sqrt2 and triplet m=0 partner
  Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(16), triplet = Eigen::VectorXcd::Zero(16);
  const Eigen::Index a0b1 = 0b1001, b0a1 = 0b0110;
  // a0^dag b1^dag |vac> = |1001> with sign +; b0^dag a1^dag |vac> = -a1^dag b0^dag|vac> = -|0110>
  singlet(a0b1) = 1.0 / std::sqrt(2.0);
  singlet(b0a1) = 1.0 / std::sqrt(2.0);
  triplet(a0b1) = 1.0 / std::sqrt(2.0);
  triplet(b0a1) = -1.0 / std::sqrt(2.0);
  const double sv = (singlet.adjoint() * s2 * singlet)(0).real();
  const double tv = (triplet.adjoint() * s2 * triplet)(0).real();
  CHECK(std::min(sv, tv) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::max(sv, tv) == doctest::Approx(2.0));
}

TEST_CASE("total spin spectrum is S(S+1) and equals the Casimir form") {
  for (int n = 1; n <= 3; ++n) {
    const auto s2 = to_matrix(jordan_wigner(total_spin_operator(n)));
    for (double e : sorted_eigs(s2)) {
      const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * e));
      CHECK(std::abs(2.0 * s - std::round(2.0 * s)) <= 1e-9);
    }
    // Casimir S^2 = Sx^2 + Sy^2 + Sz^2 via S+ S- + Sz^2 - Sz as an independent construction
    FermionOperator sp(2 * n), sm(2 * n);
    for (int p = 0; p < n; ++p) {
      sp.add({{p, true}, {p + n, false}}, 1.0);
      sm.add({{p + n, true}, {p, false}}, 1.0);
    }
    const auto sz = spin_z_operator(n);
    const auto casimir = sp * sm + sz * sz + sz * cplx(-1.0);
    CHECK((fock_matrix(casimir) - s2).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("one-level Hamiltonian") {
  FermionIntegrals ints(1, 1, 1);
  ints.set_h(0, 0, -0.3);
  ints.set_e0(0.2);
  const auto h = build_hamiltonian(ints);
  FermionOperator expect = FermionOperator::identity(2, 0.2);
  expect.add({{0, true}, {0, false}}, -0.3);
  expect.add({{1, true}, {1, false}}, -0.3);
  CHECK(h.simplified().terms() == expect.simplified().terms());
}

TEST_CASE("zero integrals give a constant") {
  FermionIntegrals ints(2, 2, 0);
  ints.set_e0(1.5);
  const auto q = jordan_wigner(build_hamiltonian(ints));
  CHECK(q.simplified().size() == 1);
  CHECK(q.coeff("IIII") == cplx(1.5));
}

TEST_CASE("Hamiltonian matches a brute-force Slater-rule oracle") {
  // explicit two-electron Hamiltonian for one orbital: E = 2h + g, singly occupied: h, empty: 0
  const auto toy = fixture_ints("toy_1orb.fcidump");
  const auto m = to_matrix(jordan_wigner(build_hamiltonian(toy)));
  CHECK(m(0, 0).real() == doctest::Approx(0.1));
  CHECK(m(1, 1).real() == doctest::Approx(-0.4));
  CHECK(m(2, 2).real() == doctest::Approx(-0.4));
  CHECK(m(3, 3).real() == doctest::Approx(-1.0 + 0.3 + 0.1));
}

TEST_CASE("H2 ground state equals the FCI energy") {
  const auto h = jordan_wigner(build_hamiltonian(fixture_ints("h2_0.735.fcidump")));
  // frozen from an independent full-CI calculation on the same integrals
  const auto eig = sorted_eigs(to_matrix(h));
  CHECK(eig.front() == doctest::Approx(-1.1459778538543888).epsilon(1e-12));
}

TEST_CASE("Jordan-Wigner and parity images are isospectral") {
  for (const auto& name : kFixtures) {
    const auto h = build_hamiltonian(fixture_ints(name));
    CHECK(max_diff(sorted_eigs(to_matrix(jordan_wigner(h))), sorted_eigs(to_matrix(parity_map(h)))) <= 1e-10);
  }
}

TEST_CASE("two-qubit reduction over the four sectors partitions the parity spectrum") {
  for (const auto& name : kFixtures) {
    const auto ints = fixture_ints(name);
    if (ints.n_spatial() < 2) continue;
    const auto p = parity_map(build_hamiltonian(ints));
    std::vector<double> all;
    for (int pa : {1, -1}) {
      for (int pb : {1, -1}) {
        const auto r = two_qubit_reduction(p, {pa, pb});
        CHECK(r.n_qubits() == p.n_qubits() - 2);
        const auto e = sorted_eigs(to_matrix(r));
        all.insert(all.end(), e.begin(), e.end());
      }
    }
    CHECK(max_diff(all, sorted_eigs(to_matrix(p))) <= 1e-10);
  }
}

TEST_CASE("reduction sector from occupation") {
  const auto s = ReductionSector::from_occupation(2, 0);
  CHECK(s.parity_alpha == -1);
  CHECK(s.parity_beta == -1);
  const auto c = ReductionSector::from_occupation(1, 1);
  CHECK(c.parity_alpha == -1);
  CHECK(c.parity_beta == 1);
  const auto e = ReductionSector::from_occupation(4, 0);
  CHECK(e.parity_alpha == 1);
  CHECK(e.parity_beta == 1);
  CHECK_THROWS_AS(ReductionSector::from_occupation(2, 1), StructuralError);
}

TEST_CASE("reduced H2 has two qubits and contains the FCI ground state") {
  const auto ints = fixture_ints("h2_0.735.fcidump");
  const auto r = map_to_qubits(build_hamiltonian(ints), Mapping::ParityReduced, ReductionSector::from_occupation(2, 0));
  CHECK(r.n_qubits() == 2);
  CHECK(mapped_qubits(4, Mapping::ParityReduced) == 2);
  CHECK(mapped_qubits(4, Mapping::JordanWigner) == 4);
  const auto eig = sorted_eigs(to_matrix(r));
  CHECK(eig.front() == doctest::Approx(-1.1459778538543888).epsilon(1e-12));
  const auto full = sorted_eigs(to_matrix(parity_map(build_hamiltonian(ints))));
  for (double e : eig) {
    CHECK(std::any_of(full.begin(), full.end(), [&](double f) { return std::abs(f - e) <= 1e-10; }));
  }
}

TEST_CASE("reducing the identity") {
  const auto r = two_qubit_reduction(QubitOperator::identity(4, 2.0), {1, 1});
  CHECK(r.n_qubits() == 2);
  CHECK(r.coeff("II") == cplx(2.0));
}

TEST_CASE("reduction rejects operators that break the parities") {
  // a single creation operator changes the total parity
  const auto p = parity_map(FermionOperator::ladder(4, 0, true));
  CHECK_THROWS_AS(two_qubit_reduction(p, {1, 1}), SymmetryViolationError);
  CHECK_THROWS_AS(two_qubit_reduction(QubitOperator::identity(3), {1, 1}), StructuralError);
  CHECK_THROWS_AS(two_qubit_reduction(QubitOperator::identity(4), {2, 1}), StructuralError);
}

TEST_CASE("mapped H commutes with N and S^2 on every fixture") {
  for (const auto& name : kFixtures) {
    const auto ints = fixture_ints(name);
    const int modes = 2 * ints.n_spatial();
    for (Mapping m : {Mapping::JordanWigner, Mapping::Parity}) {
      const auto h = map_to_qubits(build_hamiltonian(ints), m);
      CHECK(commutator_norm(h, map_to_qubits(number_operator(modes), m)) <= 1e-10);
      CHECK(commutator_norm(h, map_to_qubits(total_spin_operator(ints.n_spatial()), m)) <= 1e-10);
    }
  }
}

TEST_CASE("mapping names round-trip") {
  for (Mapping m : {Mapping::JordanWigner, Mapping::Parity, Mapping::ParityReduced}) {
    CHECK(mapping_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(mapping_from_string("bravyi_kitaev"), StructuralError);
}
