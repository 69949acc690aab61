#include "spvqe/errors.hpp"
#include "spvqe/fcidump.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <sstream>

using namespace spvqe;

namespace {

FermionIntegrals parse(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

const char* kHeader = " &FCI NORB=2,NELEC=2,MS2=0,\n  ORBSYM=1,1,\n  ISYM=1,\n &END\n";

}  // namespace

TEST_CASE("header fields") {
  const auto ints = parse(kHeader);
  CHECK(ints.n_spatial() == 2);
  CHECK(ints.n_electrons() == 2);
  CHECK(ints.ms2() == 0);
  CHECK(ints.e0() == 0.0);
}

TEST_CASE("header is case-insensitive and accepts a slash terminator") {
  const auto ints = parse("&fci norb=3, nelec=1, ms2=1\n/\n");
  CHECK(ints.n_spatial() == 3);
  CHECK(ints.n_electrons() == 1);
  CHECK(ints.ms2() == 1);
}

TEST_CASE("two-body record uses 1-based chemists' indices") {
  const auto ints = parse(std::string(kHeader) + " 0.75 1 1 1 1\n");
  CHECK(ints.g(0, 0, 0, 0) == 0.75);
  CHECK(ints.g(1, 1, 1, 1) == 0.0);
}

TEST_CASE("one-body and constant records") {
  const auto ints = parse(std::string(kHeader) + " -1.25 1 1 0 0\n 0.3 2 1 0 0\n 0.72 0 0 0 0\n");
  CHECK(ints.h(0, 0) == -1.25);
  CHECK(ints.h(0, 1) == 0.3);
  CHECK(ints.h(1, 0) == 0.3);
  CHECK(ints.e0() == 0.72);
}

TEST_CASE("two-body records expand to all eight images") {
  const auto ints = parse(std::string(kHeader) + " 0.18 2 1 2 1\n 0.66 1 1 2 2\n");
  for (const auto& [i, j, k, l] : std::vector<std::array<int, 4>>{{1, 0, 1, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}, {0, 1, 0, 1}}) {
    CHECK(ints.g(i, j, k, l) == 0.18);
  }
  CHECK(ints.g(0, 0, 1, 1) == 0.66);
  CHECK(ints.g(1, 1, 0, 0) == 0.66);
  CHECK(ints.g(0, 1, 1, 1) == 0.0);
  CHECK(ints.symmetry_violation() == 0.0);
}

TEST_CASE("Fortran exponents and orbital-energy records") {
  const auto ints = parse(std::string(kHeader) + " 1.5D-01 1 1 0 0\n -0.4 1 0 0 0\n");
  CHECK(ints.h(0, 0) == doctest::Approx(0.15));
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse(" 0.1 1 1 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse("&FCI NELEC=2 &END\n"), ParseError);              // missing NORB
  CHECK_THROWS_AS(parse("&FCI NORB=2, NELEC=2\n 0.1 1 1 1 1\n"), ParseError);  // never terminated
  CHECK_THROWS_AS(parse("&FCI NORB=0 &END\n"), ParseError);
  CHECK_THROWS_AS(parse("&FCI NORB=1, NELEC=3 &END\n"), ParseError);
  CHECK_THROWS_AS(parse("&FCI NORB=x &END\n"), ParseError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + " 0.1 3 1 1 1\n"), ParseError);  // index out of range
  CHECK_THROWS_AS(parse(std::string(kHeader) + " 0.1 -1 1 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + " 0.1 1 1 1\n"), ParseError);   // four columns
  CHECK_THROWS_AS(parse(std::string(kHeader) + " abc 1 1 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + " 0.1 1 0 1 0\n"), ParseError);  // unknown pattern
}

TEST_CASE("records contradicting the permutational symmetry are rejected") {
  CHECK_THROWS_AS(parse(std::string(kHeader) + " 0.18 2 1 2 1\n 0.19 1 2 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + " 0.3 2 1 0 0\n 0.4 1 2 0 0\n"), ParseError);
  // repeating a value within tolerance is fine
  CHECK_NOTHROW(parse(std::string(kHeader) + " 0.18 2 1 2 1\n 0.18 1 2 1 2\n"));
}

TEST_CASE("bundled fixtures load with symmetric integrals") {
  for (const char* name : {"h2_0.735.fcidump", "h3p_2.500.fcidump", "toy_1orb.fcidump"}) {
    const auto ints = load_fcidump(testutil::fixture(name));
    CHECK(ints.symmetry_violation() <= 1e-10);
  }
  const auto h2 = load_fcidump(testutil::fixture("h2_0.735.fcidump"));
  CHECK(h2.n_spatial() == 2);
  CHECK(h2.g(0, 0, 0, 0) == doctest::Approx(0.6756560924651798).epsilon(1e-15));
  CHECK(h2.e0() == doctest::Approx(0.7199689944489797).epsilon(1e-15));
  const auto h3 = load_fcidump(testutil::fixture("h3p_2.500.fcidump"));
  CHECK(h3.n_spatial() == 3);
  CHECK(h3.n_electrons() == 2);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_fcidump("/nonexistent/file.fcidump"), ParseError);
}

TEST_CASE("integral container validation") {
  CHECK_THROWS_AS(FermionIntegrals(0, 0, 0), StructuralError);
  CHECK_THROWS_AS(FermionIntegrals(1, 3, 1), StructuralError);
  FermionIntegrals ints(2, 2, 0);
  CHECK_THROWS_AS(ints.set_h(2, 0, 1.0), StructuralError);
  ints.set_g(0, 1, 1, 1, 0.5);
  CHECK(ints.g(1, 1, 1, 0) == 0.5);
  CHECK(ints.symmetry_violation() == 0.0);
}
