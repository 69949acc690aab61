#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace spvqe {

/**
 * @brief Active-space molecular integrals in chemists' notation.
 *
 * `h(i,j)` and `g(i,j,k,l)` are indexed over spatial orbitals (0-based) and
 * stored in fully expanded form: h is symmetric and g carries the real
 * 8-fold permutational symmetry. `e0` is the constant shift (nuclear
 * repulsion plus any frozen-core energy).
 */
class FermionIntegrals {
 public:
  FermionIntegrals() = default;
  FermionIntegrals(int n_spatial, int n_electrons, int ms2);

  int n_spatial() const noexcept { return n_spatial_; }
  int n_electrons() const noexcept { return n_electrons_; }
  int ms2() const noexcept { return ms2_; }
  double e0() const noexcept { return e0_; }

  double h(int i, int j) const { return h_[index2(i, j)]; }
  double g(int i, int j, int k, int l) const { return g_[index4(i, j, k, l)]; }

  /// Sets h_ij and h_ji.
  void set_h(int i, int j, double v);
  /// Sets all 8 symmetry images of g_ijkl.
  void set_g(int i, int j, int k, int l, double v);
  void set_e0(double v) noexcept { e0_ = v; }

  /// Max deviation from h_ij = h_ji and the 8-fold g symmetry.
  double symmetry_violation() const;

 private:
  std::size_t index2(int i, int j) const;
  std::size_t index4(int i, int j, int k, int l) const;

  int n_spatial_ = 0;
  int n_electrons_ = 0;
  int ms2_ = 0;
  double e0_ = 0.0;
  std::vector<double> h_;
  std::vector<double> g_;
};

/**
 * Reads an FCIDUMP stream: a `&FCI ... &END` namelist header carrying NORB,
 * NELEC and MS2, followed by `value i j k l` records with 1-based indices.
 * `i j 0 0` records are one-body terms, `0 0 0 0` is the constant shift and
 * `i 0 0 0` (orbital energies) are ignored.
 *
 * Throws ParseError for a malformed header, a missing NORB, bad records, out
 * of range indices, or records that contradict the 8-fold symmetry.
 */
FermionIntegrals parse_fcidump(std::istream& in);
FermionIntegrals load_fcidump(const std::filesystem::path& path);

}  // namespace spvqe
