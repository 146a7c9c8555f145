#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "emel/types.hpp"

namespace emel {

/// Rank-4 elastic stiffness tensor C_ijkl (Pa) with the major and both minor
/// symmetries. Only the factory functions create instances; each of them
/// checks the symmetry relations and records the Legendre constant.
class StiffnessTensor {
public:
  static StiffnessTensor isotropic(double lambda, double mu);

  /// Upper triangle of the 6x6 Voigt matrix, row major: C11 C12 ... C16 C22 ...
  /// C66 (21 values). Voigt order is 11, 22, 33, 23, 13, 12.
  static StiffnessTensor from_voigt(std::span<const double, 21> upper);

  /// Full 81-entry access, index (i,j,k,l) -> ((i*3+j)*3+k)*3+l. Throws
  /// MaterialError when any symmetry relation fails beyond rounding.
  static StiffnessTensor from_entries(const std::array<double, 81> &entries);

  double operator()(int i, int j, int k, int l) const {
    return c_[static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + l)];
  }

  const std::array<double, 81> &entries() const { return c_; }

  /// Quadratic form over symmetric matrices in orthonormal (Mandel) 6-vector
  /// coordinates, so that a^T M a = sum C_ijkl a_ij a_kl and |a|^2 = sum a_ij^2.
  Eigen::Matrix<double, 6, 6> mandel() const;

  /// Stored witness c0 (smallest eigenvalue of mandel()).
  double legendre() const { return c0_; }
  bool elliptic() const { return c0_ > 0.0; }

private:
  StiffnessTensor() = default;
  std::array<double, 81> c_{};
  double c0_ = 0.0;
};

/// Smallest eigenvalue of the stiffness quadratic form over symmetric
/// matrices; non-positive values mean the tensor is not Legendre elliptic.
double legendre_constant(const StiffnessTensor &c);

/// Constant exterior medium. The wave number is always derived.
class BackgroundMedium {
public:
  BackgroundMedium(double eps0, double mu0, double omega);
  double eps0() const { return eps0_; }
  double mu0() const { return mu0_; }
  double omega() const { return omega_; }
  double kappa() const;

private:
  double eps0_, mu0_, omega_;
};

/// Piecewise-constant density, one value per BODY cell (local body-cell index).
class MassDensityField {
public:
  explicit MassDensityField(std::vector<double> per_cell);
  static MassDensityField uniform(std::size_t n_cells, double rho);
  double operator[](std::size_t cell) const { return rho_[cell]; }
  std::size_t size() const { return rho_.size(); }
  double max() const;

private:
  std::vector<double> rho_;
};

struct CouplingConstants {
  Complex b1;
  Complex b2;
};

struct AdmissibilityReport {
  Complex product; // b1 * conj(b2)
  bool real_part_zero = false;
  bool imag_part_negative = false;
  bool admissible() const { return real_part_zero && imag_part_negative; }
  std::string describe() const;
};

/// Relative tolerance for Re(b1 conj b2) = 0.
inline constexpr double kAdmissibilityTol = 1e-12;

AdmissibilityReport check_admissible(const CouplingConstants &bc);

/// Throws MaterialError naming the failed predicate unless bc is admissible.
void require_admissible(const CouplingConstants &bc);

} // namespace emel
