#include "emel/materials.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace emel {
namespace {

constexpr int kVoigt[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};
constexpr int kVoigtPair[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};

std::size_t idx(int i, int j, int k, int l) {
  return static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + l);
}

void check_symmetry(const std::array<double, 81> &c) {
  double scale = 0.0;
  for (double v : c)
    scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double v = c[idx(i, j, k, l)];
          if (std::abs(v - c[idx(k, l, i, j)]) > tol || std::abs(v - c[idx(j, i, k, l)]) > tol ||
              std::abs(v - c[idx(i, j, l, k)]) > tol) {
            std::ostringstream os;
            os << "stiffness symmetry violated at (" << i + 1 << j + 1 << k + 1 << l + 1
               << "): C_ijkl = C_klij = C_jikl = C_ijlk does not hold";
            throw MaterialError(os.str());
          }
        }
}

} // namespace

StiffnessTensor StiffnessTensor::isotropic(double lambda, double mu) {
  if (!(mu > 0.0))
    throw MaterialError("isotropic stiffness requires mu > 0");
  if (!(3.0 * lambda + 2.0 * mu > 0.0))
    throw MaterialError("isotropic stiffness requires 3*lambda + 2*mu > 0");
  std::array<double, 81> c{};
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          c[idx(i, j, k, l)] = lambda * delta(i, j) * delta(k, l) +
                               mu * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
  return from_entries(c);
}

StiffnessTensor StiffnessTensor::from_voigt(std::span<const double, 21> upper) {
  double m[6][6];
  std::size_t p = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = a; b < 6; ++b) {
      m[a][b] = upper[p];
      m[b][a] = upper[p];
      ++p;
    }
  std::array<double, 81> c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          c[idx(i, j, k, l)] = m[kVoigt[i][j]][kVoigt[k][l]];
  return from_entries(c);
}

StiffnessTensor StiffnessTensor::from_entries(const std::array<double, 81> &entries) {
  check_symmetry(entries);
  StiffnessTensor t;
  t.c_ = entries;
  t.c0_ = legendre_constant(t);
  return t;
}

Eigen::Matrix<double, 6, 6> StiffnessTensor::mandel() const {
  Eigen::Matrix<double, 6, 6> m;
  for (int a = 0; a < 6; ++a) {
    const double fa = a < 3 ? 1.0 : std::sqrt(2.0);
    for (int b = 0; b < 6; ++b) {
      const double fb = b < 3 ? 1.0 : std::sqrt(2.0);
      m(a, b) = fa * fb *
                (*this)(kVoigtPair[a][0], kVoigtPair[a][1], kVoigtPair[b][0], kVoigtPair[b][1]);
    }
  }
  return m;
}

double legendre_constant(const StiffnessTensor &c) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(c.mandel(),
                                                                Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

BackgroundMedium::BackgroundMedium(double eps0, double mu0, double omega)
    : eps0_(eps0), mu0_(mu0), omega_(omega) {
  if (!(eps0 > 0.0) || !(mu0 > 0.0) || !(omega > 0.0))
    throw MaterialError("background medium requires eps0 > 0, mu0 > 0, omega > 0");
}

double BackgroundMedium::kappa() const { return omega_ * std::sqrt(eps0_ * mu0_); }

MassDensityField::MassDensityField(std::vector<double> per_cell) : rho_(std::move(per_cell)) {
  for (double r : rho_)
    if (!(r > 0.0) || !std::isfinite(r))
      throw MaterialError("density must be positive and finite on every cell");
}

MassDensityField MassDensityField::uniform(std::size_t n_cells, double rho) {
  return MassDensityField(std::vector<double>(n_cells, rho));
}

double MassDensityField::max() const {
  return rho_.empty() ? 0.0 : *std::max_element(rho_.begin(), rho_.end());
}

std::string AdmissibilityReport::describe() const {
  std::ostringstream os;
  os << "b1*conj(b2) = (" << product.real() << ", " << product.imag() << "): ";
  os << (real_part_zero ? "Re(b1*conj(b2)) = 0 holds" : "Re(b1*conj(b2)) != 0");
  os << "; ";
  os << (imag_part_negative ? "Im(b1*conj(b2)) < 0 holds" : "Im(b1*conj(b2)) >= 0");
  return os.str();
}

AdmissibilityReport check_admissible(const CouplingConstants &bc) {
  if (bc.b1 * bc.b2 == Complex(0.0))
    throw MaterialError("degenerate coupling: b1*b2 = 0");
  AdmissibilityReport r;
  r.product = bc.b1 * std::conj(bc.b2);
  const double scale = std::abs(bc.b1) * std::abs(bc.b2);
  r.real_part_zero = std::abs(r.product.real()) <= kAdmissibilityTol * scale;
  r.imag_part_negative = r.product.imag() < 0.0;
  return r;
}

void require_admissible(const CouplingConstants &bc) {
  const auto r = check_admissible(bc);
  if (!r.admissible())
    throw MaterialError("inadmissible coupling constants: " + r.describe());
}

} // namespace emel
