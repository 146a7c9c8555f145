#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <complex>
#include <stdexcept>
#include <string>

namespace emel {

using Real = double;
using Complex = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Base of every error raised by the library. The message names the violated
/// predicate so that the CLI can report it verbatim.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MaterialError : public Error {
public:
  using Error::Error;
};

class MeshError : public Error {
public:
  using Error::Error;
};

class NearSingularityError : public Error {
public:
  using Error::Error;
};

class SolverError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

inline CVec3 to_complex(const Vec3 &v) { return v.cast<Complex>(); }

/// Bilinear (non-conjugating) dot product, the pairing used by all trace
/// integrals.
inline Complex bdot(const CVec3 &a, const CVec3 &b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

// Eigen's cross() conjugates its result for complex scalars; these do not.
inline CVec3 cross(const CVec3 &a, const CVec3 &b) {
  return {a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0)};
}
inline CVec3 cross(const Vec3 &a, const CVec3 &b) { return cross(CVec3(a.cast<Complex>()), b); }
inline CVec3 cross(const CVec3 &a, const Vec3 &b) { return cross(a, CVec3(b.cast<Complex>())); }

} // namespace emel
