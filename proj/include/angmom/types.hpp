#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace angmom {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Library version string written into output sidecars.
const char *version();

/// Physical output scaling. Everything inside the library runs with hbar = c = 1;
/// these factors are applied only when reports are written.
struct Units {
  double hbar = 1.0;
  double c = 1.0;
};

/// Invalid user input (bad spec, malformed config, contract violation).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not reach its stated accuracy.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Warnings are routed through a replaceable sink (stderr by default).
using WarningSink = std::function<void(const std::string &)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string &message);

// ---------------------------------------------------------------------------
// Small 3-vector helpers

inline double dot(const Vec3 &a, const Vec3 &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline cplx dot(const Vec3 &a, const CVec3 &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Hermitian product a* . b
inline cplx cdot(const CVec3 &a, const CVec3 &b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] +
         std::conj(a[2]) * b[2];
}

/// Bilinear product a . b (no conjugation)
inline cplx bdot(const CVec3 &a, const CVec3 &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline CVec3 cross(const Vec3 &a, const CVec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline CVec3 cross(const CVec3 &a, const CVec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double norm2(const CVec3 &a) {
  return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
}

inline double norm(const CVec3 &a) { return std::sqrt(norm2(a)); }

inline CVec3 operator*(cplx s, const CVec3 &a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline CVec3 operator+(const CVec3 &a, const CVec3 &b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline CVec3 operator-(const CVec3 &a, const CVec3 &b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline CVec3 conj(const CVec3 &a) {
  return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])};
}

/// Unit vector with polar angle theta and azimuth phi.
inline Vec3 unit_vector(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

/// Levi-Civita symbol for 0-based indices.
inline int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

} // namespace angmom
