#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string_view>
#include <utility>
#include <vector>

#include "qsh/error.hpp"

namespace qsh {

using Complex = std::complex<double>;

/// Element of H in the basis {1, e1, e2, e3}, Hamilton convention e1 e2 = e3.
struct Quaternion {
  double w = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_) : w(w_) {}  // NOLINT: reals embed implicitly
  constexpr Quaternion(double w_, double a, double b, double c) : w(w_), x1(a), x2(b), x3(c) {}

  static constexpr Quaternion e1() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion e2() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion e3() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double real() const { return w; }
  constexpr Quaternion imag() const { return {0.0, x1, x2, x3}; }
  constexpr Quaternion conj() const { return {w, -x1, -x2, -x3}; }
  constexpr double norm2() const { return w * w + x1 * x1 + x2 * x2 + x3 * x3; }
  double norm() const { return std::sqrt(norm2()); }
  double imag_norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

  Quaternion inverse() const;

  constexpr std::array<double, 4> to_array() const { return {w, x1, x2, x3}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x1 += o.x1; x2 += o.x2; x3 += o.x3;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x1 *= s; x2 *= s; x3 *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x1, -a.x2, -a.x3}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
          a.w * b.x1 + a.x1 * b.w + a.x2 * b.x3 - a.x3 * b.x2,
          a.w * b.x2 - a.x1 * b.x3 + a.x2 * b.w + a.x3 * b.x1,
          a.w * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.w};
}

inline Quaternion mul(const Quaternion& a, const Quaternion& b) { return a * b; }

/// Real inner product on R^4.
constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

inline double distance(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

/// Purely imaginary quaternion of modulus one. Construction normalizes and
/// rejects vectors that are (numerically) zero.
class ImaginaryUnit {
public:
  ImaginaryUnit() : u_(Quaternion::e1()) {}
  explicit ImaginaryUnit(const Quaternion& q);
  ImaginaryUnit(double a, double b, double c) : ImaginaryUnit(Quaternion(0.0, a, b, c)) {}

  static ImaginaryUnit e1() { return ImaginaryUnit(1, 0, 0); }
  static ImaginaryUnit e2() { return ImaginaryUnit(0, 1, 0); }
  static ImaginaryUnit e3() { return ImaginaryUnit(0, 0, 1); }

  const Quaternion& q() const { return u_; }
  operator const Quaternion&() const { return u_; }  // NOLINT
  ImaginaryUnit operator-() const { return ImaginaryUnit(-u_); }

  friend bool operator==(const ImaginaryUnit& a, const ImaginaryUnit& b) { return a.u_ == b.u_; }

private:
  Quaternion u_;
};

/// Canonical unit used for real quaternions, where i_x is arbitrary.
inline ImaginaryUnit default_unit() { return ImaginaryUnit::e1(); }

/// x = x0 + i x1 with x1 >= 0.
struct SliceCoordinates {
  double x0 = 0.0;
  double x1 = 0.0;
  ImaginaryUnit i;

  Complex as_complex() const { return {x0, x1}; }
};

SliceCoordinates to_slice(const Quaternion& q);
inline Quaternion assemble(const SliceCoordinates& s) { return s.x0 + s.i.q() * s.x1; }

/// Embeds c = a + b*imath into C_i as a + i b.
inline Quaternion embed(const Complex& c, const ImaginaryUnit& i) {
  return Quaternion(c.real()) + i.q() * c.imag();
}

/// Coordinates of q in C_i, assuming q lies in that plane (the orthogonal
/// part is discarded).
inline Complex project(const Quaternion& q, const ImaginaryUnit& i) {
  return {q.w, dot(q, i.q())};
}

/// Distance from q to the plane C_i.
double off_plane(const Quaternion& q, const ImaginaryUnit& i);

inline constexpr double kOrthogonalityTol = 1e-12;

/// Throws NonOrthogonalUnits unless i j + j i vanishes within tolerance.
void require_orthogonal(const ImaginaryUnit& i, const ImaginaryUnit& j);

/// Picks a unit orthogonal to i, deterministically.
ImaginaryUnit orthogonal_unit(const ImaginaryUnit& i);

/// a = c1 + c2 j with c1, c2 in C_i.
std::pair<Complex, Complex> split_basis(const Quaternion& a, const ImaginaryUnit& i,
                                        const ImaginaryUnit& j);

inline Quaternion join_basis(const Complex& c1, const Complex& c2, const ImaginaryUnit& i,
                             const ImaginaryUnit& j) {
  return embed(c1, i) + embed(c2, i) * j.q();
}

/// Deterministic point sets on the sphere of imaginary units.
///   "axes"    : +-e1, +-e2, +-e3 (first n of them)
///   "product" : n_theta x n_phi grid of the sphere rule, closed under u -> -u
///   "spiral"  : n points of a golden-angle spiral (no antipodal pairs)
std::vector<ImaginaryUnit> sample_sphere(int n, std::string_view scheme);

/// Units of a seeded random sample, uniform on the sphere.
std::vector<ImaginaryUnit> random_units(int n, unsigned seed);

}  // namespace qsh
