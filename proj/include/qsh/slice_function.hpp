#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsh/quaternion.hpp"

namespace qsh {

/// One term x^n a of a right-coefficient power series.
struct SeriesTerm {
  int n = 0;
  Quaternion a;
};

/// Values of a function on the plane C_u in the coordinate z = x0 + imath x1,
/// i.e. value(z) = f(x0 + u x1). Imag(z) may be negative.
struct PlaneKernel {
  ImaginaryUnit unit;
  std::function<Quaternion(Complex)> value;
  std::function<Quaternion(Complex)> derivative;  // empty: central differences
  std::function<bool(Complex)> in_domain;         // empty: closed unit disc
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Left slice hyperholomorphic function on the quaternionic unit ball.
///
/// Two representations share one interface. A power series sum x^n a_n is
/// evaluated by Horner's scheme in the plane C_{i_x}; a plane kernel is
/// extended off its plane with the representation formula
///   f(x) = 1/2 (1 - i_x u) f(x_u) + 1/2 (1 + i_x u) f(conj(x_u)).
///
/// Instances are immutable and cheap to copy.
class SliceFunction {
public:
  struct Series {
    std::vector<SeriesTerm> terms;  // strictly increasing exponents
    double r_max = INFINITY;  // polynomials are entire
    double tolerance = 1e-12;
    bool truncated = false;  // terms are a truncation of an infinite series
    double tail_ratio = 1.0;  // product of dilation factors applied since truncation
  };

  SliceFunction();  // the zero function

  static SliceFunction polynomial(std::vector<Quaternion> coeffs, std::string label = {});
  /// A truncated infinite series; evaluation is contracted for |x| <= r_max only.
  static SliceFunction truncated_series(std::vector<Quaternion> coeffs, double r_max,
                                        double tolerance = 1e-12, std::string label = {});
  static SliceFunction sparse(std::vector<SeriesTerm> terms, std::string label = {});
  static SliceFunction constant(const Quaternion& c);
  static SliceFunction monomial(int n, const Quaternion& a = 1.0);
  /// Boundary singular angles are given on the kernel's own plane.
  static SliceFunction from_kernel(PlaneKernel kernel, std::vector<double> singular_angles = {},
                                   std::string label = {});

  bool is_series() const;
  const Series& series() const;       // requires is_series()
  const PlaneKernel& kernel() const;  // requires !is_series()
  const std::string& label() const;
  SliceFunction with_label(std::string label) const;
  /// Replaces the boundary singular angles (kernel functions, angles on the kernel plane).
  SliceFunction with_singular_angles(std::vector<double> angles) const;

  /// Whether all coefficients (or kernel values on the real axis and the
  /// kernel symmetry) make the function intrinsic; only tracked for series.
  bool intrinsic() const;

  Quaternion operator()(const Quaternion& x) const;
  Quaternion evaluate(const Quaternion& x) const { return (*this)(x); }
  /// f(Re z + i Im z).
  Quaternion on_plane(const ImaginaryUnit& i, Complex z) const;
  Quaternion at_zero() const { return on_plane(default_unit(), 0.0); }

  SliceFunction derivative() const;
  SliceFunction dilate(double r) const;

  /// Largest radius at which values can be taken (1 unless truncated).
  double boundary_radius() const;
  /// Boundary angles in plane C_i where the function is singular, both signs.
  std::vector<double> singular_angles(const ImaginaryUnit& i) const;
  /// Highest exponent for series, -1 for kernels.
  int degree() const;

  SliceFunction operator+(const SliceFunction& g) const;
  SliceFunction operator-(const SliceFunction& g) const;
  /// Right multiplication x -> f(x) a.
  SliceFunction times(const Quaternion& a) const;

  struct Impl;

private:
  explicit SliceFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// f_i on C_i, as an evaluator of the plane coordinate.
struct PlaneFunction {
  ImaginaryUnit unit;
  std::function<Quaternion(Complex)> eval;
  Quaternion operator()(Complex z) const { return eval(z); }
};

PlaneFunction restrict_to(const SliceFunction& f, const ImaginaryUnit& i);

/// Value at x of the slice hyperholomorphic extension of plane values on C_i.
Quaternion representation_formula(const PlaneFunction& f_on_plane, const Quaternion& x);

struct ComplexComponent {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> derivative;
  std::optional<std::vector<std::pair<int, Complex>>> terms;

  Complex operator()(Complex z) const { return value(z); }
};

ComplexComponent complex_series(std::vector<std::pair<int, Complex>> terms);

/// f_i = f1 + f2 j with f1, f2 holomorphic C_i-valued.
struct SplitPair {
  ImaginaryUnit i;
  ImaginaryUnit j;
  ComplexComponent f1;
  ComplexComponent f2;
};

SplitPair split(const SliceFunction& f, const ImaginaryUnit& i, const ImaginaryUnit& j);
SliceFunction recombine(const SplitPair& p);

/// ext(f_i o g_i). Throws RangeViolation unless g_i maps D_i into D_i.
SliceFunction i_compose(const SliceFunction& f, const SliceFunction& g, const ImaginaryUnit& i);

/// Central-difference check of (d/dx0 + i d/dx1) f = 0 on the plane C_i at z;
/// returns the modulus of the residual.
double cauchy_riemann_residual(const SliceFunction& f, const ImaginaryUnit& i, Complex z,
                               double h = kFiniteDifferenceStep);

// Closed-form kernels used by the corpus and the function spec files.

/// ext of z -> log(1 / (1 - e^{u alpha} z)) from the plane C_u.
SliceFunction log_alpha(double alpha, const ImaginaryUnit& u = ImaginaryUnit::e1());
/// s -> (1 + s)^{-1/2}, principal branch, slice hyperholomorphic off (-inf, -1].
SliceFunction inv_sqrt_one_plus_s();
SliceFunction gap_series(const std::vector<int>& exponents, const std::vector<Quaternion>& coeffs);

}  // namespace qsh
