#pragma once

#include <string>
#include <vector>

#include "qsh/slice_function.hpp"

namespace qsh {

inline constexpr double kDenominatorGuard = 1e-12;

/// a in D_i. Real a is accepted with any i.
struct MoebiusParam {
  Quaternion a;
  ImaginaryUnit i;

  MoebiusParam(const Quaternion& a_, const ImaginaryUnit& i_);
  Complex a_complex() const { return project(a, i); }
};

/// (1 - s a0 + s^2 |a|^2)^{-1} (s^2 a - s (1 + |a|^2) - conj(a)), as printed.
Quaternion moebius_verbatim(const MoebiusParam& p, const Quaternion& s);

/// (z + a) / (1 + conj(a) z).
Complex moebius_complex(Complex a, Complex z);

/// ext of z -> T_{a,C}(z) from the plane C_i.
SliceFunction moebius_ext(const MoebiusParam& p);

/// f o_i T_a.
SliceFunction moebius_compose(const SliceFunction& f, const MoebiusParam& p);

/// Grid comparison of the verbatim formula against the extension of T_{a,C}.
struct MoebiusCheck {
  MoebiusParam param;
  int samples = 0;
  double max_verbatim_minus_ref = 0.0;        // |V(s) - T(s)|
  double max_verbatim_plus_ref = 0.0;         // |V(s) + T(s)|
  double max_verbatim_vs_neg_ref_neg_a = 0.0; // |V(s) + T_{-a}(s)|
  double max_verbatim_vs_two_a0 = 0.0;        // |V(s) - W(s)|, W: denominator 1 - 2 a0 s + |a|^2 s^2
  double circle_modulus_dev_verbatim = 0.0;   // max ||V| - 1| on |z| = 1
  double circle_modulus_dev_ref = 0.0;
  int singular_samples = 0;                   // verbatim denominator below the guard
  std::vector<std::string> relationships;     // which candidate identities hold to 1e-10
};

MoebiusCheck moebius_check(const MoebiusParam& p, int n_radii = 5, int n_angles = 32);

}  // namespace qsh
