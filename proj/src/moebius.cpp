#include "qsh/moebius.hpp"

#include <algorithm>
#include <numbers>

namespace qsh {

MoebiusParam::MoebiusParam(const Quaternion& a_, const ImaginaryUnit& i_) : a(a_), i(i_) {
  if (!(a.norm() < 1.0)) throw Error(ErrorCode::InvalidInput, "Moebius parameter needs |a| < 1");
  if (off_plane(a, i) > 1e-12) throw Error(ErrorCode::InvalidInput, "Moebius parameter not in C_i");
}

namespace {

Quaternion verbatim_with(const MoebiusParam& p, const Quaternion& s, double a0_factor) {
  const Quaternion& a = p.a;
  const double a2 = a.norm2();
  const Quaternion s2 = s * s;
  const Quaternion d = Quaternion(1.0) - s * (a0_factor * a.w) + s2 * a2;
  if (d.norm() <= kDenominatorGuard)
    throw Error(ErrorCode::SingularDenominator, "Moebius denominator vanishes");
  const Quaternion n = s2 * a - s * (1.0 + a2) - a.conj();
  return d.inverse() * n;
}

}  // namespace

Quaternion moebius_verbatim(const MoebiusParam& p, const Quaternion& s) { return verbatim_with(p, s, 1.0); }

Complex moebius_complex(Complex a, Complex z) {
  const Complex d = 1.0 + std::conj(a) * z;
  if (std::abs(d) <= kDenominatorGuard)
    throw Error(ErrorCode::SingularDenominator, "Moebius denominator vanishes");
  return (z + a) / d;
}

SliceFunction moebius_ext(const MoebiusParam& p) {
  const Complex a = p.a_complex();
  const ImaginaryUnit i = p.i;
  PlaneKernel k;
  k.unit = i;
  k.value = [a, i](Complex z) { return embed(moebius_complex(a, z), i); };
  k.derivative = [a, i](Complex z) {
    const Complex d = 1.0 + std::conj(a) * z;
    return embed((1.0 - std::norm(a)) / (d * d), i);
  };
  return SliceFunction::from_kernel(std::move(k), {}, "T_a");
}

SliceFunction moebius_compose(const SliceFunction& f, const MoebiusParam& p) {
  if (p.a.norm() == 0.0) return f;
  // boundary point e^{it} of f comes from T_{-a}(e^{it})
  std::vector<double> sing;
  for (double t : f.singular_angles(p.i))
    sing.push_back(std::arg(moebius_complex(-p.a_complex(), std::polar(1.0, t))));
  return i_compose(f, moebius_ext(p), p.i).with_singular_angles(std::move(sing));
}

MoebiusCheck moebius_check(const MoebiusParam& p, int n_radii, int n_angles) {
  MoebiusCheck out{p, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, {}};
  const SliceFunction ref = moebius_ext(p);
  const SliceFunction ref_neg = moebius_ext(MoebiusParam(-p.a, p.i));
  // a unit off the plane too, to see the slice behavior
  const std::vector<ImaginaryUnit> units = {p.i, orthogonal_unit(p.i)};
  for (const auto& u : units) {
    for (int r = 1; r <= n_radii; ++r) {
      const double rad = static_cast<double>(r) / n_radii;  // last radius is the unit circle
      for (int k = 0; k < n_angles; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + 0.5) / n_angles;
        const Quaternion s = embed(std::polar(rad, t), u);
        Quaternion v, w;
        try {
          v = moebius_verbatim(p, s);
          w = verbatim_with(p, s, 2.0);
        } catch (const Error&) {
          ++out.singular_samples;
          continue;
        }
        const Quaternion tr = ref(s);
        ++out.samples;
        out.max_verbatim_minus_ref = std::max(out.max_verbatim_minus_ref, distance(v, tr));
        out.max_verbatim_plus_ref = std::max(out.max_verbatim_plus_ref, distance(v, -tr));
        out.max_verbatim_vs_neg_ref_neg_a =
            std::max(out.max_verbatim_vs_neg_ref_neg_a, distance(v, -ref_neg(s)));
        out.max_verbatim_vs_two_a0 = std::max(out.max_verbatim_vs_two_a0, distance(v, w));
        if (r == n_radii) {
          out.circle_modulus_dev_verbatim =
              std::max(out.circle_modulus_dev_verbatim, std::abs(v.norm() - 1.0));
          out.circle_modulus_dev_ref = std::max(out.circle_modulus_dev_ref, std::abs(tr.norm() - 1.0));
        }
      }
    }
  }
  const double tol = 1e-10;
  if (out.max_verbatim_minus_ref <= tol) out.relationships.push_back("verbatim == T_a");
  if (out.max_verbatim_plus_ref <= tol) out.relationships.push_back("verbatim == -T_a");
  if (out.max_verbatim_vs_neg_ref_neg_a <= tol) out.relationships.push_back("verbatim == -T_{-a}");
  if (out.max_verbatim_vs_two_a0 <= tol)
    out.relationships.push_back("verbatim unchanged by a0 -> 2 a0 in the denominator");
  if (out.circle_modulus_dev_verbatim <= tol)
    out.relationships.push_back("verbatim maps the unit circle to the unit sphere");
  if (out.relationships.empty()) out.relationships.push_back("none of the candidate identities holds");
  return out;
}

}  // namespace qsh
