#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsh/moebius.hpp"
#include "qsh/quadrature.hpp"
#include "qsh/slice_function.hpp"

namespace qsh {

struct NormConfig {
  int circle_nodes = 2048;
  DiskRule disk{128, 512};
  SphereRule sphere{64, 128};
  int ladder_depth = 14;  // M in r_m = 1 - 2^{-m}
  int arc_depth = 12;     // K
};

/// Units used for sampled sups: the six axes plus a spiral.
std::vector<ImaginaryUnit> default_units(int n_spiral = 20);

/// Plane values split as f(x0 + i x1) = alpha(z) + i beta(z), with alpha, beta
/// independent of i. Then |f_i|^2 = |alpha|^2 + |beta|^2 + 2 <alpha, i beta>.
struct AlphaBeta {
  Quaternion alpha;
  Quaternion beta;
};
AlphaBeta alpha_beta(const SliceFunction& f, Complex z);
ImaginaryUnit base_unit(const SliceFunction& f);

/// Combination of the three cross terms <X, e_k Y>.
std::array<double, 3> cross_terms(const Quaternion& x, const Quaternion& y);
/// max over i of |x + i y|^2 = |x|^2 + |y|^2 + 2 |cross_terms(x, y)|.
double sup_modulus2(const Quaternion& x, const Quaternion& y);

struct SliceValue {
  ImaginaryUnit unit;
  double value = 0.0;
  bool diverged = false;
  bool low_confidence = false;
};

struct NormReport {
  std::string space;
  double value = 0.0;
  bool diverged = false;
  bool low_confidence = false;
  std::vector<SliceValue> per_slice;
  std::map<std::string, double> extra;
  std::map<std::string, double> metadata;
  std::vector<double> ladder;  // trend data behind a verdict
};

// ---- Hardy ------------------------------------------------------------------

/// Mean of |f_i(r e^{i theta})|^p over theta, graded around singular angles.
double circle_mean_p(const SliceFunction& f, const ImaginaryUnit& i, double r, double p,
                     const NormConfig& cfg);

NormReport hardy_norm(const SliceFunction& f, double p, const std::vector<ImaginaryUnit>& units,
                      const NormConfig& cfg = {});
double hardy2_coeff(const SliceFunction& f);
/// H^p norm of a complex component through its boundary values on the same ladder.
double hardy_norm_complex(const ComplexComponent& c, double p, const NormConfig& cfg = {});

// ---- BMO / VMO --------------------------------------------------------------

/// Levels k = 0..depth: arcs of length 2 pi 2^{-k} at offsets pi 2^{-k}.
struct ArcFamily {
  int depth = 12;
  int nodes_per_deepest_arc = 16;
  int nodes() const { return nodes_per_deepest_arc << depth; }
};

/// alpha, beta at midpoint nodes theta_k = 2 pi (k + 1/2) / N on radius r.
struct BoundarySamples {
  int n = 0;
  double radius = 1.0;
  std::vector<Quaternion> alpha;
  std::vector<Quaternion> beta;
};

double default_boundary_radius(const SliceFunction& f);
BoundarySamples boundary_samples(const SliceFunction& f, int n, double radius);

/// Mean oscillation on one arc: |f_i - mean|^2 averaged = P + 2 i.C.
struct ArcStat {
  int level = 0;
  int start = 0;  // first node
  double P = 0.0;
  std::array<double, 3> C{};

  double on(const ImaginaryUnit& i) const {
    return P + 2.0 * (i.q().x1 * C[0] + i.q().x2 * C[1] + i.q().x3 * C[2]);
  }
  double sup() const { return P + 2.0 * std::sqrt(C[0] * C[0] + C[1] * C[1] + C[2] * C[2]); }
};

std::vector<ArcStat> arc_stats(const BoundarySamples& b, const ArcFamily& arcs);

/// Squared oscillation maxima per level for a slice (unit given) or over all of S.
std::vector<double> level_maxima(const std::vector<ArcStat>& stats, int depth,
                                 const std::optional<ImaginaryUnit>& unit);

double bmo_seminorm_slice(const SliceFunction& f, const ImaginaryUnit& i, const ArcFamily& arcs = {},
                          std::optional<double> r_boundary = std::nullopt);

/// Value: sup over all of S (closed form per arc). per_slice holds the sampled
/// units; extra["sampled_sup"] is the largest of them.
NormReport bmo_seminorm_global(const SliceFunction& f, const std::vector<ImaginaryUnit>& units,
                               const ArcFamily& arcs = {}, std::optional<double> r_boundary = std::nullopt);

double bmo_norm(const SliceFunction& f, const ArcFamily& arcs = {});
double bmo_norm_slice(const SliceFunction& f, const ImaginaryUnit& i, const ArcFamily& arcs = {});

/// Same machinery for a complex function on D (component side of the sandwich).
double bmo_seminorm_complex(const ComplexComponent& c, const ArcFamily& arcs = {}, double radius = 1.0);

/// Truncations of an infinite series, used for finite/infinite trends.
using TruncationLadder = std::function<SliceFunction(int)>;

struct BmoVerdict {
  bool finite = true;
  std::vector<double> ladder;  // squared seminorm along the depth or truncation ladder
  double value = 0.0;          // seminorm at the exact boundary
};

/// Depth ladder k = 0..K at the boundary radius, or truncation levels L = 4..L_max.
BmoVerdict bmo_verdict(const SliceFunction& f, const ArcFamily& arcs = {},
                       const TruncationLadder& truncations = {}, int l_max = 0);

/// Max squared oscillation over arcs with |I| <= t, sup over S (unit empty) or on a slice.
double vmo_modulus(const SliceFunction& f, std::optional<ImaginaryUnit> i, double t,
                   const ArcFamily& arcs = {});

inline constexpr double kVmoThreshold = 1e-3;

struct VmoVerdict {
  bool vmo = false;
  std::vector<double> modulus;  // cumulative modulus at levels 0..K (squared oscillation)
};
VmoVerdict vmo_verdict(const SliceFunction& f, const ArcFamily& arcs = {});

// ---- Moebius-invariant seminorm --------------------------------------------

/// 0, six points at |a| = 0.3, twelve at 0.6, eighteen at 0.85 (37 points).
std::vector<Complex> default_a_grid();

double star_seminorm(const SliceFunction& f, const ImaginaryUnit& i, const std::vector<Complex>& a_grid,
                     const NormConfig& cfg = {});

// ---- Bloch ------------------------------------------------------------------

/// Values use the (1 - |s|^2) weight; extra["value_printed_weight"] uses (1 - |s|)^2.
/// ladder holds the little-Bloch modulus per rung r_m, m = 0..ladder_depth.
NormReport bloch_norm(const SliceFunction& f, const std::vector<ImaginaryUnit>& units,
                      const NormConfig& cfg = {});

struct BlochVerdict {
  bool bloch = true;
  bool little_bloch = false;
};
BlochVerdict bloch_verdict(const NormReport& r);

// ---- Dirichlet and pairing --------------------------------------------------

struct InnerProduct {
  Quaternion quadrature;
  std::optional<Quaternion> coefficients;
  bool low_confidence = false;
};

InnerProduct dirichlet_inner(const SliceFunction& f, const SliceFunction& g, const ImaginaryUnit& i,
                             const NormConfig& cfg = {});
/// Dirichlet integral trend; throws DivergentIntegral on growth.
double dirichlet_energy(const SliceFunction& f, const ImaginaryUnit& i, const NormConfig& cfg = {});

InnerProduct dual_pairing(const SliceFunction& f, const SliceFunction& g, const ImaginaryUnit& i,
                          const NormConfig& cfg = {});

// ---- Sufficient conditions ---------------------------------------------------

enum class MajorantVerdict { Met, Inconclusive };

struct MajorantResult {
  MajorantVerdict verdict = MajorantVerdict::Inconclusive;
  bool majorized = false;
  bool integral_finite = false;
  std::vector<double> partial_integrals;
};

MajorantResult majorant_criterion(const SliceFunction& f, const std::function<double(double)>& phi,
                                  const std::vector<ImaginaryUnit>& units, const NormConfig& cfg = {});

struct GapClassification {
  bool in_h2 = false;
  bool in_bmo = false;
  bool in_vmo = false;
  std::vector<double> partial_sums;  // sum_{l<=L} |a_l|^2
  double decay_exponent = 0.0;       // p in |a_l|^2 ~ l^{-p} over the tail (inf for geometric)
};

GapClassification gap_series_check(const std::vector<long long>& exponents,
                                   const std::vector<Quaternion>& coeffs, double alpha);

}  // namespace qsh
