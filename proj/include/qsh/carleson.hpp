#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsh/norms.hpp"
#include "qsh/quaternion.hpp"
#include "qsh/slice_function.hpp"

namespace qsh {

/// S_i(theta0, h) = {r e^{i theta} : |theta - theta0| <= h, 1 - h <= r <= 1}, closed.
/// Angular distance is taken on the circle.
struct CarlesonBox {
  double theta0 = 0.0;
  double h = 0.5;
};

/// Slack on the closed box conditions (absorbs the rounding of 1 - 1/n against (n-1)/n).
inline constexpr double kBoxSlack = 1e-13;

bool in_slice_box(Complex z, const CarlesonBox& box);

struct PlaneAtom {
  Complex z;
  double mass = 0.0;
};

/// Finite measure on one slice disc: atoms plus an optional density against lambda2.
struct SliceMeasure {
  std::vector<PlaneAtom> atoms;
  std::function<double(Complex)> density;
  std::vector<double> singular_angles;  // boundary angles where the density peaks
};

double slice_box_measure(const SliceMeasure& m, const CarlesonBox& box);

/// rho(s) s1^2 on D_i^+ written as a(z) + <i, b(z)>.
struct AffineWeight {
  double a = 0.0;
  std::array<double, 3> b{};

  double on(const ImaginaryUnit& i) const {
    return a + i.q().x1 * b[0] + i.q().x2 * b[1] + i.q().x3 * b[2];
  }
  AffineWeight& operator+=(const AffineWeight& o) {
    a += o.a;
    for (int k = 0; k < 3; ++k) b[static_cast<std::size_t>(k)] += o.b[static_cast<std::size_t>(k)];
    return *this;
  }
  AffineWeight operator*(double s) const {
    AffineWeight w = *this;
    w.a *= s;
    for (double& x : w.b) x *= s;
    return w;
  }
};
using SliceWeight = std::function<AffineWeight(Complex)>;

enum class MeasureKind { Lambda4, MuF, NuF, NaiveMuF, NaiveNuF, NaiveMuFRemark };
std::string to_string(MeasureKind k);
MeasureKind measure_kind_from(const std::string& name);

/// Ingredients for the closed-form box integrals of a series density.
struct SeriesDensity {
  MeasureKind kind = MeasureKind::Lambda4;
  std::vector<SeriesTerm> dterms;  // coefficients of the slice derivative
};

struct RealAtom {
  double x = 0.0;
  double mass = 0.0;
};

struct UnitAtoms {
  ImaginaryUnit unit;
  double nu_mass = 0.0;            // nu({i})
  std::vector<PlaneAtom> atoms;    // raw masses, points in the closed upper half of D_i
};

struct CarlesonConfig {
  int theta_points = 256;       // symmetric grid on [0, pi]
  int h_min_exp = 14;           // rungs 2^0 .. 2^{-h_min_exp}
  int panel_nodes = 10;
  int grading_levels = 16;
  int mass_ladder_depth = 14;
  double real_tol = 0.0;        // a point is real when |Im| <= real_tol
};

/// (mu_R, nu, mu_i^+). Densities are stored as rho s1^2 on D_i^+; nu = C(i) sigma.
class SliceDecomposedMeasure {
public:
  SliceDecomposedMeasure();

  static SliceDecomposedMeasure zero();
  static SliceDecomposedMeasure from_atoms(const std::vector<std::pair<Quaternion, double>>& atoms,
                                           const CarlesonConfig& cfg = {});
  static SliceDecomposedMeasure from_parts(std::vector<RealAtom> mu_r, std::vector<UnitAtoms> slices,
                                           std::string name = "point_masses");
  static SliceDecomposedMeasure from_weight(SliceWeight w, std::vector<double> singular_angles,
                                            std::optional<SeriesDensity> series, std::string name,
                                            const CarlesonConfig& cfg = {});

  bool is_density() const;
  const std::string& name() const;
  const std::vector<RealAtom>& mu_r() const;
  const std::vector<UnitAtoms>& slices() const;
  const SliceWeight& weight() const;
  const std::optional<SeriesDensity>& series() const;
  const std::vector<double>& singular_angles() const;  // folded to [0, pi]

  /// C(i) for densities; nu({i}) for atoms.
  double c_of(const ImaginaryUnit& i) const;
  AffineWeight total_weight() const;
  double nu_total() const;
  double mu_r_total() const;
  bool zero_slice(const ImaginaryUnit& i) const;

  /// mu_i^+ as a measure on D_i (default delta at i/2 when nu vanishes at i).
  SliceMeasure mu_plus(const ImaginaryUnit& i) const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

private:
  explicit SliceDecomposedMeasure(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

SliceDecomposedMeasure lambda4_measure();
SliceDecomposedMeasure decompose_density(SliceWeight w, std::vector<double> singular_angles = {},
                                         std::string name = "density", const CarlesonConfig& cfg = {});
SliceDecomposedMeasure function_measure(MeasureKind kind, const SliceFunction& f, const CarlesonConfig& cfg = {});

/// Weight of a function measure at z on the slice i, computed from f on that slice.
double measure_weight_on(MeasureKind kind, const SliceFunction& f, const ImaginaryUnit& i, Complex z);

/// mu = sum_{n>=1} n^{-3/2} delta_{a_n}, a_n = ((n-1)/n) i_n; a_1 = 0 goes to mu_R.
struct PointMassExample {
  SliceDecomposedMeasure measure;
  int n_max = 0;
  long double tail_lower = 0.0L;  // bounds for sum_{k > n_max} k^{-3/2}
  long double tail_upper = 0.0L;
};
ImaginaryUnit example_unit(long long n);
PointMassExample pointmass_example(int n_max = 100000);
/// n * sum_{k >= n} k^{-3/2} from the stored masses plus the lower tail bound.
long double example_ratio(const PointMassExample& ex, int n);

/// Box measure. Symmetric: mu(S(theta0, h)); otherwise mu_i^+(S_i(theta0, h)) for the unit.
double box_measure(const SliceDecomposedMeasure& m, const CarlesonBox& box, bool symmetric,
                   const std::optional<ImaginaryUnit>& unit = std::nullopt, const CarlesonConfig& cfg = {});
double mu_r_box(const SliceDecomposedMeasure& m, const CarlesonBox& box);

/// Integral of F over D against mu through the decomposition.
double decomposed_integral(const SliceDecomposedMeasure& m, const std::function<double(const Quaternion&)>& F,
                           const SphereRule& sphere = {24, 48}, const DiskRule& half_disk = {48, 96});

struct CarlesonGrid {
  std::vector<double> theta;        // symmetric boxes, [0, pi]
  std::vector<double> slice_theta;  // slice boxes, [0, 2 pi); contains theta
  std::vector<double> h;            // descending
  std::vector<double> anchors;      // each rung adds anchor + c h, c in {0, +-1/2, +-1}
};
/// theta0 values used on rung k (symmetric: folded into [0, pi]; slice: also mirrored).
std::vector<double> rung_theta(const CarlesonGrid& g, std::size_t k, bool symmetric);
CarlesonGrid default_grid(const CarlesonConfig& cfg = {}, const std::vector<double>& theta_hints = {},
                          const std::vector<double>& h_hints = {});
CarlesonGrid grid_for(const SliceDecomposedMeasure& m, const CarlesonConfig& cfg = {});

struct CarlesonReport {
  std::vector<std::vector<double>> theta;  // per rung
  std::vector<double> h;
  std::vector<std::vector<double>> ratio;  // [h][theta]
  std::vector<double> profile;             // sup over theta per rung
  double constant = 0.0;
  bool carleson = true;
  bool vanishing = false;
  bool h_capped = true;  // rungs stop at h = 1
};

/// Frozen verdict rules on a profile ordered by decreasing h.
bool profile_unbounded(const std::vector<double>& profile);
bool profile_vanishing(const std::vector<double>& profile);

CarlesonReport carleson_constant(const SliceDecomposedMeasure& m, const CarlesonGrid& grid,
                                 const CarlesonConfig& cfg = {});
CarlesonReport carleson_constant(const SliceMeasure& m, const std::vector<double>& theta,
                                 const std::vector<double>& h, const CarlesonConfig& cfg = {});

struct UnitCarleson {
  ImaginaryUnit unit;
  double constant = 0.0;
  bool carleson = true;
  bool vanishing = false;
  std::vector<double> profile;
};

struct SliceCarlesonReport {
  std::vector<UnitCarleson> units;
  UnitCarleson mu_r;                 // constant of mu_R on slice boxes
  double uniform_constant = 0.0;
  std::vector<double> unit_profile;  // running max over the first 2^k units
  std::vector<double> uniform_h_profile;
  bool slice_carleson = true;
  bool vanishing = false;
};

SliceCarlesonReport slice_carleson_constant(const SliceDecomposedMeasure& m, const CarlesonGrid& grid,
                                            const std::vector<ImaginaryUnit>& units,
                                            const CarlesonConfig& cfg = {});

/// Density against lambda4 at q of the measure of kind built from f; df is the slice derivative of f.
double function_density(MeasureKind kind, const SliceFunction& df, const Quaternion& q);

/// Direct product rule on the unit ball of H: x0 = sin t, t in [-pi/2, pi/2] split at 0, then
/// the imaginary part in spherical coordinates (radius, cos, azimuth). One weight, several integrands.
std::vector<double> ball_integrals(const std::function<double(const Quaternion&)>& weight,
                                   const std::vector<std::function<double(const Quaternion&)>>& integrands,
                                   int n = 40);

/// Units closed under i -> -i (axes, a spiral and the antipodes).
std::vector<ImaginaryUnit> symmetric_units(int n_spiral = 10);

/// Carleson verdict for function measures of truncations L = 4..l_max.
struct TruncatedCarleson {
  std::vector<double> constants;
  bool carleson = true;
};
TruncatedCarleson carleson_truncation_verdict(MeasureKind kind, const TruncationLadder& truncations, int l_max,
                                              const CarlesonConfig& cfg = {});

}  // namespace qsh
