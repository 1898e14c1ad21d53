#include "qsh/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "qsh/parallel.hpp"

namespace qsh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroSlice = 1e-14;

double wrap(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

double circ_dist(double a, double b) {
  const double d = std::abs(wrap(a) - wrap(b));
  return std::min(d, kTwoPi - d);
}

double fold(double t) {
  t = wrap(t);
  return t > kPi ? kTwoPi - t : t;
}

using Arc = std::pair<double, double>;

/// The window |theta - theta0| <= h on the circle, as arcs inside [0, 2pi].
std::vector<Arc> window_arcs(double theta0, double h) {
  if (h >= kPi) return {{0.0, kTwoPi}};
  const double c = wrap(theta0);
  const double a = c - h, b = c + h;
  if (a < 0.0) return {{0.0, b}, {a + kTwoPi, kTwoPi}};
  if (b > kTwoPi) return {{0.0, b - kTwoPi}, {a, kTwoPi}};
  return {{a, b}};
}

std::vector<Arc> merge_arcs(std::vector<Arc> arcs) {
  std::sort(arcs.begin(), arcs.end());
  std::vector<Arc> out;
  for (const auto& a : arcs) {
    if (!(a.second > a.first)) continue;
    if (!out.empty() && a.first <= out.back().second) out.back().second = std::max(out.back().second, a.second);
    else out.push_back(a);
  }
  return out;
}

/// Trace of the slice box on the closed upper half: theta in [0, pi].
std::vector<Arc> upper_arcs(double theta0, double h) {
  std::vector<Arc> out;
  for (const auto& [a, b] : window_arcs(theta0, h)) {
    const double lo = std::max(a, 0.0), hi = std::min(b, kPi);
    if (hi > lo) out.emplace_back(lo, hi);
  }
  return merge_arcs(out);
}

double box_r_lo(double h) { return std::max(0.0, 1.0 - h); }

// ---- radial and angular pieces of the series path ---------------------------

bool has_sin2(MeasureKind k) {
  return k == MeasureKind::Lambda4 || k == MeasureKind::NaiveMuF || k == MeasureKind::NaiveNuF ||
         k == MeasureKind::NaiveMuFRemark;
}

bool log_weight(MeasureKind k) { return k == MeasureKind::NuF || k == MeasureKind::NaiveNuF; }

double radial_weight(MeasureKind k, double r) {
  switch (k) {
    case MeasureKind::Lambda4: return r * r;
    case MeasureKind::MuF: return 1.0 - r * r;
    case MeasureKind::NuF: return -std::log(r);
    case MeasureKind::NaiveMuF: return (1.0 - r) * (1.0 - r) * r * r;
    case MeasureKind::NaiveNuF: return -2.0 * std::log(r) * r * r;
    case MeasureKind::NaiveMuFRemark: return (1.0 - r * r) * r * r;
  }
  return 0.0;
}

/// w(r, theta) = radial_weight * (sin^2 theta for the s1^2 kinds).
double full_weight(MeasureKind k, Complex z) {
  const double r = std::abs(z);
  if (r == 0.0) return log_weight(k) ? 0.0 : radial_weight(k, 0.0);
  double w = radial_weight(k, r);
  if (has_sin2(k)) {
    const double s = z.imag() / r;
    w *= s * s;
  }
  return w;
}

/// int_{r1}^{r2} w(r) r^{k+1} dr.
double radial_moment(MeasureKind kind, int k, double r1, double r2) {
  if (!(r2 > r1)) return 0.0;
  // r^{k+1} is below e^{-45} r2^{k+1} under r2 - 45/(k+1)
  const double lo = std::max(r1, r2 - 45.0 / (k + 1.0));
  std::vector<double> breaks;
  if (lo == 0.0 && log_weight(kind)) {
    breaks = graded_breaks(0.0, r2, 0.0, 30);
  } else {
    const int panels = std::max(1, static_cast<int>(std::ceil((r2 - lo) * (k + 2.0) / 4.0)));
    for (int p = 0; p <= panels; ++p) breaks.push_back(lo + (r2 - lo) * p / panels);
  }
  const Rule1D rule = composite_gauss(breaks, 16);
  CompensatedSum s;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double r = rule.nodes[q];
    s.add(rule.weights[q] * radial_weight(kind, r) * std::pow(r, k + 1));
  }
  return s.value();
}

double int_cos(int k, const std::vector<Arc>& arcs) {
  double acc = 0.0;
  for (const auto& [a, b] : arcs) {
    if (k == 0) acc += b - a;
    else acc += 2.0 * std::cos(k * 0.5 * (a + b)) * std::sin(k * 0.5 * (b - a)) / k;
  }
  return acc;
}

double int_sin(int k, const std::vector<Arc>& arcs) {
  if (k == 0) return 0.0;
  double acc = 0.0;
  for (const auto& [a, b] : arcs) acc += 2.0 * std::sin(k * 0.5 * (a + b)) * std::sin(k * 0.5 * (b - a)) / k;
  return acc;
}

double ang_cos(int d, bool sin2, const std::vector<Arc>& arcs) {
  if (!sin2) return int_cos(d, arcs);
  return 0.5 * int_cos(d, arcs) - 0.25 * int_cos(d + 2, arcs) - 0.25 * int_cos(d - 2, arcs);
}

double ang_sin(int k, bool sin2, const std::vector<Arc>& arcs) {
  if (!sin2) return int_sin(k, arcs);
  return 0.5 * int_sin(k, arcs) - 0.25 * int_sin(k + 2, arcs) - 0.25 * int_sin(k - 2, arcs);
}

struct SeriesTables {
  MeasureKind kind;
  std::vector<int> n;
  std::vector<std::vector<double>> m;                 // <b_n, b_m>
  std::array<std::vector<std::vector<double>>, 3> x;  // <b_n, e_k b_m>
};

SeriesTables make_tables(const SeriesDensity& s) {
  SeriesTables t;
  t.kind = s.kind;
  const std::size_t T = s.dterms.size();
  t.m.assign(T, std::vector<double>(T));
  for (auto& v : t.x) v.assign(T, std::vector<double>(T));
  const Quaternion e[3] = {Quaternion::e1(), Quaternion::e2(), Quaternion::e3()};
  for (std::size_t p = 0; p < T; ++p) {
    t.n.push_back(s.dterms[p].n);
    for (std::size_t q = 0; q < T; ++q) {
      t.m[p][q] = dot(s.dterms[p].a, s.dterms[q].a);
      for (int k = 0; k < 3; ++k) t.x[static_cast<std::size_t>(k)][p][q] = dot(s.dterms[p].a, e[k] * s.dterms[q].a);
    }
  }
  return t;
}

AffineWeight series_region(const SeriesTables& t, double r1, double r2, const std::vector<Arc>& arcs,
                           std::map<int, double>& moments) {
  const bool s2 = has_sin2(t.kind);
  auto R = [&](int k) {
    auto it = moments.find(k);
    if (it != moments.end()) return it->second;
    const double v = radial_moment(t.kind, k, r1, r2);
    moments.emplace(k, v);
    return v;
  };
  AffineWeight out;
  CompensatedSum a;
  std::array<CompensatedSum, 3> b;
  const std::size_t T = t.n.size();
  for (std::size_t p = 0; p < T; ++p) {
    for (std::size_t q = 0; q < T; ++q) {
      const int n = t.n[p], m = t.n[q];
      const double rr = R(n + m);
      if (rr == 0.0) continue;
      a.add(t.m[p][q] * rr * ang_cos(n - m, s2, arcs));
      // cos(n t) sin(m t) = (sin((n+m)t) - sin((n-m)t)) / 2
      const double cs = 0.5 * (ang_sin(n + m, s2, arcs) - ang_sin(n - m, s2, arcs));
      for (std::size_t k = 0; k < 3; ++k) b[k].add(2.0 * t.x[k][p][q] * rr * cs);
    }
  }
  out.a = a.value();
  for (std::size_t k = 0; k < 3; ++k) out.b[k] = b[k].value();
  return out;
}

// ---- quadrature path ---------------------------------------------------------

double dist_to_arc(double s, const Arc& arc) {
  if (s >= arc.first && s <= arc.second) return 0.0;
  return std::min(circ_dist(s, arc.first), circ_dist(s, arc.second));
}

AffineWeight region_quadrature(const SliceWeight& w, double r1, double r2, const std::vector<Arc>& arcs,
                               const std::vector<double>& singular, const CarlesonConfig& cfg) {
  AffineWeight acc;
  if (!(r2 > r1)) return acc;
  const int np = cfg.panel_nodes;
  const bool at_edge = r2 >= 1.0 - 1e-15;
  for (const auto& arc : arcs) {
    const double width = arc.second - arc.first;
    if (!(width > 0.0)) continue;
    const double scale = std::min(width, r2 - r1);
    std::vector<double> tb{arc.first, arc.second};
    int r_levels = 1;
    for (double s : singular) {
      const double d = dist_to_arc(s, arc);
      if (d < 0.25 * scale) {
        const double c = d == 0.0 ? s : (circ_dist(s, arc.first) < circ_dist(s, arc.second) ? arc.first : arc.second);
        const auto g = graded_breaks_around(arc.first, arc.second, c, cfg.grading_levels);
        tb.insert(tb.end(), g.begin(), g.end());
        r_levels = std::max(r_levels, cfg.grading_levels);
      } else if (d < 2.0 * scale) {
        for (int p = 1; p < 4; ++p) tb.push_back(arc.first + width * p / 4.0);
        r_levels = std::max(r_levels, 6);
      }
    }
    if (tb.size() == 2) tb.push_back(0.5 * (arc.first + arc.second));
    std::sort(tb.begin(), tb.end());
    tb.erase(std::unique(tb.begin(), tb.end()), tb.end());
    std::vector<double> rb;
    if (at_edge && !singular.empty() && r_levels > 1) rb = graded_breaks(r1, r2, r2, r_levels);
    else rb = {r1, 0.5 * (r1 + r2), r2};
    const Rule1D rt = composite_gauss(tb, np);
    const Rule1D rr = composite_gauss(rb, np);
    for (std::size_t a = 0; a < rt.nodes.size(); ++a) {
      AffineWeight ring;
      for (std::size_t q = 0; q < rr.nodes.size(); ++q) {
        const double r = rr.nodes[q];
        ring += w(std::polar(r, rt.nodes[a])) * (rr.weights[q] * r);
      }
      acc += ring * rt.weights[a];
    }
  }
  return acc;
}

/// Box weights for all arcs of one rung from shared theta panels. Each panel
/// integrates F(theta) = int_{1-h}^1 w(r e^{i theta}) r dr, graded in r by the
/// distance of theta to the nearest singular angle.
std::vector<AffineWeight> kernel_boxes(const SliceWeight& w, const std::vector<double>& singular, double h,
                                       const std::vector<std::vector<Arc>>& box_arcs, const CarlesonConfig& cfg) {
  const double r1 = box_r_lo(h);
  std::vector<double> pts;
  std::vector<Arc> cover;
  for (const auto& arcs : box_arcs)
    for (const auto& a : arcs) {
      pts.push_back(a.first);
      pts.push_back(a.second);
      cover.push_back(a);
    }
  cover = merge_arcs(cover);
  const int levels = cfg.grading_levels + 8;
  for (double s : singular)
    for (int l = 0; l <= levels; ++l)
      for (double t : {s - h * std::ldexp(1.0, -l), s + h * std::ldexp(1.0, -l)})
        if (t > 0.0 && t < kPi) pts.push_back(t);
  for (double s : singular) pts.push_back(s);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t np = pts.size() < 2 ? 0 : pts.size() - 1;
  auto covered = [&](double t) {
    auto it = std::upper_bound(cover.begin(), cover.end(), t, [](double x, const Arc& a) { return x < a.first; });
    return it != cover.begin() && t <= std::prev(it)->second;
  };
  std::map<int, Rule1D> radial;
  const int max_levels = 44;
  for (int L = 0; L <= max_levels; ++L)
    radial[L] = composite_gauss(L == 0 ? std::vector<double>{r1, 0.5 * (r1 + 1.0), 1.0} : graded_breaks(r1, 1.0, 1.0, L),
                                cfg.panel_nodes);
  const Rule1D unit = composite_gauss({-1.0, 1.0}, cfg.panel_nodes);
  std::vector<AffineWeight> panel(np);
  parallel_for(static_cast<int>(np), [&](int k) {
    const double a = pts[static_cast<std::size_t>(k)], b = pts[static_cast<std::size_t>(k) + 1];
    if (!covered(0.5 * (a + b))) return;
    AffineWeight acc;
    for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * unit.nodes[q];
      int L = 0;
      if (!singular.empty()) {
        double d = kPi;
        for (double s : singular) d = std::min(d, std::abs(t - s));
        L = std::clamp(static_cast<int>(std::ceil(std::log2(h / d))) + 4, 2, max_levels);
      }
      const Rule1D& rr = radial.at(L);
      AffineWeight ring;
      for (std::size_t j = 0; j < rr.nodes.size(); ++j) ring += w(std::polar(rr.nodes[j], t)) * (rr.weights[j] * rr.nodes[j]);
      acc += ring * (0.5 * (b - a) * unit.weights[q]);
    }
    panel[static_cast<std::size_t>(k)] = acc;
  });
  std::vector<AffineWeight> out(box_arcs.size());
  for (std::size_t k = 0; k < box_arcs.size(); ++k)
    for (const auto& [a, b] : box_arcs[k]) {
      const auto lo = static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), a) - pts.begin());
      const auto hi = static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), b) - pts.begin());
      for (std::size_t p = lo; p < hi; ++p) out[k] += panel[p];
    }
  return out;
}

}  // namespace

bool in_slice_box(Complex z, const CarlesonBox& box) {
  const double r = std::abs(z);
  if (r > 1.0 + kBoxSlack) return false;
  if (1.0 - r > box.h * (1.0 + kBoxSlack) + kBoxSlack) return false;
  if (r == 0.0) return true;  // every angle
  return circ_dist(std::arg(z), box.theta0) <= box.h * (1.0 + kBoxSlack) + kBoxSlack;
}

double slice_box_measure(const SliceMeasure& m, const CarlesonBox& box) {
  long double acc = 0.0L;
  for (const auto& a : m.atoms)
    if (in_slice_box(a.z, box)) acc += a.mass;
  if (m.density) {
    const SliceWeight w = [&](Complex z) { return AffineWeight{m.density(z), {}}; };
    std::vector<double> sing;
    for (double s : m.singular_angles) sing.push_back(wrap(s));
    acc += region_quadrature(w, box_r_lo(box.h), 1.0, merge_arcs(window_arcs(box.theta0, box.h)), sing, {}).a;
  }
  return static_cast<double>(acc);
}

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::Lambda4: return "lambda4";
    case MeasureKind::MuF: return "mu_f";
    case MeasureKind::NuF: return "nu_f";
    case MeasureKind::NaiveMuF: return "naive_mu_f";
    case MeasureKind::NaiveNuF: return "naive_nu_f";
    case MeasureKind::NaiveMuFRemark: return "naive_mu_f_remark";
  }
  return "?";
}

MeasureKind measure_kind_from(const std::string& name) {
  for (auto k : {MeasureKind::Lambda4, MeasureKind::MuF, MeasureKind::NuF, MeasureKind::NaiveMuF,
                 MeasureKind::NaiveNuF, MeasureKind::NaiveMuFRemark})
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::InvalidInput, "unknown density name '" + name + "'");
}

// ---- the measure -------------------------------------------------------------

struct AngleBucket {
  double theta = 0.0;
  std::vector<double> radii;          // ascending
  std::vector<long double> suffix;    // suffix[k] = sum of masses with index >= k
};

struct SliceDecomposedMeasure::Impl {
  std::string name = "zero";
  bool density = false;
  // atoms
  std::vector<RealAtom> mu_r;
  std::vector<UnitAtoms> slices;
  std::map<std::tuple<double, double, double>, std::size_t> by_unit;
  std::vector<AngleBucket> buckets;  // all atoms, upper-half angles, sorted by theta
  long double origin_mass = 0.0L;
  long double nu_total = 0.0L;
  // density
  SliceWeight weight;
  std::optional<SeriesDensity> series;
  std::optional<SeriesTables> tables;
  std::vector<double> singular;
  AffineWeight total;
};

namespace {

std::tuple<double, double, double> key(const ImaginaryUnit& i) { return {i.q().x1, i.q().x2, i.q().x3}; }

/// Slice index of a unit; tolerant to rounding in units recovered from quaternions.
std::ptrdiff_t find_slice(const SliceDecomposedMeasure::Impl& m, const ImaginaryUnit& i) {
  if (const auto it = m.by_unit.find(key(i)); it != m.by_unit.end()) return static_cast<std::ptrdiff_t>(it->second);
  constexpr double tol = 1e-12;
  const auto& q = i.q();
  for (auto it = m.by_unit.lower_bound({q.x1 - tol, -2.0, -2.0}); it != m.by_unit.end() && std::get<0>(it->first) <= q.x1 + tol; ++it)
    if (std::abs(std::get<1>(it->first) - q.x2) <= tol && std::abs(std::get<2>(it->first) - q.x3) <= tol)
      return static_cast<std::ptrdiff_t>(it->second);
  return -1;
}

void index_atoms(SliceDecomposedMeasure::Impl& m) {
  std::map<double, std::vector<std::pair<double, double>>> groups;
  m.origin_mass = 0.0L;
  m.nu_total = 0.0L;
  for (const auto& a : m.mu_r) {
    if (a.x == 0.0) m.origin_mass += a.mass;
    else groups[a.x > 0.0 ? 0.0 : kPi].emplace_back(std::abs(a.x), a.mass);
  }
  m.by_unit.clear();
  for (std::size_t s = 0; s < m.slices.size(); ++s) {
    m.by_unit[key(m.slices[s].unit)] = s;
    m.nu_total += m.slices[s].nu_mass;
    for (const auto& a : m.slices[s].atoms) groups[std::arg(a.z)].emplace_back(std::abs(a.z), a.mass);
  }
  m.buckets.clear();
  for (auto& [theta, list] : groups) {
    std::sort(list.begin(), list.end());
    AngleBucket b;
    b.theta = theta;
    b.suffix.assign(list.size() + 1, 0.0L);
    for (const auto& [r, mass] : list) b.radii.push_back(r);
    // compensated suffix sums from the small masses up
    long double s = 0.0L, c = 0.0L;
    for (std::size_t k = list.size(); k-- > 0;) {
      const long double y = static_cast<long double>(list[k].second) - c;
      const long double t = s + y;
      c = (t - s) - y;
      s = t;
      b.suffix[k] = s;
    }
    m.buckets.push_back(std::move(b));
  }
}

long double bucket_query(const SliceDecomposedMeasure::Impl& m, const std::vector<Arc>& arcs, double h) {
  const double hs = h * (1.0 + kBoxSlack) + kBoxSlack;
  long double acc = 1.0 - h <= kBoxSlack ? m.origin_mass : 0.0L;
  const double r_min = 1.0 - hs;
  for (const auto& [a, b] : arcs) {
    auto it = std::lower_bound(m.buckets.begin(), m.buckets.end(), a - kBoxSlack,
                               [](const AngleBucket& x, double t) { return x.theta < t; });
    for (; it != m.buckets.end() && it->theta <= b + kBoxSlack; ++it) {
      const auto pos = std::lower_bound(it->radii.begin(), it->radii.end(), r_min);
      acc += it->suffix[static_cast<std::size_t>(pos - it->radii.begin())];
    }
  }
  return acc;
}

}  // namespace

SliceDecomposedMeasure::SliceDecomposedMeasure() : impl_(std::make_shared<Impl>()) {}
SliceDecomposedMeasure::SliceDecomposedMeasure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

SliceDecomposedMeasure SliceDecomposedMeasure::zero() { return SliceDecomposedMeasure(); }

SliceDecomposedMeasure SliceDecomposedMeasure::from_parts(std::vector<RealAtom> mu_r, std::vector<UnitAtoms> slices,
                                                          std::string name) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  for (const auto& a : mu_r) {
    if (!(std::abs(a.x) < 1.0) || a.mass < 0.0) throw Error(ErrorCode::InvalidInput, "real atom outside (-1,1)");
  }
  for (const auto& s : slices)
    for (const auto& a : s.atoms)
      if (!(std::abs(a.z) < 1.0) || a.z.imag() < 0.0 || a.mass < 0.0)
        throw Error(ErrorCode::InvalidInput, "slice atom outside the upper half disc");
  impl->mu_r = std::move(mu_r);
  impl->slices = std::move(slices);
  index_atoms(*impl);
  return SliceDecomposedMeasure(impl);
}

SliceDecomposedMeasure SliceDecomposedMeasure::from_atoms(const std::vector<std::pair<Quaternion, double>>& atoms,
                                                          const CarlesonConfig& cfg) {
  std::vector<RealAtom> mu_r;
  std::map<std::tuple<double, double, double>, UnitAtoms> units;
  for (const auto& [q, mass] : atoms) {
    if (!(q.norm() < 1.0)) throw Error(ErrorCode::InvalidInput, "atom outside the open unit ball");
    if (mass < 0.0) throw Error(ErrorCode::InvalidInput, "negative atom mass");
    const SliceCoordinates sc = to_slice(q);
    if (sc.x1 <= cfg.real_tol) {
      mu_r.push_back({q.w, mass});
      continue;
    }
    auto& u = units[key(sc.i)];
    u.unit = sc.i;
    u.nu_mass += mass;
    u.atoms.push_back({Complex(sc.x0, sc.x1), mass});
  }
  std::vector<UnitAtoms> slices;
  for (auto& [k, u] : units) slices.push_back(std::move(u));
  return from_parts(std::move(mu_r), std::move(slices));
}

SliceDecomposedMeasure SliceDecomposedMeasure::from_weight(SliceWeight w, std::vector<double> singular,
                                                           std::optional<SeriesDensity> series, std::string name,
                                                           const CarlesonConfig& cfg) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->density = true;
  impl->weight = std::move(w);
  for (double& s : singular) s = fold(s);
  std::sort(singular.begin(), singular.end());
  singular.erase(std::unique(singular.begin(), singular.end()), singular.end());
  impl->singular = singular;
  impl->series = std::move(series);
  const std::vector<Arc> half{{0.0, kPi}};
  if (impl->series) {
    impl->tables = make_tables(*impl->series);
    std::map<int, double> mom;
    impl->total = series_region(*impl->tables, 0.0, 1.0, half, mom);
  } else {
    // mass ladder over r <= 1 - 2^{-m}, then the last ring
    std::vector<double> ladder;
    AffineWeight acc;
    double r_prev = 0.0;
    for (int m = 1; m <= cfg.mass_ladder_depth; ++m) {
      const double r = ladder_radius(m);
      CarlesonConfig ring_cfg = cfg;
      ring_cfg.grading_levels = std::min(cfg.grading_levels + m, 40);
      AffineWeight ring = region_quadrature(impl->weight, r_prev, r, half, impl->singular, ring_cfg);
      acc += ring;
      ladder.push_back(acc.a);
      r_prev = r;
    }
    if (profile_unbounded(ladder))
      throw Error(ErrorCode::DivergentIntegral, "C(i) does not stabilize for " + impl->name);
    CarlesonConfig last = cfg;
    last.grading_levels = 40;
    acc += region_quadrature(impl->weight, r_prev, 1.0, half, impl->singular, last);
    impl->total = acc;
  }
  return SliceDecomposedMeasure(impl);
}

bool SliceDecomposedMeasure::is_density() const { return impl_->density; }
const std::string& SliceDecomposedMeasure::name() const { return impl_->name; }
const std::vector<RealAtom>& SliceDecomposedMeasure::mu_r() const { return impl_->mu_r; }
const std::vector<UnitAtoms>& SliceDecomposedMeasure::slices() const { return impl_->slices; }
const SliceWeight& SliceDecomposedMeasure::weight() const { return impl_->weight; }
const std::optional<SeriesDensity>& SliceDecomposedMeasure::series() const { return impl_->series; }
const std::vector<double>& SliceDecomposedMeasure::singular_angles() const { return impl_->singular; }
AffineWeight SliceDecomposedMeasure::total_weight() const { return impl_->total; }

double SliceDecomposedMeasure::c_of(const ImaginaryUnit& i) const {
  if (impl_->density) return impl_->total.on(i);
  const auto k = find_slice(*impl_, i);
  return k < 0 ? 0.0 : impl_->slices[static_cast<std::size_t>(k)].nu_mass;
}

double SliceDecomposedMeasure::nu_total() const {
  if (impl_->density) return 4.0 * kPi * impl_->total.a;
  return static_cast<double>(impl_->nu_total);
}

double SliceDecomposedMeasure::mu_r_total() const {
  long double s = 0.0L;
  for (const auto& a : impl_->mu_r) s += a.mass;
  return static_cast<double>(s);
}

bool SliceDecomposedMeasure::zero_slice(const ImaginaryUnit& i) const { return c_of(i) < kZeroSlice; }

SliceMeasure SliceDecomposedMeasure::mu_plus(const ImaginaryUnit& i) const {
  SliceMeasure out;
  const double c = c_of(i);
  if (c < kZeroSlice) {
    out.atoms.push_back({Complex(0.0, 0.5), 1.0});
    return out;
  }
  if (impl_->density) {
    auto impl = impl_;
    out.density = [impl, i, c](Complex z) { return z.imag() < 0.0 ? 0.0 : impl->weight(z).on(i) / c; };
    out.singular_angles = impl_->singular;
    return out;
  }
  const auto& s = impl_->slices[static_cast<std::size_t>(find_slice(*impl_, i))];
  for (const auto& a : s.atoms) out.atoms.push_back({a.z, a.mass / c});
  return out;
}

// ---- constructors ------------------------------------------------------------

SliceDecomposedMeasure lambda4_measure() {
  SliceWeight w = [](Complex z) { return AffineWeight{z.imag() * z.imag(), {}}; };
  return SliceDecomposedMeasure::from_weight(std::move(w), {}, SeriesDensity{MeasureKind::Lambda4, {{0, 1.0}}},
                                             "lambda4");
}

SliceDecomposedMeasure decompose_density(SliceWeight w, std::vector<double> singular, std::string name,
                                         const CarlesonConfig& cfg) {
  return SliceDecomposedMeasure::from_weight(std::move(w), std::move(singular), std::nullopt, std::move(name), cfg);
}

SliceDecomposedMeasure function_measure(MeasureKind kind, const SliceFunction& f, const CarlesonConfig& cfg) {
  if (kind == MeasureKind::Lambda4) return lambda4_measure();
  if (f.boundary_radius() < 1.0)
    throw Error(ErrorCode::OutOfDomain, "function measures need f on the whole disc");
  const SliceFunction df = f.derivative();
  const std::string name = to_string(kind) + "(" + f.label() + ")";
  SliceWeight w = [df, kind](Complex z) {
    const AlphaBeta ab = alpha_beta(df, z);
    const double wz = full_weight(kind, z);
    const auto c = cross_terms(ab.alpha, ab.beta);
    return AffineWeight{wz * (ab.alpha.norm2() + ab.beta.norm2()), {2 * wz * c[0], 2 * wz * c[1], 2 * wz * c[2]}};
  };
  std::optional<SeriesDensity> series;
  std::vector<double> sing;
  if (df.is_series()) {
    series = SeriesDensity{kind, df.series().terms};
  } else {
    sing = f.singular_angles(base_unit(f));
  }
  return SliceDecomposedMeasure::from_weight(std::move(w), std::move(sing), std::move(series), name, cfg);
}

double measure_weight_on(MeasureKind kind, const SliceFunction& f, const ImaginaryUnit& i, Complex z) {
  if (kind == MeasureKind::Lambda4) return z.imag() * z.imag();
  return full_weight(kind, z) * f.derivative().on_plane(i, z).norm2();
}

ImaginaryUnit example_unit(long long n) {
  constexpr double golden = 0.6180339887498948482;
  const double c = 1.0 - 2.0 * std::fmod(n * std::numbers::sqrt2, 1.0);
  const double phi = kTwoPi * std::fmod(n * golden, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return ImaginaryUnit(s * std::cos(phi), s * std::sin(phi), c);
}

PointMassExample pointmass_example(int n_max) {
  if (n_max < 2) throw Error(ErrorCode::InvalidInput, "n_max must be at least 2");
  std::vector<RealAtom> mu_r{{0.0, 1.0}};  // n = 1: a_1 = 0
  std::vector<UnitAtoms> slices;
  slices.reserve(static_cast<std::size_t>(n_max));
  for (int n = 2; n <= n_max; ++n) {
    const double mass = static_cast<double>(std::pow(static_cast<long double>(n), -1.5L));
    slices.push_back({example_unit(n), mass, {{Complex(0.0, static_cast<double>(n - 1) / n), mass}}});
  }
  PointMassExample ex;
  ex.measure = SliceDecomposedMeasure::from_parts(std::move(mu_r), std::move(slices), "pointmass_example");
  ex.n_max = n_max;
  ex.tail_lower = 2.0L / std::sqrt(static_cast<long double>(n_max) + 1.0L);
  ex.tail_upper = 2.0L / std::sqrt(static_cast<long double>(n_max));
  return ex;
}

long double example_ratio(const PointMassExample& ex, int n) {
  const auto& m = ex.measure.impl();
  const double h = 1.0 / n;
  return static_cast<long double>(n) * (bucket_query(m, upper_arcs(kPi / 2, h), h) + ex.tail_lower);
}

// ---- boxes -------------------------------------------------------------------

double mu_r_box(const SliceDecomposedMeasure& m, const CarlesonBox& box) {
  long double acc = 0.0L;
  for (const auto& a : m.mu_r())
    if (in_slice_box(Complex(a.x, 0.0), box)) acc += a.mass;
  return static_cast<double>(acc);
}

namespace {

/// Box weights [h][theta] for a density over the upper-half traces of slice boxes.
std::vector<std::vector<AffineWeight>> density_table(const SliceDecomposedMeasure::Impl& m,
                                                     const std::vector<double>& theta, const std::vector<double>& hs,
                                                     const CarlesonConfig& cfg) {
  std::vector<std::vector<AffineWeight>> table(hs.size(), std::vector<AffineWeight>(theta.size()));
  for (std::size_t a = 0; a < hs.size(); ++a) {
    const double h = hs[a];
    std::vector<std::vector<Arc>> arcs(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) arcs[k] = upper_arcs(theta[k], h);
    if (m.tables) {
      // warm the radial moments once, the boxes share them
      std::map<int, double> moments;
      (void)series_region(*m.tables, box_r_lo(h), 1.0, upper_arcs(0.0, h), moments);
      parallel_for(static_cast<int>(theta.size()), [&](int k) {
        std::map<int, double> local = moments;
        const auto& arc = arcs[static_cast<std::size_t>(k)];
        if (!arc.empty()) table[a][static_cast<std::size_t>(k)] = series_region(*m.tables, box_r_lo(h), 1.0, arc, local);
      });
    } else {
      table[a] = kernel_boxes(m.weight, m.singular, h, arcs, cfg);
    }
  }
  return table;
}

double atoms_slice_box(const UnitAtoms& u, const CarlesonBox& box) {
  long double acc = 0.0L;
  for (const auto& a : u.atoms)
    if (in_slice_box(a.z, box)) acc += a.mass;
  return static_cast<double>(acc / u.nu_mass);
}

}  // namespace

double box_measure(const SliceDecomposedMeasure& m, const CarlesonBox& box, bool symmetric,
                   const std::optional<ImaginaryUnit>& unit, const CarlesonConfig& cfg) {
  if (!(box.h > 0.0)) throw Error(ErrorCode::InvalidInput, "box height must be positive");
  const auto& im = m.impl();
  if (symmetric) {
    const auto arcs = merge_arcs([&] {
      auto a = upper_arcs(box.theta0, box.h);
      const auto b = upper_arcs(-box.theta0, box.h);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }());
    if (!im.density) return static_cast<double>(bucket_query(im, arcs, box.h));
    return mu_r_box(m, box) + 4.0 * kPi * density_table(im, {box.theta0}, {box.h}, cfg)[0][0].a;
  }
  const ImaginaryUnit i = unit.value_or(ImaginaryUnit::e1());
  if (m.zero_slice(i)) return slice_box_measure(m.mu_plus(i), box);
  if (!im.density) return atoms_slice_box(im.slices[static_cast<std::size_t>(find_slice(im, i))], box);
  return density_table(im, {box.theta0}, {box.h}, cfg)[0][0].on(i) / m.c_of(i);
}

double decomposed_integral(const SliceDecomposedMeasure& m, const std::function<double(const Quaternion&)>& F,
                           const SphereRule& sphere, const DiskRule& half_disk) {
  CompensatedSum acc;
  for (const auto& a : m.mu_r()) acc.add(a.mass * F(Quaternion(a.x)));
  for (const auto& s : m.slices())
    for (const auto& a : s.atoms) acc.add(a.mass * F(embed(a.z, s.unit)));
  if (!m.is_density()) return acc.value();
  const auto& gr = gauss_legendre(half_disk.n_r);
  const auto& gt = gauss_legendre(half_disk.n_theta);
  const auto nodes = sphere.nodes();
  std::vector<double> parts(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), [&](int k) {
    const auto& nd = nodes[static_cast<std::size_t>(k)];
    CompensatedSum s;
    for (int a = 0; a < half_disk.n_r; ++a) {
      const double r = 0.5 * (gr.nodes[a] + 1.0);
      for (int b = 0; b < half_disk.n_theta; ++b) {
        const double t = 0.5 * kPi * (gt.nodes[b] + 1.0);
        const Complex z = std::polar(r, t);
        s.add(F(embed(z, nd.unit)) * m.weight()(z).on(nd.unit) * r * 0.5 * gr.weights[a] * 0.5 * kPi * gt.weights[b]);
      }
    }
    parts[static_cast<std::size_t>(k)] = s.value() * nd.weight;
  });
  for (double p : parts) acc.add(p);
  return acc.value();
}

// ---- grids and verdicts ------------------------------------------------------

namespace {

void sort_unique(std::vector<double>& v, bool descending) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)); }),
          v.end());
  if (descending) std::reverse(v.begin(), v.end());
}

bool is_dyadic(double h) {
  int e = 0;
  return std::frexp(h, &e) == 0.5;
}

std::vector<double> dyadic_part(const std::vector<double>& h, const std::vector<double>& profile) {
  std::vector<double> out;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (is_dyadic(h[k])) out.push_back(profile[k]);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

constexpr double kUnboundedFactor = 100.0;
constexpr double kVanishingFraction = 1e-2;

void finish_report(CarlesonReport& rep) {
  rep.profile.assign(rep.h.size(), 0.0);
  rep.constant = 0.0;
  for (std::size_t a = 0; a < rep.h.size(); ++a) {
    for (double x : rep.ratio[a]) rep.profile[a] = std::max(rep.profile[a], x);
    rep.constant = std::max(rep.constant, rep.profile[a]);
  }
  const auto dy = dyadic_part(rep.h, rep.profile);
  rep.carleson = !profile_unbounded(dy) && std::isfinite(rep.constant);
  rep.vanishing = rep.carleson && profile_vanishing(dy);
}

}  // namespace

bool profile_unbounded(const std::vector<double>& p) {
  for (double x : p)
    if (!std::isfinite(x)) return true;
  const std::size_t n = p.size();
  if (n < 4) return false;
  const double last3 = std::max({p[n - 1], p[n - 2], p[n - 3]});
  const double med = median(p);
  if (med > 0.0 && last3 > kUnboundedFactor * med) return true;
  double mx = 0.0;
  for (double x : p) mx = std::max(mx, std::abs(x));
  const double d1 = p[n - 3] - p[n - 4], d2 = p[n - 2] - p[n - 3], d3 = p[n - 1] - p[n - 2];
  const double floor = 1e-6 * mx;
  return d1 > floor && d2 > floor && d3 > floor && d3 >= d1 / kDivergenceGrowth;
}

bool profile_vanishing(const std::vector<double>& p) {
  double mx = 0.0;
  for (double x : p) mx = std::max(mx, x);
  if (mx == 0.0) return true;
  const std::size_t n = p.size();
  if (n < 3) return false;
  const bool dec = p[n - 1] < p[n - 2] && p[n - 2] < p[n - 3];
  // an exactly empty tail counts as decreasing
  const bool empty_tail = p[n - 1] == 0.0 && p[n - 2] == 0.0 && p[n - 3] == 0.0;
  return (dec || empty_tail) && p[n - 1] <= kVanishingFraction * mx;
}

CarlesonGrid default_grid(const CarlesonConfig& cfg, const std::vector<double>& theta_hints,
                          const std::vector<double>& h_hints) {
  CarlesonGrid g;
  const int n = std::max(2, cfg.theta_points);
  for (int k = 0; k < n; ++k) g.theta.push_back(kPi * k / (n - 1));
  for (double t : theta_hints) g.theta.push_back(fold(t));
  sort_unique(g.theta, false);
  g.slice_theta = g.theta;
  for (double t : g.theta)
    if (t > 0.0 && t < kPi) g.slice_theta.push_back(kTwoPi - t);
  for (double t : theta_hints) g.slice_theta.push_back(wrap(t));
  sort_unique(g.slice_theta, false);
  for (int k = 0; k <= cfg.h_min_exp; ++k) g.h.push_back(std::ldexp(1.0, -k));
  for (double h : h_hints)
    if (h > 0.0 && h <= 1.0) g.h.push_back(h);
  sort_unique(g.h, true);
  return g;
}

std::vector<double> rung_theta(const CarlesonGrid& g, std::size_t k, bool symmetric) {
  std::vector<double> out = symmetric ? g.theta : g.slice_theta;
  const double h = g.h.at(k);
  for (double a : g.anchors)
    for (double c : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const double t = fold(a + c * h);
      out.push_back(t);
      if (!symmetric && t > 0.0 && t < kPi) out.push_back(kTwoPi - t);
    }
  sort_unique(out, false);
  return out;
}

CarlesonGrid grid_for(const SliceDecomposedMeasure& m, const CarlesonConfig& cfg) {
  std::vector<double> th, hh;
  if (m.is_density()) {
    th = m.singular_angles();
  } else {
    const auto& b = m.impl().buckets;
    if (b.size() <= 64)
      for (const auto& x : b) th.push_back(x.theta);
    std::size_t atoms = m.mu_r().size();
    for (const auto& s : m.slices()) atoms += s.atoms.size();
    if (atoms <= 64) {
      for (const auto& a : m.mu_r()) hh.push_back(1.0 - std::abs(a.x));
      for (const auto& s : m.slices())
        for (const auto& a : s.atoms) hh.push_back(1.0 - std::abs(a.z));
    }
  }
  CarlesonGrid g = default_grid(cfg, th, hh);
  g.anchors = th;
  return g;
}

CarlesonReport carleson_constant(const SliceDecomposedMeasure& m, const CarlesonGrid& grid, const CarlesonConfig& cfg) {
  CarlesonReport rep;
  rep.h = grid.h;
  const auto& im = m.impl();
  for (std::size_t a = 0; a < grid.h.size(); ++a) {
    const double h = grid.h[a];
    const auto theta = rung_theta(grid, a, true);
    std::vector<double> row(theta.size());
    if (im.density) {
      const auto table = density_table(im, theta, {h}, cfg);
      for (std::size_t k = 0; k < theta.size(); ++k)
        row[k] = (mu_r_box(m, {theta[k], h}) + 4.0 * kPi * table[0][k].a) / h;
    } else {
      parallel_for(static_cast<int>(theta.size()), [&](int k) {
        row[static_cast<std::size_t>(k)] =
            box_measure(m, {theta[static_cast<std::size_t>(k)], h}, true, std::nullopt, cfg) / h;
      });
    }
    rep.theta.push_back(theta);
    rep.ratio.push_back(std::move(row));
  }
  finish_report(rep);
  return rep;
}

CarlesonReport carleson_constant(const SliceMeasure& m, const std::vector<double>& theta, const std::vector<double>& h,
                                 const CarlesonConfig&) {
  CarlesonReport rep;
  rep.theta.assign(h.size(), theta);
  rep.h = h;
  rep.ratio.assign(h.size(), std::vector<double>(theta.size(), 0.0));
  for (std::size_t a = 0; a < h.size(); ++a)
    parallel_for(static_cast<int>(theta.size()), [&](int k) {
      rep.ratio[a][static_cast<std::size_t>(k)] = slice_box_measure(m, {theta[static_cast<std::size_t>(k)], h[a]}) / h[a];
    });
  finish_report(rep);
  return rep;
}

std::vector<ImaginaryUnit> symmetric_units(int n_spiral) {
  std::vector<ImaginaryUnit> out = sample_sphere(6, "axes");
  for (const auto& u : sample_sphere(std::max(2, n_spiral), "spiral")) {
    out.push_back(u);
    out.push_back(-u);
  }
  return out;
}

namespace {

UnitCarleson from_profile(const ImaginaryUnit& u, const std::vector<double>& h, std::vector<double> profile,
                          double exact_constant = 0.0) {
  UnitCarleson out;
  out.unit = u;
  out.profile = std::move(profile);
  out.constant = exact_constant;
  for (double x : out.profile) out.constant = std::max(out.constant, x);
  const auto dy = dyadic_part(h, out.profile);
  out.carleson = !profile_unbounded(dy) && std::isfinite(out.constant);
  out.vanishing = out.carleson && profile_vanishing(dy);
  return out;
}

/// One normalized atom at z: sup over closed boxes is 1/(1-|z|), approached with h -> 1 - |z|.
UnitCarleson single_atom(const ImaginaryUnit& u, Complex z, const std::vector<double>& h) {
  const double r = std::abs(z);
  std::vector<double> profile;
  for (double x : h) profile.push_back(1.0 - r <= x * (1.0 + kBoxSlack) + kBoxSlack ? 1.0 / x : 0.0);
  auto out = from_profile(u, h, std::move(profile), 1.0 / std::max(1.0 - r, 1e-300));
  out.carleson = out.vanishing = r < 1.0;  // boxes with h < 1 - r are empty
  return out;
}

UnitCarleson grid_unit(const ImaginaryUnit& u, const SliceMeasure& mu, std::vector<double> theta,
                       std::vector<double> h) {
  for (const auto& a : mu.atoms) {
    theta.push_back(wrap(std::arg(a.z)));
    h.push_back(1.0 - std::abs(a.z));
  }
  sort_unique(theta, false);
  sort_unique(h, true);
  const auto rep = carleson_constant(mu, theta, h);
  auto out = from_profile(u, rep.h, rep.profile);
  // finitely many interior atoms: small boxes are empty
  if (!mu.density) {
    bool inside = true;
    for (const auto& a : mu.atoms) inside = inside && std::abs(a.z) < 1.0;
    if (inside) out.carleson = out.vanishing = true;
  }
  return out;
}

}  // namespace

SliceCarlesonReport slice_carleson_constant(const SliceDecomposedMeasure& m, const CarlesonGrid& grid,
                                            const std::vector<ImaginaryUnit>& units, const CarlesonConfig& cfg) {
  SliceCarlesonReport rep;
  const auto& im = m.impl();
  // mu_R on slice boxes
  {
    SliceMeasure r;
    for (const auto& a : im.mu_r) r.atoms.push_back({Complex(a.x, 0.0), a.mass});
    if (r.atoms.empty()) {
      rep.mu_r = from_profile(ImaginaryUnit::e1(), grid.h, std::vector<double>(grid.h.size(), 0.0));
    } else {
      rep.mu_r = grid_unit(ImaginaryUnit::e1(), r, grid.slice_theta, grid.h);
    }
  }
  // density: one table of box weights shared by all units
  std::vector<std::vector<AffineWeight>> table(grid.h.size());
  if (im.density)
    for (std::size_t a = 0; a < grid.h.size(); ++a)
      table[a] = density_table(im, rung_theta(grid, a, false), {grid.h[a]}, cfg)[0];
  rep.units.resize(units.size());
  parallel_for(static_cast<int>(units.size()), [&](int idx) {
    const ImaginaryUnit& u = units[static_cast<std::size_t>(idx)];
    UnitCarleson& out = rep.units[static_cast<std::size_t>(idx)];
    if (m.zero_slice(u)) {
      out = single_atom(u, Complex(0.0, 0.5), grid.h);
      return;
    }
    if (im.density) {
      const double c = m.c_of(u);
      std::vector<double> profile(grid.h.size(), 0.0);
      for (std::size_t a = 0; a < grid.h.size(); ++a)
        for (const auto& w : table[a]) profile[a] = std::max(profile[a], w.on(u) / (c * grid.h[a]));
      out = from_profile(u, grid.h, std::move(profile));
      return;
    }
    const auto& s = im.slices[static_cast<std::size_t>(find_slice(im, u))];
    if (s.atoms.size() == 1) out = single_atom(u, s.atoms[0].z, grid.h);
    else out = grid_unit(u, m.mu_plus(u), grid.slice_theta, grid.h);
  });
  rep.uniform_constant = rep.mu_r.constant;
  rep.uniform_h_profile = rep.mu_r.profile;
  bool all_carleson = rep.mu_r.carleson, all_vanishing = rep.mu_r.vanishing;
  for (const auto& u : rep.units) {
    rep.uniform_constant = std::max(rep.uniform_constant, u.constant);
    all_carleson = all_carleson && u.carleson;
    all_vanishing = all_vanishing && u.vanishing;
    for (std::size_t a = 0; a < grid.h.size() && a < u.profile.size(); ++a)
      rep.uniform_h_profile[a] = std::max(rep.uniform_h_profile[a], u.profile[a]);
  }
  // running max over the first 2^k units
  double run = rep.mu_r.constant;
  std::size_t next = 1;
  for (std::size_t k = 0; k < rep.units.size(); ++k) {
    run = std::max(run, rep.units[k].constant);
    if (k + 1 == next || k + 1 == rep.units.size()) {
      rep.unit_profile.push_back(run);
      next *= 2;
    }
  }
  rep.slice_carleson = all_carleson && !profile_unbounded(rep.unit_profile);
  rep.vanishing = rep.slice_carleson && all_vanishing && profile_vanishing(dyadic_part(grid.h, rep.uniform_h_profile));
  return rep;
}

TruncatedCarleson carleson_truncation_verdict(MeasureKind kind, const TruncationLadder& truncations, int l_max,
                                              const CarlesonConfig& cfg) {
  TruncatedCarleson out;
  for (int L = 4; L <= l_max; ++L) {
    const auto m = function_measure(kind, truncations(L), cfg);
    out.constants.push_back(carleson_constant(m, grid_for(m, cfg), cfg).constant);
  }
  out.carleson = !profile_unbounded(out.constants);
  return out;
}

double function_density(MeasureKind kind, const SliceFunction& df, const Quaternion& q) {
  if (kind == MeasureKind::Lambda4) return 1.0;
  const double r2 = q.norm2(), r = std::sqrt(r2);
  const double s2 = q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3;
  const double g2 = df(q).norm2();
  switch (kind) {
    case MeasureKind::MuF: return (1.0 - r2) * g2 / s2;
    case MeasureKind::NuF: return -std::log(r) * g2 / s2;
    case MeasureKind::NaiveMuF: return (1.0 - r) * (1.0 - r) * g2;
    case MeasureKind::NaiveNuF: return -2.0 * std::log(r) * g2;
    case MeasureKind::NaiveMuFRemark: return (1.0 - r2) * g2;
    default: return 0.0;
  }
}

std::vector<double> ball_integrals(const std::function<double(const Quaternion&)>& weight,
                                   const std::vector<std::function<double(const Quaternion&)>>& integrands, int n) {
  const auto& gl = gauss_legendre(n);
  const auto& gu = gauss_legendre(std::max(1, n / 2));
  const std::size_t m = integrands.size();
  std::vector<std::vector<double>> part(2 * static_cast<std::size_t>(n), std::vector<double>(m, 0.0));
  parallel_for(2 * n, [&](int job) {
    const int side = job / n, a = job % n;
    const double t = (side == 0 ? -0.25 : 0.25) * kPi * (gl.nodes[a] + 1.0);
    const double wt = 0.25 * kPi * gl.weights[a] * std::cos(t);
    const double x0 = std::sin(t), R = std::cos(t);
    auto& acc = part[static_cast<std::size_t>(job)];
    for (int b = 0; b < n; ++b) {
      const double rho = 0.5 * R * (gl.nodes[b] + 1.0);
      const double wr = 0.5 * R * gl.weights[b] * rho * rho;
      for (std::size_t c = 0; c < gu.nodes.size(); ++c) {
        const double u = gu.nodes[c], s = std::sqrt(1.0 - u * u);
        for (int d = 0; d < n; ++d) {
          const double psi = 2.0 * kPi * (d + 0.5) / n;
          const Quaternion q(x0, rho * s * std::cos(psi), rho * s * std::sin(psi), rho * u);
          const double w = wt * wr * gu.weights[c] * (2.0 * kPi / n) * weight(q);
          for (std::size_t k = 0; k < m; ++k) acc[k] += w * integrands[k](q);
        }
      }
    }
  });
  std::vector<double> out(m, 0.0);
  for (const auto& p : part)
    for (std::size_t k = 0; k < m; ++k) out[k] += p[k];
  return out;
}

}  // namespace qsh
