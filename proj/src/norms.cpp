#include "qsh/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelNodes = 16;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Trapezoid node count fine enough for a series of the given degree.
int smooth_nodes(const SliceFunction& f, int base) {
  const int d = std::max(0, f.degree());
  return std::max(base, 4 * next_pow2(d + 1));
}

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * kPi);
  if (t < 0) t += 2.0 * kPi;
  return t;
}

/// Rule on [s0, s0 + 2 pi) graded toward every singular angle.
Rule1D graded_circle_rule(std::vector<double> sing, int levels, int per_panel) {
  for (double& s : sing) s = wrap_angle(s);
  std::sort(sing.begin(), sing.end());
  sing.erase(std::unique(sing.begin(), sing.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }),
             sing.end());
  std::vector<double> breaks;
  const std::size_t n = sing.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double a = sing[k];
    const double b = k + 1 < n ? sing[k + 1] : sing[0] + 2.0 * kPi;
    const double mid = 0.5 * (a + b);
    auto left = graded_breaks(a, mid, a, levels);
    auto right = graded_breaks(mid, b, b, levels);
    if (breaks.empty()) breaks.insert(breaks.end(), left.begin(), left.end());
    else breaks.insert(breaks.end(), left.begin() + 1, left.end());
    breaks.insert(breaks.end(), right.begin() + 1, right.end());
  }
  return composite_gauss(breaks, per_panel);
}

int grading_levels(double r) {
  const double gap = std::max(1.0 - r, 1e-13);
  return std::clamp(static_cast<int>(std::ceil(std::log2(2.0 * kPi / gap))) + 6, 8, 40);
}

/// (1/2pi) int h(theta) d theta, graded around singular angles when r is near 1.
template <class T>
T circle_average(const std::function<T(double)>& h, const std::vector<double>& sing, double r,
                 int smooth_n, int per_panel = kPanelNodes) {
  if (sing.empty() || r < 0.5) {
    return circle_sum(h, CircleRule{smooth_n, 0.5}) / (2.0 * kPi);
  }
  const Rule1D rule = graded_circle_rule(sing, grading_levels(r), per_panel);
  T acc{};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += h(rule.nodes[k]) * rule.weights[k];
  return acc / (2.0 * kPi);
}

Quaternion f_at_zero(const SliceFunction& f) { return f.on_plane(base_unit(f), 0.0); }

}  // namespace

std::vector<ImaginaryUnit> default_units(int n_spiral) {
  auto out = sample_sphere(6, "axes");
  for (const auto& u : sample_sphere(std::max(2, n_spiral), "spiral")) out.push_back(u);
  return out;
}

ImaginaryUnit base_unit(const SliceFunction& f) {
  return f.is_series() ? ImaginaryUnit::e1() : f.kernel().unit;
}

AlphaBeta alpha_beta(const SliceFunction& f, Complex z) {
  const ImaginaryUnit u = base_unit(f);
  const Quaternion k = f.on_plane(u, z);
  const Quaternion kc = z.imag() == 0.0 ? k : f.on_plane(u, std::conj(z));
  return {0.5 * (k + kc), 0.5 * (u.q() * (kc - k))};
}

std::array<double, 3> cross_terms(const Quaternion& x, const Quaternion& y) {
  return {dot(x, Quaternion::e1() * y), dot(x, Quaternion::e2() * y), dot(x, Quaternion::e3() * y)};
}

double sup_modulus2(const Quaternion& x, const Quaternion& y) {
  const auto c = cross_terms(x, y);
  return x.norm2() + y.norm2() + 2.0 * std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
}

// ---- Hardy ------------------------------------------------------------------

double circle_mean_p(const SliceFunction& f, const ImaginaryUnit& i, double r, double p,
                     const NormConfig& cfg) {
  const std::function<double(double)> h = [&](double t) {
    return std::pow(f.on_plane(i, std::polar(r, t)).norm(), p);
  };
  return circle_average(h, f.singular_angles(i), r, smooth_nodes(f, cfg.circle_nodes));
}

NormReport hardy_norm(const SliceFunction& f, double p, const std::vector<ImaginaryUnit>& units,
                      const NormConfig& cfg) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidInput, "Hardy exponent must be positive");
  NormReport rep;
  rep.space = "hardy";
  rep.metadata["p"] = p;
  rep.metadata["circle_nodes"] = smooth_nodes(f, cfg.circle_nodes);
  rep.metadata["ladder_depth"] = cfg.ladder_depth;
  const double rb = f.boundary_radius();
  double best = -1.0;
  for (const auto& u : units) {
    std::vector<double> ladder;
    for (int m = 3; m <= cfg.ladder_depth; ++m) {
      const double r = ladder_radius(m);
      if (r > rb) break;
      ladder.push_back(circle_mean_p(f, u, r, p, cfg));
    }
    SliceValue sv{u};
    sv.diverged = ladder_diverges(ladder);
    double mean_p;
    if (sv.diverged) {
      mean_p = INFINITY;
    } else {
      mean_p = circle_mean_p(f, u, rb, p, cfg);
      // node-doubling check at the boundary
      NormConfig twice = cfg;
      twice.circle_nodes = 2 * smooth_nodes(f, cfg.circle_nodes);
      const double again = circle_mean_p(f, u, rb, p, twice);
      sv.low_confidence = std::abs(again - mean_p) > kNodeDoublingTol * std::max(again, 1e-300);
    }
    sv.value = std::pow(mean_p, 1.0 / p);
    rep.per_slice.push_back(sv);
    rep.diverged = rep.diverged || sv.diverged;
    rep.low_confidence = rep.low_confidence || sv.low_confidence;
    if (sv.value > best || (sv.diverged && rep.ladder.empty())) {
      best = std::max(best, sv.value);
      rep.ladder = ladder;
    }
  }
  rep.value = rep.diverged ? INFINITY : best;
  return rep;
}

double hardy2_coeff(const SliceFunction& f) {
  CompensatedSum s;
  for (const auto& t : f.series().terms) s.add(t.a.norm2());
  return std::sqrt(s.value());
}

double hardy_norm_complex(const ComplexComponent& c, double p, const NormConfig& cfg) {
  int deg = 0;
  if (c.terms)
    for (const auto& [n, a] : *c.terms) deg = std::max(deg, n);
  const int n = std::max(cfg.circle_nodes, 4 * next_pow2(deg + 1));
  const std::function<double(double)> h = [&](double t) { return std::pow(std::abs(c(std::polar(1.0, t))), p); };
  return std::pow(circle_sum(h, CircleRule{n, 0.5}) / (2.0 * kPi), 1.0 / p);
}

// ---- BMO / VMO --------------------------------------------------------------

double default_boundary_radius(const SliceFunction& f) {
  if (!f.is_series()) return 1.0;
  const auto& s = f.series();
  if (!s.truncated && s.r_max >= 1.0) return 1.0;
  return std::min(1.0 - std::ldexp(1.0, -12), s.r_max);
}

BoundarySamples boundary_samples(const SliceFunction& f, int n, double radius) {
  BoundarySamples b;
  b.n = n;
  b.radius = radius;
  b.alpha.resize(static_cast<std::size_t>(n));
  b.beta.resize(static_cast<std::size_t>(n));
  const ImaginaryUnit u = base_unit(f);
  const CircleRule rule{n, 0.5};
  std::vector<Quaternion> k(static_cast<std::size_t>(n));
  parallel_for(n, [&](int j) { k[static_cast<std::size_t>(j)] = f.on_plane(u, std::polar(radius, rule.node(j))); });
  // node n-1-j is the conjugate of node j
  for (int j = 0; j < n; ++j) {
    const Quaternion& a = k[static_cast<std::size_t>(j)];
    const Quaternion& c = k[static_cast<std::size_t>(n - 1 - j)];
    b.alpha[static_cast<std::size_t>(j)] = 0.5 * (a + c);
    b.beta[static_cast<std::size_t>(j)] = 0.5 * (u.q() * (c - a));
  }
  return b;
}

std::vector<ArcStat> arc_stats(const BoundarySamples& b, const ArcFamily& arcs) {
  const int n = b.n;
  std::vector<ArcStat> out;
  for (int level = 0; level <= arcs.depth; ++level) {
    const int len = n >> level;
    if (len < 1) break;
    const int step = std::max(1, len / 2);
    const int count = n / step;
    std::vector<ArcStat> lv(static_cast<std::size_t>(count));
    parallel_for(count, [&](int j) {
      const int start = j * step;
      Quaternion ma, mb;
      for (int t = 0; t < len; ++t) {
        const std::size_t idx = static_cast<std::size_t>((start + t) % n);
        ma += b.alpha[idx];
        mb += b.beta[idx];
      }
      ma = ma / len;
      mb = mb / len;
      double P = 0.0;
      std::array<double, 3> C{};
      for (int t = 0; t < len; ++t) {
        const std::size_t idx = static_cast<std::size_t>((start + t) % n);
        const Quaternion x = b.alpha[idx] - ma, y = b.beta[idx] - mb;
        P += x.norm2() + y.norm2();
        const auto c = cross_terms(x, y);
        for (int q = 0; q < 3; ++q) C[static_cast<std::size_t>(q)] += c[static_cast<std::size_t>(q)];
      }
      ArcStat s;
      s.level = level;
      s.start = start;
      s.P = P / len;
      for (auto& c : C) c /= len;
      s.C = C;
      lv[static_cast<std::size_t>(j)] = s;
    });
    out.insert(out.end(), lv.begin(), lv.end());
  }
  return out;
}

std::vector<double> level_maxima(const std::vector<ArcStat>& stats, int depth,
                                 const std::optional<ImaginaryUnit>& unit) {
  std::vector<double> m(static_cast<std::size_t>(depth + 1), 0.0);
  for (const auto& s : stats) {
    if (s.level > depth) continue;
    const double v = unit ? s.on(*unit) : s.sup();
    m[static_cast<std::size_t>(s.level)] = std::max(m[static_cast<std::size_t>(s.level)], v);
  }
  return m;
}

namespace {

int arc_nodes(const SliceFunction& f, const ArcFamily& arcs) {
  return std::max(arcs.nodes(), 4 * next_pow2(std::max(0, f.degree()) + 1));
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

double bmo_seminorm_slice(const SliceFunction& f, const ImaginaryUnit& i, const ArcFamily& arcs,
                          std::optional<double> r_boundary) {
  const double r = r_boundary.value_or(default_boundary_radius(f));
  const auto stats = arc_stats(boundary_samples(f, arc_nodes(f, arcs), r), arcs);
  return std::sqrt(std::max(0.0, max_of(level_maxima(stats, arcs.depth, i))));
}

NormReport bmo_seminorm_global(const SliceFunction& f, const std::vector<ImaginaryUnit>& units,
                               const ArcFamily& arcs, std::optional<double> r_boundary) {
  NormReport rep;
  rep.space = "bmo";
  const double r = r_boundary.value_or(default_boundary_radius(f));
  const int n = arc_nodes(f, arcs);
  rep.metadata["arc_depth"] = arcs.depth;
  rep.metadata["boundary_nodes"] = n;
  rep.metadata["boundary_radius"] = r;
  const auto stats = arc_stats(boundary_samples(f, n, r), arcs);
  rep.value = std::sqrt(std::max(0.0, max_of(level_maxima(stats, arcs.depth, std::nullopt))));
  double sampled = 0.0;
  for (const auto& u : units) {
    SliceValue sv{u};
    sv.value = std::sqrt(std::max(0.0, max_of(level_maxima(stats, arcs.depth, u))));
    sampled = std::max(sampled, sv.value);
    rep.per_slice.push_back(sv);
  }
  rep.extra["sampled_sup"] = sampled;
  return rep;
}

double bmo_norm(const SliceFunction& f, const ArcFamily& arcs) {
  return f_at_zero(f).norm() + bmo_seminorm_global(f, {}, arcs).value;
}

double bmo_norm_slice(const SliceFunction& f, const ImaginaryUnit& i, const ArcFamily& arcs) {
  return f_at_zero(f).norm() + bmo_seminorm_slice(f, i, arcs);
}

double bmo_seminorm_complex(const ComplexComponent& c, const ArcFamily& arcs, double radius) {
  int deg = 0;
  if (c.terms)
    for (const auto& [n, a] : *c.terms) deg = std::max(deg, n);
  const int n = std::max(arcs.nodes(), 4 * next_pow2(deg + 1));
  const CircleRule rule{n, 0.5};
  std::vector<Complex> v(static_cast<std::size_t>(n));
  parallel_for(n, [&](int j) { v[static_cast<std::size_t>(j)] = c(std::polar(radius, rule.node(j))); });
  double best = 0.0;
  for (int level = 0; level <= arcs.depth; ++level) {
    const int len = n >> level;
    const int step = std::max(1, len / 2);
    for (int start = 0; start < n; start += step) {
      Complex m = 0.0;
      for (int t = 0; t < len; ++t) m += v[static_cast<std::size_t>((start + t) % n)];
      m /= static_cast<double>(len);
      double P = 0.0;
      for (int t = 0; t < len; ++t) P += std::norm(v[static_cast<std::size_t>((start + t) % n)] - m);
      best = std::max(best, P / len);
    }
  }
  return std::sqrt(best);
}

BmoVerdict bmo_verdict(const SliceFunction& f, const ArcFamily& arcs, const TruncationLadder& truncations,
                       int l_max) {
  BmoVerdict v;
  auto sq = [&](const SliceFunction& g, double r) {
    const auto stats = arc_stats(boundary_samples(g, arc_nodes(g, arcs), r), arcs);
    return max_of(level_maxima(stats, arcs.depth, std::nullopt));
  };
  if (truncations) {
    for (int L = 4; L <= l_max; ++L) {
      const SliceFunction g = truncations(L);
      v.ladder.push_back(sq(g, default_boundary_radius(g)));
    }
  } else {
    // squared seminorm of the families of depth 0..K at the boundary radius
    const auto stats = arc_stats(boundary_samples(f, arc_nodes(f, arcs), default_boundary_radius(f)), arcs);
    double run = 0.0;
    for (double x : level_maxima(stats, arcs.depth, std::nullopt)) v.ladder.push_back(run = std::max(run, x));
  }
  v.finite = !ladder_diverges(v.ladder);
  v.value = v.finite ? std::sqrt(sq(f, default_boundary_radius(f))) : INFINITY;
  return v;
}

double vmo_modulus(const SliceFunction& f, std::optional<ImaginaryUnit> i, double t, const ArcFamily& arcs) {
  const auto stats = arc_stats(boundary_samples(f, arc_nodes(f, arcs), default_boundary_radius(f)), arcs);
  double m = 0.0;
  for (const auto& s : stats) {
    const double len = 2.0 * kPi * std::ldexp(1.0, -s.level);
    if (len > t * (1.0 + 1e-12)) continue;
    m = std::max(m, i ? s.on(*i) : s.sup());
  }
  return m;
}

VmoVerdict vmo_verdict(const SliceFunction& f, const ArcFamily& arcs) {
  const auto stats = arc_stats(boundary_samples(f, arc_nodes(f, arcs), default_boundary_radius(f)), arcs);
  const auto per_level = level_maxima(stats, arcs.depth, std::nullopt);
  VmoVerdict v;
  v.modulus.assign(per_level.size(), 0.0);
  double run = 0.0;
  for (std::size_t k = per_level.size(); k-- > 0;) {
    run = std::max(run, per_level[k]);
    v.modulus[k] = run;
  }
  const std::size_t K = v.modulus.size() - 1;
  const double mk = v.modulus[K], mk1 = v.modulus[K - 1];
  const bool decreasing = mk < mk1 || mk1 <= 1e-24;
  v.vmo = mk < kVmoThreshold && mk1 < kVmoThreshold && decreasing;
  return v;
}

// ---- Moebius-invariant seminorm --------------------------------------------

std::vector<Complex> default_a_grid() {
  std::vector<Complex> g{0.0};
  const std::pair<double, int> rings[] = {{0.3, 6}, {0.6, 12}, {0.85, 18}};
  for (const auto& [r, n] : rings)
    for (int k = 0; k < n; ++k) g.push_back(std::polar(r, 2.0 * kPi * k / n));
  return g;
}

double star_seminorm(const SliceFunction& f, const ImaginaryUnit& i, const std::vector<Complex>& a_grid,
                     const NormConfig& cfg) {
  double best = 0.0;
  for (const Complex& a : a_grid) {
    const SliceFunction g = moebius_compose(f, MoebiusParam(embed(a, i), i));
    const Quaternion fa = f.on_plane(i, a);
    const int deg = std::max(0, f.degree());
    const int n = std::max(cfg.circle_nodes, next_pow2(64 * (deg + 1)));
    const std::function<double(double)> h = [&](double t) {
      return (g.on_plane(i, std::polar(1.0, t)) - fa).norm2();
    };
    best = std::max(best, circle_average(h, g.singular_angles(i), 1.0, std::min(n, 1 << 16)));
  }
  return std::sqrt(best);
}

// ---- Bloch ------------------------------------------------------------------

NormReport bloch_norm(const SliceFunction& f, const std::vector<ImaginaryUnit>& units, const NormConfig& cfg) {
  NormReport rep;
  rep.space = "bloch";
  const SliceFunction df = f.derivative();
  const double rb = f.boundary_radius();
  std::vector<double> angles;
  const int n_angle = 256;
  for (int k = 0; k < n_angle; ++k) angles.push_back(2.0 * kPi * k / n_angle);
  for (double s : f.singular_angles(base_unit(f))) angles.push_back(s);
  for (double s : f.singular_angles(base_unit(f))) angles.push_back(-s);
  std::vector<double> per_unit(units.size(), 0.0);
  std::vector<double> printed_ladder;
  double sup_w = 0.0, sup_printed = 0.0;
  for (int m = 0; m <= cfg.ladder_depth; ++m) {
    const double r = m == 0 ? 0.0 : ladder_radius(m);
    if (r > rb) break;
    double rung = 0.0;
    for (double t : angles) {
      const Complex z = std::polar(r, t);
      const AlphaBeta ab = alpha_beta(df, z);
      rung = std::max(rung, std::sqrt(sup_modulus2(ab.alpha, ab.beta)));
      for (std::size_t q = 0; q < units.size(); ++q) {
        const Quaternion v = ab.alpha + units[q].q() * ab.beta;
        per_unit[q] = std::max(per_unit[q], (1.0 - r * r) * v.norm());
      }
      if (m == 0) break;
    }
    rep.ladder.push_back((1.0 - r * r) * rung);
    printed_ladder.push_back((1.0 - r) * (1.0 - r) * rung);
    sup_w = std::max(sup_w, rep.ladder.back());
    sup_printed = std::max(sup_printed, printed_ladder.back());
  }
  const double f0 = f_at_zero(f).norm();
  rep.diverged = ladder_diverges(rep.ladder);
  rep.value = rep.diverged ? INFINITY : f0 + sup_w;
  const bool printed_div = ladder_diverges(printed_ladder);
  rep.extra["value_printed_weight"] = printed_div ? INFINITY : f0 + sup_printed;
  rep.extra["printed_weight_diverged"] = printed_div ? 1.0 : 0.0;
  rep.extra["f0"] = f0;
  for (std::size_t q = 0; q < units.size(); ++q) rep.per_slice.push_back({units[q], f0 + per_unit[q]});
  rep.metadata["ladder_depth"] = cfg.ladder_depth;
  return rep;
}

BlochVerdict bloch_verdict(const NormReport& r) {
  BlochVerdict v;
  v.bloch = !r.diverged;
  const double top = max_of(r.ladder);
  const std::size_t n = r.ladder.size();
  if (top == 0.0) {
    v.little_bloch = true;
  } else if (n >= 2) {
    v.little_bloch = r.ladder[n - 1] <= 1e-2 * top && r.ladder[n - 1] < r.ladder[n - 2];
  }
  return v;
}

// ---- Dirichlet and pairing --------------------------------------------------

namespace {

bool smooth_polynomial(const SliceFunction& f) {
  return f.is_series() && !f.series().truncated && f.series().r_max >= 1.0;
}

/// int over the ring a < |z| < b of h(z) d lambda_2, graded in angle near singular angles.
template <class T>
T ring_integral(const std::function<T(Complex)>& h, const std::vector<double>& sing, double a, double b,
                int n_theta, int radial_panels) {
  const auto breaks = b >= 1.0 ? graded_breaks(a, b, b, radial_panels) : std::vector<double>{a, b};
  const Rule1D radial = composite_gauss(breaks, kPanelNodes);
  T acc{};
  for (std::size_t k = 0; k < radial.nodes.size(); ++k) {
    const double r = radial.nodes[k];
    const std::function<T(double)> ang = [&](double t) { return h(std::polar(r, t)); };
    acc += circle_average(ang, sing, r, n_theta) * (2.0 * kPi * r * radial.weights[k]);
  }
  return acc;
}

/// E_m = int_{|z| < r_m} |f'_i|^2 for m = 1..M.
std::vector<double> energy_ladder(const SliceFunction& f, const ImaginaryUnit& i, const NormConfig& cfg) {
  const SliceFunction df = f.derivative();
  const auto sing = f.singular_angles(i);
  const std::function<double(Complex)> h = [&](Complex z) { return df.on_plane(i, z).norm2(); };
  std::vector<double> out;
  double acc = 0.0, lo = 0.0;
  const int m_max = std::min(cfg.ladder_depth, 12);
  for (int m = 1; m <= m_max; ++m) {
    const double hi = ladder_radius(m);
    acc += ring_integral(h, sing, lo, hi, smooth_nodes(f, cfg.disk.n_theta), 1);
    out.push_back(acc);
    lo = hi;
  }
  return out;
}

}  // namespace

double dirichlet_energy(const SliceFunction& f, const ImaginaryUnit& i, const NormConfig& cfg) {
  if (smooth_polynomial(f) && f.degree() > 1024) {
    // exact disc rules would need ~deg^2 nodes
    double s = 0.0;
    for (const auto& t : f.series().terms) s += t.n * t.a.norm2();
    return kPi * s;
  }
  if (smooth_polynomial(f)) {
    const SliceFunction df = f.derivative();
    DiskRule rule = cfg.disk;
    rule.n_r = std::max(rule.n_r, f.degree() + 8);
    rule.n_theta = std::max(rule.n_theta, 4 * next_pow2(f.degree() + 1));
    return disk_sum<double>([&](Complex z) { return df.on_plane(i, z).norm2(); }, rule);
  }
  const auto ladder = energy_ladder(f, i, cfg);
  if (ladder_diverges(ladder))
    throw Error(ErrorCode::DivergentIntegral, "Dirichlet integral grows along the ring ladder");
  if (f.boundary_radius() < 1.0) return radial_limit(ladder, 1).limit;
  const SliceFunction df = f.derivative();
  const std::function<double(Complex)> h = [&](Complex z) { return df.on_plane(i, z).norm2(); };
  return ring_integral(h, f.singular_angles(i), 0.0, 1.0, smooth_nodes(f, cfg.disk.n_theta), 40);
}

InnerProduct dirichlet_inner(const SliceFunction& f, const SliceFunction& g, const ImaginaryUnit& i,
                             const NormConfig& cfg) {
  InnerProduct out;
  const Quaternion head = f.on_plane(i, 0.0).conj() * g.on_plane(i, 0.0);
  const SliceFunction df = f.derivative(), dg = g.derivative();
  const std::function<Quaternion(Complex)> h = [&](Complex z) {
    return df.on_plane(i, z).conj() * dg.on_plane(i, z);
  };
  if (smooth_polynomial(f) && smooth_polynomial(g)) {
    DiskRule rule = cfg.disk;
    const int deg = std::max(f.degree(), g.degree());
    rule.n_r = std::max(rule.n_r, deg + 8);
    rule.n_theta = std::max(rule.n_theta, 4 * next_pow2(deg + 1));
    const auto I = integrate_disk<Quaternion>(h, rule);
    out.quadrature = head + I.value;
    out.low_confidence = I.error > 1e-8 * std::max(1.0, I.value.norm());
  } else {
    // both energies must be finite; throws DivergentIntegral otherwise
    dirichlet_energy(f, i, cfg);
    dirichlet_energy(g, i, cfg);
    std::vector<double> sing = f.singular_angles(i);
    for (double s : g.singular_angles(i)) sing.push_back(s);
    out.quadrature = head + ring_integral(h, sing, 0.0, std::min(f.boundary_radius(), g.boundary_radius()),
                                          cfg.disk.n_theta, 40);
  }
  if (f.is_series() && g.is_series()) {
    const auto& ft = f.series().terms;
    const auto& gt = g.series().terms;
    Quaternion c;
    std::size_t a = 0, b = 0;
    while (a < ft.size() && b < gt.size()) {
      if (ft[a].n < gt[b].n) ++a;
      else if (gt[b].n < ft[a].n) ++b;
      else {
        const int n = ft[a].n;
        const double w = n == 0 ? 1.0 : kPi * n;
        c += (ft[a].a.conj() * gt[b].a) * w;
        ++a;
        ++b;
      }
    }
    out.coefficients = c;
  }
  return out;
}

InnerProduct dual_pairing(const SliceFunction& f, const SliceFunction& g, const ImaginaryUnit& i,
                          const NormConfig& cfg) {
  InnerProduct out;
  const double r = std::min(f.boundary_radius(), g.boundary_radius());
  const int deg = std::max(std::max(0, f.degree()), std::max(0, g.degree()));
  const int n0 = std::max(cfg.circle_nodes, 4 * next_pow2(deg + 1));
  const std::function<Quaternion(double)> h = [&](double t) {
    const Complex z = std::polar(r, t);
    return f.on_plane(i, z).conj() * g.on_plane(i, z);
  };
  std::vector<Quaternion> vals;
  std::vector<double> mags;
  for (int k = 0; k < 4; ++k) {
    vals.push_back(circle_sum(h, CircleRule{n0 << k, 0.5}) / (2.0 * kPi));
    mags.push_back(vals.back().norm());
  }
  if (ladder_diverges(mags)) throw Error(ErrorCode::DivergentIntegral, "pairing grows under node doubling");
  out.quadrature = vals.back();
  out.low_confidence = distance(vals[3], vals[2]) > kNodeDoublingTol * std::max(1.0, vals[3].norm());
  if (f.is_series() && g.is_series()) {
    Quaternion c;
    const auto& ft = f.series().terms;
    const auto& gt = g.series().terms;
    std::size_t a = 0, b = 0;
    while (a < ft.size() && b < gt.size()) {
      if (ft[a].n < gt[b].n) ++a;
      else if (gt[b].n < ft[a].n) ++b;
      else {
        c += ft[a].a.conj() * gt[b].a;
        ++a;
        ++b;
      }
    }
    out.coefficients = c;
  }
  return out;
}

// ---- Sufficient conditions ---------------------------------------------------

MajorantResult majorant_criterion(const SliceFunction& f, const std::function<double(double)>& phi,
                                  const std::vector<ImaginaryUnit>& units, const NormConfig& cfg) {
  MajorantResult out;
  std::vector<double> radii{0.0};
  for (int m = 1; m <= cfg.ladder_depth; ++m) radii.push_back(ladder_radius(m));
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (phi(radii[k]) < phi(radii[k - 1]))
      throw Error(ErrorCode::NonMonotoneProfile, "majorant decreases at r = " + std::to_string(radii[k]));

  const SliceFunction df = f.derivative();
  out.majorized = true;
  const int n_angle = 64;
  std::vector<double> angles;
  for (int k = 0; k < n_angle; ++k) angles.push_back(2.0 * kPi * (k + 0.5) / n_angle);
  for (double s : f.singular_angles(base_unit(f))) angles.push_back(s);
  for (double r : radii) {
    if (r > f.boundary_radius()) break;
    for (double t : angles) {
      const AlphaBeta ab = alpha_beta(df, std::polar(r, t));
      // closed-form sup over S covers every unit in `units`
      const double d = std::sqrt(sup_modulus2(ab.alpha, ab.beta));
      if (d > phi(r) * (1.0 + 1e-12) + 1e-300) out.majorized = false;
    }
  }
  (void)units;
  double acc = 0.0;
  for (std::size_t k = 1; k < radii.size(); ++k) {
    const Rule1D rule = composite_gauss({radii[k - 1], radii[k]}, kPanelNodes);
    acc += rule.integrate([&](double r) { return (1.0 - r * r) * phi(r) * phi(r); });
    out.partial_integrals.push_back(acc);
  }
  out.integral_finite = !ladder_diverges(out.partial_integrals);
  out.verdict = out.majorized && out.integral_finite ? MajorantVerdict::Met : MajorantVerdict::Inconclusive;
  return out;
}

GapClassification gap_series_check(const std::vector<long long>& exponents, const std::vector<Quaternion>& coeffs,
                                   double alpha) {
  if (!(alpha > 1.0)) throw Error(ErrorCode::InvalidInput, "gap ratio bound must exceed 1");
  if (exponents.size() != coeffs.size()) throw Error(ErrorCode::InvalidInput, "length mismatch");
  for (std::size_t l = 0; l + 1 < exponents.size(); ++l) {
    if (exponents[l] <= 0 ||
        static_cast<double>(exponents[l + 1]) < alpha * static_cast<double>(exponents[l]) * (1.0 - 1e-15))
      throw Error(ErrorCode::GapViolation, "n_{l+1}/n_l below the declared ratio at l = " + std::to_string(l));
  }
  GapClassification out;
  CompensatedSum s;
  std::vector<double> t;
  for (const auto& a : coeffs) {
    t.push_back(a.norm2());
    s.add(a.norm2());
    out.partial_sums.push_back(s.value());
  }
  // least-squares slope of log t_l against log l over the second half of the terms
  const std::size_t L = t.size();
  std::vector<std::pair<double, double>> pts;
  bool geometric = L >= 4;
  for (std::size_t l = L / 2; l < L; ++l) {
    if (t[l] > 0.0) pts.emplace_back(std::log(static_cast<double>(l + 1)), std::log(t[l]));
    if (l > L / 2 && !(t[l] <= 0.75 * t[l - 1])) geometric = false;
  }
  bool all_zero_tail = pts.empty();
  if (all_zero_tail || geometric) {
    out.decay_exponent = INFINITY;
  } else if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (auto& [x, y] : pts) { mx += x; my += y; }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0, sxx = 0;
    for (auto& [x, y] : pts) { sxy += (x - mx) * (y - my); sxx += (x - mx) * (x - mx); }
    out.decay_exponent = sxx > 0 ? -sxy / sxx : 0.0;
  } else {
    out.decay_exponent = 0.0;
  }
  out.in_h2 = out.decay_exponent > 1.5;
  out.in_bmo = out.in_h2;
  out.in_vmo = out.in_h2;
  return out;
}

}  // namespace qsh
