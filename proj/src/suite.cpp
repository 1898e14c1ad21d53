#include "qsh/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>

#include "qsh/moebius.hpp"
#include "qsh/parallel.hpp"

namespace qsh {

namespace {

constexpr double kPi = std::numbers::pi;

struct Tally {
  bool ok = true;
  bool low = false;
  Json failures = Json::array();
  void fail(const std::string& what) {
    ok = false;
    if (failures.size() < 25) failures.push_back(what);
  }
  void expect(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Context {
  const RunConfig& cfg;
  std::optional<std::vector<CorpusEntry>> corpus_;
  const std::vector<CorpusEntry>& corpus() {
    if (!corpus_) corpus_ = build_corpus({cfg.seed, 12});
    return *corpus_;
  }
  std::vector<const CorpusEntry*> series() {
    std::vector<const CorpusEntry*> out;
    for (const auto& e : corpus())
      if (e.f.is_series()) out.push_back(&e);
    return out;
  }
};

using Body = void (*)(Context&, Tally&, Json&, std::string&);

Quaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng), g(rng), g(rng)};
}

// ---- 1 --------------------------------------------------------------------

void check_pointmass(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto ex = pointmass_example(100000);
  long double partial = 0.0L;
  for (int l = 2; l <= 1000; ++l) partial += std::pow(static_cast<long double>(l), -1.5L);
  Json rows = Json::array();
  double worst_margin = INFINITY;
  for (int n : {4, 16, 64, 256, 1024}) {
    const long double boxed = box_measure(ex.measure, {kPi / 2, 1.0 / n}, true, std::nullopt, ctx.cfg.carleson);
    const long double ratio = n * (boxed + ex.tail_lower);
    const long double bound = std::sqrt(static_cast<long double>(n)) * partial;
    const double margin = static_cast<double>(ratio - bound);
    worst_margin = std::min(worst_margin, margin);
    t.expect(margin >= -1e-9, "n = " + std::to_string(n) + ": ratio below bound");
    rows.push_back({{"n", n}, {"ratio", static_cast<double>(ratio)}, {"bound", static_cast<double>(bound)}});
  }
  const auto g = grid_for(ex.measure, ctx.cfg.carleson);
  std::vector<ImaginaryUnit> units;
  for (int n = 2; n <= 4097; ++n) units.push_back(example_unit(n));
  const auto s = slice_carleson_constant(ex.measure, g, units, ctx.cfg.carleson);
  double worst_unit = 0.0;
  for (std::size_t k = 0; k < units.size(); ++k) {
    const double n = static_cast<double>(k + 2);
    worst_unit = std::max(worst_unit, std::abs(s.units[k].constant - n) / n);
  }
  t.expect(worst_unit <= 1e-9, "per-slice constants differ from n");
  t.expect(!s.slice_carleson, "uniform slice verdict is true");
  const auto global = carleson_constant(ex.measure, g, ctx.cfg.carleson);
  data = {{"rows", rows},
          {"worst_margin", worst_margin},
          {"units_checked", units.size()},
          {"worst_unit_rel_error", worst_unit},
          {"slice_carleson", s.slice_carleson},
          {"global_carleson", global.carleson},
          {"global_constant_on_grid", number(global.constant)}};
  summary = "min ratio - bound " + fmt("%.4g", worst_margin) + ", per-slice rel err " + fmt("%.2g", worst_unit) +
            ", uniform verdict " + (s.slice_carleson ? "true" : "false");
}

// ---- 2 --------------------------------------------------------------------

void check_inv_sqrt(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto f = inv_sqrt_one_plus_s();
  NormConfig nc = ctx.cfg.norm;
  nc.ladder_depth = 14;
  const auto h2 = hardy_norm(f, 2.0, default_units(ctx.cfg.n_spiral), nc);
  t.expect(h2.diverged, "H2 ladder did not diverge");

  std::mt19937_64 rng(ctx.cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto units = random_units(4, ctx.cfg.seed + 1);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double th = (u(rng) - 0.5) * 2.8;
    const double r = 2.0 * std::cos(th) * (0.01 + 0.98 * u(rng));
    const Complex z = -1.0 + std::polar(r, th);
    const double bound = 0.25 * (2.0 * std::cos(th) - r) * std::sin(th) * std::sin(th);
    const double direct = measure_weight_on(MeasureKind::NaiveMuFRemark, f, units[static_cast<std::size_t>(k) % 4], z);
    worst = std::max(worst, std::abs(direct - bound) / bound);
  }
  t.expect(worst <= 1e-10, "density bound mismatch " + fmt("%.3g", worst));

  const auto m = function_measure(MeasureKind::NaiveMuF, f, ctx.cfg.carleson);
  const auto rep = carleson_constant(m, grid_for(m, ctx.cfg.carleson), ctx.cfg.carleson);
  t.expect(rep.carleson && std::isfinite(rep.constant), "naive measure not Carleson");
  data = {{"h2_diverged", h2.diverged},
          {"h2_ladder", to_json(h2)["ladder"]},
          {"density_worst_rel", worst},
          {"naive_carleson", rep.carleson},
          {"naive_constant", number(rep.constant)}};
  summary = std::string("H2 diverged ") + (h2.diverged ? "yes" : "no") + ", density rel err " + fmt("%.2g", worst) +
            ", naive constant " + fmt("%.4g", rep.constant);
}

// ---- 3 --------------------------------------------------------------------

void check_factor2(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto units = random_units(20, ctx.cfg.seed);
  ArcFamily arcs = ctx.cfg.arcs();
  arcs.depth = 12;
  double worst_low = 0.0, worst_high = 0.0;  // slice - global, global - 2 slice
  Json rows = Json::array();
  for (const auto& e : ctx.corpus()) {
    const auto rep = bmo_seminorm_global(e.f, units, arcs);
    t.low = t.low || rep.low_confidence;
    double lo = -INFINITY, hi = -INFINITY;
    for (const auto& sv : rep.per_slice) {
      lo = std::max(lo, sv.value - rep.value);
      hi = std::max(hi, rep.value - 2.0 * sv.value);
    }
    t.expect(lo <= 0.0, e.id + ": slice above global by " + fmt("%.3g", lo));
    t.expect(hi <= ctx.cfg.tol_factor2, e.id + ": global above twice a slice by " + fmt("%.3g", hi));
    worst_low = std::max(worst_low, lo);
    worst_high = std::max(worst_high, hi);
    rows.push_back({{"id", e.id}, {"global", number(rep.value)}, {"max_slice_minus_global", number(lo)},
                    {"max_global_minus_2slice", number(hi)}});
  }
  data = {{"entries", rows}, {"units", units.size()}, {"arc_depth", arcs.depth}};
  summary = std::to_string(rows.size()) + " entries x " + std::to_string(units.size()) +
            " units, max(global - 2 slice) " + fmt("%.3g", worst_high);
}

// ---- 4 --------------------------------------------------------------------

void check_sandwich(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const double tol = ctx.cfg.tol_sandwich;
  const ArcFamily arcs = ctx.cfg.arcs();
  std::vector<ImaginaryUnit> is{ImaginaryUnit::e1(), random_units(1, ctx.cfg.seed + 2)[0]};
  Json rows = Json::array();
  double worst = -INFINITY;
  for (const auto* e : ctx.series()) {
    for (const auto& i : is) {
      const auto j = orthogonal_unit(i);
      const auto sp = split(e->f, i, j);
      const double r = default_boundary_radius(e->f);
      const double nf = e->f(Quaternion()).norm() + bmo_seminorm_slice(e->f, i, arcs, r);
      const double n1 = std::abs(sp.f1(0.0)) + bmo_seminorm_complex(sp.f1, arcs, r);
      const double n2 = std::abs(sp.f2(0.0)) + bmo_seminorm_complex(sp.f2, arcs, r);
      const double b1 = std::max(n1, n2) - nf, b2 = nf - (n1 + n2);
      t.expect(b1 <= tol, e->id + ": component BMO norm above slice norm");
      t.expect(b2 <= tol, e->id + ": slice BMO norm above component sum");
      worst = std::max({worst, b1, b2});
      Json row = {{"id", e->id}, {"unit", to_json(i.q())}, {"bmo", nf}, {"bmo_f1", n1}, {"bmo_f2", n2}};
      for (double p : {1.0, 2.0}) {
        const auto h = hardy_norm(e->f, p, {i}, ctx.cfg.norm);
        t.low = t.low || h.low_confidence;
        const double h1 = hardy_norm_complex(sp.f1, p, ctx.cfg.norm);
        const double h2 = hardy_norm_complex(sp.f2, p, ctx.cfg.norm);
        const double b = std::max(h1, h2) - h.value;
        t.expect(b <= tol, e->id + ": component H" + std::to_string(static_cast<int>(p)) + " norm above f");
        worst = std::max(worst, b);
        row["h" + std::to_string(static_cast<int>(p))] = {number(h.value), number(h1), number(h2)};
        if (h.low_confidence) row["low_confidence_h" + std::to_string(static_cast<int>(p))] = true;
      }
      rows.push_back(row);
    }
  }
  data = {{"rows", rows}, {"worst_excess", worst}};
  summary = std::to_string(rows.size()) + " (entry, unit) pairs, worst excess " + fmt("%.3g", worst);
}

// ---- 5 --------------------------------------------------------------------

void check_parseval(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto units = default_units(ctx.cfg.n_spiral);
  double worst = 0.0;
  Json rows = Json::array();
  for (const auto* e : ctx.series()) {
    const auto h = hardy_norm(e->f, 2.0, units, ctx.cfg.norm);
    t.low = t.low || h.low_confidence;
    const double c = hardy2_coeff(e->f);
    const double d = std::abs(h.value - c) / (1.0 + c);
    t.expect(d <= ctx.cfg.tol_parseval, e->id + ": " + fmt("%.3g", d));
    worst = std::max(worst, d);
    rows.push_back({{"id", e->id}, {"quadrature", number(h.value)}, {"coefficients", c}});
  }
  data = {{"rows", rows}, {"worst", worst}};
  summary = std::to_string(rows.size()) + " series entries, worst |diff|/(1+v) " + fmt("%.3g", worst);
}

// ---- 6 --------------------------------------------------------------------

void check_dirichlet(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto units = random_units(6, ctx.cfg.seed + 3);
  double worst_id = 0.0, worst_cross = 0.0, worst_orth = 0.0;
  std::mt19937_64 rng(ctx.cfg.seed + 4);
  for (int n = 1; n <= 64; ++n) {
    const auto f = SliceFunction::monomial(n);
    const double want = kPi * n;
    // quaternionic coefficients for the cross-slice part
    const Quaternion a = random_quaternion(rng), b = random_quaternion(rng);
    const auto fa = SliceFunction::monomial(n, a), fb = SliceFunction::monomial(n, b);
    std::vector<Quaternion> vals;
    for (const auto& i : units) {
      const auto d = dirichlet_inner(f, f, i, ctx.cfg.norm);
      t.low = t.low || d.low_confidence;
      const double e = std::max(std::abs(d.quadrature.w - want), std::abs(d.coefficients->w - want)) / want;
      worst_id = std::max(worst_id, e);
      vals.push_back(dirichlet_inner(fa, fb, i, ctx.cfg.norm).quadrature);
    }
    const double scale = 1.0 + vals[0].norm();
    for (const auto& v : vals) worst_cross = std::max(worst_cross, distance(v, vals[0]) / scale);
  }
  t.expect(worst_id <= ctx.cfg.tol_dirichlet, "<s^n, s^n> != pi n: " + fmt("%.3g", worst_id));
  t.expect(worst_cross <= ctx.cfg.tol_identity, "slices disagree: " + fmt("%.3g", worst_cross));
  std::vector<std::pair<int, int>> pairs;
  for (int n = 0; n <= 32; ++n)
    for (int m = 0; m <= 32; ++m)
      if (n != m) pairs.emplace_back(n, m);
  std::vector<double> orth(pairs.size(), 0.0);
  const auto i = units[0];
  parallel_for(static_cast<int>(pairs.size()), [&](int k) {
    const auto [n, m] = pairs[static_cast<std::size_t>(k)];
    orth[static_cast<std::size_t>(k)] =
        dirichlet_inner(SliceFunction::monomial(n), SliceFunction::monomial(m), i, ctx.cfg.norm).quadrature.norm();
  });
  worst_orth = *std::max_element(orth.begin(), orth.end());
  t.expect(worst_orth <= ctx.cfg.tol_identity, "orthogonality: " + fmt("%.3g", worst_orth));
  data = {{"worst_identity_rel", worst_id}, {"worst_cross_slice_rel", worst_cross}, {"worst_orthogonality", worst_orth},
          {"orthogonal_pairs", pairs.size()}};
  summary = "pi n rel err " + fmt("%.2g", worst_id) + ", cross-slice " + fmt("%.2g", worst_cross) +
            ", orthogonality " + fmt("%.2g", worst_orth);
}

// ---- 7 --------------------------------------------------------------------

void check_pairing(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const double tol = ctx.cfg.tol_identity;
  std::mt19937_64 rng(ctx.cfg.seed + 5);
  std::uniform_int_distribution<int> deg(0, 12);
  const auto cases_units = random_units(50, ctx.cfg.seed + 6);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Quaternion a = random_quaternion(rng), b = random_quaternion(rng);
    const int n = deg(rng), m = k % 3 == 0 ? n : deg(rng);
    const auto p = dual_pairing(SliceFunction::monomial(n, a), SliceFunction::monomial(m, b),
                                cases_units[static_cast<std::size_t>(k)], ctx.cfg.norm);
    t.low = t.low || p.low_confidence;
    const Quaternion want = n == m ? a.conj() * b : Quaternion();
    worst = std::max(worst, distance(p.quadrature, want) / (1.0 + want.norm()));
  }
  t.expect(worst <= tol, "pairing identity: " + fmt("%.3g", worst));
  const auto units = random_units(6, ctx.cfg.seed + 7);
  double worst_slice = 0.0;
  for (int c = 0; c < 5; ++c) {
    std::vector<Quaternion> fc, gc;
    for (int n = 0; n <= 8; ++n) {
      fc.push_back(random_quaternion(rng));
      gc.push_back(random_quaternion(rng));
    }
    const auto f = SliceFunction::polynomial(fc), g = SliceFunction::polynomial(gc);
    const auto ref = dual_pairing(f, g, units[0], ctx.cfg.norm);
    for (const auto& i : units) {
      const auto p = dual_pairing(f, g, i, ctx.cfg.norm);
      const double s = 1.0 + ref.coefficients->norm();
      worst_slice = std::max({worst_slice, distance(p.quadrature, ref.quadrature) / s,
                              distance(p.quadrature, *ref.coefficients) / s});
    }
  }
  t.expect(worst_slice <= tol, "slice dependence: " + fmt("%.3g", worst_slice));
  data = {{"worst_identity", worst}, {"worst_slice_spread", worst_slice}};
  summary = "50 cases worst " + fmt("%.2g", worst) + ", 6-unit spread " + fmt("%.2g", worst_slice);
}

// ---- 8 --------------------------------------------------------------------

void check_representation(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto units = random_units(6, ctx.cfg.seed + 8);
  std::mt19937_64 rng(ctx.cfg.seed + 9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Quaternion> pts;
  for (int k = 0; k < 100; ++k) {
    const Quaternion d = random_quaternion(rng);
    pts.push_back(d * (0.99 * std::pow(u(rng), 0.25) / d.norm()));
  }
  double worst = 0.0;
  int entries = 0;
  for (const auto& e : ctx.corpus()) {
    if (!e.f.is_series() || e.f.series().truncated) continue;
    ++entries;
    for (const auto& i : units) {
      const auto fi = restrict_to(e.f, i);
      for (const auto& x : pts) {
        const Quaternion want = e.f(x);
        const double err = distance(representation_formula(fi, x), want) / std::max(want.norm(), 1e-300);
        if (err > ctx.cfg.tol_identity) t.fail(e.id + ": " + fmt("%.3g", err));
        worst = std::max(worst, err);
      }
    }
  }
  data = {{"entries", entries}, {"points", pts.size()}, {"units", units.size()}, {"worst_rel", worst}};
  summary = std::to_string(entries) + " polynomial entries, worst rel err " + fmt("%.2g", worst);
}

// ---- 9 --------------------------------------------------------------------

void check_moebius(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto i = ImaginaryUnit::e1();
  const auto grid = default_a_grid();
  Json rows = Json::array();
  double worst = 0.0, worst_plain = 0.0;
  for (const char* id : {"mono_3", "poly_rand_a", "poly_rand_b", "moebius_a", "log_0.7@0.8"}) {
    const auto& f = corpus_entry(ctx.corpus(), id).f;
    const double plain_f = star_seminorm(f, i, grid, ctx.cfg.norm);
    double w = 0.0, wp = 0.0;
    for (const Complex& a : grid) {
      // sup over b of the composed function at b equals sup for f at T_a(b)
      std::vector<Complex> gf = grid, gg = grid;
      for (const Complex& b : grid) {
        gf.push_back(moebius_complex(a, b));
        gg.push_back(moebius_complex(-a, b));
      }
      const auto g = moebius_compose(f, MoebiusParam(embed(a, i), i));
      const double sf = star_seminorm(f, i, gf, ctx.cfg.norm);
      const double sg = star_seminorm(g, i, gg, ctx.cfg.norm);
      w = std::max(w, std::abs(sg - sf) / sf);
      wp = std::max(wp, std::abs(star_seminorm(g, i, grid, ctx.cfg.norm) - plain_f) / plain_f);
    }
    t.expect(w <= ctx.cfg.tol_moebius, std::string(id) + ": " + fmt("%.3g", w));
    worst = std::max(worst, w);
    worst_plain = std::max(worst_plain, wp);
    rows.push_back({{"id", id}, {"star", plain_f}, {"max_rel_dev", w}, {"max_rel_dev_fixed_grid", wp}});
  }
  data = {{"rows", rows}, {"grid_points", grid.size()}, {"worst", worst}, {"worst_fixed_grid", worst_plain}};
  summary = "5 functions x 37 maps, worst rel dev " + fmt("%.3g", worst) + " (fixed 37-point sup: " +
            fmt("%.3g", worst_plain) + ")";
}

// ---- 10 -------------------------------------------------------------------

void check_verdicts(Context& ctx, Tally& t, Json& data, std::string& summary) {
  ClassifyBudget b;
  b.arcs = ctx.cfg.arcs();
  b.norm = ctx.cfg.norm;
  b.carleson = ctx.cfg.carleson;
  b.n_spiral = ctx.cfg.n_spiral;
  Json rows = Json::array();
  int flags = 0;
  for (const auto& e : ctx.corpus()) {
    const auto c = classify(e, b);
    for (const auto& m : c.mismatches) t.fail(e.id + ": " + m);
    flags += static_cast<int>(c.flags.size());
    auto same = [&](const char* x, const char* y) {
      if (c.flags.count(x) && c.flags.count(y))
        t.expect(c.flags.at(x).value == c.flags.at(y).value, e.id + ": " + x + " vs " + y);
    };
    same("BMOSH", "mu_f_carleson");
    same("VMOSH", "mu_f_vanishing");
    if (e.gap) {
      same("H2", "BMOSH");
      same("H2", "VMOSH");
    }
    rows.push_back(to_json(c));
  }
  data = {{"classifications", rows}};
  summary = std::to_string(rows.size()) + " entries, " + std::to_string(flags) + " flags";
}

// ---- 11 -------------------------------------------------------------------

void check_decomposition(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto& p = corpus_entry(ctx.corpus(), "poly_rand_a").f;
  const auto& mb = corpus_entry(ctx.corpus(), "moebius_a").f;
  const std::vector<std::pair<MeasureKind, const SliceFunction*>> cases{
      {MeasureKind::Lambda4, &p}, {MeasureKind::MuF, &p}, {MeasureKind::NuF, &p}, {MeasureKind::NaiveMuF, &p},
      {MeasureKind::MuF, &mb}};
  auto imag2 = [](const Quaternion& q) { return q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3; };
  const std::vector<std::function<double(const Quaternion&)>> integrands{
      [](const Quaternion&) { return 1.0; },
      [&](const Quaternion& q) { return q.w * q.w + 0.5 * q.x1 + 0.3 * imag2(q); },
      [](const Quaternion& q) { return (1 + q.w) * (1 + 0.5 * q.x2 * q.x3 + 0.2 * q.x1); }};
  Json rows = Json::array();
  double worst = 0.0;
  for (const auto& [kind, f] : cases) {
    const auto m = function_measure(kind, *f, ctx.cfg.carleson);
    const auto df = f->derivative();
    const auto direct = ball_integrals([&](const Quaternion& q) { return function_density(kind, df, q); }, integrands);
    for (std::size_t k = 0; k < integrands.size(); ++k) {
      const double dec = decomposed_integral(m, integrands[k]);
      const double e = std::abs(dec - direct[k]) / std::abs(direct[k]);
      t.expect(e <= ctx.cfg.tol_decomposition, to_string(kind) + " integrand " + std::to_string(k) + ": " + fmt("%.3g", e));
      worst = std::max(worst, e);
      rows.push_back({{"measure", to_string(kind)}, {"integrand", k}, {"decomposed", dec}, {"direct", direct[k]}});
    }
  }
  const double vol = decomposed_integral(lambda4_measure(), [](const Quaternion&) { return 1.0; });
  const double ve = std::abs(vol - kPi * kPi / 2) / (kPi * kPi / 2);
  t.expect(ve <= ctx.cfg.tol_decomposition, "lambda4 volume: " + fmt("%.3g", ve));
  data = {{"rows", rows}, {"worst_rel", worst}, {"lambda4_volume", vol}};
  summary = "15 (measure, integrand) pairs, worst rel " + fmt("%.2g", worst) + ", lambda4 volume rel err " +
            fmt("%.2g", ve);
}

// ---- 12 -------------------------------------------------------------------

void check_sc_bound(Context& ctx, Tally& t, Json& data, std::string& summary) {
  const auto& cc = ctx.cfg.carleson;
  std::vector<std::pair<std::string, SliceDecomposedMeasure>> ms;
  std::vector<std::vector<ImaginaryUnit>> unit_sets;
  Json skipped = Json::array();
  const auto sym = symmetric_units(10);
  ms.emplace_back("lambda4", lambda4_measure());
  unit_sets.push_back(sym);
  for (const auto& e : ctx.corpus()) {
    try {
      ms.emplace_back("mu_f(" + e.id + ")", function_measure(MeasureKind::MuF, e.f, cc));
      unit_sets.push_back(sym);
    } catch (const Error& err) {
      skipped.push_back({{"measure", "mu_f(" + e.id + ")"}, {"reason", err.what()}});
    }
  }
  ms.emplace_back("naive_mu_f(inv_sqrt)", function_measure(MeasureKind::NaiveMuF, inv_sqrt_one_plus_s(), cc));
  unit_sets.push_back(sym);
  {
    const auto ex = pointmass_example(100000);
    std::vector<ImaginaryUnit> u;
    for (int n = 2; n <= 4097; ++n) u.push_back(example_unit(n));
    ms.emplace_back("pointmass_example", ex.measure);
    unit_sets.push_back(u);
  }
  Json rows = Json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const auto& [name, m] = ms[k];
    const auto g = grid_for(m, cc);
    const auto global = carleson_constant(m, g, cc);
    const auto sl = slice_carleson_constant(m, g, unit_sets[k], cc);
    const double bound = (1.0 + m.nu_total()) * sl.uniform_constant;
    const double ratio = bound > 0 ? global.constant / bound : (global.constant > 0 ? INFINITY : 0.0);
    t.expect(global.constant <= bound * (1.0 + ctx.cfg.tol_sc), name + ": global " + fmt("%.6g", global.constant) +
                                                                 " > bound " + fmt("%.6g", bound));
    worst = std::max(worst, ratio);
    rows.push_back({{"measure", name}, {"global", number(global.constant)}, {"uniform_slice", number(sl.uniform_constant)},
                    {"nu_total", number(m.nu_total())}, {"ratio", number(ratio)}});
  }
  data = {{"rows", rows}, {"skipped", skipped}, {"worst_ratio", number(worst)}};
  summary = std::to_string(ms.size()) + " measures, max global / ((1 + nu) U) " + fmt("%.4g", worst) + ", " +
            std::to_string(skipped.size()) + " skipped (mu_f undefined)";
}

struct Entry {
  SuiteCheck check;
  Body body;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e{
      {{1, "pointmass-example", "point-mass counterexample", 10.0}, check_pointmass},
      {{2, "inv-sqrt", "1/sqrt(1+s) counterexample", 60.0}, check_inv_sqrt},
      {{3, "bmo-factor2", "slice <= global <= 2 slice", 300.0}, check_factor2},
      {{4, "sandwich", "component sandwich, BMO and Hardy", 0.0}, check_sandwich},
      {{5, "parseval", "Hardy quadrature vs coefficients", 0.0}, check_parseval},
      {{6, "dirichlet", "Dirichlet identities", 0.0}, check_dirichlet},
      {{7, "pairing", "pairing identity and slice independence", 0.0}, check_pairing},
      {{8, "representation", "representation formula", 0.0}, check_representation},
      {{9, "moebius-invariance", "star seminorm under T_a", 0.0}, check_moebius},
      {{10, "verdict-matrix", "classification and equivalences", 0.0}, check_verdicts},
      {{11, "decomposition", "decomposed vs direct ball integrals", 0.0}, check_decomposition},
      {{12, "sc-implies-c", "global <= (1 + nu) uniform slice constant", 0.0}, check_sc_bound},
  };
  return e;
}

}  // namespace

const std::vector<SuiteCheck>& suite_checks() {
  static const std::vector<SuiteCheck> c = [] {
    std::vector<SuiteCheck> v;
    for (const auto& e : entries()) v.push_back(e.check);
    return v;
  }();
  return c;
}

std::vector<CheckResult> run_suite(const RunConfig& cfg, const std::vector<std::string>& only,
                                   const std::function<void(const CheckResult&)>& on_done) {
  std::vector<const Entry*> todo;
  for (const auto& e : entries()) {
    const bool pick = only.empty() || std::any_of(only.begin(), only.end(), [&](const std::string& s) {
                        return s == e.check.id || s == std::to_string(e.check.number);
                      });
    if (pick) todo.push_back(&e);
  }
  for (const auto& s : only) {
    const bool known = std::any_of(entries().begin(), entries().end(), [&](const Entry& e) {
      return s == e.check.id || s == std::to_string(e.check.number);
    });
    if (!known) throw Error(ErrorCode::InvalidInput, "unknown check \"" + s + "\"");
  }
  Context ctx{cfg, std::nullopt};
  std::vector<CheckResult> out;
  for (const Entry* e : todo) {
    ctx.corpus();  // built once, outside the timings
    CheckResult r;
    r.number = e->check.number;
    r.id = e->check.id;
    r.title = e->check.title;
    r.time_limit = e->check.time_limit;
    Tally t;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e->body(ctx, t, r.data, r.summary);
    } catch (const std::exception& ex) {
      t.fail(std::string("exception: ") + ex.what());
      r.summary = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.time_limit > 0 && r.seconds > r.time_limit)
      t.fail("runtime " + fmt("%.1f", r.seconds) + " s over " + fmt("%.0f", r.time_limit) + " s");
    r.passed = t.ok;
    r.low_confidence = t.low;
    if (!t.failures.empty()) r.data["failures"] = t.failures;
    if (on_done) on_done(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string summary_line(const CheckResult& r) {
  std::string s = r.passed ? (r.low_confidence ? "[PASS*]" : "[PASS] ") : "[FAIL] ";
  char buf[64];
  std::snprintf(buf, sizeof buf, " %2d %-19s ", r.number, r.id.c_str());
  s += buf;
  s += r.summary;
  std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
  s += buf;
  if (!r.passed && r.data.contains("failures") && !r.data["failures"].empty())
    s += " first failure: " + r.data["failures"][0].get<std::string>();
  return s;
}

Json to_json(const CheckResult& r) {
  // wall time stays out so reports are reproducible
  return {{"number", r.number}, {"id", r.id}, {"title", r.title}, {"passed", r.passed},
          {"low_confidence", r.low_confidence}, {"time_limit", r.time_limit}, {"summary", r.summary},
          {"data", r.data}};
}

}  // namespace qsh
