#include "qsh/corpus.hpp"

#include <cmath>
#include <random>

namespace qsh {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

bool CorpusEntry::is_polynomial() const {
  return !gap && f.is_series() && !f.series().truncated && std::isinf(f.series().r_max);
}

TruncationLadder CorpusEntry::truncations() const {
  if (!gap) return {};
  const GapData g = *gap;
  return [g](int L) {
    std::vector<int> ex;
    std::vector<Quaternion> c;
    for (int l = 0; l <= L && l < static_cast<int>(g.exponents.size()); ++l) {
      ex.push_back(static_cast<int>(g.exponents[static_cast<std::size_t>(l)]));
      c.push_back(g.coeffs[static_cast<std::size_t>(l)]);
    }
    return gap_series(ex, c);
  };
}

namespace {

using Flags = std::map<std::string, Expected>;

Expected Y(std::string note) { return {Verdict::Yes, std::move(note)}; }
Expected N(std::string note) { return {Verdict::No, std::move(note)}; }

Flags all_yes(const std::string& why) {
  Flags f;
  for (const auto& k : kMembershipFlags) f[k] = Y(why);
  f["mu_f_carleson"] = Y("bounded density (1 - |z|^2)|f'|^2 on each slice");
  f["mu_f_vanishing"] = Y("bounded density: box mass is O(h^2)");
  return f;
}

Json qjson_list(const std::vector<Quaternion>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

CorpusEntry make(std::string id, Json spec, Flags flags) {
  CorpusEntry e;
  e.id = std::move(id);
  e.f = function_from_json(spec);
  e.spec = std::move(spec);
  e.flags = std::move(flags);
  return e;
}

Json dilation(double r, const Json& of) { return {{"type", "dilation"}, {"r", r}, {"of", of}}; }

}  // namespace

std::vector<CorpusEntry> build_corpus(const CorpusConfig& cfg) {
  std::vector<CorpusEntry> out;
  const std::string smooth = "polynomial: smooth up to the boundary";

  out.push_back(make("const_real", {{"type", "constant"}, {"value", 1.0}}, all_yes("constant: every seminorm vanishes")));
  out.push_back(make("const_quat", {{"type", "constant"}, {"value", to_json(Quaternion(0.3, 0, 0.4, 0))}},
                     all_yes("constant: every seminorm vanishes")));
  out.push_back(make("mono_1", {{"type", "monomial"}, {"n", 1}}, all_yes(smooth)));
  out.push_back(make("mono_3", {{"type", "monomial"}, {"n", 3}, {"a", to_json(Quaternion(0.2, -0.5, 0.1, 0.7))}},
                     all_yes(smooth)));
  out.push_back(make("mono_8", {{"type", "monomial"}, {"n", 8}, {"a", to_json(Quaternion::e3())}}, all_yes(smooth)));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> g;
  for (const auto& [id, deg] : std::vector<std::pair<std::string, int>>{{"poly_rand_a", 5}, {"poly_rand_b", 9}}) {
    std::vector<Quaternion> c;
    double n2 = 0.0;
    for (int n = 0; n <= deg; ++n) {
      c.emplace_back(g(rng), g(rng), g(rng), g(rng));
      n2 += c.back().norm2();
    }
    for (auto& q : c) q = q / std::sqrt(n2);  // unit H2 norm
    out.push_back(make(id, {{"type", "power_series"}, {"coeffs", qjson_list(c)}}, all_yes(smooth)));
  }

  auto log_flags = [] {
    Flags f;
    f["H1"] = Y("contained in H2");
    f["H2"] = Y("coefficients 1/n are square summable");
    f["BMOSH"] = Y("log 1/|1 - z| has bounded mean oscillation on the circle; each slice is a combination of two such");
    f["VMOSH"] = N("oscillation of log on arcs centred at the singular point does not shrink with the arc (scale invariance)");
    f["Bloch"] = Y("(1 - |z|^2)/|1 - e^{ia} z| <= 2");
    f["littleBloch"] = N("(1 - r^2)/(1 - r) -> 2 along the radius to the singular point");
    f["Dirichlet"] = N("sum n |1/n|^2 diverges");
    f["mu_f_carleson"] = Y("same answer as BMOSH");
    f["mu_f_vanishing"] = N("same answer as VMOSH");
    return f;
  };
  const std::vector<std::tuple<std::string, double, Quaternion>> logs{
      {"log_0", 0.0, Quaternion::e1()}, {"log_0.7", 0.7, Quaternion(0, 0, 1, 1)}, {"log_2.1", 2.1, Quaternion::e3()}};
  for (const auto& [id, a, u] : logs) {
    auto flags = log_flags();
    if (id == "log_0.7") flags["naive_mu_f_carleson"] = Y("(1 - |z|)^2 |f'|^2 <= 1");
    out.push_back(make(id, {{"type", "log_alpha"}, {"alpha", a}, {"unit", to_json(ImaginaryUnit(u).q())}}, flags));
  }

  {
    Flags f;
    f["H1"] = Y("integral of |1 + e^{it}|^{-1/2} is finite");
    f["H2"] = N("integral of |1 + e^{it}|^{-1} diverges");
    f["BMOSH"] = N("BMO is contained in H2");
    f["VMOSH"] = N("not in BMO");
    f["Bloch"] = N("(1 - r^2)|f'(-r)| grows like (1 - r)^{-1/2}");
    f["littleBloch"] = N("not Bloch");
    f["Dirichlet"] = N("not in H2");
    f["mu_f_carleson"] = N("same answer as BMOSH");
    f["mu_f_vanishing"] = N("not Carleson");
    f["naive_mu_f_carleson"] = Y("naive density bounded by (2 cos t - r) sin^2 t / 4 around -1");
    out.push_back(make("inv_sqrt", {{"type", "inv_sqrt_one_plus_s"}}, f));
  }

  // Hadamard gaps n_l = 2^l
  auto gap_entry = [&](const std::string& id, double decay, Flags flags) {
    GapData gd;
    gd.alpha = 2.0;
    gd.l_max = cfg.gap_levels;
    std::vector<int> ex;
    for (int l = 0; l <= cfg.gap_levels; ++l) {
      gd.exponents.push_back(1LL << l);
      ex.push_back(1 << l);
      gd.coeffs.push_back(std::pow(decay, l) * Quaternion(std::cos(l), 0.0, std::sin(l), 0.0));
    }
    auto e = make(id, {{"type", "gap_series"}, {"exponents", ex}, {"coeffs", qjson_list(gd.coeffs)}}, std::move(flags));
    e.gap = gd;
    return e;
  };
  {
    Flags f;
    f["H1"] = Y("lacunary series: Hp membership is square summability");
    f["H2"] = Y("sum 2^{-l} converges");
    f["BMOSH"] = Y("Hadamard gaps: BMO iff square summable");
    f["VMOSH"] = Y("Hadamard gaps: VMO iff square summable");
    f["Bloch"] = Y("lacunary: Bloch iff bounded coefficients");
    f["littleBloch"] = Y("lacunary: little Bloch iff coefficients tend to 0");
    f["Dirichlet"] = N("sum 2^l 2^{-l} diverges");
    f["mu_f_carleson"] = Y("same answer as BMOSH");
    f["mu_f_vanishing"] = Y("same answer as VMOSH");
    out.push_back(gap_entry("gap_half", std::sqrt(0.5), f));
  }
  {
    Flags f;
    f["H1"] = N("lacunary series: Hp membership is square summability");
    f["H2"] = N("coefficients do not tend to 0");
    f["BMOSH"] = N("Hadamard gaps: BMO iff square summable");
    f["VMOSH"] = N("not in BMO");
    f["Bloch"] = Y("lacunary: Bloch iff bounded coefficients");
    f["littleBloch"] = N("coefficients do not tend to 0");
    f["Dirichlet"] = N("not in H2");
    f["mu_f_carleson"] = N("same answer as BMOSH");
    f["mu_f_vanishing"] = N("not Carleson");
    out.push_back(gap_entry("gap_flat", 1.0, f));
  }

  const Json m_a = {{"type", "moebius"}, {"a", to_json(Quaternion(0.3, 0.4, 0, 0))}, {"unit", to_json(Quaternion::e1())}};
  const Json m_b = {{"type", "moebius"}, {"a", to_json(Quaternion(0, 0, 0.5, 0))}, {"unit", to_json(Quaternion::e2())}};
  const Json m_c = {{"type", "moebius"}, {"a", -0.6}, {"unit", to_json(Quaternion::e3())}};
  const std::string bounded = "disc automorphism: bounded with bounded derivative";
  out.push_back(make("moebius_a", m_a, all_yes(bounded)));
  out.push_back(make("moebius_b", m_b, all_yes(bounded)));
  out.push_back(make("moebius_c", m_c, all_yes(bounded)));

  const std::string dil = "f(rs), r < 1: holomorphic on a larger disc";
  auto spec_of = [&](const std::string& id) { return corpus_entry(out, id).spec; };
  out.push_back(make("poly_rand_a@0.5", dilation(0.5, spec_of("poly_rand_a")), all_yes(dil)));
  out.push_back(make("log_0.7@0.8", dilation(0.8, spec_of("log_0.7")), all_yes(dil)));
  out.push_back(make("inv_sqrt@0.9", dilation(0.9, spec_of("inv_sqrt")), all_yes(dil)));
  out.push_back(make("gap_flat@0.9", dilation(0.9, spec_of("gap_flat")), all_yes(dil)));
  out.push_back(make("moebius_a@0.9", dilation(0.9, m_a), all_yes(dil)));
  return out;
}

const CorpusEntry& corpus_entry(const std::vector<CorpusEntry>& corpus, const std::string& id) {
  for (const auto& e : corpus)
    if (e.id == id) return e;
  throw Error(ErrorCode::InvalidInput, "no corpus entry \"" + id + "\"");
}

// ---- classification ------------------------------------------------------------

namespace {

Verdict yn(bool b) { return b ? Verdict::Yes : Verdict::No; }

struct MuF {
  bool carleson = false;
  bool vanishing = false;
  double constant = INFINITY;
  std::string method;
};

MuF mu_f_standard(MeasureKind kind, const SliceFunction& f, const CarlesonConfig& cfg) {
  MuF out;
  try {
    const auto m = function_measure(kind, f, cfg);
    const auto rep = carleson_constant(m, grid_for(m, cfg), cfg);
    out.carleson = rep.carleson;
    out.vanishing = rep.vanishing;
    out.constant = rep.constant;
    out.method = "box grid";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DivergentIntegral) throw;
    out.method = "C(i) diverges";
  }
  return out;
}

/// Truncations L = 4..l_max for the constant; the vanishing profile is read off
/// the deepest truncation on rungs it resolves (h >= 2^{2 - l_max}).
MuF mu_f_gap(const CorpusEntry& e, const CarlesonConfig& cfg) {
  MuF out;
  const auto t = carleson_truncation_verdict(MeasureKind::MuF, e.truncations(), e.gap->l_max, cfg);
  out.carleson = t.carleson;
  out.constant = t.constants.empty() ? 0.0 : t.constants.back();
  const auto m = function_measure(MeasureKind::MuF, e.f, cfg);
  const auto rep = carleson_constant(m, grid_for(m, cfg), cfg);
  std::vector<double> p;
  for (std::size_t k = 0; k < rep.h.size(); ++k) {
    int ex = 0;
    if (std::frexp(rep.h[k], &ex) == 0.5 && 1 - ex <= e.gap->l_max - 2) p.push_back(rep.profile[k]);
  }
  out.vanishing = out.carleson && profile_vanishing(p);
  out.method = "truncation ladder";
  return out;
}

}  // namespace

Classification classify(const CorpusEntry& e, const ClassifyBudget& b) {
  Classification c;
  c.id = e.id;
  auto wanted = [&](const std::string& k) {
    const auto it = e.flags.find(k);
    return it != e.flags.end() && it->second.value != Verdict::Unknown;
  };
  auto set = [&](const std::string& k, bool v, std::string method, double number = 0.0) {
    if (wanted(k)) c.flags[k] = {yn(v), std::move(method), number};
  };
  const auto units = default_units(b.n_spiral);

  std::optional<GapClassification> gap;
  if (e.gap) gap = gap_series_check(e.gap->exponents, e.gap->coeffs, e.gap->alpha);

  // Hardy
  if (gap) {
    set("H1", gap->in_h2, "gap coefficients", gap->decay_exponent);
    set("H2", gap->in_h2, "gap coefficients", gap->decay_exponent);
  } else {
    for (const auto& [k, p] : std::vector<std::pair<std::string, double>>{{"H1", 1.0}, {"H2", 2.0}}) {
      if (!wanted(k)) continue;
      const auto r = hardy_norm(e.f, p, units, b.norm);
      set(k, !r.diverged, "radial ladder", r.value);
    }
  }

  // BMO / VMO
  bool bmo = false;
  if (wanted("BMOSH") || wanted("VMOSH")) {
    const auto v = e.gap ? bmo_verdict(e.f, b.arcs, e.truncations(), e.gap->l_max) : bmo_verdict(e.f, b.arcs);
    bmo = v.finite;
    set("BMOSH", bmo, e.gap ? "truncation ladder" : "radius ladder", v.value);
    if (gap) {
      set("VMOSH", bmo && gap->in_vmo, "gap coefficients");
    } else {
      const auto vm = vmo_verdict(e.f, b.arcs);
      set("VMOSH", bmo && vm.vmo, "modulus by arc level", vm.modulus.empty() ? 0.0 : vm.modulus.back());
    }
  }

  // Bloch
  if (wanted("Bloch") || wanted("littleBloch")) {
    if (gap) {
      std::vector<double> ladder;
      const auto tr = e.truncations();
      for (int L = 4; L <= e.gap->l_max; ++L) ladder.push_back(bloch_norm(tr(L), units, b.norm).value);
      const bool bloch = !profile_unbounded(ladder);
      set("Bloch", bloch, "truncation ladder", ladder.back());
      set("littleBloch", bloch && gap->decay_exponent > 0.0, "gap coefficients", gap->decay_exponent);
    } else {
      const auto r = bloch_norm(e.f, units, b.norm);
      const auto v = bloch_verdict(r);
      set("Bloch", v.bloch, "radius ladder", r.value);
      set("littleBloch", v.little_bloch, "radius ladder", r.ladder.empty() ? 0.0 : r.ladder.back());
    }
  }

  // Dirichlet
  if (wanted("Dirichlet")) {
    if (gap) {
      std::vector<double> ladder;
      const auto tr = e.truncations();
      for (int L = 4; L <= e.gap->l_max; ++L) ladder.push_back(dirichlet_energy(tr(L), ImaginaryUnit::e1(), b.norm));
      set("Dirichlet", !ladder_diverges(ladder), "truncation ladder", ladder.back());
    } else {
      try {
        set("Dirichlet", true, "radius ladder", dirichlet_energy(e.f, ImaginaryUnit::e1(), b.norm));
      } catch (const Error& err) {
        if (err.code() != ErrorCode::DivergentIntegral) throw;
        set("Dirichlet", false, "radius ladder", INFINITY);
      }
    }
  }

  // measures built from f
  if (wanted("mu_f_carleson") || wanted("mu_f_vanishing")) {
    const auto m = e.gap ? mu_f_gap(e, b.carleson) : mu_f_standard(MeasureKind::MuF, e.f, b.carleson);
    set("mu_f_carleson", m.carleson, m.method, m.constant);
    set("mu_f_vanishing", m.vanishing, m.method, m.constant);
  }
  if (wanted("naive_mu_f_carleson")) {
    const auto m = mu_f_standard(MeasureKind::NaiveMuF, e.f, b.carleson);
    set("naive_mu_f_carleson", m.carleson, m.method, m.constant);
  }

  for (const auto& [k, v] : c.flags)
    if (v.value != e.flags.at(k).value) c.mismatches.push_back(k);
  return c;
}

Json to_json(const CorpusEntry& e) {
  Json j;
  j["id"] = e.id;
  j["spec"] = e.spec;
  Json flags = Json::object();
  for (const auto& [k, v] : e.flags) flags[k] = {{"expected", to_string(v.value)}, {"note", v.note}};
  j["flags"] = flags;
  return j;
}

Json to_json(const Classification& c) {
  Json j;
  j["id"] = c.id;
  Json flags = Json::object();
  for (const auto& [k, v] : c.flags)
    flags[k] = {{"computed", to_string(v.value)}, {"method", v.method}, {"value", number(v.number)}};
  j["flags"] = flags;
  j["mismatches"] = c.mismatches;
  return j;
}

}  // namespace qsh
