#include "qsh/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "qsh/config.hpp"
#include "qsh/corpus.hpp"
#include "qsh/moebius.hpp"
#include "qsh/parallel.hpp"
#include "qsh/suite.hpp"

namespace qsh {

namespace {

struct Common {
  std::string config_path;
  std::string out;
  std::string csv;
  int threads = -1;
  long long seed = -1;
};

RunConfig resolve(const Common& c) {
  RunConfig cfg;
  std::string path = c.config_path;
  if (path.empty())
    if (const char* env = std::getenv("QSH_CONFIG")) path = env;
  if (!path.empty()) cfg = load_config(path);
  if (c.threads >= 0) cfg.threads = c.threads;
  if (c.seed >= 0) cfg.seed = static_cast<unsigned>(c.seed);
  if (!c.out.empty()) cfg.out = c.out;
  cfg.validate();
  set_thread_count(cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  return cfg;
}

Json envelope(const std::string& command, const RunConfig& cfg) {
  Json j;
  j["command"] = command;
  j["config"] = to_json(cfg);
  j["config_text"] = config_text(cfg);
  return j;
}

void emit(const Json& j, const RunConfig& cfg) {
  if (cfg.out.empty()) std::cout << j.dump(2) << '\n';
  else write_json_file(cfg.out, j);
}

void write_csv(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << header << '\n';
  out.precision(17);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
    out << '\n';
  }
}

std::vector<ImaginaryUnit> slice_units(const SliceDecomposedMeasure& m, const RunConfig& cfg, std::size_t cap) {
  if (m.is_density()) return symmetric_units(2 * cfg.n_spiral + 2);
  std::vector<ImaginaryUnit> u;
  for (const auto& s : m.slices()) {
    if (u.size() >= cap) break;
    u.push_back(s.unit);
  }
  return u;
}

// ---- norm --------------------------------------------------------------------

int cmd_norm(const RunConfig& cfg, const std::string& space, double p, const std::string& function_path,
             const std::string& csv) {
  const Json spec = read_json_file(function_path);
  const SliceFunction f = function_from_json(spec);
  const auto units = default_units(cfg.n_spiral);
  NormReport rep;
  if (space == "hardy") {
    rep = hardy_norm(f, p, units, cfg.norm);
  } else if (space == "bmo") {
    rep = bmo_seminorm_global(f, units, cfg.arcs());
    const auto v = bmo_verdict(f, cfg.arcs());
    rep.diverged = !v.finite;
    rep.ladder = v.ladder;
    rep.extra["bmo_norm"] = f(Quaternion()).norm() + rep.value;
    if (rep.diverged) rep.value = INFINITY;
  } else if (space == "vmo") {
    const auto v = vmo_verdict(f, cfg.arcs());
    rep.space = "vmo";
    rep.value = v.modulus.empty() ? 0.0 : std::sqrt(v.modulus.back());
    rep.ladder = v.modulus;
    rep.extra["vmo"] = v.vmo ? 1.0 : 0.0;
    rep.extra["threshold"] = kVmoThreshold;
  } else if (space == "bloch") {
    rep = bloch_norm(f, units, cfg.norm);
    const auto v = bloch_verdict(rep);
    rep.diverged = !v.bloch;
    rep.extra["little_bloch"] = v.little_bloch ? 1.0 : 0.0;
  } else if (space == "dirichlet") {
    rep.space = "dirichlet";
    for (const auto& i : units) {
      SliceValue sv;
      sv.unit = i;
      try {
        sv.value = dirichlet_energy(f, i, cfg.norm);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DivergentIntegral) throw;
        sv.value = INFINITY;
        sv.diverged = true;
      }
      rep.diverged = rep.diverged || sv.diverged;
      rep.value = std::max(rep.value, sv.value);
      rep.per_slice.push_back(sv);
    }
  } else if (space == "star") {
    rep.space = "star";
    for (const auto& i : units) {
      SliceValue sv;
      sv.unit = i;
      sv.value = star_seminorm(f, i, default_a_grid(), cfg.norm);
      rep.value = std::max(rep.value, sv.value);
      rep.per_slice.push_back(sv);
    }
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown space \"" + space + "\"");
  }
  Json j = envelope("norm", cfg);
  j["function"] = spec;
  j["p"] = p;
  j["report"] = to_json(rep);
  emit(j, cfg);
  if (!csv.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < rep.ladder.size(); ++k) rows.push_back({static_cast<double>(k), rep.ladder[k]});
    write_csv(csv, "rung,value", rows);
  }
  return rep.diverged ? kExitDivergent : kExitOk;
}

// ---- carleson / decompose -----------------------------------------------------

int cmd_carleson(const RunConfig& cfg, const std::string& measure_path, bool slices, std::size_t max_units,
                 const std::string& csv) {
  const Json spec = read_json_file(measure_path);
  const auto m = measure_from_json(spec, cfg.carleson);
  const auto g = grid_for(m, cfg.carleson);
  const auto rep = carleson_constant(m, g, cfg.carleson);
  Json j = envelope("carleson", cfg);
  j["measure"] = spec;
  j["report"] = to_json(rep);
  if (slices) {
    const auto units = slice_units(m, cfg, max_units);
    const auto s = slice_carleson_constant(m, g, units, cfg.carleson);
    j["slices"] = to_json(s);
    j["slice_units_used"] = units.size();
    j["slice_units_total"] = m.is_density() ? units.size() : m.slices().size();
    j["bound_check"] = {{"nu_total", number(m.nu_total())},
                        {"bound", number((1.0 + m.nu_total()) * s.uniform_constant)},
                        {"holds", rep.constant <= (1.0 + m.nu_total()) * s.uniform_constant * (1.0 + cfg.tol_sc)}};
  }
  emit(j, cfg);
  if (!csv.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < rep.h.size(); ++k)
      for (std::size_t t = 0; t < rep.theta[k].size(); ++t) rows.push_back({rep.h[k], rep.theta[k][t], rep.ratio[k][t]});
    write_csv(csv, "h,theta0,ratio", rows);
  }
  return kExitOk;
}

int cmd_decompose(const RunConfig& cfg, const std::string& measure_path, std::size_t max_slices) {
  const Json spec = read_json_file(measure_path);
  const auto m = measure_from_json(spec, cfg.carleson);
  Json j = envelope("decompose", cfg);
  j["measure"] = spec;
  j["name"] = m.name();
  j["is_density"] = m.is_density();
  j["mu_r_total"] = number(m.mu_r_total());
  j["nu_total"] = number(m.nu_total());
  Json mr = Json::array();
  for (const auto& a : m.mu_r()) {
    if (mr.size() >= max_slices) break;
    mr.push_back({{"x", a.x}, {"mass", a.mass}});
  }
  j["mu_r"] = mr;
  Json sl = Json::array();
  if (m.is_density()) {
    for (const auto& i : symmetric_units(2 * cfg.n_spiral + 2))
      sl.push_back({{"unit", to_json(i.q())}, {"c", number(m.c_of(i))}});
  } else {
    for (const auto& s : m.slices()) {
      if (sl.size() >= max_slices) break;
      double mass = 0.0;
      for (const auto& a : s.atoms) mass += a.mass;
      sl.push_back({{"unit", to_json(s.unit.q())}, {"nu_mass", s.nu_mass}, {"atoms", s.atoms.size()}, {"mass", mass}});
    }
  }
  j["slices"] = sl;
  j["slices_listed"] = sl.size();
  j["slices_total"] = m.is_density() ? sl.size() : m.slices().size();
  j["total_mass_decomposed"] = number(decomposed_integral(m, [](const Quaternion&) { return 1.0; }));
  emit(j, cfg);
  return kExitOk;
}

// ---- moebius-check ----------------------------------------------------------

int cmd_moebius(const RunConfig& cfg, const std::string& a_text, const std::string& i_text) {
  const auto a = quaternion_from_json(Json::parse(a_text));
  const auto i = i_text.empty() ? ImaginaryUnit::e1() : unit_from_json(Json::parse(i_text));
  const auto c = moebius_check(MoebiusParam(a, i));
  Json j = envelope("moebius-check", cfg);
  j["a"] = to_json(a);
  j["i"] = to_json(i.q());
  j["samples"] = c.samples;
  j["max_verbatim_minus_ref"] = number(c.max_verbatim_minus_ref);
  j["max_verbatim_plus_ref"] = number(c.max_verbatim_plus_ref);
  j["max_verbatim_vs_neg_ref_neg_a"] = number(c.max_verbatim_vs_neg_ref_neg_a);
  j["max_verbatim_vs_two_a0"] = number(c.max_verbatim_vs_two_a0);
  j["circle_modulus_dev_verbatim"] = number(c.circle_modulus_dev_verbatim);
  j["circle_modulus_dev_ref"] = number(c.circle_modulus_dev_ref);
  j["singular_samples"] = c.singular_samples;
  j["relationships"] = c.relationships;
  emit(j, cfg);
  return kExitOk;
}

// ---- corpus -----------------------------------------------------------------

int cmd_corpus_list(const RunConfig& cfg) {
  const auto corpus = build_corpus({cfg.seed, 12});
  Json arr = Json::array();
  for (const auto& e : corpus) arr.push_back(to_json(e));
  Json j = envelope("corpus list", cfg);
  j["entries"] = arr;
  emit(j, cfg);
  return kExitOk;
}

int cmd_corpus_classify(const RunConfig& cfg, const std::vector<std::string>& ids) {
  const auto corpus = build_corpus({cfg.seed, 12});
  ClassifyBudget b;
  b.arcs = cfg.arcs();
  b.norm = cfg.norm;
  b.carleson = cfg.carleson;
  b.n_spiral = cfg.n_spiral;
  Json arr = Json::array();
  int mismatches = 0;
  for (const auto& e : corpus) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), e.id) == ids.end()) continue;
    const auto c = classify(e, b);
    mismatches += static_cast<int>(c.mismatches.size());
    std::fprintf(stderr, "%-16s %s\n", e.id.c_str(),
                 c.mismatches.empty() ? "ok" : ("mismatch: " + c.mismatches.front()).c_str());
    arr.push_back(to_json(c));
  }
  for (const auto& id : ids) corpus_entry(corpus, id);  // unknown ids are input errors
  Json j = envelope("corpus classify", cfg);
  j["classifications"] = arr;
  j["mismatches"] = mismatches;
  emit(j, cfg);
  return mismatches == 0 ? kExitOk : kExitInput;
}

// ---- suite ------------------------------------------------------------------

int cmd_suite(const RunConfig& base, const std::vector<std::string>& only, double scale) {
  const RunConfig cfg = scale == 1.0 ? base : base.scaled(scale);
  int failed = 0, low = 0;
  const auto results = run_suite(cfg, only, [&](const CheckResult& r) {
    failed += r.passed ? 0 : 1;
    low += r.passed && r.low_confidence ? 1 : 0;
    std::printf("%s\n", summary_line(r).c_str());
    std::fflush(stdout);
  });
  Json arr = Json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  Json j = envelope("suite", cfg);
  j["budget_scale"] = scale;
  j["checks"] = arr;
  j["failed"] = failed;
  j["low_confidence"] = low;
  if (!cfg.out.empty()) write_json_file(cfg.out, j);
  std::printf("%zu checks, %d failed, %d low-confidence\n", results.size(), failed, low);
  if (low > 0 && failed == 0) std::fprintf(stderr, "warning: %d checks passed with low confidence\n", low);
  return failed == 0 ? kExitOk : kExitInput;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"quaternionic slice function spaces: norms, Carleson measures, corpus and checks"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", common.config_path, "key = value config file (default: $QSH_CONFIG)");
    s->add_option("--out", common.out, "report path (default: stdout)");
    s->add_option("--threads", common.threads, "worker threads, 0 = hardware");
    s->add_option("--seed", common.seed, "seed for sampled units and the corpus");
  };

  std::string space, function_path, measure_path, a_text, i_text;
  double p = 2.0, scale = 1.0;
  bool slices = false;
  std::size_t max_slices = 1000, max_units = 4096;
  std::vector<std::string> only, ids;

  auto* norm = app.add_subcommand("norm", "norm or seminorm of a function spec");
  norm->add_option("--space", space, "hardy|bmo|vmo|bloch|dirichlet|star")
      ->required()
      ->check(CLI::IsMember({"hardy", "bmo", "vmo", "bloch", "dirichlet", "star"}));
  norm->add_option("--p", p, "Hardy exponent");
  norm->add_option("--function", function_path, "function spec (JSON)")->required();
  norm->add_option("--csv", common.csv, "ladder table as CSV");
  add_common(norm);

  auto* carl = app.add_subcommand("carleson", "Carleson constant and verdicts of a measure spec");
  carl->add_option("--measure", measure_path, "measure spec (JSON)")->required();
  carl->add_flag("--slices", slices, "also per-slice constants and the (1 + nu) bound");
  carl->add_option("--max-units", max_units, "atom slices examined with --slices");
  carl->add_option("--csv", common.csv, "box ratio table as CSV");
  add_common(carl);

  auto* dec = app.add_subcommand("decompose", "slice decomposition of a measure spec");
  dec->add_option("--measure", measure_path, "measure spec (JSON)")->required();
  dec->add_option("--max-slices", max_slices, "slices listed in the report");
  add_common(dec);

  auto* mob = app.add_subcommand("moebius-check", "verbatim vs reference Moebius map on a grid");
  mob->add_option("--a", a_text, "a as JSON: number or [w, x1, x2, x3]")->required();
  mob->add_option("--i", i_text, "unit as JSON [0, x1, x2, x3] (default e1)");
  add_common(mob);

  auto* corpus = app.add_subcommand("corpus", "the test corpus");
  corpus->require_subcommand(1);
  auto* list = corpus->add_subcommand("list", "entries with expected flags and notes");
  add_common(list);
  auto* cls = corpus->add_subcommand("classify", "compute flags and compare");
  cls->add_option("--id", ids, "entry ids (default: all)");
  add_common(cls);

  auto* suite = app.add_subcommand("suite", "acceptance battery");
  suite->add_option("--only", only, "check ids or numbers");
  suite->add_option("--budget-scale", scale, "scale quadrature budgets")->check(CLI::PositiveNumber);
  suite->add_flag_callback(
      "--list",
      [] {
        for (const auto& c : suite_checks()) std::printf("%2d %-19s %s\n", c.number, c.id.c_str(), c.title.c_str());
        std::exit(0);
      },
      "list checks");
  add_common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const RunConfig cfg = resolve(common);
    if (*norm) return cmd_norm(cfg, space, p, function_path, common.csv);
    if (*carl) return cmd_carleson(cfg, measure_path, slices, max_units, common.csv);
    if (*dec) return cmd_decompose(cfg, measure_path, max_slices);
    if (*mob) return cmd_moebius(cfg, a_text, i_text);
    if (*list) return cmd_corpus_list(cfg);
    if (*cls) return cmd_corpus_classify(cfg, ids);
    if (*suite) return cmd_suite(cfg, only, scale);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::DivergentIntegral ? kExitDivergent : kExitInput;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace qsh
