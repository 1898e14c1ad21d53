#include <random>
#include <set>

#include "doctest.h"
#include "qsh/corpus.hpp"

using namespace qsh;

TEST_CASE("corpus contents") {
  const auto c = build_corpus();
  std::set<std::string> ids;
  for (const auto& e : c) ids.insert(e.id);
  CHECK(ids.size() == c.size());
  for (const char* id : {"const_real", "mono_1", "poly_rand_a", "log_0", "log_0.7", "log_2.1", "inv_sqrt", "gap_half",
                         "gap_flat", "moebius_a", "log_0.7@0.8"})
    CHECK(ids.count(id) == 1);
  for (const auto& e : c) {
    CAPTURE(e.id);
    for (const auto& k : kMembershipFlags) CHECK(e.flags.count(k) == 1);
    for (const auto& [k, v] : e.flags)
      if (v.value != Verdict::Unknown) CHECK_FALSE(v.note.empty());
  }
  const auto& lg = corpus_entry(c, "log_0.7");
  CHECK(lg.flags.at("BMOSH").value == Verdict::Yes);
  CHECK(lg.flags.at("VMOSH").value == Verdict::No);
  CHECK(corpus_entry(c, "inv_sqrt").flags.at("H2").value == Verdict::No);
  for (const auto& [k, v] : corpus_entry(c, "const_quat").flags) CHECK(v.value == Verdict::Yes);
  CHECK_THROWS_AS(corpus_entry(c, "nope"), Error);
}

TEST_CASE("corpus is deterministic and specs round-trip") {
  const auto a = build_corpus(), b = build_corpus();
  REQUIRE(a.size() == b.size());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CAPTURE(a[k].id);
    CHECK(a[k].spec.dump() == b[k].spec.dump());
    const auto f = function_from_json(Json::parse(a[k].spec.dump()));
    for (int t = 0; t < 5; ++t) {
      const Quaternion q(u(rng), u(rng), u(rng), u(rng));
      CHECK(distance(f(q), a[k].f(q)) == 0.0);
    }
  }
  const auto other = build_corpus({8, 12});
  CHECK(corpus_entry(other, "poly_rand_a").spec.dump() != corpus_entry(a, "poly_rand_a").spec.dump());
}

TEST_CASE("classify: cheap entries") {
  const auto c = build_corpus();
  for (const char* id : {"const_real", "mono_3", "poly_rand_b", "moebius_c"}) {
    const auto r = classify(corpus_entry(c, id));
    CAPTURE(id);
    CHECK(r.mismatches.empty());
    for (const auto& [k, v] : r.flags) CHECK(v.value == Verdict::Yes);
  }
}

TEST_CASE("classify: gap series") {
  const auto c = build_corpus();
  const auto flat = classify(corpus_entry(c, "gap_flat"));
  CHECK(flat.flags.at("H2").value == Verdict::No);
  CHECK(flat.flags.at("BMOSH").value == Verdict::No);
  CHECK(flat.flags.at("mu_f_carleson").value == Verdict::No);
  CHECK(flat.mismatches.empty());
  const auto half = classify(corpus_entry(c, "gap_half"));
  CHECK(half.flags.at("H2").value == Verdict::Yes);
  CHECK(half.flags.at("VMOSH").value == Verdict::Yes);
  CHECK(half.flags.at("mu_f_vanishing").value == Verdict::Yes);
  CHECK(half.mismatches.empty());
  // truncation ladder prefixes
  const auto& g = corpus_entry(c, "gap_half");
  CHECK(g.truncations()(4).degree() == 16);
  CHECK(g.truncations()(12).degree() == 4096);
}

TEST_CASE("function and measure specs") {
  const auto f = function_from_json(Json::parse(R"({"type":"power_series","coeffs":[[1,0,0,0],[0,1,0,0]]})"));
  CHECK(distance(f(Quaternion(0.5, 0, 0.2, 0)), 1.0 + Quaternion(0.5, 0, 0.2, 0) * Quaternion::e1()) <= 1e-15);
  const auto t = function_from_json(Json::parse(R"({"type":"power_series","coeffs":[1, 0.5],"r_max":0.9})"));
  CHECK(t.series().truncated);
  const auto d = function_from_json(Json::parse(R"({"type":"dilation","r":0.5,"of":{"type":"monomial","n":2}})"));
  CHECK(distance(d(Quaternion(0.4)), Quaternion(0.04)) <= 1e-15);
  for (const char* bad : {R"({"type":"what"})", R"({"coeffs":[1]})", R"({"type":"log_alpha"})",
                          R"({"type":"constant","value":[1,2]})", R"({"type":"moebius","a":[0,0,0.5,0],"unit":[0,1,0,0]})"}) {
    CAPTURE(bad);
    try {
      function_from_json(Json::parse(bad));
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
  const auto m = measure_from_json(Json::parse(R"({"type":"point_masses","atoms":[{"point":[0,0,0.5,0],"mass":2}]})"));
  CHECK(m.nu_total() == 2.0);
  CHECK(measure_from_json(Json::parse(R"({"type":"density","name":"lambda4"})")).nu_total() ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 2));
  const auto mf = measure_from_json(
      Json::parse(R"({"type":"density","name":"mu_f","function":{"type":"monomial","n":1}})"));
  CHECK(mf.c_of(ImaginaryUnit::e2()) == doctest::Approx(std::numbers::pi / 4));
  CHECK_THROWS_AS(measure_from_json(Json::parse(R"({"type":"point_masses","atoms":[{"point":[1,0,0,0],"mass":1}]})")),
                  Error);
  CHECK(number(INFINITY) == "inf");
  CHECK(number(1.5) == 1.5);
}
