#include <numbers>
#include <random>

#include "doctest.h"
#include "qsh/norms.hpp"

using namespace qsh;

namespace {

constexpr double pi = std::numbers::pi;
const Quaternion e1 = Quaternion::e1(), e2 = Quaternion::e2(), e3 = Quaternion::e3();

SliceFunction random_poly(unsigned seed, int deg) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Quaternion> c;
  for (int n = 0; n <= deg; ++n) c.emplace_back(g(rng), g(rng), g(rng), g(rng));
  return SliceFunction::polynomial(c);
}

const ArcFamily small_arcs{8, 16};

}  // namespace

TEST_CASE("alpha beta split reproduces plane values") {
  const auto f = random_poly(3, 5);
  const auto g = log_alpha(0.7, ImaginaryUnit(0, 1, 1));
  for (const auto& h : {f, g}) {
    for (const auto& i : random_units(5, 2)) {
      const Complex z(0.3, -0.5);
      const AlphaBeta ab = alpha_beta(h, z);
      CHECK(distance(ab.alpha + i.q() * ab.beta, h.on_plane(i, z)) <= 1e-14);
      const double v = h.on_plane(i, z).norm2();
      CHECK(v <= sup_modulus2(ab.alpha, ab.beta) * (1 + 1e-14));
    }
  }
}

TEST_CASE("hardy norm") {
  const auto units = default_units(6);
  auto c = hardy_norm(SliceFunction::constant(0.3 + 0.4 * e2), 1.0, units);
  CHECK(c.value == doctest::Approx(0.5).epsilon(1e-13));
  c = hardy_norm(SliceFunction::constant(0.3 + 0.4 * e2), 2.0, units);
  CHECK(c.value == doctest::Approx(0.5).epsilon(1e-13));
  const Quaternion a(0.1, -0.7, 0.2, 0.4);
  auto m = hardy_norm(SliceFunction::monomial(6, a), 2.0, units);
  CHECK(m.value == doctest::Approx(a.norm()).epsilon(1e-12));
  CHECK_FALSE(m.diverged);
  const auto f = random_poly(5, 9);
  CHECK(std::abs(hardy_norm(f, 2.0, units).value - hardy2_coeff(f)) <= 1e-10 * (1 + hardy2_coeff(f)));

  auto s = hardy_norm(inv_sqrt_one_plus_s(), 2.0, units);
  CHECK(s.diverged);
  CHECK(std::isinf(s.value));
  // H^1 of the same function is finite
  auto s1 = hardy_norm(inv_sqrt_one_plus_s(), 1.0, {ImaginaryUnit::e1()});
  CHECK_FALSE(s1.diverged);
  // (1/2pi) int |1 + e^{it}|^{-1/2} dt = B(1/4, 1/2) / (sqrt(2) pi)
  const double beta = std::tgamma(0.25) * std::tgamma(0.5) / std::tgamma(0.75);
  CHECK(s1.value == doctest::Approx(beta / (std::sqrt(2.0) * pi)).epsilon(1e-7));
  // log family is in H^2 with norm^2 = sum 1/n^2 = pi^2/6
  auto l = hardy_norm(log_alpha(0.7), 2.0, {ImaginaryUnit::e1(), ImaginaryUnit::e3()});
  CHECK_FALSE(l.diverged);
  CHECK(l.value == doctest::Approx(pi / std::sqrt(6.0)).epsilon(1e-8));
}

TEST_CASE("hardy2_coeff") {
  CHECK(hardy2_coeff(SliceFunction::constant(1.0)) == 1.0);
  std::vector<Quaternion> c;
  for (int n = 0; n < 80; ++n) c.emplace_back(std::pow(2.0, -n / 2.0));
  CHECK(hardy2_coeff(SliceFunction::polynomial(c)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (int L : {3, 6, 9}) {
    std::vector<int> ex;
    std::vector<Quaternion> a;
    for (int l = 0; l <= L; ++l) { ex.push_back(1 << l); a.emplace_back(1.0); }
    CHECK(hardy2_coeff(gap_series(ex, a)) == doctest::Approx(std::sqrt(L + 1.0)).epsilon(1e-15));
  }
}

TEST_CASE("arc family and the identity") {
  const ArcFamily arcs{10, 16};
  const int N = arcs.nodes();
  const auto stats = arc_stats(boundary_samples(SliceFunction::monomial(1), N, 1.0), arcs);
  const auto lm = level_maxima(stats, arcs.depth, ImaginaryUnit::e2());
  for (int k = 0; k <= arcs.depth; ++k) {
    // discrete arc of L midpoint nodes: |mean e^{i theta}| = sin(L pi/N) / (L sin(pi/N))
    const int L = N >> k;
    const double m = std::sin(L * pi / N) / (L * std::sin(pi / N));
    CHECK(lm[static_cast<std::size_t>(k)] == doctest::Approx(1.0 - m * m).epsilon(1e-12));
    // and the continuum value 1 - sinc^2(l/2) is close
    const double l = 2 * pi / (1 << k);
    const double cont = 1.0 - std::pow(std::sin(l / 2) / (l / 2), 2);
    CHECK(std::abs(lm[static_cast<std::size_t>(k)] - cont) <= 1e-2 * cont + 1e-15);
  }
  CHECK(bmo_seminorm_slice(SliceFunction::monomial(1), ImaginaryUnit::e1(), arcs) == doctest::Approx(1.0));
  CHECK(bmo_seminorm_slice(SliceFunction::constant(e3), ImaginaryUnit::e1(), arcs) == 0.0);
}

TEST_CASE("bmo seminorm properties") {
  const auto units = default_units(8);
  const auto f = random_poly(8, 6);
  const auto rep = bmo_seminorm_global(f, units, small_arcs);
  for (const auto& sv : rep.per_slice) {
    CHECK(sv.value <= rep.value * (1 + 1e-12));
    CHECK(rep.value <= 2 * sv.value + 1e-6);
  }
  // intrinsic: every slice gives the same value
  const auto g = SliceFunction::polynomial({0.2, -1.0, 0.5, 0.0, 0.3});
  const auto rg = bmo_seminorm_global(g, units, small_arcs);
  for (const auto& sv : rg.per_slice) CHECK(sv.value == doctest::Approx(rg.value).epsilon(1e-12));
  // right multiplication by a unit quaternion
  const Quaternion a = Quaternion(1, 2, -1, 0.5) / Quaternion(1, 2, -1, 0.5).norm();
  CHECK(bmo_seminorm_global(f.times(a), {}, small_arcs).value == doctest::Approx(rep.value).epsilon(1e-12));
  // monotone in depth
  double prev = 0.0;
  for (int k = 2; k <= 8; k += 2) {
    const double v = bmo_seminorm_slice(log_alpha(0.0), ImaginaryUnit::e1(), ArcFamily{k, 16 << (8 - k)});
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK(bmo_norm(SliceFunction::constant(0.6 * e1)) == doctest::Approx(0.6));
}

TEST_CASE("vmo and bmo verdicts") {
  const ArcFamily arcs{12, 16};
  const auto poly = random_poly(2, 4);
  CHECK(bmo_verdict(poly, arcs).finite);
  const auto pv = vmo_verdict(poly, arcs);
  CHECK(pv.vmo);
  // geometric decay of the modulus in level
  CHECK(pv.modulus[12] < pv.modulus[10] / 10);
  CHECK(vmo_verdict(SliceFunction::constant(2.0), arcs).vmo);

  const auto lg = log_alpha(0.7);
  CHECK(bmo_verdict(lg, arcs).finite);
  const auto lv = vmo_verdict(lg, arcs);
  CHECK_FALSE(lv.vmo);
  MESSAGE("log modulus at levels 8..12: " << lv.modulus[8] << " " << lv.modulus[10] << " " << lv.modulus[12]);
  CHECK(lv.modulus[12] > 0.1);

  const auto sq = inv_sqrt_one_plus_s();
  const auto sv = bmo_verdict(sq, arcs);
  MESSAGE("inv sqrt BMO ladder: " << sv.ladder.front() << " ... " << sv.ladder.back());
  CHECK_FALSE(sv.finite);

  // gap series: truncation ladder decides
  auto gap = [](double decay) {
    return [decay](int L) {
      std::vector<int> ex;
      std::vector<Quaternion> a;
      for (int l = 0; l <= L; ++l) { ex.push_back(1 << l); a.emplace_back(std::pow(decay, l)); }
      return gap_series(ex, a);
    };
  };
  CHECK(bmo_verdict(gap(0.5)(10), arcs, gap(0.5), 10).finite);
  CHECK_FALSE(bmo_verdict(gap(1.0)(10), arcs, gap(1.0), 10).finite);
  CHECK(vmo_verdict(gap(0.5)(10), arcs).vmo);
}

TEST_CASE("vmo modulus examples") {
  const ArcFamily arcs{10, 16};
  CHECK(vmo_modulus(SliceFunction::constant(1.0), std::nullopt, 2 * pi, arcs) == 0.0);
  const auto f = SliceFunction::monomial(2);
  const double a = vmo_modulus(f, ImaginaryUnit::e1(), 2 * pi / 64, arcs);
  const double b = vmo_modulus(f, ImaginaryUnit::e1(), 2 * pi / 256, arcs);
  CHECK(b < a / 10);
}

TEST_CASE("star seminorm") {
  const auto i = ImaginaryUnit::e2();
  CHECK(star_seminorm(SliceFunction::constant(e1), i, default_a_grid()) <= 1e-14);
  const auto f = random_poly(12, 5);
  double tail = 0.0;
  for (const auto& t : f.series().terms)
    if (t.n > 0) tail += t.a.norm2();
  CHECK(star_seminorm(f, i, {0.0}) == doctest::Approx(std::sqrt(tail)).epsilon(1e-12));
  CHECK(default_a_grid().size() == 37);
}

TEST_CASE("bloch") {
  const auto units = default_units(4);
  auto c = bloch_norm(SliceFunction::constant(0.6 + 0.8 * e3), units);
  CHECK(c.value == doctest::Approx(1.0));
  CHECK(bloch_verdict(c).little_bloch);
  auto s = bloch_norm(SliceFunction::monomial(1), units);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bloch_verdict(s).little_bloch);
  const auto p = bloch_norm(random_poly(4, 5), units);
  CHECK(bloch_verdict(p).bloch);
  CHECK(bloch_verdict(p).little_bloch);
  const auto l = bloch_norm(log_alpha(2.1), units);
  CHECK(bloch_verdict(l).bloch);
  CHECK_FALSE(bloch_verdict(l).little_bloch);
  const auto q = bloch_norm(inv_sqrt_one_plus_s(), units);
  CHECK_FALSE(bloch_verdict(q).bloch);
  // the printed (1-|s|)^2 weight does not see the blow-up
  CHECK(std::isfinite(q.extra.at("value_printed_weight")));
}

TEST_CASE("dirichlet") {
  for (int n : {1, 2, 7, 30, 64}) {
    const auto f = SliceFunction::monomial(n);
    const auto d = dirichlet_inner(f, f, ImaginaryUnit::e1());
    CHECK(d.quadrature.w == doctest::Approx(pi * n).epsilon(1e-8));
    CHECK(d.coefficients->w == doctest::Approx(pi * n).epsilon(1e-14));
  }
  const auto g = random_poly(6, 6);
  const auto one = dirichlet_inner(SliceFunction::constant(1.0), g, ImaginaryUnit::e3());
  CHECK(distance(one.quadrature, g(Quaternion())) <= 1e-12);
  const auto x = dirichlet_inner(SliceFunction::monomial(3), SliceFunction::monomial(5), ImaginaryUnit::e2());
  CHECK(x.quadrature.norm() <= 1e-10);
  CHECK_THROWS_AS(dirichlet_energy(inv_sqrt_one_plus_s(), ImaginaryUnit::e1()), Error);
  CHECK_THROWS_AS(dirichlet_energy(log_alpha(0.0), ImaginaryUnit::e1()), Error);
  // a disc automorphism covers the disc once: energy = pi
  const auto t = moebius_ext(MoebiusParam(embed(Complex(0.3, 0.2), ImaginaryUnit::e1()), ImaginaryUnit::e1()));
  CHECK(dirichlet_energy(t, ImaginaryUnit::e1()) == doctest::Approx(pi).epsilon(1e-8));
}

TEST_CASE("pairing") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> deg(0, 12);
  for (int t = 0; t < 50; ++t) {
    const Quaternion a(g(rng), g(rng), g(rng), g(rng)), b(g(rng), g(rng), g(rng), g(rng));
    const int n = deg(rng), m = t % 3 == 0 ? n : deg(rng);
    const auto p = dual_pairing(SliceFunction::monomial(n, a), SliceFunction::monomial(m, b), ImaginaryUnit(1, 1, 0));
    const Quaternion want = n == m ? a.conj() * b : Quaternion();
    CHECK(distance(p.quadrature, want) <= 1e-10 * (1 + want.norm()));
    CHECK(distance(*p.coefficients, want) <= 1e-14 * (1 + want.norm()));
  }
  const Quaternion c(0.5, 0.5, -0.5, 0.5);
  CHECK(dual_pairing(SliceFunction::constant(c), SliceFunction::constant(c), ImaginaryUnit::e1()).quadrature.w ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(dual_pairing(inv_sqrt_one_plus_s(), inv_sqrt_one_plus_s(), ImaginaryUnit::e1()), Error);
}

TEST_CASE("majorant criterion") {
  const auto units = default_units(4);
  const auto f = SliceFunction::polynomial({0.0, 1.0, 0.5 * e2});
  auto r = majorant_criterion(f, [](double) { return 2.0; }, units);
  CHECK(r.verdict == MajorantVerdict::Met);
  // phi = (1 - r)^{-1/4} majorizes f' = 1 + e2 s
  r = majorant_criterion(f, [](double x) { return 2.0 * std::pow(1 - x, -0.25); }, units);
  CHECK(r.verdict == MajorantVerdict::Met);
  r = majorant_criterion(f, [](double x) { return 2.0 / (1 - x); }, units);
  CHECK(r.verdict == MajorantVerdict::Inconclusive);
  CHECK_FALSE(r.integral_finite);
  CHECK_THROWS_AS(majorant_criterion(f, [](double x) { return 2.0 - x; }, units), Error);
  // not majorized
  r = majorant_criterion(f, [](double) { return 0.5; }, units);
  CHECK(r.verdict == MajorantVerdict::Inconclusive);
}

TEST_CASE("gap series check") {
  std::vector<long long> ex;
  std::vector<Quaternion> a, one;
  for (int l = 0; l <= 10; ++l) {
    ex.push_back(1LL << l);
    a.emplace_back(std::pow(2.0, -l / 2.0));
    one.emplace_back(1.0);
  }
  auto g = gap_series_check(ex, a, 2.0);
  CHECK(g.in_h2);
  CHECK(g.in_bmo);
  CHECK(g.in_vmo);
  CHECK(g.partial_sums.back() == doctest::Approx(2.0 * (1 - std::pow(2.0, -11))));
  g = gap_series_check(ex, one, 2.0);
  CHECK_FALSE(g.in_h2);
  CHECK_FALSE(g.in_bmo);
  CHECK(g.partial_sums.back() == doctest::Approx(11.0));
  std::vector<long long> ex3;
  std::vector<Quaternion> inv;
  for (int l = 1; l <= 30; ++l) {
    ex3.push_back(static_cast<long long>(std::pow(3.0, l)));
    inv.emplace_back(1.0 / l);
  }
  g = gap_series_check(ex3, inv, 3.0);
  CHECK(g.in_h2);
  CHECK(g.decay_exponent == doctest::Approx(2.0).epsilon(1e-9));
  ex3[5] = ex3[4] + 1;
  CHECK_THROWS_AS(gap_series_check(ex3, inv, 3.0), Error);
}
