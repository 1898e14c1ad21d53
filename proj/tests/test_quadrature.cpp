#include <numbers>

#include "doctest.h"
#include "qsh/quadrature.hpp"

using namespace qsh;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("circle rule") {
  const CircleRule rule;
  auto one = integrate_circle<double>([](double) { return 1.0; }, rule);
  CHECK(one.value == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK_FALSE(one.low_confidence);
  auto c2 = integrate_circle<double>([](double t) { return std::cos(t) * std::cos(t); }, rule);
  CHECK(c2.value == doctest::Approx(pi).epsilon(1e-14));
  // trig polynomials of degree < n/2 are exact
  const CircleRule small{16};
  auto t7 = integrate_circle<double>([](double t) { return std::cos(7 * t) + 3.0; }, small, false);
  CHECK(t7.value == doctest::Approx(6 * pi).epsilon(1e-14));
  // theta = pi is never a node
  for (int k = 0; k < rule.n; ++k) CHECK(std::abs(rule.node(k) - pi) > 1e-6);
  // singular integrand is flagged
  auto sing = integrate_circle<double>(
      [](double t) { return 1.0 / std::abs(std::polar(1.0, t) - 1.0); }, CircleRule{256});
  CHECK(sing.low_confidence);
  auto mild = integrate_circle<double>(
      [](double t) { return std::pow(std::abs(std::polar(1.0, t) - 1.0), -0.5); }, CircleRule{256});
  CHECK(mild.low_confidence);
}

TEST_CASE("disk rule") {
  const DiskRule rule;
  auto one = integrate_disk<double>([](Complex) { return 1.0; }, rule);
  CHECK(std::abs(one.value - pi) <= 1e-12);
  auto r2 = integrate_disk<double>([](Complex z) { return std::norm(z); }, rule);
  CHECK(std::abs(r2.value - pi / 2) <= 1e-12);
  for (int n : {1, 3, 10, 40}) {
    auto d = integrate_disk<double>(
        [n](Complex z) { return double(n) * n * std::pow(std::norm(z), n - 1); }, rule, false);
    CHECK(d.value == doctest::Approx(pi * n).epsilon(1e-12));
  }
}

TEST_CASE("sphere rule") {
  const SphereRule rule;
  auto one = integrate_sphere<double>([](const ImaginaryUnit&) { return 1.0; }, rule);
  CHECK(std::abs(one.value - 4 * pi) <= 1e-10);
  auto z2 = integrate_sphere<double>([](const ImaginaryUnit& u) { return u.q().x3 * u.q().x3; }, rule);
  CHECK(std::abs(z2.value - 4 * pi / 3) <= 1e-12);
  // odd integrands vanish
  auto odd = integrate_sphere<double>(
      [](const ImaginaryUnit& u) { return u.q().x1 + std::pow(u.q().x2, 3) + u.q().x3 * u.q().x1 * u.q().x1; },
      rule);
  CHECK(std::abs(odd.value) <= 1e-12);
  // node set closed under u -> -u, and hemisphere sum is half of an even integrand
  const auto nodes = rule.nodes();
  double full = 0.0, upper = 0.0;
  for (const auto& nd : nodes) {
    const double h = nd.unit.q().x1 * nd.unit.q().x1 + 0.3 * nd.unit.q().x2 * nd.unit.q().x3;
    full += h * nd.weight;
    if (nd.unit.q().x3 > 0) upper += h * nd.weight;
  }
  CHECK(full == doctest::Approx(2 * upper).epsilon(1e-13));
  for (const auto& nd : nodes) {
    bool found = false;
    for (const auto& other : nodes) found = found || distance(nd.unit.q(), -other.unit.q()) < 1e-14;
    CHECK(found);
  }
}

TEST_CASE("graded composite rules") {
  const auto br = graded_breaks(0.0, 1.0, 1.0, 40);
  CHECK(br.front() == 0.0);
  CHECK(br.back() == 1.0);
  const auto rule = composite_gauss(br, 8);
  const double v = rule.integrate([](double r) { return std::pow(1.0 - r, -0.5); });
  CHECK(v == doctest::Approx(2.0).epsilon(1e-5));
  const auto around = composite_gauss(graded_breaks_around(-1.0, 1.0, 0.25, 30), 8);
  const double w = around.integrate([](double x) { return std::log(std::abs(x - 0.25)); });
  const double exact = (1.25 * std::log(1.25) - 1.25) + (0.75 * std::log(0.75) - 0.75);
  CHECK(w == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("radial limit") {
  auto c = radial_limit({2.5, 2.5, 2.5, 2.5, 2.5});
  CHECK(c.limit == 2.5);
  CHECK(c.error == 0.0);
  CHECK_FALSE(c.diverged);
  std::vector<double> v;
  for (int m = 3; m <= 14; ++m) v.push_back(1.0 - std::ldexp(1.0, -m));
  auto l = radial_limit(v);
  CHECK(std::abs(l.limit - 1.0) <= 1e-6);
  CHECK_FALSE(l.diverged);
  // circle integrals of |1/sqrt(1+z)|^2 at r_m grow like log(1/(1-r))
  std::vector<double> w;
  for (int m = 3; m <= 14; ++m) {
    const double r = ladder_radius(m);
    const int n = 1 << (m + 6);
    auto I = integrate_circle<double>(
        [r](double t) { return 1.0 / std::abs(1.0 + std::polar(r, t)); }, CircleRule{n}, false);
    w.push_back(I.value / (2 * pi));
  }
  CHECK(radial_limit(w).diverged);
  // the primitive F(theta) = -log((1 - tan(theta/4)) / (1 + tan(theta/4))) of 1/|1 + e^{i theta}|
  // on (0, pi - eps) grows like log(1/eps)
  auto F = [](double t) { return -std::log((1 - std::tan(t / 4)) / (1 + std::tan(t / 4))); };
  const double h = 1e-4;
  CHECK((F(1.0 + h) - F(1.0 - h)) / (2 * h) == doctest::Approx(1.0 / std::abs(1.0 + std::polar(1.0, 1.0))).epsilon(1e-7));
  std::vector<double> prim;
  for (int m = 3; m <= 14; ++m) prim.push_back(2 * F(pi - std::ldexp(1.0, -m)) / (2 * pi));
  CHECK(ladder_diverges(prim));
}

TEST_CASE("parallel reduction is deterministic") {
  const CircleRule rule{4096};
  auto g = [](double t) { return std::exp(std::sin(3 * t)) * std::cos(t) + 1e-3 * t; };
  set_thread_count(1);
  const double a = integrate_circle<double>(g, rule).value;
  set_thread_count(4);
  const double b = integrate_circle<double>(g, rule).value;
  set_thread_count(1);
  CHECK(a == b);
}
