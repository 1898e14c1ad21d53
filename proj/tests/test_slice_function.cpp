#include <numbers>
#include <random>

#include "doctest.h"
#include "qsh/slice_function.hpp"

using namespace qsh;

namespace {

const Quaternion e1 = Quaternion::e1(), e2 = Quaternion::e2(), e3 = Quaternion::e3();

bool close(const Quaternion& a, const Quaternion& b, double tol) { return distance(a, b) <= tol; }

Quaternion random_ball_point(std::mt19937_64& rng, double rmax) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Quaternion q(g(rng), g(rng), g(rng), g(rng));
  return q * (rmax * std::pow(u(rng), 0.25) / q.norm());
}

std::vector<SliceFunction> sample_functions() {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::vector<Quaternion> c;
  for (int n = 0; n < 7; ++n) c.emplace_back(g(rng), g(rng), g(rng), g(rng));
  return {SliceFunction::polynomial(c), SliceFunction::monomial(3, e2), log_alpha(0.7),
          log_alpha(2.1, ImaginaryUnit(1, 2, 3)), inv_sqrt_one_plus_s(),
          gap_series({1, 2, 4, 8, 16, 32}, {1.0, 0.5 * e2, 0.25, 0.125 * e3, 1.0 / 16, 1.0 / 32})};
}

}  // namespace

TEST_CASE("evaluate examples") {
  const auto sq = SliceFunction::monomial(2);
  CHECK(close(sq(e1 + e2), Quaternion(-2.0), 1e-15));
  const Quaternion x = (e1 + e2) / std::sqrt(2.0) * 0.9;
  CHECK(close(sq(x), x * x, 1e-15));
  CHECK(SliceFunction::polynomial({0.0, 0.0, 0.0})(0.4 * e3 + 0.1) == Quaternion());
  CHECK(close(SliceFunction::monomial(1, e2)(0.5 * e1), 0.5 * e3, 1e-16));
  CHECK_THROWS_AS(SliceFunction::truncated_series({1.0, 1.0}, 0.5)(0.8 * e1), Error);
}

TEST_CASE("horner with right coefficients matches direct sum") {
  std::mt19937_64 rng(1);
  const auto fs = sample_functions();
  const auto& p = fs[0];
  for (int t = 0; t < 100; ++t) {
    const Quaternion x = random_ball_point(rng, 0.99);
    Quaternion sum, power = 1.0;
    for (const auto& term : p.series().terms) {
      sum += power * term.a;
      power = power * x;
    }
    CHECK(close(p(x), sum, 1e-13));
  }
}

TEST_CASE("truncation contract") {
  std::vector<Quaternion> c(40, 1.0);  // geometric series 1/(1-s) truncated
  const auto f = SliceFunction::truncated_series(c, 0.7, 1e-8);
  CHECK_NOTHROW(f(0.5 * e2));
  try {
    f(0.7 * e2);
    FAIL("expected truncation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationBudgetExceeded);
  }
  try {
    f(0.71);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  // dilation keeps the tail contract in the original variable
  const auto fr = f.dilate(0.5);
  CHECK(fr.boundary_radius() == 1.0);
  CHECK(close(fr(0.9 * e2), f(0.45 * e2), 1e-14));
}

TEST_CASE("slice derivative") {
  const auto d = SliceFunction::monomial(5).derivative();
  REQUIRE(d.series().terms.size() == 1);
  CHECK(d.series().terms[0].n == 4);
  CHECK(d.series().terms[0].a == Quaternion(5.0));
  CHECK(SliceFunction::constant(e3).derivative()(0.3 * e1) == Quaternion());

  const auto g = inv_sqrt_one_plus_s();
  const auto dg = g.derivative();
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Quaternion x = random_ball_point(rng, 0.95);
    // -1/2 (1+x)^{-3/2} computed in the plane of x
    const auto sc = to_slice(x);
    const Complex w = -0.5 * std::pow(1.0 + sc.as_complex(), -1.5);
    CHECK(close(dg(x), embed(w, sc.i), 1e-13));
  }
  // finite-difference fallback agrees with the closed form
  PlaneKernel k = g.kernel();
  k.derivative = nullptr;
  const auto gfd = SliceFunction::from_kernel(k).derivative();
  CHECK(close(gfd(0.3 + 0.4 * e2), dg(0.3 + 0.4 * e2), 1e-9));
}

TEST_CASE("restrict and representation formula examples") {
  const auto sq = SliceFunction::monomial(2);
  const auto r = restrict_to(sq, ImaginaryUnit::e1());
  CHECK(close(r(Complex(0.3, 0.4)), sq(0.3 + 0.4 * e1), 1e-16));
  const auto se2 = restrict_to(SliceFunction::monomial(1, e2), ImaginaryUnit::e1());
  CHECK(close(se2(Complex(0.0, 0.6)), 0.6 * e3, 1e-16));

  // f(z) = z on C_e1 extends to the identity; at x = e3/2 the value is e3/2
  const PlaneFunction id{ImaginaryUnit::e1(), [](Complex z) { return embed(z, ImaginaryUnit::e1()); }};
  CHECK(close(representation_formula(id, 0.5 * e3), 0.5 * e3, 1e-16));
  CHECK(close(representation_formula(id, Quaternion(0.25)), Quaternion(0.25), 0.0));
  const PlaneFunction z2{ImaginaryUnit::e1(),
                         [](Complex z) { return embed(z * z, ImaginaryUnit::e1()); }};
  CHECK(close(representation_formula(z2, e1 + e2), Quaternion(-2.0), 1e-15));
}

TEST_CASE("representation formula consistency on sample functions") {
  std::mt19937_64 rng(9);
  const auto units = sample_sphere(6, "spiral");
  for (const auto& f : sample_functions()) {
    for (const auto& u : units) {
      const auto fu = restrict_to(f, u);
      for (int t = 0; t < 100; ++t) {
        const Quaternion x = random_ball_point(rng, 0.99);
        const Quaternion a = f(x), b = representation_formula(fu, x);
        CHECK(distance(a, b) <= 1e-10 * std::max(1.0, a.norm()));
      }
    }
  }
}

TEST_CASE("split examples") {
  const auto i = ImaginaryUnit::e1(), j = ImaginaryUnit::e2();
  const Complex z(0.3, -0.2);
  auto p = split(SliceFunction::monomial(1, e2), i, j);
  CHECK(std::abs(p.f1(z)) < 1e-16);
  CHECK(std::abs(p.f2(z) - z) < 1e-16);
  p = split(SliceFunction::monomial(2), i, j);
  CHECK(std::abs(p.f1(z) - z * z) < 1e-16);
  CHECK(std::abs(p.f2(z)) < 1e-16);
  p = split(SliceFunction::monomial(1, e3), i, j);
  CHECK(std::abs(p.f1(z)) < 1e-16);
  CHECK(std::abs(p.f2(z) - Complex(0.0, 1.0) * z) < 1e-16);
  CHECK_THROWS_AS(split(SliceFunction::monomial(1), i, ImaginaryUnit(1, 1, 0)), Error);
}

TEST_CASE("splitting identities and round trip") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& f : sample_functions()) {
    for (const auto& i : random_units(3, 17)) {
      const auto j = orthogonal_unit(i);
      const auto p = split(f, i, j);
      const auto df = f.derivative();
      const auto back = recombine(p);
      for (int t = 0; t < 40; ++t) {
        const Complex z = std::polar(0.98 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
        const Quaternion v = f.on_plane(i, z);
        CHECK(std::abs(v.norm2() - std::norm(p.f1(z)) - std::norm(p.f2(z))) <=
              1e-12 * std::max(1.0, v.norm2()));
        const double d2 = df.on_plane(i, z).norm2();
        const double s2 = std::norm(p.f1.derivative(z)) + std::norm(p.f2.derivative(z));
        CHECK(std::abs(d2 - s2) <= 1e-10 * std::max(1.0, d2));
        const Quaternion x = random_ball_point(rng, 0.98);
        CHECK(distance(back(x), f(x)) <= 1e-12 * std::max(1.0, f(x).norm()));
      }
    }
  }
}

TEST_CASE("recombine examples") {
  const auto i = ImaginaryUnit::e1(), j = ImaginaryUnit::e2();
  SplitPair p{i, j, complex_series({{1, 1.0}}), complex_series({})};
  const auto f = recombine(p);
  CHECK(close(f(0.2 + 0.3 * e3), 0.2 + 0.3 * e3, 1e-16));
  SplitPair q{i, j, complex_series({}), complex_series({{0, 1.0}})};
  const auto g = recombine(q);
  CHECK(close(g(0.2 + 0.3 * e3), e2, 1e-16));
  CHECK(close(g(0.7 * e1), e2, 1e-16));
}

TEST_CASE("i_compose") {
  std::mt19937_64 rng(2);
  const auto sq = SliceFunction::monomial(2);
  const auto half = SliceFunction::monomial(1, 0.5);
  for (const auto& i : random_units(3, 8)) {
    const auto h = i_compose(sq, half, i);
    for (int t = 0; t < 20; ++t) {
      const Quaternion x = random_ball_point(rng, 0.99);
      CHECK(close(h(x), x * x * 0.25, 1e-14));
    }
  }
  // intrinsic g: composition is pointwise
  const auto f = sample_functions()[0];
  const auto id = i_compose(f, SliceFunction::monomial(1), ImaginaryUnit(0, 1, 1));
  for (int t = 0; t < 20; ++t) {
    const Quaternion x = random_ball_point(rng, 0.99);
    CHECK(distance(id(x), f(x)) <= 1e-12 * std::max(1.0, f(x).norm()));
  }
  // f(s) = s e2, g(z) = z^2 on C_e1: the composition is ext(z^2 e2)
  const auto c = i_compose(SliceFunction::monomial(1, e2), sq, ImaginaryUnit::e1());
  CHECK(close(c(0.5 * e1), -0.25 * e2, 1e-16));
  const PlaneFunction plane{ImaginaryUnit::e1(),
                            [](Complex z) { return embed(z * z, ImaginaryUnit::e1()) * Quaternion::e2(); }};
  for (int t = 0; t < 20; ++t) {
    const Quaternion x = random_ball_point(rng, 0.99);
    CHECK(close(c(x), representation_formula(plane, x), 1e-14));
  }
  // derivative by the chain rule
  const auto dc = c.derivative();
  CHECK(close(dc(0.3 * e1), 2.0 * 0.3 * e1 * e2, 1e-15));

  // range violations
  CHECK_THROWS_AS(i_compose(sq, SliceFunction::monomial(1, 2.0), ImaginaryUnit::e1()), Error);
  CHECK_THROWS_AS(i_compose(sq, SliceFunction::monomial(1, 0.5 * e2), ImaginaryUnit::e1()), Error);
}

TEST_CASE("dilate") {
  const auto f = sample_functions()[0];
  const auto f0 = f.dilate(0.0);
  CHECK(close(f0(0.3 * e2 + 0.1), f(Quaternion()), 1e-16));
  CHECK(close(f.dilate(1.0)(0.3 * e2), f(0.3 * e2), 0.0));
  const auto m = SliceFunction::monomial(4).dilate(0.5);
  CHECK(m.series().terms[0].a == Quaternion(1.0 / 16));
  const auto l = log_alpha(0.7).dilate(0.5);
  CHECK(close(l(0.8 * e3), log_alpha(0.7)(0.4 * e3), 1e-15));
  CHECK(l.singular_angles(ImaginaryUnit::e1()).empty());
}

TEST_CASE("cauchy-riemann on kernels") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& f : sample_functions()) {
    for (const auto& i : random_units(3, 33)) {
      for (int t = 0; t < 20; ++t) {
        const Complex z = std::polar(0.9 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
        const double scale = std::max(1.0, f.derivative().on_plane(i, z).norm());
        CHECK(cauchy_riemann_residual(f, i, z) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("log kernel and square root branch") {
  // on the kernel plane the value is -log(1 - e^{i alpha} z)
  const double a = 0.7;
  const Complex z(0.2, 0.5);
  const Complex want = -std::log(1.0 - std::polar(1.0, a) * z);
  CHECK(close(log_alpha(a)(embed(z, ImaginaryUnit::e1())), embed(want, ImaginaryUnit::e1()), 1e-15));
  const auto g = inv_sqrt_one_plus_s();
  CHECK(close(g(Quaternion(0.0)), 1.0, 0.0));
  CHECK(close(g(Quaternion(0.44)), 1.0 / 1.2, 1e-15));
  CHECK_THROWS_AS(g(Quaternion(-1.0)), Error);
  // near the singular point on another plane, approach from both sides agrees with conj symmetry
  const Quaternion up = -0.999 + 0.01 * e2, down = -0.999 - 0.01 * e2;
  CHECK(close(g(down), g(up).conj(), 1e-12));
  auto sing = g.singular_angles(ImaginaryUnit::e2());
  REQUIRE(sing.size() == 1);
  CHECK(sing[0] == doctest::Approx(std::numbers::pi));
}

TEST_CASE("identity principle at series level") {
  const auto f = sample_functions()[0];
  const auto i = ImaginaryUnit(0.0, 0.6, 0.8);
  const auto g = recombine(split(f, i, orthogonal_unit(i)));
  for (int k = 1; k <= 50; ++k) {
    const Complex z = std::polar(0.5 / k, 0.3);
    CHECK(distance(f.on_plane(i, z), g.on_plane(i, z)) <= 1e-14);
  }
  REQUIRE(g.series().terms.size() == f.series().terms.size());
  for (std::size_t k = 0; k < f.series().terms.size(); ++k)
    CHECK(distance(f.series().terms[k].a, g.series().terms[k].a) <= 1e-10);
  // coefficients are recoverable from values on one slice
  const auto& terms = f.series().terms;
  const int n = static_cast<int>(terms.size());
  std::vector<std::vector<double>> A(n, std::vector<double>(n));
  std::vector<Quaternion> b(n);
  for (int r = 0; r < n; ++r) {
    const double x = 0.9 * std::cos(std::numbers::pi * (r + 0.5) / n);
    for (int c = 0; c < n; ++c) A[r][c] = std::pow(x, c);
    b[r] = f(Quaternion(x));
  }
  // Gaussian elimination with partial pivoting
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < n; ++r) {
      const double m = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= m * A[c][k];
      b[r] -= b[c] * m;
    }
  }
  std::vector<Quaternion> coef(n);
  for (int r = n - 1; r >= 0; --r) {
    Quaternion s = b[r];
    for (int k = r + 1; k < n; ++k) s -= coef[k] * A[r][k];
    coef[r] = s / A[r][r];
  }
  for (int k = 0; k < n; ++k) CHECK(distance(coef[k], terms[k].a) <= 1e-10);
}
