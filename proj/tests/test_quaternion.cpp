#include <random>
#include <tuple>

#include "doctest.h"
#include "qsh/gauss_legendre.hpp"
#include "qsh/quaternion.hpp"

using namespace qsh;

namespace {

Quaternion random_q(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng), g(rng), g(rng)};
}

bool close(const Quaternion& a, const Quaternion& b, double tol) { return distance(a, b) <= tol; }

}  // namespace

TEST_CASE("hamilton products") {
  const auto e1 = Quaternion::e1(), e2 = Quaternion::e2(), e3 = Quaternion::e3();
  CHECK(e1 * e2 == e3);
  CHECK(e2 * e3 == e1);
  CHECK(e3 * e1 == e2);
  CHECK(e2 * e1 == -e3);
  CHECK(e1 * e1 == Quaternion(-1.0));
  CHECK((1.0 + e1) * (1.0 - e1) == Quaternion(2.0));
  CHECK((e1 + e2) * (e1 + e2) == Quaternion(-2.0));
}

TEST_CASE("norm is multiplicative and q conj q is real") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const Quaternion a = random_q(rng), b = random_q(rng);
    CHECK(std::abs((a * b).norm() - a.norm() * b.norm()) <= 1e-13 * a.norm() * b.norm());
    const Quaternion p = a * a.conj();
    CHECK(std::abs(p.w - a.norm2()) <= 1e-13 * a.norm2());
    CHECK(p.imag().norm() <= 1e-13 * a.norm2());
    const Quaternion c = random_q(rng);
    CHECK(close((a * b) * c, a * (b * c), 1e-12 * a.norm() * b.norm() * c.norm()));
    CHECK(close(a * (b + c), a * b + a * c, 1e-12 * a.norm() * (b.norm() + c.norm())));
  }
}

TEST_CASE("slice coordinates") {
  auto s = to_slice(Quaternion(3.0, 0.0, 4.0, 0.0));
  CHECK(s.x0 == 3.0);
  CHECK(s.x1 == 4.0);
  CHECK(s.i == ImaginaryUnit::e2());

  s = to_slice(Quaternion(5.0));
  CHECK(s.x1 == 0.0);
  CHECK(s.i == default_unit());
  CHECK(default_unit() == ImaginaryUnit::e1());

  s = to_slice(Quaternion(0.0, 1.0, 1.0, 0.0));
  CHECK(s.x1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(close(s.i.q(), Quaternion(0.0, 1.0, 1.0, 0.0) / std::sqrt(2.0), 1e-16));

  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    const Quaternion q = random_q(rng);
    // normalization rounds, so assembly is exact up to a couple of ulps
    CHECK(close(assemble(to_slice(q)), q, 4e-16 * q.norm()));
  }
}

TEST_CASE("split_basis") {
  const auto i = ImaginaryUnit::e1(), j = ImaginaryUnit::e2();
  auto [c1, c2] = split_basis(Quaternion::e2(), i, j);
  CHECK(c1 == Complex(0.0, 0.0));
  CHECK(std::abs(c2 - Complex(1.0, 0.0)) < 1e-16);

  std::tie(c1, c2) = split_basis(1.0 + Quaternion::e1(), i, j);
  CHECK(std::abs(c1 - Complex(1.0, 1.0)) < 1e-16);
  CHECK(std::abs(c2) < 1e-16);

  // e3 = e1 e2 = i j
  std::tie(c1, c2) = split_basis(Quaternion::e3(), i, j);
  CHECK(std::abs(c1) < 1e-16);
  CHECK(std::abs(c2 - Complex(0.0, 1.0)) < 1e-16);

  CHECK_THROWS_AS(split_basis(1.0, i, ImaginaryUnit(1.0, 1.0, 0.0)), Error);
  try {
    split_basis(1.0, i, i);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonOrthogonalUnits);
  }

  std::mt19937_64 rng(3);
  for (const ImaginaryUnit& u : random_units(50, 5)) {
    const ImaginaryUnit w = orthogonal_unit(u);
    require_orthogonal(u, w);
    const Quaternion a = random_q(rng);
    const auto [d1, d2] = split_basis(a, u, w);
    CHECK(close(join_basis(d1, d2, u, w), a, 1e-15 * (1.0 + a.norm()) * 2));
    CHECK(std::abs(std::norm(d1) + std::norm(d2) - a.norm2()) <= 1e-14 * a.norm2());
  }
}

TEST_CASE("sample_sphere") {
  auto axes = sample_sphere(6, "axes");
  REQUIRE(axes.size() == 6);
  CHECK(axes[0] == ImaginaryUnit::e1());
  CHECK(axes[1] == -ImaginaryUnit::e1());
  CHECK(axes[5] == -ImaginaryUnit::e3());
  auto two = sample_sphere(2, "axes");
  REQUIRE(two.size() == 2);
  CHECK(two[1] == -ImaginaryUnit::e1());
  CHECK_THROWS_AS(sample_sphere(10, "bogus"), Error);
  CHECK_THROWS_AS(sample_sphere(1, "axes"), Error);

  for (const char* scheme : {"axes", "product", "spiral"}) {
    for (const auto& u : sample_sphere(64, scheme)) {
      CHECK(std::abs(u.q().w) <= 1e-15);
      CHECK(std::abs(u.q().norm() - 1.0) <= 1e-15);
      CHECK(close(u.q() * u.q(), Quaternion(-1.0), 1e-14));
    }
  }

  // product scheme is closed under u -> -u
  const auto prod = sample_sphere(128, "product");
  for (const auto& u : prod) {
    bool found = false;
    for (const auto& v : prod) found = found || distance(u.q(), -v.q()) < 1e-14;
    CHECK(found);
  }
}

TEST_CASE("gauss-legendre rules") {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto& gl = gauss_legendre(n);
    double s = 0.0;
    for (double w : gl.weights) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    // exact for x^{2n-2}
    double m = 0.0;
    for (int k = 0; k < n; ++k) m += gl.weights[k] * std::pow(gl.nodes[k], 2 * n - 2);
    CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
}
