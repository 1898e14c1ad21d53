#include "qsh/quaternion.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "qsh/gauss_legendre.hpp"

namespace qsh {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonOrthogonalUnits: return "NonOrthogonalUnits";
    case ErrorCode::UnknownScheme: return "UnknownScheme";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::TruncationBudgetExceeded: return "TruncationBudgetExceeded";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::EvaluationFailure: return "EvaluationFailure";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::ZeroSlice: return "ZeroSlice";
    case ErrorCode::NonMonotoneProfile: return "NonMonotoneProfile";
    case ErrorCode::GapViolation: return "GapViolation";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Quaternion Quaternion::inverse() const {
  const double n2 = norm2();
  if (n2 == 0.0) throw Error(ErrorCode::SingularDenominator, "inverse of zero quaternion");
  return conj() / n2;
}

ImaginaryUnit::ImaginaryUnit(const Quaternion& q) {
  const double n = q.imag_norm();
  if (!(n > 1e-300)) throw Error(ErrorCode::InvalidInput, "imaginary unit from zero vector");
  u_ = Quaternion(0.0, q.x1 / n, q.x2 / n, q.x3 / n);
}

SliceCoordinates to_slice(const Quaternion& q) {
  const double x1 = q.imag_norm();
  if (x1 > 0.0) return {q.w, x1, ImaginaryUnit(q.imag())};
  return {q.w, 0.0, default_unit()};
}

double off_plane(const Quaternion& q, const ImaginaryUnit& i) {
  const Quaternion in_plane = embed(project(q, i), i);
  return (q - in_plane).norm();
}

void require_orthogonal(const ImaginaryUnit& i, const ImaginaryUnit& j) {
  const Quaternion anti = i.q() * j.q() + j.q() * i.q();
  if (anti.norm() > kOrthogonalityTol)
    throw Error(ErrorCode::NonOrthogonalUnits,
                "i j + j i has modulus " + std::to_string(anti.norm()));
}

ImaginaryUnit orthogonal_unit(const ImaginaryUnit& i) {
  // Cross with the axis least aligned to i.
  const Quaternion& u = i.q();
  Quaternion axis = Quaternion::e1();
  if (std::abs(u.x2) <= std::abs(u.x1) && std::abs(u.x2) <= std::abs(u.x3)) axis = Quaternion::e2();
  else if (std::abs(u.x3) <= std::abs(u.x1) && std::abs(u.x3) <= std::abs(u.x2)) axis = Quaternion::e3();
  // vector part of u * axis is the cross product u x axis
  return ImaginaryUnit((u * axis).imag());
}

std::pair<Complex, Complex> split_basis(const Quaternion& a, const ImaginaryUnit& i,
                                        const ImaginaryUnit& j) {
  require_orthogonal(i, j);
  const Complex c1 = project(a, i);
  // a - c1 = c2 j  =>  c2 = (a - c1) j^{-1} = -(a - c1) j
  const Quaternion rest = (a - embed(c1, i)) * (-j.q());
  return {c1, project(rest, i)};
}

namespace {

std::vector<ImaginaryUnit> product_nodes(int n) {
  int n_theta = std::max(1, static_cast<int>(std::lround(std::sqrt(n / 2.0))));
  int n_phi = n / n_theta;
  if (n_phi % 2 != 0) ++n_phi;
  const auto& gl = gauss_legendre(n_theta);
  std::vector<ImaginaryUnit> out;
  out.reserve(static_cast<std::size_t>(n_theta * n_phi));
  for (int a = 0; a < n_theta; ++a) {
    const double ct = gl.nodes[a];
    const double st = std::sqrt(1.0 - ct * ct);
    for (int b = 0; b < n_phi; ++b) {
      const double phi = 2.0 * std::numbers::pi * (b + 0.5) / n_phi;
      out.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
    }
  }
  return out;
}

}  // namespace

std::vector<ImaginaryUnit> sample_sphere(int n, std::string_view scheme) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "sample_sphere needs n >= 2");
  if (scheme == "axes") {
    const std::array<ImaginaryUnit, 6> axes = {ImaginaryUnit::e1(), -ImaginaryUnit::e1(),
                                               ImaginaryUnit::e2(), -ImaginaryUnit::e2(),
                                               ImaginaryUnit::e3(), -ImaginaryUnit::e3()};
    std::vector<ImaginaryUnit> out;
    for (int k = 0; k < std::min(n, 6); ++k) out.push_back(axes[static_cast<std::size_t>(k)]);
    return out;
  }
  if (scheme == "product") return product_nodes(n);
  if (scheme == "spiral") {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<ImaginaryUnit> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      // z offsets are irrational so that no two points are antipodal
      const double z = 1.0 - 2.0 * (k + std::numbers::sqrt2 / 2.0) / (n + 1.0);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      out.emplace_back(rho * std::cos(golden * k), rho * std::sin(golden * k), z);
    }
    return out;
  }
  throw Error(ErrorCode::UnknownScheme, std::string(scheme));
}

std::vector<ImaginaryUnit> random_units(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ImaginaryUnit> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    const double a = gauss(rng), b = gauss(rng), c = gauss(rng);
    if (a * a + b * b + c * c < 1e-12) continue;
    out.emplace_back(a, b, c);
  }
  return out;
}

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) { p1 = x; p0 = 1.0; }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) { p1 = x; p0 = 1.0; }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[static_cast<std::size_t>(n - 1 - k)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - k)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace qsh
