#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qsh/gauss_legendre.hpp"
#include "qsh/parallel.hpp"
#include "qsh/quaternion.hpp"

namespace qsh {

/// Uniform rule on [0, 2pi). Nodes sit at 2pi (k + offset) / n; the default
/// half-step offset keeps theta = pi (and theta = 0) off the grid.
struct CircleRule {
  int n = 2048;
  double offset = 0.5;

  double node(int k) const { return 2.0 * std::numbers::pi * (k + offset) / n; }
  double weight() const { return 2.0 * std::numbers::pi / n; }
};

/// Gauss-Legendre in r on (0,1) with the polar Jacobian folded in, times a CircleRule.
struct DiskRule {
  int n_r = 128;
  int n_theta = 512;
};

/// Gauss-Legendre in cos(theta) times a shifted uniform rule in phi,
/// i(theta, phi) = sin cos(phi) e1 + sin sin(phi) e2 + cos e3.
struct SphereRule {
  int n_theta = 64;
  int n_phi = 128;  // even, so the node set is closed under i -> -i

  struct Node {
    ImaginaryUnit unit;
    double weight;
  };
  std::vector<Node> nodes() const;
};

template <class T>
struct Integral {
  T value{};
  T doubled{};            // same integral with twice the nodes
  double error = 0.0;     // |value - doubled|
  bool low_confidence = false;
};

inline constexpr double kNodeDoublingTol = 1e-6;

/// Ordered, compensated sum (Neumaier) over doubles.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) c_ += (sum_ - t) + x;
    else c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

namespace detail {
inline double mag(double x) { return std::abs(x); }
inline double mag(const Complex& x) { return std::abs(x); }
inline double mag(const Quaternion& x) { return x.norm(); }

template <class T>
T ordered_sum(const std::vector<T>& v) {
  T acc{};
  for (const auto& x : v) acc += x;
  return acc;
}
inline double ordered_sum(const std::vector<double>& v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value();
}
}  // namespace detail

/// Trapezoid sum of g over the circle rule. Node values are evaluated in
/// parallel and reduced in node order.
template <class T>
T circle_sum(const std::function<T(double)>& g, const CircleRule& rule) {
  std::vector<T> vals(static_cast<std::size_t>(rule.n));
  parallel_for(rule.n, [&](int k) {
    try {
      vals[static_cast<std::size_t>(k)] = g(rule.node(k));
    } catch (const Error& e) {
      throw Error(e.code(), "circle node " + std::to_string(k) + ": " + e.what());
    }
  });
  return detail::ordered_sum(vals) * rule.weight();
}

template <class T>
Integral<T> integrate_circle(const std::function<T(double)>& g, const CircleRule& rule,
                             bool check = true) {
  Integral<T> out;
  out.value = circle_sum(g, rule);
  if (check) {
    out.doubled = circle_sum(g, CircleRule{2 * rule.n, rule.offset});
    out.error = detail::mag(out.doubled - out.value);
    out.low_confidence = out.error > kNodeDoublingTol * std::max(detail::mag(out.doubled), 1e-300);
  } else {
    out.doubled = out.value;
  }
  return out;
}

template <class T>
T disk_sum(const std::function<T(Complex)>& g, const DiskRule& rule) {
  const auto& gl = gauss_legendre(rule.n_r);
  const CircleRule circle{rule.n_theta, 0.5};
  std::vector<T> rings(static_cast<std::size_t>(rule.n_r));
  parallel_for(rule.n_r, [&](int a) {
    const double r = 0.5 * (gl.nodes[a] + 1.0);
    T ring{};
    for (int k = 0; k < circle.n; ++k) ring += g(std::polar(r, circle.node(k)));
    rings[static_cast<std::size_t>(a)] = ring * (0.5 * gl.weights[a] * r * circle.weight());
  });
  return detail::ordered_sum(rings);
}

template <class T>
Integral<T> integrate_disk(const std::function<T(Complex)>& g, const DiskRule& rule,
                           bool check = true) {
  Integral<T> out;
  out.value = disk_sum(g, rule);
  if (check) {
    out.doubled = disk_sum(g, DiskRule{2 * rule.n_r, 2 * rule.n_theta});
    out.error = detail::mag(out.doubled - out.value);
    out.low_confidence = out.error > kNodeDoublingTol * std::max(detail::mag(out.doubled), 1e-300);
  } else {
    out.doubled = out.value;
  }
  return out;
}

template <class T>
T sphere_sum(const std::function<T(const ImaginaryUnit&)>& h, const SphereRule& rule) {
  const auto nodes = rule.nodes();
  std::vector<T> vals(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), [&](int k) {
    vals[static_cast<std::size_t>(k)] = h(nodes[static_cast<std::size_t>(k)].unit) *
                                        nodes[static_cast<std::size_t>(k)].weight;
  });
  return detail::ordered_sum(vals);
}

template <class T>
Integral<T> integrate_sphere(const std::function<T(const ImaginaryUnit&)>& h, const SphereRule& rule,
                             bool check = true) {
  Integral<T> out;
  out.value = sphere_sum(h, rule);
  if (check) {
    out.doubled = sphere_sum(h, SphereRule{2 * rule.n_theta, 2 * rule.n_phi});
    out.error = detail::mag(out.doubled - out.value);
    out.low_confidence = out.error > kNodeDoublingTol * std::max(detail::mag(out.doubled), 1e-300);
  } else {
    out.doubled = out.value;
  }
  return out;
}

/// Nodes and weights of a 1-D rule.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  auto integrate(F&& f) const {
    using T = decltype(f(0.0));
    T acc{};
    for (std::size_t k = 0; k < nodes.size(); ++k) acc += f(nodes[k]) * weights[k];
    return acc;
  }
};

/// Gauss-Legendre with n points on each panel [b_k, b_{k+1}].
Rule1D composite_gauss(const std::vector<double>& breaks, int n_per_panel);

/// Breakpoints on [a, b], graded geometrically toward `toward` (a or b) with
/// ratio 1/2 for `levels` panels, finished by one panel at the end point.
std::vector<double> graded_breaks(double a, double b, double toward, int levels);

/// Same, graded toward an interior point c in [a, b] from both sides.
std::vector<double> graded_breaks_around(double a, double b, double c, int levels);

/// r_m = 1 - 2^{-m}.
inline double ladder_radius(int m) { return 1.0 - std::ldexp(1.0, -m); }

struct RadialLimit {
  double limit = 0.0;
  double error = 0.0;
  bool diverged = false;
};

/// Growth factor of the divergence rule.
inline constexpr double kDivergenceGrowth = 1.5;

/// Limit of values v_m sampled on the ladder r_m = 1 - 2^{-m}, m = m0, m0+1, ...
///
/// The limit is the Neville extrapolation to h = 0 of the last four rungs in h = 2^{-m},
/// the error the gap between the four- and three-point extrapolants. The ladder
/// counts as diverged when the last three increments are positive and the last one
/// is still at least 1/1.5 of the first (increments that do not shrink by the
/// growth factor across the last four rungs).
RadialLimit radial_limit(const std::vector<double>& values, int m0 = 3);

/// Divergence part of radial_limit on its own.
bool ladder_diverges(const std::vector<double>& values);

}  // namespace qsh
