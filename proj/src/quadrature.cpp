#include "qsh/quadrature.hpp"

#include <algorithm>
#include <atomic>

namespace qsh {

namespace {
std::atomic<int> g_threads{1};
thread_local bool t_inside_worker = false;
}  // namespace

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(g_threads.load(), n);
  // nested calls run inline, the outer level owns the threads
  if (workers <= 1 || t_inside_worker) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::exception_ptr first;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([&, lo, hi] {
      t_inside_worker = true;
      try {
        for (int k = lo; k < hi; ++k) body(k);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::vector<SphereRule::Node> SphereRule::nodes() const {
  if (n_phi % 2 != 0 || n_theta < 1) throw Error(ErrorCode::InvalidInput, "sphere rule needs even n_phi");
  const auto& gl = gauss_legendre(n_theta);
  std::vector<Node> out;
  out.reserve(static_cast<std::size_t>(n_theta * n_phi));
  const double wphi = 2.0 * std::numbers::pi / n_phi;
  for (int a = 0; a < n_theta; ++a) {
    const double ct = gl.nodes[a];
    const double st = std::sqrt(1.0 - ct * ct);
    for (int b = 0; b < n_phi; ++b) {
      const double phi = wphi * (b + 0.5);
      out.push_back({ImaginaryUnit(st * std::cos(phi), st * std::sin(phi), ct), gl.weights[a] * wphi});
    }
  }
  return out;
}

Rule1D composite_gauss(const std::vector<double>& breaks, int n_per_panel) {
  const auto& gl = gauss_legendre(n_per_panel);
  Rule1D rule;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int k = 0; k < n_per_panel; ++k) {
      rule.nodes.push_back(mid + half * gl.nodes[k]);
      rule.weights.push_back(half * gl.weights[k]);
    }
  }
  return rule;
}

std::vector<double> graded_breaks(double a, double b, double toward, int levels) {
  std::vector<double> out;
  const double len = b - a;
  if (toward == b) {
    out.push_back(a);
    for (int l = 1; l <= levels; ++l) out.push_back(b - len * std::ldexp(1.0, -l));
    out.push_back(b);
  } else {
    out.push_back(a);
    for (int l = levels; l >= 1; --l) out.push_back(a + len * std::ldexp(1.0, -l));
    out.push_back(b);
  }
  return out;
}

std::vector<double> graded_breaks_around(double a, double b, double c, int levels) {
  c = std::clamp(c, a, b);
  std::vector<double> out;
  if (c > a) out = graded_breaks(a, c, c, levels);
  else out.push_back(a);
  if (c < b) {
    const auto right = graded_breaks(c, b, c, levels);
    out.insert(out.end(), right.begin() + 1, right.end());
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ladder_diverges(const std::vector<double>& v) {
  if (v.size() < 4) return false;
  const std::size_t n = v.size();
  const double d1 = v[n - 3] - v[n - 4], d2 = v[n - 2] - v[n - 3], d3 = v[n - 1] - v[n - 2];
  const double floor = 1e-12 * (1.0 + std::abs(v[n - 1]));
  return d1 > 0.0 && d2 > 0.0 && d3 > floor && d3 >= d1 / kDivergenceGrowth;
}

RadialLimit radial_limit(const std::vector<double>& v, int m0) {
  RadialLimit out;
  if (v.empty()) return out;
  const std::size_t n = v.size();
  if (n == 1) {
    out.limit = v[0];
    return out;
  }
  // Neville on (h_m, v_m) evaluated at h = 0
  auto extrapolate = [&](std::size_t count) {
    const std::size_t start = n - count;
    std::vector<double> p(v.begin() + static_cast<long>(start), v.end());
    std::vector<double> h(count);
    for (std::size_t k = 0; k < count; ++k) h[k] = std::ldexp(1.0, -(m0 + static_cast<int>(start + k)));
    for (std::size_t level = 1; level < count; ++level)
      for (std::size_t k = 0; k + level < count; ++k)
        p[k] = (h[k + level] * p[k] - h[k] * p[k + 1]) / (h[k + level] - h[k]);
    return p[0];
  };
  const std::size_t q = std::min<std::size_t>(4, n);
  out.limit = extrapolate(q);
  out.error = std::abs(out.limit - extrapolate(q - 1));
  out.diverged = ladder_diverges(v);
  if (out.diverged) {
    out.limit = INFINITY;
    out.error = INFINITY;
  }
  return out;
}

}  // namespace qsh
