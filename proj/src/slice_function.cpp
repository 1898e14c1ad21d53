#include "qsh/slice_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsh {

struct SliceFunction::Impl {
  bool is_series = true;
  Series series;
  PlaneKernel kernel;
  std::vector<double> singular;  // on the kernel plane
  std::string label;
  bool intrinsic = true;
  bool sparse = false;
  int degree = -1;
};

namespace {

using ImplPtr = std::shared_ptr<SliceFunction::Impl>;

Complex ipow(Complex z, int n) {
  Complex out = 1.0;
  while (n > 0) {
    if (n & 1) out *= z;
    z *= z;
    n >>= 1;
  }
  return out;
}

void finish_series(SliceFunction::Impl& impl) {
  auto& t = impl.series.terms;
  std::sort(t.begin(), t.end(), [](const SeriesTerm& a, const SeriesTerm& b) { return a.n < b.n; });
  // merge duplicate exponents
  std::vector<SeriesTerm> merged;
  for (const auto& term : t) {
    if (term.n < 0) throw Error(ErrorCode::InvalidInput, "negative exponent");
    if (!merged.empty() && merged.back().n == term.n) merged.back().a += term.a;
    else merged.push_back(term);
  }
  t = std::move(merged);
  impl.intrinsic = std::all_of(t.begin(), t.end(), [](const SeriesTerm& s) {
    return s.a.x1 == 0.0 && s.a.x2 == 0.0 && s.a.x3 == 0.0;
  });
  impl.degree = t.empty() ? 0 : t.back().n;
  impl.sparse = static_cast<int>(t.size()) * 4 < impl.degree + 1;
}

std::vector<SeriesTerm> dense_terms(const std::vector<Quaternion>& coeffs) {
  std::vector<SeriesTerm> terms;
  for (std::size_t n = 0; n < coeffs.size(); ++n) terms.push_back({static_cast<int>(n), coeffs[n]});
  return terms;
}

Quaternion eval_series(const SliceFunction::Impl& impl, const ImaginaryUnit& i, Complex z) {
  const auto& s = impl.series;
  const double r = std::abs(z);
  if (r > s.r_max * (1.0 + 1e-12) + 1e-15)
    throw Error(ErrorCode::OutOfDomain, "|x| = " + std::to_string(r) + " exceeds r_max = " +
                                            std::to_string(s.r_max));
  if (s.truncated && !s.terms.empty()) {
    const std::size_t k0 = s.terms.size() > 8 ? s.terms.size() - 8 : 0;
    double a_tail = 0.0;
    for (std::size_t k = k0; k < s.terms.size(); ++k) a_tail = std::max(a_tail, s.terms[k].a.norm());
    // geometric tail in the undilated variable rho |x|
    const double rho = s.tail_ratio;
    const double bound = rho * r >= 1.0
                             ? INFINITY
                             : a_tail * std::pow(r, impl.degree + 1) * rho / (1.0 - rho * r);
    if (bound > s.tolerance)
      throw Error(ErrorCode::TruncationBudgetExceeded,
                  "tail bound " + std::to_string(bound) + " at |x| = " + std::to_string(r));
  }
  if (s.terms.empty()) return {};
  const Quaternion x = embed(z, i);
  if (!impl.sparse) {
    Quaternion acc;
    std::size_t k = s.terms.size();
    for (int n = impl.degree; n >= 0; --n) {
      acc = x * acc;
      if (k > 0 && s.terms[k - 1].n == n) {
        acc += s.terms[k - 1].a;
        --k;
      }
    }
    return acc;
  }
  Quaternion acc;
  Complex p = 1.0;
  int last = 0;
  for (const auto& term : s.terms) {
    p *= ipow(z, term.n - last);
    last = term.n;
    acc += embed(p, i) * term.a;
  }
  return acc;
}

Quaternion kernel_value(const PlaneKernel& k, Complex z) {
  if (k.in_domain ? !k.in_domain(z) : std::abs(z) > 1.0 + 1e-12)
    throw Error(ErrorCode::OutOfDomain, "point outside kernel domain");
  return k.value(z);
}

}  // namespace

SliceFunction::SliceFunction() : impl_(std::make_shared<Impl>()) {}

SliceFunction SliceFunction::polynomial(std::vector<Quaternion> coeffs, std::string label) {
  auto impl = std::make_shared<Impl>();
  impl->series.terms = dense_terms(coeffs);
  impl->label = std::move(label);
  finish_series(*impl);
  return SliceFunction(impl);
}

SliceFunction SliceFunction::truncated_series(std::vector<Quaternion> coeffs, double r_max,
                                              double tolerance, std::string label) {
  if (!(r_max > 0.0)) throw Error(ErrorCode::InvalidInput, "r_max must be positive");
  auto impl = std::make_shared<Impl>();
  impl->series.terms = dense_terms(coeffs);
  impl->series.r_max = r_max;
  impl->series.tolerance = tolerance;
  impl->series.truncated = true;
  impl->label = std::move(label);
  finish_series(*impl);
  return SliceFunction(impl);
}

SliceFunction SliceFunction::sparse(std::vector<SeriesTerm> terms, std::string label) {
  auto impl = std::make_shared<Impl>();
  impl->series.terms = std::move(terms);
  impl->label = std::move(label);
  finish_series(*impl);
  return SliceFunction(impl);
}

SliceFunction SliceFunction::constant(const Quaternion& c) { return polynomial({c}); }

SliceFunction SliceFunction::monomial(int n, const Quaternion& a) { return sparse({{n, a}}); }

SliceFunction SliceFunction::from_kernel(PlaneKernel kernel, std::vector<double> singular_angles,
                                         std::string label) {
  if (!kernel.value) throw Error(ErrorCode::InvalidInput, "kernel without evaluator");
  auto impl = std::make_shared<Impl>();
  impl->is_series = false;
  impl->kernel = std::move(kernel);
  impl->singular = std::move(singular_angles);
  impl->label = std::move(label);
  impl->intrinsic = false;
  return SliceFunction(impl);
}

bool SliceFunction::is_series() const { return impl_->is_series; }

const SliceFunction::Series& SliceFunction::series() const {
  if (!impl_->is_series) throw Error(ErrorCode::InvalidInput, "not a power series");
  return impl_->series;
}

const PlaneKernel& SliceFunction::kernel() const {
  if (impl_->is_series) throw Error(ErrorCode::InvalidInput, "not a kernel function");
  return impl_->kernel;
}

const std::string& SliceFunction::label() const { return impl_->label; }

SliceFunction SliceFunction::with_label(std::string label) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->label = std::move(label);
  return SliceFunction(impl);
}

SliceFunction SliceFunction::with_singular_angles(std::vector<double> angles) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->singular = std::move(angles);
  return SliceFunction(impl);
}

bool SliceFunction::intrinsic() const { return impl_->intrinsic; }

int SliceFunction::degree() const { return impl_->is_series ? impl_->degree : -1; }

Quaternion SliceFunction::operator()(const Quaternion& x) const {
  const SliceCoordinates sc = to_slice(x);
  return on_plane(sc.i, sc.as_complex());
}

Quaternion SliceFunction::on_plane(const ImaginaryUnit& i, Complex z) const {
  if (impl_->is_series) return eval_series(*impl_, i, z);
  const PlaneKernel& k = impl_->kernel;
  if (i == k.unit || z.imag() == 0.0) return kernel_value(k, z);
  if (i == -k.unit) return kernel_value(k, std::conj(z));
  const Quaternion iu = i.q() * k.unit.q();
  const Quaternion a = kernel_value(k, z);
  const Quaternion b = kernel_value(k, std::conj(z));
  return 0.5 * ((Quaternion(1.0) - iu) * a + (Quaternion(1.0) + iu) * b);
}

SliceFunction SliceFunction::derivative() const {
  if (impl_->is_series) {
    auto impl = std::make_shared<Impl>(*impl_);
    std::vector<SeriesTerm> d;
    for (const auto& t : impl_->series.terms)
      if (t.n > 0) d.push_back({t.n - 1, t.a * static_cast<double>(t.n)});
    impl->series.terms = std::move(d);
    impl->label = impl_->label.empty() ? "" : "d(" + impl_->label + ")";
    finish_series(*impl);
    return SliceFunction(impl);
  }
  const PlaneKernel& k = impl_->kernel;
  PlaneKernel dk;
  dk.unit = k.unit;
  dk.in_domain = k.in_domain;
  if (k.derivative) {
    dk.value = k.derivative;
  } else {
    const auto f = k.value;
    dk.value = [f](Complex z) {
      const double h = kFiniteDifferenceStep;
      return (f(z + h) - f(z - h)) / (2.0 * h);
    };
  }
  return from_kernel(std::move(dk), impl_->singular,
                     impl_->label.empty() ? "" : "d(" + impl_->label + ")");
}

SliceFunction SliceFunction::dilate(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorCode::InvalidInput, "dilation factor outside [0,1]");
  if (r == 1.0) return *this;
  if (impl_->is_series) {
    auto impl = std::make_shared<Impl>(*impl_);
    for (auto& t : impl->series.terms) t.a = t.a * std::pow(r, t.n);
    if (r == 0.0) {
      impl->series.terms.resize(std::min<std::size_t>(1, impl->series.terms.size()));
      if (!impl->series.terms.empty() && impl->series.terms[0].n != 0) impl->series.terms.clear();
      impl->series.truncated = false;
      impl->series.r_max = INFINITY;
    } else {
      impl->series.r_max /= r;
      impl->series.tail_ratio *= r;
    }
    finish_series(*impl);
    return SliceFunction(impl);
  }
  const PlaneKernel& k = impl_->kernel;
  PlaneKernel dk;
  dk.unit = k.unit;
  const auto f = k.value;
  dk.value = [f, r](Complex z) { return f(r * z); };
  if (k.derivative) {
    const auto df = k.derivative;
    dk.derivative = [df, r](Complex z) { return df(r * z) * r; };
  } else {
    dk.derivative = [f, r](Complex z) {
      const double h = kFiniteDifferenceStep;
      return (f(r * (z + h)) - f(r * (z - h))) / (2.0 * h);
    };
  }
  return from_kernel(std::move(dk), {}, impl_->label.empty() ? "" : impl_->label + "_r");
}

double SliceFunction::boundary_radius() const {
  return impl_->is_series ? std::min(1.0, impl_->series.r_max) : 1.0;
}

std::vector<double> SliceFunction::singular_angles(const ImaginaryUnit& i) const {
  std::vector<double> out;
  const double pi = std::numbers::pi;
  auto wrap = [pi](double t) {
    t = std::fmod(t, 2.0 * pi);
    if (t < 0) t += 2.0 * pi;
    return t;
  };
  for (double t : impl_->singular) {
    out.push_back(wrap(t));
    if (impl_->is_series || !(i == impl_->kernel.unit)) out.push_back(wrap(-t));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            out.end());
  return out;
}

namespace {

SliceFunction combine(const SliceFunction& f, const SliceFunction& g, double sign) {
  if (f.is_series() && g.is_series()) {
    std::vector<SeriesTerm> terms = f.series().terms;
    for (const auto& t : g.series().terms) terms.push_back({t.n, t.a * sign});
    const auto& fs = f.series();
    const auto& gs = g.series();
    std::string label = f.label() + (sign > 0 ? "+" : "-") + g.label();
    if (fs.truncated || gs.truncated) {
      SliceFunction out = SliceFunction::sparse(std::move(terms));
      std::vector<Quaternion> dense(static_cast<std::size_t>(out.degree() + 1));
      for (const auto& t : out.series().terms) dense[static_cast<std::size_t>(t.n)] = t.a;
      return SliceFunction::truncated_series(dense, std::min(fs.r_max, gs.r_max),
                                             std::max(fs.tolerance, gs.tolerance), label);
    }
    return SliceFunction::sparse(std::move(terms), label);
  }
  const ImaginaryUnit u = f.is_series() ? g.kernel().unit : f.kernel().unit;
  PlaneKernel k;
  k.unit = u;
  k.value = [f, g, u, sign](Complex z) { return f.on_plane(u, z) + g.on_plane(u, z) * sign; };
  const SliceFunction df = f.derivative();
  const SliceFunction dg = g.derivative();
  k.derivative = [df, dg, u, sign](Complex z) {
    return df.on_plane(u, z) + dg.on_plane(u, z) * sign;
  };
  std::vector<double> sing = f.singular_angles(u);
  for (double t : g.singular_angles(u)) sing.push_back(t);
  return SliceFunction::from_kernel(std::move(k), std::move(sing),
                                    f.label() + (sign > 0 ? "+" : "-") + g.label());
}

}  // namespace

SliceFunction SliceFunction::operator+(const SliceFunction& g) const { return combine(*this, g, 1.0); }
SliceFunction SliceFunction::operator-(const SliceFunction& g) const { return combine(*this, g, -1.0); }

SliceFunction SliceFunction::times(const Quaternion& a) const {
  if (impl_->is_series) {
    auto impl = std::make_shared<Impl>(*impl_);
    for (auto& t : impl->series.terms) t.a = t.a * a;
    finish_series(*impl);
    return SliceFunction(impl);
  }
  const PlaneKernel& k = impl_->kernel;
  PlaneKernel out;
  out.unit = k.unit;
  out.in_domain = k.in_domain;
  const auto f = k.value;
  out.value = [f, a](Complex z) { return f(z) * a; };
  if (k.derivative) {
    const auto df = k.derivative;
    out.derivative = [df, a](Complex z) { return df(z) * a; };
  }
  return from_kernel(std::move(out), impl_->singular, impl_->label);
}

PlaneFunction restrict_to(const SliceFunction& f, const ImaginaryUnit& i) {
  return {i, [f, i](Complex z) { return f.on_plane(i, z); }};
}

Quaternion representation_formula(const PlaneFunction& f_on_plane, const Quaternion& x) {
  const SliceCoordinates sc = to_slice(x);
  const Complex z = sc.as_complex();
  if (sc.x1 == 0.0) return f_on_plane(z);
  const Quaternion iu = sc.i.q() * f_on_plane.unit.q();
  return 0.5 * ((Quaternion(1.0) - iu) * f_on_plane(z) + (Quaternion(1.0) + iu) * f_on_plane(std::conj(z)));
}

ComplexComponent complex_series(std::vector<std::pair<int, Complex>> terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ComplexComponent c;
  auto shared = std::make_shared<const std::vector<std::pair<int, Complex>>>(terms);
  c.value = [shared](Complex z) {
    Complex acc = 0.0, p = 1.0;
    int last = 0;
    for (const auto& [n, a] : *shared) {
      p *= ipow(z, n - last);
      last = n;
      acc += p * a;
    }
    return acc;
  };
  c.derivative = [shared](Complex z) {
    Complex acc = 0.0, p = 1.0;
    int last = 0;
    for (const auto& [n, a] : *shared) {
      if (n == 0) continue;
      p *= ipow(z, n - 1 - last);
      last = n - 1;
      acc += p * a * static_cast<double>(n);
    }
    return acc;
  };
  c.terms = std::move(terms);
  return c;
}

SplitPair split(const SliceFunction& f, const ImaginaryUnit& i, const ImaginaryUnit& j) {
  require_orthogonal(i, j);
  SplitPair p{i, j, {}, {}};
  if (f.is_series() && !f.series().truncated) {
    std::vector<std::pair<int, Complex>> t1, t2;
    for (const auto& t : f.series().terms) {
      const auto [c1, c2] = split_basis(t.a, i, j);
      t1.emplace_back(t.n, c1);
      t2.emplace_back(t.n, c2);
    }
    p.f1 = complex_series(std::move(t1));
    p.f2 = complex_series(std::move(t2));
    return p;
  }
  const SliceFunction df = f.derivative();
  p.f1.value = [f, i, j](Complex z) { return split_basis(f.on_plane(i, z), i, j).first; };
  p.f2.value = [f, i, j](Complex z) { return split_basis(f.on_plane(i, z), i, j).second; };
  p.f1.derivative = [df, i, j](Complex z) { return split_basis(df.on_plane(i, z), i, j).first; };
  p.f2.derivative = [df, i, j](Complex z) { return split_basis(df.on_plane(i, z), i, j).second; };
  return p;
}

SliceFunction recombine(const SplitPair& p) {
  if (p.f1.terms && p.f2.terms) {
    std::vector<SeriesTerm> terms;
    for (const auto& [n, c] : *p.f1.terms) terms.push_back({n, embed(c, p.i)});
    for (const auto& [n, c] : *p.f2.terms) terms.push_back({n, embed(c, p.i) * p.j.q()});
    return SliceFunction::sparse(std::move(terms));
  }
  PlaneKernel k;
  k.unit = p.i;
  const auto f1 = p.f1.value, f2 = p.f2.value;
  const ImaginaryUnit i = p.i, j = p.j;
  k.value = [f1, f2, i, j](Complex z) { return join_basis(f1(z), f2(z), i, j); };
  if (p.f1.derivative && p.f2.derivative) {
    const auto d1 = p.f1.derivative, d2 = p.f2.derivative;
    k.derivative = [d1, d2, i, j](Complex z) { return join_basis(d1(z), d2(z), i, j); };
  }
  return SliceFunction::from_kernel(std::move(k));
}

SliceFunction i_compose(const SliceFunction& f, const SliceFunction& g, const ImaginaryUnit& i) {
  // sample g_i on a polar grid reaching toward the boundary
  const double radii[] = {0.0, 0.5, 0.9, 0.999};
  const int n_angle = 64;
  for (double r : radii) {
    for (int k = 0; k < n_angle; ++k) {
      const double t = 2.0 * std::numbers::pi * (k + 0.5) / n_angle;
      const Quaternion w = g.on_plane(i, std::polar(r, t));
      if (off_plane(w, i) > 1e-9 * (1.0 + w.norm()))
        throw Error(ErrorCode::RangeViolation, "g_i leaves the plane C_i");
      if (w.norm() >= 1.0) throw Error(ErrorCode::RangeViolation, "|g_i(z)| >= 1 inside the disc");
    }
  }
  const SliceFunction dg = g.derivative();
  const SliceFunction df = f.derivative();
  PlaneKernel k;
  k.unit = i;
  k.value = [f, g, i](Complex z) { return f.on_plane(i, project(g.on_plane(i, z), i)); };
  k.derivative = [df, g, dg, i](Complex z) {
    const Complex w = project(g.on_plane(i, z), i);
    return dg.on_plane(i, z) * df.on_plane(i, w);
  };
  return SliceFunction::from_kernel(std::move(k), {}, f.label() + "o_i" + g.label());
}

double cauchy_riemann_residual(const SliceFunction& f, const ImaginaryUnit& i, Complex z, double h) {
  const Quaternion dx0 = (f.on_plane(i, z + h) - f.on_plane(i, z - h)) / (2.0 * h);
  const Quaternion dx1 =
      (f.on_plane(i, z + Complex(0.0, h)) - f.on_plane(i, z - Complex(0.0, h))) / (2.0 * h);
  return (dx0 + i.q() * dx1).norm();
}

SliceFunction log_alpha(double alpha, const ImaginaryUnit& u) {
  const Complex e = std::polar(1.0, alpha);
  PlaneKernel k;
  k.unit = u;
  k.value = [e, u](Complex z) { return embed(-std::log(1.0 - e * z), u); };
  k.derivative = [e, u](Complex z) { return embed(e / (1.0 - e * z), u); };
  k.in_domain = [e](Complex z) { return std::abs(z) <= 1.0 + 1e-12 && std::abs(1.0 - e * z) > 0.0; };
  return SliceFunction::from_kernel(std::move(k), {-alpha}, "log_alpha(" + std::to_string(alpha) + ")");
}

SliceFunction inv_sqrt_one_plus_s() {
  PlaneKernel k;
  k.unit = ImaginaryUnit::e1();
  const ImaginaryUnit u = k.unit;
  k.value = [u](Complex z) { return embed(1.0 / std::sqrt(1.0 + z), u); };
  k.derivative = [u](Complex z) {
    const Complex s = std::sqrt(1.0 + z);
    return embed(-0.5 / (s * s * s), u);
  };
  k.in_domain = [](Complex z) {
    return std::abs(z) <= 1.0 + 1e-12 && !(z.imag() == 0.0 && z.real() <= -1.0);
  };
  return SliceFunction::from_kernel(std::move(k), {std::numbers::pi}, "inv_sqrt_one_plus_s");
}

SliceFunction gap_series(const std::vector<int>& exponents, const std::vector<Quaternion>& coeffs) {
  if (exponents.size() != coeffs.size())
    throw Error(ErrorCode::InvalidInput, "gap series: exponents and coeffs differ in length");
  std::vector<SeriesTerm> terms;
  for (std::size_t l = 0; l < exponents.size(); ++l) {
    if (l > 0 && exponents[l] <= exponents[l - 1])
      throw Error(ErrorCode::GapViolation, "exponents must increase strictly");
    terms.push_back({exponents[l], coeffs[l]});
  }
  return SliceFunction::sparse(std::move(terms), "gap_series");
}

}  // namespace qsh
