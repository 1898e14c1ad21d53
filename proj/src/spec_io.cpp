#include "qsh/spec_io.hpp"

#include <cmath>
#include <fstream>

#include "qsh/moebius.hpp"

namespace qsh {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("spec is missing \"") + name + "\"");
  return j.at(name);
}

std::vector<Quaternion> quats(const Json& j) {
  if (!j.is_array()) bad("expected an array of quaternions");
  std::vector<Quaternion> out;
  for (const auto& x : j) out.push_back(quaternion_from_json(x));
  return out;
}

Json profile_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

Json to_json(const Quaternion& q) { return Json::array({number(q.w), number(q.x1), number(q.x2), number(q.x3)}); }

Quaternion quaternion_from_json(const Json& j) {
  if (j.is_number()) return Quaternion(j.get<double>());
  if (!j.is_array() || j.size() != 4) bad("a quaternion is an array [w, x1, x2, x3]");
  for (const auto& x : j)
    if (!x.is_number()) bad("quaternion components must be numbers");
  return Quaternion(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

ImaginaryUnit unit_from_json(const Json& j) {
  const Quaternion q = quaternion_from_json(j);
  if (std::abs(q.w) > 1e-12) bad("an imaginary unit has w = 0");
  return ImaginaryUnit(Quaternion(0.0, q.x1, q.x2, q.x3));
}

SliceFunction function_from_json(const Json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "power_series") {
    auto c = quats(field(j, "coeffs"));
    if (j.contains("r_max")) return SliceFunction::truncated_series(std::move(c), j.at("r_max").get<double>());
    return SliceFunction::polynomial(std::move(c));
  }
  if (type == "log_alpha") {
    const auto u = j.contains("unit") ? unit_from_json(j.at("unit")) : ImaginaryUnit::e1();
    return log_alpha(field(j, "alpha").get<double>(), u);
  }
  if (type == "inv_sqrt_one_plus_s") return inv_sqrt_one_plus_s();
  if (type == "gap_series") {
    const auto ex = field(j, "exponents").get<std::vector<int>>();
    return gap_series(ex, quats(field(j, "coeffs")));
  }
  if (type == "constant") return SliceFunction::constant(quaternion_from_json(field(j, "value")));
  if (type == "monomial")
    return SliceFunction::monomial(field(j, "n").get<int>(), j.contains("a") ? quaternion_from_json(j.at("a")) : 1.0);
  if (type == "moebius") {
    const auto u = j.contains("unit") ? unit_from_json(j.at("unit")) : ImaginaryUnit::e1();
    return moebius_ext(MoebiusParam(quaternion_from_json(field(j, "a")), u));
  }
  if (type == "dilation") return function_from_json(field(j, "of")).dilate(field(j, "r").get<double>());
  bad("unknown function type \"" + type + "\"");
}

SliceDecomposedMeasure measure_from_json(const Json& j, const CarlesonConfig& cfg) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "zero") return SliceDecomposedMeasure::zero();
  if (type == "point_masses") {
    std::vector<std::pair<Quaternion, double>> atoms;
    for (const auto& a : field(j, "atoms")) {
      const Quaternion q = quaternion_from_json(field(a, "point"));
      const double m = field(a, "mass").get<double>();
      if (!(q.norm() < 1.0)) bad("atoms must lie in the open unit ball");
      if (!(m >= 0.0)) bad("atom masses must be nonnegative");
      atoms.emplace_back(q, m);
    }
    return SliceDecomposedMeasure::from_atoms(atoms, cfg);
  }
  if (type == "density") {
    const std::string name = field(j, "name").get<std::string>();
    if (name == "lambda4") return lambda4_measure();
    return function_measure(measure_kind_from(name), function_from_json(field(j, "function")), cfg);
  }
  if (type == "pointmass_example")
    return pointmass_example(j.value("n_max", 100000)).measure;
  bad("unknown measure type \"" + type + "\"");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json to_json(const NormReport& r) {
  Json j;
  j["space"] = r.space;
  j["value"] = number(r.value);
  j["diverged"] = r.diverged;
  j["low_confidence"] = r.low_confidence;
  Json slices = Json::array();
  for (const auto& s : r.per_slice)
    slices.push_back({{"unit", to_json(s.unit.q())}, {"value", number(s.value)}, {"diverged", s.diverged},
                      {"low_confidence", s.low_confidence}});
  j["per_slice"] = slices;
  Json extra = Json::object();
  for (const auto& [k, v] : r.extra) extra[k] = number(v);
  j["extra"] = extra;
  Json meta = Json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = number(v);
  j["metadata"] = meta;
  j["ladder"] = profile_json(r.ladder);
  return j;
}

Json to_json(const CarlesonReport& r) {
  Json j;
  j["constant"] = number(r.constant);
  j["carleson"] = r.carleson;
  j["vanishing"] = r.vanishing;
  j["h_capped"] = r.h_capped;
  j["h"] = profile_json(r.h);
  j["profile"] = profile_json(r.profile);
  Json rungs = Json::array();
  for (std::size_t k = 0; k < r.h.size(); ++k) {
    std::size_t arg = 0;
    for (std::size_t t = 0; t < r.ratio[k].size(); ++t)
      if (r.ratio[k][t] > r.ratio[k][arg]) arg = t;
    rungs.push_back({{"h", number(r.h[k])},
                     {"theta0", profile_json(r.theta[k])},
                     {"ratio", profile_json(r.ratio[k])},
                     {"argmax_theta0", r.theta[k].empty() ? Json(nullptr) : number(r.theta[k][arg])}});
  }
  j["cells"] = rungs;
  return j;
}

Json to_json(const SliceCarlesonReport& r) {
  Json j;
  j["uniform_constant"] = number(r.uniform_constant);
  j["slice_carleson"] = r.slice_carleson;
  j["vanishing"] = r.vanishing;
  j["mu_r"] = {{"constant", number(r.mu_r.constant)}, {"carleson", r.mu_r.carleson}, {"vanishing", r.mu_r.vanishing}};
  j["unit_profile"] = profile_json(r.unit_profile);
  j["uniform_h_profile"] = profile_json(r.uniform_h_profile);
  Json units = Json::array();
  for (const auto& u : r.units)
    units.push_back({{"unit", to_json(u.unit.q())}, {"constant", number(u.constant)}, {"carleson", u.carleson},
                     {"vanishing", u.vanishing}});
  j["units"] = units;
  return j;
}

}  // namespace qsh
