#include "qsh/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

namespace qsh {

namespace {

using Slot = std::variant<int*, unsigned*, double*, std::string*>;

std::vector<std::pair<std::string, Slot>> slots(RunConfig& c) {
  return {
      {"circle_nodes", &c.norm.circle_nodes},
      {"disk_radial", &c.norm.disk.n_r},
      {"disk_angular", &c.norm.disk.n_theta},
      {"sphere_theta", &c.norm.sphere.n_theta},
      {"sphere_phi", &c.norm.sphere.n_phi},
      {"ladder_depth", &c.norm.ladder_depth},
      {"arc_depth", &c.norm.arc_depth},
      {"arc_nodes", &c.arc_nodes},
      {"n_spiral", &c.n_spiral},
      {"carleson_theta_points", &c.carleson.theta_points},
      {"carleson_h_min_exp", &c.carleson.h_min_exp},
      {"carleson_panel_nodes", &c.carleson.panel_nodes},
      {"carleson_grading_levels", &c.carleson.grading_levels},
      {"carleson_mass_ladder_depth", &c.carleson.mass_ladder_depth},
      {"seed", &c.seed},
      {"threads", &c.threads},
      {"out", &c.out},
      {"tol_factor2", &c.tol_factor2},
      {"tol_sandwich", &c.tol_sandwich},
      {"tol_parseval", &c.tol_parseval},
      {"tol_dirichlet", &c.tol_dirichlet},
      {"tol_identity", &c.tol_identity},
      {"tol_decomposition", &c.tol_decomposition},
      {"tol_moebius", &c.tol_moebius},
      {"tol_sc", &c.tol_sc},
  };
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T x{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad("config: bad value for " + key + ": \"" + v + "\"");
  return x;
}

std::string format(const Slot& s) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) return *p;
        else if constexpr (std::is_same_v<T, double>) {
          char buf[32];
          const auto r = std::to_chars(buf, buf + sizeof buf, *p);
          return std::string(buf, r.ptr);
        } else return std::to_string(*p);
      },
      s);
}

}  // namespace

RunConfig RunConfig::scaled(double factor) const {
  RunConfig c = *this;
  auto sc = [factor](int& n, int lo) { n = std::max(lo, static_cast<int>(std::lround(n * factor))); };
  sc(c.norm.circle_nodes, 16);
  sc(c.norm.disk.n_r, 8);
  sc(c.norm.disk.n_theta, 16);
  sc(c.norm.sphere.n_theta, 4);
  sc(c.norm.sphere.n_phi, 8);
  c.norm.sphere.n_phi += c.norm.sphere.n_phi % 2;
  sc(c.carleson.theta_points, 8);
  sc(c.carleson.panel_nodes, 4);
  return c;
}

void RunConfig::validate() const {
  RunConfig c = *this;
  for (const auto& [k, s] : slots(c)) {
    if (k == "threads" || k == "out" || k == "seed") continue;
    const bool ok = std::visit(
        [](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::string>) return true;
          else return *p > 0;
        },
        s);
    if (!ok) bad("config: " + k + " must be positive");
  }
  if (threads < 0) bad("config: threads must be >= 0");
  if (norm.sphere.n_phi % 2 != 0) bad("config: sphere_phi must be even");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  auto table = slots(base);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    if (it == table.end()) bad("config line " + std::to_string(lineno) + ": unknown key \"" + key + "\"");
    std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::string>) *p = val;
          else *p = parse_number<T>(key, val);
        },
        it->second);
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) bad("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string config_text(const RunConfig& c) {
  RunConfig copy = c;
  std::string out;
  for (const auto& [k, s] : slots(copy)) out += k + " = " + format(s) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  RunConfig c;
  std::vector<std::string> k;
  for (const auto& e : slots(c)) k.push_back(e.first);
  return k;
}

Json to_json(const RunConfig& c) {
  RunConfig copy = c;
  Json j = Json::object();
  for (const auto& [k, s] : slots(copy))
    std::visit([&](auto* p) { j[k] = *p; }, s);
  return j;
}

}  // namespace qsh
