#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>

#include "savkin/harness.hpp"

namespace savkin {

std::string_view to_string(Equation e) {
  return e == Equation::boltzmann ? "boltzmann" : "landau";
}

std::string_view to_string(InitialCondition ic) {
  return ic == InitialCondition::bkw ? "bkw" : "bimax";
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double RunConfig::half_width() const {
  return equation == Equation::boltzmann ? (3.0 * std::numbers::sqrt2 + 1.0) * s / 2.0 : 2.0 * s;
}

double RunConfig::radius() const { return boltzmann.radius > 0.0 ? boltzmann.radius : 2.0 * s; }

VelocityGrid RunConfig::grid() const { return make_grid(n, half_width()); }

BoltzmannKernel RunConfig::boltzmann_kernel() const {
  BoltzmannKernel k = boltzmann;
  k.radius = radius();
  return k;
}

SchemeConfig RunConfig::scheme_config() const {
  SchemeConfig c;
  c.scheme = scheme;
  c.dt = dt;
  c.entropy_offset = entropy_offset;
  c.eps = eps;
  c.beta = beta;
  c.multiplier = multiplier;
  c.negativity_tolerance = negativity_tolerance;
  return c;
}

long RunConfig::step_count() const {
  const double steps = (t_end - t0) / dt;
  const long rounded = std::lround(steps);
  if (std::abs(steps - static_cast<double>(rounded)) > 1e-9 * std::max(1.0, steps)) {
    throw Error(ErrorKind::invalid_argument, "t_end - t0 is not a whole number of steps");
  }
  return rounded;
}

void RunConfig::validate() const {
  if (!(s > 0.0)) throw Error(ErrorKind::invalid_argument, "domain scale S must be positive");
  if (!(t_end >= t0)) throw Error(ErrorKind::invalid_argument, "t_end must not precede t0");
  if (cadence < 1) throw Error(ErrorKind::invalid_argument, "cadence must be at least 1");
  scheme_config().validate();
  if (scheme == SchemeTag::sav1_pb && equation != Equation::boltzmann) {
    throw Error(ErrorKind::invalid_argument, "sav1-pb needs the Boltzmann operator");
  }
  if (initial == InitialCondition::bkw && !(bkw_k(t0) > 0.5)) {
    throw Error(ErrorKind::negative_region, "BKW data needs t0 > 0");
  }
  (void)step_count();
  (void)grid();
  if (equation == Equation::boltzmann) savkin::validate(boltzmann_kernel());
  else savkin::validate(landau);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
    throw Error(ErrorKind::invalid_argument, "'" + key + "' expects a number, got '" + v + "'");
  }
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorKind::invalid_argument, "'" + key + "' expects an integer, got '" + v + "'");
  }
  return x;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

Setter number(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = to_double(k, v);
  };
}

template <class Member>
Setter nested(Member RunConfig::*part, double Member::*field) {
  return [part, field](RunConfig& c, const std::string& k, const std::string& v) {
    (c.*part).*field = to_double(k, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"equation",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "boltzmann") c.equation = Equation::boltzmann;
         else if (v == "landau") c.equation = Equation::landau;
         else throw Error(ErrorKind::invalid_argument, "'" + k + "' must be boltzmann or landau");
       }},
      {"scheme", [](RunConfig& c, const std::string&, const std::string& v) { c.scheme = parse_scheme(v); }},
      {"n", [](RunConfig& c, const std::string& k, const std::string& v) { c.n = to_int(k, v); }},
      {"s", number(&RunConfig::s)},
      {"dt", number(&RunConfig::dt)},
      {"t0", number(&RunConfig::t0)},
      {"t_end", number(&RunConfig::t_end)},
      {"entropy_offset", number(&RunConfig::entropy_offset)},
      {"eps", number(&RunConfig::eps)},
      {"beta",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "none" || v.empty()) c.beta.reset();
         else c.beta = to_double(k, v);
       }},
      {"negativity_tolerance", number(&RunConfig::negativity_tolerance)},
      {"secant_tolerance", nested(&RunConfig::multiplier, &MultiplierOptions::tolerance)},
      {"secant_max_iterations",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.multiplier.max_iterations = to_int(k, v);
       }},
      {"boltzmann.constant", nested(&RunConfig::boltzmann, &BoltzmannKernel::constant)},
      {"boltzmann.gamma", nested(&RunConfig::boltzmann, &BoltzmannKernel::gamma)},
      {"boltzmann.angular", nested(&RunConfig::boltzmann, &BoltzmannKernel::angular)},
      {"boltzmann.radius", nested(&RunConfig::boltzmann, &BoltzmannKernel::radius)},
      {"quadrature.radial",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.quadrature.radial = to_int(k, v);
       }},
      {"quadrature.angular",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.quadrature.angular = to_int(k, v);
       }},
      {"landau.constant", nested(&RunConfig::landau, &LandauKernel::constant)},
      {"landau.gamma", nested(&RunConfig::landau, &LandauKernel::gamma)},
      {"initial",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "bkw") c.initial = InitialCondition::bkw;
         else if (v == "bimax") c.initial = InitialCondition::bimax;
         else throw Error(ErrorKind::invalid_argument, "'" + k + "' must be bkw or bimax");
       }},
      {"bimax.rho1", nested(&RunConfig::bimax, &BiMaxwellianParams::rho1)},
      {"bimax.rho2", nested(&RunConfig::bimax, &BiMaxwellianParams::rho2)},
      {"bimax.t1", nested(&RunConfig::bimax, &BiMaxwellianParams::t1)},
      {"bimax.t2", nested(&RunConfig::bimax, &BiMaxwellianParams::t2)},
      {"bimax.v1x", [](RunConfig& c, const std::string& k, const std::string& v) { c.bimax.v1[0] = to_double(k, v); }},
      {"bimax.v1y", [](RunConfig& c, const std::string& k, const std::string& v) { c.bimax.v1[1] = to_double(k, v); }},
      {"bimax.v2x", [](RunConfig& c, const std::string& k, const std::string& v) { c.bimax.v2[0] = to_double(k, v); }},
      {"bimax.v2y", [](RunConfig& c, const std::string& k, const std::string& v) { c.bimax.v2[1] = to_double(k, v); }},
      {"output_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"modes_cache",
       [](RunConfig& c, const std::string&, const std::string& v) {
         if (v.empty() || v == "none") c.modes_cache.reset();
         else c.modes_cache = v;
       }},
      {"cadence", [](RunConfig& c, const std::string& k, const std::string& v) { c.cadence = to_int(k, v); }},
  };
  return table;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto k = trim(key);
  const auto it = setters().find(k);
  if (it == setters().end()) throw Error(ErrorKind::invalid_argument, "unknown config key '" + k + "'");
  it->second(cfg, k, trim(value));
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty() || text.front() == '[') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::invalid_argument,
                  "config line " + std::to_string(lineno) + " is not key=value");
    }
    apply_setting(base, text.substr(0, eq), text.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path.string());
  return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> kv = {
      {"equation", std::string(to_string(equation))},
      {"scheme", std::string(to_string(scheme))},
      {"n", std::to_string(n)},
      {"s", format_number(s)},
      {"half_width", format_number(half_width())},
      {"dt", format_number(dt)},
      {"t0", format_number(t0)},
      {"t_end", format_number(t_end)},
      {"entropy_offset", format_number(entropy_offset)},
      {"eps", format_number(eps)},
      {"beta", beta ? format_number(*beta) : "none"},
      {"negativity_tolerance", format_number(negativity_tolerance)},
      {"secant_tolerance", format_number(multiplier.tolerance)},
      {"secant_max_iterations", std::to_string(multiplier.max_iterations)},
  };
  if (equation == Equation::boltzmann) {
    const auto k = boltzmann_kernel();
    kv.insert(kv.end(), {{"boltzmann.constant", format_number(k.constant)},
                         {"boltzmann.gamma", format_number(k.gamma)},
                         {"boltzmann.angular", format_number(k.angular)},
                         {"boltzmann.radius", format_number(k.radius)}});
    QuadratureOrders q = quadrature;
    if (q.radial == 0 || q.angular == 0) {
      const auto d = default_quadrature(grid(), k);
      if (q.radial == 0) q.radial = d.radial;
      if (q.angular == 0) q.angular = d.angular;
    }
    kv.insert(kv.end(), {{"quadrature.radial", std::to_string(q.radial)},
                         {"quadrature.angular", std::to_string(q.angular)}});
  } else {
    kv.insert(kv.end(), {{"landau.constant", format_number(landau.constant)},
                         {"landau.gamma", format_number(landau.gamma)}});
  }
  kv.emplace_back("initial", std::string(to_string(initial)));
  if (initial == InitialCondition::bimax) {
    kv.insert(kv.end(), {{"bimax.rho1", format_number(bimax.rho1)},
                         {"bimax.rho2", format_number(bimax.rho2)},
                         {"bimax.t1", format_number(bimax.t1)},
                         {"bimax.t2", format_number(bimax.t2)},
                         {"bimax.v1x", format_number(bimax.v1[0])},
                         {"bimax.v1y", format_number(bimax.v1[1])},
                         {"bimax.v2x", format_number(bimax.v2[0])},
                         {"bimax.v2y", format_number(bimax.v2[1])}});
  }
  kv.emplace_back("modes_cache", modes_cache ? modes_cache->string() : "none");
  kv.emplace_back("cadence", std::to_string(cadence));
  return kv;
}

}  // namespace savkin
