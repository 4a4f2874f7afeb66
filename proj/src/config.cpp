#include "vela/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "vela/errors.hpp"

namespace vela {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Context {
  std::string key;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "config line " << line << ": key '" << key << "': " << what;
    throw ConfigError(os.str());
  }
};

double parse_double(const std::string& v, const Context& c) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) c.fail("expected a number, got '" + v + "'");
  return x;
}

long long parse_integer(const std::string& v, const Context& c) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) c.fail("expected an integer, got '" + v + "'");
  return x;
}

int parse_int(const std::string& v, const Context& c) {
  const long long x = parse_integer(v, c);
  if (x < -2147483647LL || x > 2147483647LL) c.fail("integer out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& v, const Context& c) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  c.fail("expected true or false, got '" + v + "'");
}

template <class T, class Fn>
std::vector<T> parse_list(const std::string& v, const Context& c, Fn&& one) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) c.fail("empty list entry");
    out.push_back(one(item, c));
  }
  if (out.empty()) c.fail("expected a comma-separated list");
  return out;
}

void require(bool ok, const Context& c, const std::string& what) {
  if (!ok) c.fail(what);
}

}  // namespace

std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::equilibrium: return "equilibrium";
    case InitKind::taylor_green_perturbed: return "taylor_green_perturbed";
    case InitKind::constraint_compatible: return "constraint_compatible";
    case InitKind::checkpoint: return "checkpoint";
    case InitKind::manufactured: return "manufactured";
  }
  return "unknown";
}

StepConfig RunConfig::step_config() const {
  StepConfig s;
  s.dt = dt;
  s.scheme = scheme;
  s.mode = mode;
  s.mu = mu;
  s.law = PressureLaw{pressure_A, gamma};
  s.pressure_tol = pressure_tol;
  s.pressure_max_iter = pressure_max_iter;
  s.dealias = dealias;
  s.evolve_E = evolve_E;
  return s;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(const std::string&, const Context&)>;
  auto positive = [](double x, const Context& c) { require(x > 0.0, c, "must be > 0"); };

  const std::map<std::string, Setter> setters{
      {"dim",
       [&](const std::string& v, const Context& c) {
         cfg.dim = parse_int(v, c);
         require(cfg.dim == 2 || cfg.dim == 3, c, "must be 2 or 3");
       }},
      {"n",
       [&](const std::string& v, const Context& c) {
         cfg.n = parse_int(v, c);
         require(cfg.n >= 8 && (cfg.n & (cfg.n - 1)) == 0, c, "must be a power of two >= 8");
       }},
      {"length", [&](const std::string& v, const Context& c) { positive(cfg.length = parse_double(v, c), c); }},
      {"mu", [&](const std::string& v, const Context& c) { positive(cfg.mu = parse_double(v, c), c); }},
      {"gamma",
       [&](const std::string& v, const Context& c) {
         cfg.gamma = parse_double(v, c);
         require(cfg.gamma > 1.0, c, "the pressure exponent requires gamma > 1");
       }},
      {"pressure_A", [&](const std::string& v, const Context& c) { positive(cfg.pressure_A = parse_double(v, c), c); }},
      {"mode",
       [&](const std::string& v, const Context& c) {
         if (v == "incompressible") cfg.mode = Mode::incompressible;
         else if (v == "compressible") cfg.mode = Mode::compressible;
         else c.fail("expected incompressible or compressible, got '" + v + "'");
       }},
      {"dt", [&](const std::string& v, const Context& c) { positive(cfg.dt = parse_double(v, c), c); }},
      {"t_end", [&](const std::string& v, const Context& c) { positive(cfg.t_end = parse_double(v, c), c); }},
      {"output_every",
       [&](const std::string& v, const Context& c) {
         cfg.output_every = parse_int(v, c);
         require(cfg.output_every >= 1, c, "must be >= 1");
       }},
      {"q_norm",
       [&](const std::string& v, const Context& c) {
         cfg.q_norm = parse_double(v, c);
         require(cfg.q_norm >= 1.0, c, "must be >= 1");
         if (!(cfg.q_norm > 3.0 && cfg.q_norm <= 6.0)) {
           std::ostringstream os;
           os << "config line " << c.line << ": q_norm = " << cfg.q_norm << " is outside (3, 6]";
           cfg.warnings.push_back(os.str());
         }
       }},
      {"scheme",
       [&](const std::string& v, const Context& c) {
         if (v == "imex2") cfg.scheme = Scheme::imex2;
         else if (v == "imex1") cfg.scheme = Scheme::imex1;
         else c.fail("expected imex2 or imex1, got '" + v + "'");
       }},
      {"dealias", [&](const std::string& v, const Context& c) { cfg.dealias = parse_bool(v, c); }},
      {"evolve_E", [&](const std::string& v, const Context& c) { cfg.evolve_E = parse_bool(v, c); }},
      {"init",
       [&](const std::string& v, const Context& c) {
         if (v == "equilibrium") cfg.init = InitKind::equilibrium;
         else if (v == "taylor_green_perturbed") cfg.init = InitKind::taylor_green_perturbed;
         else if (v == "constraint_compatible") cfg.init = InitKind::constraint_compatible;
         else if (v == "checkpoint") cfg.init = InitKind::checkpoint;
         else if (v == "manufactured") cfg.init = InitKind::manufactured;
         else c.fail("unknown init '" + v + "'");
       }},
      {"delta",
       [&](const std::string& v, const Context& c) {
         cfg.delta = parse_double(v, c);
         require(cfg.delta >= 0.0, c, "must be >= 0");
       }},
      {"seed",
       [&](const std::string& v, const Context& c) {
         const long long s = parse_integer(v, c);
         require(s >= 0, c, "must be >= 0");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
      {"compatible", [&](const std::string& v, const Context& c) { cfg.compatible = parse_bool(v, c); }},
      {"pressure_tol", [&](const std::string& v, const Context& c) { positive(cfg.pressure_tol = parse_double(v, c), c); }},
      {"pressure_max_iter",
       [&](const std::string& v, const Context& c) {
         cfg.pressure_max_iter = parse_int(v, c);
         require(cfg.pressure_max_iter >= 1, c, "must be >= 1");
       }},
      {"csv", [&](const std::string& v, const Context&) { cfg.csv = v; }},
      {"checkpoint_out", [&](const std::string& v, const Context&) { cfg.checkpoint_out = v; }},
      {"checkpoint_in", [&](const std::string& v, const Context&) { cfg.checkpoint_in = v; }},
      {"tol_constraint", [&](const std::string& v, const Context& c) { positive(cfg.tol.constraint = parse_double(v, c), c); }},
      {"tol_curl", [&](const std::string& v, const Context& c) { positive(cfg.tol.curl = parse_double(v, c), c); }},
      {"tol_grad_rho", [&](const std::string& v, const Context& c) { positive(cfg.tol.grad_rho = parse_double(v, c), c); }},
      {"tol_force", [&](const std::string& v, const Context& c) { positive(cfg.tol.force = parse_double(v, c), c); }},
      {"tol_z", [&](const std::string& v, const Context& c) { positive(cfg.tol.z = parse_double(v, c), c); }},
      {"tol_pressure_poisson",
       [&](const std::string& v, const Context& c) { positive(cfg.tol.pressure_poisson = parse_double(v, c), c); }},
      {"mms_dts",
       [&](const std::string& v, const Context& c) {
         cfg.mms_dts = parse_list<double>(v, c, parse_double);
         for (double x : cfg.mms_dts) positive(x, c);
       }},
      {"mms_ns",
       [&](const std::string& v, const Context& c) {
         cfg.mms_ns = parse_list<int>(v, c, parse_int);
         for (int x : cfg.mms_ns) require(x >= 8 && (x & (x - 1)) == 0, c, "entries must be powers of two >= 8");
       }},
      {"mms_t_end", [&](const std::string& v, const Context& c) { positive(cfg.mms_t_end = parse_double(v, c), c); }},
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    Context c{trim(body.substr(0, eq == std::string::npos ? body.size() : eq)), line};
    if (eq == std::string::npos) c.fail("expected 'key = value'");
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters.find(c.key);
    if (it == setters.end()) c.fail("unknown key");
    if (!seen.insert(c.key).second) c.fail("duplicate key");
    if (value.empty()) c.fail("missing value");
    it->second(value, c);
  }
  if (cfg.init == InitKind::checkpoint && cfg.checkpoint_in.empty())
    Context{"checkpoint_in", line}.fail("required when init = checkpoint");
  if (cfg.init == InitKind::manufactured && cfg.dim != 2)
    Context{"init", line}.fail("manufactured init is defined for dim = 2");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace vela
