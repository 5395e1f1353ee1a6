#include "plaque/scenario.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <variant>

#include "plaque/csv.hpp"

namespace plaque {
namespace {

using Slot = std::variant<double Scenario::*, long long Scenario::*, std::string Scenario::*>;

struct Field {
  std::string key;
  Slot slot;
  std::vector<std::string> choices;  // empty: free-form
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"velocity.kind", &Scenario::velocity_kind, {"constant", "affine", "bump_decay"}},
      {"velocity.v", &Scenario::v, {}},
      {"velocity.v1", &Scenario::v1, {}},
      {"velocity.v2", &Scenario::v2, {}},
      {"velocity.delta", &Scenario::delta, {}},
      {"velocity.lambda", &Scenario::lambda, {}},
      {"mortality.mu", &Scenario::mu, {}},
      {"boundary.kind", &Scenario::boundary_kind, {"ldl_linear", "macrophage_driven", "self_reinforced"}},
      {"boundary.alpha", &Scenario::alpha, {}},
      {"boundary.b", &Scenario::b, {}},
      {"boundary.sigma_m", &Scenario::sigma_m, {}},
      {"flux.kind", &Scenario::flux_kind, {"logistic", "malthus"}},
      {"flux.gamma", &Scenario::gamma, {}},
      {"flux.beta", &Scenario::beta, {}},
      {"ldl.mode", &Scenario::ldl_mode, {"dynamic", "quasi_steady"}},
      {"initial.profile", &Scenario::initial_profile, {"zero", "exponential", "steady", "table"}},
      {"initial.amplitude", &Scenario::initial_amplitude, {}},
      {"initial.table", &Scenario::initial_table, {}},
      {"initial.c0", &Scenario::c0, {}},
      {"grid.a_max", &Scenario::a_max, {}},
      {"grid.n_cells", &Scenario::n_cells, {}},
      {"time.t_end", &Scenario::t_end, {}},
      {"time.sample_every", &Scenario::sample_every, {}},
      {"time.cfl", &Scenario::cfl, {}},
      {"steady.points", &Scenario::steady_points, {}},
      {"reduced.system", &Scenario::reduced_system, {"lotka", "injured"}},
      {"reduced.m0", &Scenario::reduced_m0, {}},
      {"reduced.c0", &Scenario::reduced_c0, {}},
      {"reduced.dt", &Scenario::reduced_dt, {}},
      {"reduced.t_end", &Scenario::reduced_t_end, {}},
      {"output.dir", &Scenario::output_dir, {}},
      {"sweep.command", &Scenario::sweep_command, {"", "simulate", "steady", "reduced", "vulnerability"}},
      {"sweep.param", &Scenario::sweep_param, {}},
      {"sweep.from", &Scenario::sweep_from, {}},
      {"sweep.to", &Scenario::sweep_to, {}},
      {"sweep.count", &Scenario::sweep_count, {}},
      {"sweep.scale", &Scenario::sweep_scale, {"linear", "log"}},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

void assign(Scenario& s, const Field& f, const std::string& value) {
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(s.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          s.*member = parse_double(f.key, value);
        } else if constexpr (std::is_same_v<T, long long>) {
          s.*member = parse_integer(f.key, value);
        } else {
          if (!f.choices.empty()) {
            bool ok = false;
            for (const auto& c : f.choices) ok = ok || c == value;
            if (!ok) throw ConfigError(f.key + ": unsupported value '" + value + "'");
          }
          s.*member = value;
        }
      },
      f.slot);
}

std::string render(const Scenario& s, const Field& f) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cv_t<std::remove_reference_t<decltype(s.*member)>>;
        if constexpr (std::is_same_v<T, double>) {
          return csv::format(s.*member);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(s.*member);
        } else {
          return s.*member;
        }
      },
      f.slot);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

bool Scenario::operator==(const Scenario& o) const {
  for (const auto& f : fields()) {
    const bool same = std::visit([&](auto member) { return this->*member == o.*member; }, f.slot);
    if (!same) return false;
  }
  return true;
}

KernelSet Scenario::kernels() const {
  try {
    auto velocity = [&] {
      if (velocity_kind == "constant") return VelocityKernel::constant(v);
      if (velocity_kind == "affine") return VelocityKernel::affine(v1, v2);
      return VelocityKernel::bump_decay(delta, lambda);
    }();
    auto boundary = [&] {
      if (boundary_kind == "ldl_linear") return BoundaryLaw::ldl_linear(alpha);
      if (boundary_kind == "macrophage_driven") return BoundaryLaw::macrophage_driven(b);
      return BoundaryLaw::self_reinforced(sigma_m);
    }();
    auto flux = flux_kind == "logistic" ? FluxLaw::logistic(gamma, beta) : FluxLaw::malthus(beta);
    return KernelSet(velocity, MortalityKernel(mu), boundary, flux,
                     ldl_mode == "dynamic" ? LdlMode::Dynamic : LdlMode::QuasiSteady);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SimplifiedParams Scenario::simplified() const {
  SimplifiedParams p{gamma, sigma_m, mu, delta, lambda};
  try {
    plaque::validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("vulnerability: ") + e.what());
  }
  return p;
}

LotkaParams Scenario::lotka() const {
  LotkaParams p{b, v, mu, alpha};
  try {
    plaque::validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("reduced lotka: ") + e.what());
  }
  return p;
}

InjuredParams Scenario::injured() const {
  InjuredParams p{alpha, v, mu, gamma, beta};
  try {
    plaque::validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("reduced injured: ") + e.what());
  }
  return p;
}

std::vector<double> Scenario::sweep_values() const {
  std::vector<double> out;
  for (long long i = 0; i < sweep_count; ++i) {
    const double f = sweep_count > 1 ? static_cast<double>(i) / static_cast<double>(sweep_count - 1) : 0.0;
    double v = sweep_scale == "log" ? sweep_from * std::pow(sweep_to / sweep_from, f)
                                    : sweep_from + f * (sweep_to - sweep_from);
    if (i == 0) v = sweep_from;
    if (i > 0 && i == sweep_count - 1) v = sweep_to;
    out.push_back(v);
  }
  return out;
}

Scenario Scenario::with_value(const std::string& key, double value) const {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown key: " + key);
  Scenario copy = *this;
  if (auto m = std::get_if<double Scenario::*>(&f->slot)) {
    copy.*(*m) = value;
  } else if (auto n = std::get_if<long long Scenario::*>(&f->slot)) {
    copy.*(*n) = std::llround(value);
  } else {
    throw ConfigError(key + " is not numeric and cannot be swept");
  }
  return copy;
}

std::filesystem::path Scenario::table_path() const {
  std::filesystem::path p(initial_table);
  return p.is_absolute() ? p : base_dir / p;
}

Scenario parse_scenario(std::istream& in) {
  Scenario s;
  std::map<std::string, int> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (seen.count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    assign(s, *f, value);
  }
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  Scenario s = parse_scenario(in);
  s.base_dir = path.parent_path();
  return s;
}

void dump_scenario(std::ostream& os, const Scenario& s) {
  for (const auto& f : fields()) os << f.key << " = " << render(s, f) << '\n';
}

std::string dump_scenario(const Scenario& s) {
  std::ostringstream os;
  dump_scenario(os, s);
  return os.str();
}

void validate(const Scenario& s) {
  (void)s.kernels();
  require(std::isfinite(s.c0) && s.c0 >= 0.0, "initial.c0 must be finite and nonnegative");
  require(std::isfinite(s.initial_amplitude) && s.initial_amplitude >= 0.0,
          "initial.amplitude must be finite and nonnegative");
  require(s.initial_profile != "table" || !s.initial_table.empty(), "initial.table is required for a table profile");
  require(positive(s.a_max), "grid.a_max must be positive");
  require(s.n_cells > 0 && s.n_cells <= 10'000'000, "grid.n_cells must be in [1, 1e7]");
  require(positive(s.t_end), "time.t_end must be positive");
  require(positive(s.sample_every), "time.sample_every must be positive");
  require(positive(s.cfl), "time.cfl must be positive");
  require(s.steady_points >= 2, "steady.points must be at least 2");
  require(positive(s.reduced_dt), "reduced.dt must be positive");
  require(std::isfinite(s.reduced_t_end) && s.reduced_t_end >= 0.0, "reduced.t_end must be nonnegative");
  require(std::isfinite(s.reduced_m0) && s.reduced_m0 >= 0.0, "reduced.m0 must be nonnegative");
  require(std::isfinite(s.reduced_c0) && s.reduced_c0 >= 0.0, "reduced.c0 must be nonnegative");
  require(!s.output_dir.empty(), "output.dir must not be empty");
  if (s.has_sweep()) {
    const Field* f = find_field(s.sweep_param);
    require(f != nullptr, "sweep.param: unknown key '" + s.sweep_param + "'");
    require(!std::holds_alternative<std::string Scenario::*>(f->slot), "sweep.param must name a numeric key");
    require(s.sweep_param.rfind("sweep.", 0) != 0, "sweep.param cannot be a sweep key");
    require(std::isfinite(s.sweep_from) && std::isfinite(s.sweep_to), "sweep.from and sweep.to must be finite");
    require(s.sweep_scale != "log" || (s.sweep_from > 0.0 && s.sweep_to > 0.0),
            "sweep.scale = log needs positive sweep.from and sweep.to");
    require(s.sweep_count >= 1 && s.sweep_count <= 100000, "sweep.count must be in [1, 100000]");
    // Every point must itself be a valid scenario.
    for (double v : s.sweep_values()) {
      Scenario point = s.with_value(s.sweep_param, v);
      point.sweep_command.clear();
      validate(point);
    }
  }
}

}  // namespace plaque
