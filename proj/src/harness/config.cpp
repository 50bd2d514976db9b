#include "dlambda/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda::harness {

namespace {

enum class Dim
{
  none,     // dimensionless number
  integer,
  text,
  length,   // Labs or physical
  physical, // physical length only
  time,     // 1/Gamma
  rate,     // Gamma
  length_list,
  number_list
};

const std::map<std::string, Dim>& schema()
{
  static const std::map<std::string, Dim> keys = {
    {"medium.alpha", Dim::none},
    {"medium.length", Dim::length},
    {"medium.gamma", Dim::rate},
    {"medium.delta", Dim::rate},
    {"medium.physical_length", Dim::physical},
    {"profile.kind", Dim::text},
    {"profile.omega_c", Dim::rate},
    {"profile.c1", Dim::rate},
    {"profile.c2", Dim::rate},
    {"profile.z0", Dim::length},
    {"profile.z_bar", Dim::length},
    {"profile.sigma", Dim::length},
    {"profile.table", Dim::text},
    {"pulse.amplitude", Dim::rate},
    {"pulse.t0", Dim::time},
    {"pulse.width", Dim::time},
    {"pulse.channel", Dim::text},
    {"pulse.weights", Dim::number_list},
    {"grid.nz", Dim::integer},
    {"grid.dz", Dim::length},
    {"grid.dt", Dim::time},
    {"grid.t_window", Dim::time},
    {"grid.store_every", Dim::integer},
    {"vortex.l", Dim::integer},
    {"vortex.waist", Dim::physical},
    {"vortex.wavelength", Dim::physical},
    {"vortex.grid", Dim::integer},
    {"vortex.extent", Dim::none},
    {"vortex.map_z", Dim::length_list},
    {"run.name", Dim::text},
    {"run.mode", Dim::text},
    {"run.reduction", Dim::text},
    {"run.adiabaticity_grid", Dim::integer},
    {"sweep.parameter", Dim::text},
    {"sweep.values", Dim::text},
    {"sweep.reduction", Dim::text},
  };
  return keys;
}

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view token, std::string_view key)
{
  const std::string s(token);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ValidationError(fmt::format("{}: '{}' is not a finite number", key, token));
  }
  return v;
}

// "value unit" -> (value, unit)
std::pair<double, std::string> split_quantity(std::string_view raw, std::string_view key)
{
  const std::string s = trim(raw);
  const auto space = s.find_first_of(" \t");
  if (space == std::string::npos) {
    return {parse_number(s, key), ""};
  }
  return {parse_number(s.substr(0, space), key), trim(s.substr(space))};
}

double physical_factor_um(std::string_view unit)
{
  if (unit == "um" || unit == "micron") {
    return 1.0;
  }
  if (unit == "nm") {
    return 1e-3;
  }
  if (unit == "mm") {
    return 1e3;
  }
  if (unit == "m") {
    return 1e6;
  }
  return std::nan("");
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

std::string fmt_list(const std::vector<double>& v, std::string_view unit)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? ", " : "") + fmt_num(v[i]);
  }
  if (!unit.empty()) {
    out += fmt::format(" {}", unit);
  }
  return out;
}

class Resolver
{
public:
  explicit Resolver(const KeyValueConfig& raw) : raw_(raw)
  {
    for (const auto& [key, value] : raw.entries()) {
      if (!schema().contains(key)) {
        throw ValidationError(fmt::format("unknown config key '{}'", key));
      }
    }
  }

  std::optional<std::string> text(const std::string& key) const
  {
    auto v = raw_.get(key);
    if (v) {
      return trim(*v);
    }
    return v;
  }

  std::optional<double> dimensionless(const std::string& key) const
  {
    auto v = raw_.get(key);
    if (!v) {
      return std::nullopt;
    }
    auto [value, unit] = split_quantity(*v, key);
    if (!unit.empty() && unit != "1" && unit != "w") {
      throw ValidationError(fmt::format("{} is dimensionless, got unit '{}'", key, unit));
    }
    return value;
  }

  std::optional<long long> integer(const std::string& key) const
  {
    auto v = dimensionless(key);
    if (!v) {
      return std::nullopt;
    }
    if (*v != std::floor(*v)) {
      throw ValidationError(fmt::format("{} must be an integer, got {}", key, *v));
    }
    return static_cast<long long>(*v);
  }

  std::optional<double> with_unit(const std::string& key,
                                  std::initializer_list<std::string_view> units) const
  {
    auto v = raw_.get(key);
    if (!v) {
      return std::nullopt;
    }
    auto [value, unit] = split_quantity(*v, key);
    if (unit.empty()) {
      throw ValidationError(fmt::format(
        "{} needs an explicit unit (expected {})", key, fmt::join(units, " or ")));
    }
    if (std::find(units.begin(), units.end(), unit) == units.end()) {
      throw ValidationError(fmt::format("{}: unit '{}' not accepted (expected {})", key,
                                        unit, fmt::join(units, " or ")));
    }
    return value;
  }

  std::optional<double> rate(const std::string& key) const
  {
    return with_unit(key, {"Gamma"});
  }
  std::optional<double> time(const std::string& key) const
  {
    return with_unit(key, {"inv_Gamma", "1/Gamma"});
  }

  std::optional<double> physical_um(const std::string& key) const
  {
    auto v = raw_.get(key);
    if (!v) {
      return std::nullopt;
    }
    return parse_physical_length_um(*v);
  }

  // Length in absorption lengths. Physical units need the physical medium
  // length to be known.
  double to_labs(double value, const std::string& unit, const std::string& key) const
  {
    if (unit == "Labs" || unit == "L_abs") {
      return value;
    }
    const double f = physical_factor_um(unit);
    if (std::isnan(f)) {
      throw ValidationError(fmt::format(
        "{}: length needs a unit Labs, um, mm or m (got '{}')", key, unit));
    }
    if (!l_abs_um_) {
      throw ValidationError(fmt::format(
        "{}: physical lengths need medium.physical_length to fix the absorption length",
        key));
    }
    return value * f / *l_abs_um_;
  }

  std::optional<double> length(const std::string& key) const
  {
    auto v = raw_.get(key);
    if (!v) {
      return std::nullopt;
    }
    auto [value, unit] = split_quantity(*v, key);
    if (unit.empty()) {
      throw ValidationError(fmt::format("{} needs an explicit length unit", key));
    }
    return to_labs(value, unit, key);
  }

  std::optional<std::vector<double>> length_list(const std::string& key) const
  {
    auto v = raw_.get(key);
    if (!v) {
      return std::nullopt;
    }
    auto [values, unit] = parse_list(*v);
    if (unit.empty()) {
      throw ValidationError(fmt::format("{} needs an explicit length unit", key));
    }
    for (double& x : values) {
      x = to_labs(x, unit, key);
    }
    return values;
  }

  void set_absorption_length_um(double v) { l_abs_um_ = v; }

private:
  const KeyValueConfig& raw_;
  std::optional<double> l_abs_um_;
};

std::size_t as_size(long long v, const char* key, long long minimum)
{
  if (v < minimum) {
    throw ValidationError(fmt::format("{} must be >= {}, got {}", key, minimum, v));
  }
  return static_cast<std::size_t>(v);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view origin)
{
  KeyValueConfig cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) {
      continue;
    }
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) {
        throw ValidationError(fmt::format("{}:{}: malformed section header", origin, lineno));
      }
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(fmt::format("{}:{}: expected 'key = value'", origin, lineno));
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError(fmt::format("{}:{}: empty key or value", origin, lineno));
    }
    if (key.find('.') == std::string::npos) {
      if (section.empty()) {
        throw ValidationError(fmt::format(
          "{}:{}: key '{}' outside a section must be qualified", origin, lineno, key));
      }
      key = section + "." + key;
    }
    if (cfg.entries_.contains(key)) {
      throw ValidationError(fmt::format("{}:{}: duplicate key '{}'", origin, lineno, key));
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError(fmt::format("cannot read config file {}", path.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  KeyValueConfig cfg = parse(buf.str(), path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

void KeyValueConfig::set(const std::string& key, const std::string& raw)
{
  entries_[key] = raw;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const
{
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

bool is_known_key(const std::string& key) { return schema().contains(key); }

std::string_view to_string(Mode mode)
{
  switch (mode) {
  case Mode::analytic:
    return "analytic";
  case Mode::numeric:
    return "numeric";
  case Mode::compare:
    return "compare";
  }
  return "unknown";
}

std::string_view to_string(Reduction reduction)
{
  return reduction == Reduction::pulse_energy ? "pulse-energy" : "peak-amplitude";
}

std::pair<std::vector<double>, std::string> parse_list(std::string_view raw)
{
  std::string s = trim(raw);
  std::vector<double> values;
  std::string unit;
  // The unit, if any, trails the last number.
  const auto last_comma = s.rfind(',');
  std::string tail = trim(last_comma == std::string::npos ? s : s.substr(last_comma + 1));
  const auto space = tail.find_first_of(" \t");
  if (space != std::string::npos) {
    unit = trim(tail.substr(space));
    s = (last_comma == std::string::npos ? std::string() : s.substr(0, last_comma + 1)) +
        tail.substr(0, space);
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) {
      throw ValidationError(fmt::format("empty entry in list '{}'", raw));
    }
    values.push_back(parse_number(t, "list"));
  }
  return {values, unit};
}

double parse_physical_length_um(std::string_view raw)
{
  auto [value, unit] = split_quantity(raw, "length");
  if (unit.empty()) {
    throw ValidationError(fmt::format("'{}' needs a length unit (um, mm, m)", raw));
  }
  const double f = physical_factor_um(unit);
  if (std::isnan(f)) {
    throw ValidationError(fmt::format("'{}': unsupported length unit '{}'", raw, unit));
  }
  return value * f;
}

ProfileTable read_profile_table(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError(fmt::format("cannot read profile table {}", path.string()));
  }
  ProfileTable t;
  std::string line;
  std::size_t columns = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) {
      continue;
    }
    std::replace_if(body.begin(), body.end(),
                    [](char c) { return c == ',' || c == ';' || c == '\t'; }, ' ');
    std::istringstream fields(body);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      row.push_back(parse_number(tok, fmt::format("{}:{}", path.string(), lineno)));
    }
    if (row.size() != 2 && row.size() != 3) {
      throw ValidationError(fmt::format(
        "{}:{}: expected 2 or 3 columns, got {}", path.string(), lineno, row.size()));
    }
    if (columns == 0) {
      columns = row.size();
    } else if (row.size() != columns) {
      throw ValidationError(fmt::format("{}:{}: inconsistent column count", path.string(), lineno));
    }
    t.z.push_back(row[0]);
    t.c1.push_back(row[1]);
    if (columns == 3) {
      t.c2.push_back(row[2]);
    }
  }
  if (t.z.size() < 2) {
    throw ValidationError(fmt::format("{}: profile table needs at least two rows", path.string()));
  }
  return t;
}

MediumParams ExperimentConfig::medium() const
{
  return MediumParams(alpha, length(), gamma, delta);
}

ControlProfile ExperimentConfig::build_profile() const
{
  switch (profile.kind) {
  case ProfileKind::constant:
    return ControlProfile::constant(profile.c1, profile.c2, length());
  case ProfileKind::sigmoid:
    return ControlProfile::sigmoid(profile.omega_c, profile.z0, profile.z_bar, length());
  case ProfileKind::gaussian:
    return ControlProfile::gaussian(profile.omega_c, profile.sigma, length());
  case ProfileKind::tabulated:
    if (profile.table_c2.empty()) {
      return ControlProfile::tabulated(profile.table_z, profile.table_c1,
                                       profile.omega_c, length());
    }
    return ControlProfile::tabulated(profile.table_z, profile.table_c1,
                                     profile.table_c2, length());
  }
  throw ValidationError("unknown profile kind");
}

std::vector<double> ExperimentConfig::z_grid() const
{
  std::vector<double> z;
  z.reserve(grid.nz + 1);
  for (std::size_t i = 0; i <= grid.nz; ++i) {
    z.push_back(std::min(length(), static_cast<double>(i) * grid.dz));
  }
  return z;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const
{
  std::vector<std::pair<std::string, std::string>> e;
  auto add = [&e](std::string key, std::string value) {
    e.emplace_back(std::move(key), std::move(value));
  };
  add("run.name", name);
  add("run.mode", std::string(to_string(mode)));
  add("run.reduction", std::string(to_string(reduction)));
  add("run.adiabaticity_grid", fmt_num(static_cast<double>(adiabaticity_grid)));
  add("medium.alpha", fmt_num(alpha));
  add("medium.length", fmt_num(length()) + " Labs");
  add("medium.gamma", fmt_num(gamma) + " Gamma");
  add("medium.delta", fmt_num(delta) + " Gamma");
  if (physical_length_um) {
    add("medium.physical_length", fmt_num(*physical_length_um) + " um");
  }
  add("profile.kind", std::string(to_string(profile.kind)));
  switch (profile.kind) {
  case ProfileKind::constant:
    add("profile.c1", fmt_num(profile.c1) + " Gamma");
    add("profile.c2", fmt_num(profile.c2) + " Gamma");
    break;
  case ProfileKind::sigmoid:
    add("profile.omega_c", fmt_num(profile.omega_c) + " Gamma");
    add("profile.z0", fmt_num(profile.z0) + " Labs");
    add("profile.z_bar", fmt_num(profile.z_bar) + " Labs");
    break;
  case ProfileKind::gaussian:
    add("profile.omega_c", fmt_num(profile.omega_c) + " Gamma");
    add("profile.sigma", fmt_num(profile.sigma) + " Labs");
    break;
  case ProfileKind::tabulated:
    add("profile.omega_c", fmt_num(profile.omega_c) + " Gamma");
    add("profile.table", profile.table);
    break;
  }
  add("pulse.amplitude", fmt_num(pulse.amplitude) + " Gamma");
  add("pulse.t0", fmt_num(pulse.t0) + " inv_Gamma");
  add("pulse.width", fmt_num(pulse.width) + " inv_Gamma");
  add("pulse.channel", "mix");
  add("pulse.weights", fmt::format("{}, {}", fmt_num(pulse.weights.p1.real()),
                                   fmt_num(pulse.weights.p2.real())));
  add("grid.nz", fmt_num(static_cast<double>(grid.nz)));
  add("grid.dz", fmt_num(grid.dz) + " Labs");
  add("grid.dt", fmt_num(grid.dt) + " inv_Gamma");
  add("grid.t_window", fmt_num(grid.t_window) + " inv_Gamma");
  add("grid.store_every", fmt_num(static_cast<double>(grid.store_every)));
  if (vortex) {
    add("vortex.l", fmt::format("{}", vortex->l));
    add("vortex.waist", fmt_num(vortex->waist_um) + " um");
    add("vortex.wavelength", fmt_num(vortex->wavelength_um) + " um");
    add("vortex.grid", fmt_num(static_cast<double>(vortex->grid.n)));
    add("vortex.extent", fmt_num(vortex->grid.extent));
    if (!vortex->map_z.empty()) {
      add("vortex.map_z", fmt_list(vortex->map_z, "Labs"));
    }
  }
  return e;
}

ExperimentConfig resolve(const KeyValueConfig& raw)
{
  Resolver r(raw);
  ExperimentConfig cfg;

  if (auto v = r.text("run.name")) {
    cfg.name = *v;
  }
  if (auto v = r.text("run.mode")) {
    if (*v == "analytic") {
      cfg.mode = Mode::analytic;
    } else if (*v == "numeric") {
      cfg.mode = Mode::numeric;
    } else if (*v == "compare") {
      cfg.mode = Mode::compare;
    } else {
      throw ValidationError(fmt::format(
        "run.mode must be analytic, numeric or compare (got '{}')", *v));
    }
  }
  if (auto v = r.text("run.reduction")) {
    if (*v == "pulse-energy") {
      cfg.reduction = Reduction::pulse_energy;
    } else if (*v == "peak-amplitude") {
      cfg.reduction = Reduction::peak_amplitude;
    } else {
      throw ValidationError(fmt::format(
        "run.reduction must be pulse-energy or peak-amplitude (got '{}')", *v));
    }
  }
  if (auto v = r.integer("run.adiabaticity_grid")) {
    cfg.adiabaticity_grid = as_size(*v, "run.adiabaticity_grid", 3);
  }

  // Medium first: it fixes the conversion of physical lengths.
  if (auto v = r.dimensionless("medium.alpha")) {
    cfg.alpha = *v;
  }
  if (!(cfg.alpha > 0.0)) {
    throw ValidationError(fmt::format("medium.alpha must be > 0, got {}", cfg.alpha));
  }
  if (auto v = r.rate("medium.gamma")) {
    if (*v != 1.0) {
      throw ValidationError(
        "medium.gamma sets the unit of every rate and time and must be 1 Gamma");
    }
  }
  if (auto v = r.rate("medium.delta")) {
    cfg.delta = *v;
  }
  cfg.physical_length_um = r.physical_um("medium.physical_length");
  if (auto v = raw.get("medium.length")) {
    auto [value, unit] = split_quantity(*v, "medium.length");
    if (unit == "Labs" || unit == "L_abs") {
      if (std::abs(value - cfg.alpha) > 1e-12 * cfg.alpha) {
        throw ValidationError(fmt::format(
          "medium.length = {} Labs contradicts alpha = {} (L = alpha L_abs)", value,
          cfg.alpha));
      }
    } else {
      const double um = parse_physical_length_um(*v);
      if (cfg.physical_length_um && std::abs(*cfg.physical_length_um - um) > 1e-12 * um) {
        throw ValidationError("medium.length and medium.physical_length disagree");
      }
      cfg.physical_length_um = um;
    }
  }
  if (cfg.physical_length_um) {
    if (!(*cfg.physical_length_um > 0.0)) {
      throw ValidationError("medium.physical_length must be > 0");
    }
    r.set_absorption_length_um(*cfg.physical_length_um / cfg.alpha);
  }

  // Control profile.
  ProfileSpec& p = cfg.profile;
  const std::string kind = r.text("profile.kind").value_or("constant");
  if (kind == "constant") {
    p.kind = ProfileKind::constant;
  } else if (kind == "sigmoid") {
    p.kind = ProfileKind::sigmoid;
  } else if (kind == "gaussian") {
    p.kind = ProfileKind::gaussian;
  } else if (kind == "tabulated") {
    p.kind = ProfileKind::tabulated;
  } else {
    throw ValidationError(fmt::format(
      "profile.kind must be constant, sigmoid, gaussian or tabulated (got '{}')", kind));
  }
  p.omega_c = r.rate("profile.omega_c").value_or(p.omega_c);
  p.c1 = r.rate("profile.c1").value_or(p.c1);
  p.c2 = r.rate("profile.c2").value_or(p.c2);
  p.z0 = r.length("profile.z0").value_or(cfg.length() / 2.0);
  p.z_bar = r.length("profile.z_bar").value_or(p.z_bar);
  p.sigma = r.length("profile.sigma").value_or(p.sigma);
  if (p.kind == ProfileKind::tabulated) {
    auto table = r.text("profile.table");
    if (!table) {
      throw ValidationError("tabulated profile needs profile.table");
    }
    p.table = *table;
    std::filesystem::path path(*table);
    if (path.is_relative()) {
      path = raw.base_dir() / path;
    }
    ProfileTable t = read_profile_table(path);
    p.table_z = std::move(t.z);
    p.table_c1 = std::move(t.c1);
    p.table_c2 = std::move(t.c2);
    if (p.table_c2.empty() && !raw.contains("profile.omega_c")) {
      p.omega_c = *std::max_element(p.table_c1.begin(), p.table_c1.end());
    }
  }

  // Pulse.
  InputPulse& pulse = cfg.pulse;
  pulse.amplitude = r.rate("pulse.amplitude").value_or(pulse.amplitude);
  pulse.t0 = r.time("pulse.t0").value_or(pulse.t0);
  pulse.width = r.time("pulse.width").value_or(pulse.width);
  const std::string channel = r.text("pulse.channel").value_or("p1");
  if (channel == "p1") {
    pulse.weights = {1.0, 0.0};
  } else if (channel == "p2") {
    pulse.weights = {0.0, 1.0};
  } else if (channel != "mix") {
    throw ValidationError(fmt::format("pulse.channel must be p1, p2 or mix (got '{}')", channel));
  }
  if (auto v = raw.get("pulse.weights")) {
    auto [w, unit] = parse_list(*v);
    if (w.size() != 2 || !unit.empty()) {
      throw ValidationError("pulse.weights takes two dimensionless numbers");
    }
    if (channel != "mix") {
      throw ValidationError("pulse.weights requires pulse.channel = mix");
    }
    pulse.weights = {w[0], w[1]};
  } else if (channel == "mix") {
    throw ValidationError("pulse.channel = mix requires pulse.weights");
  }
  if (pulse.weights.intensity() == 0.0) {
    throw ValidationError("pulse.weights must not both vanish");
  }

  // Grid; nz and dz default from each other.
  SimGrid& g = cfg.grid;
  auto nz = r.integer("grid.nz");
  auto dz = r.length("grid.dz");
  if (nz && dz) {
    g.nz = as_size(*nz, "grid.nz", 1);
    g.dz = *dz;
  } else if (nz) {
    g.nz = as_size(*nz, "grid.nz", 1);
    g.dz = cfg.length() / static_cast<double>(g.nz);
  } else if (dz) {
    if (!(*dz > 0.0)) {
      throw ValidationError("grid.dz must be > 0");
    }
    g.dz = *dz;
    g.nz = static_cast<std::size_t>(std::llround(cfg.length() / *dz));
  } else {
    g.nz = 400;
    g.dz = cfg.length() / 400.0;
  }
  g.dt = r.time("grid.dt").value_or(g.dt);
  g.t_window = r.time("grid.t_window").value_or(g.t_window);
  if (auto v = r.integer("grid.store_every")) {
    g.store_every = as_size(*v, "grid.store_every", 1);
  }

  // Vortex maps (optional section).
  const bool any_vortex = std::any_of(raw.entries().begin(), raw.entries().end(),
                                      [](const auto& kv) { return kv.first.rfind("vortex.", 0) == 0; });
  if (any_vortex) {
    VortexSpec v;
    if (auto l = r.integer("vortex.l")) {
      v.l = static_cast<int>(*l);
    }
    v.waist_um = r.physical_um("vortex.waist").value_or(v.waist_um);
    v.wavelength_um = r.physical_um("vortex.wavelength").value_or(v.wavelength_um);
    if (auto n = r.integer("vortex.grid")) {
      v.grid.n = as_size(*n, "vortex.grid", 2);
    }
    v.grid.extent = r.dimensionless("vortex.extent").value_or(v.grid.extent);
    v.map_z = r.length_list("vortex.map_z").value_or(std::vector<double>{});
    cfg.vortex = v;
  }

  // Module preconditions.
  const MediumParams medium = cfg.medium();
  const ControlProfile profile = cfg.build_profile();
  if (cfg.mode != Mode::analytic) {
    validate_simulation(profile, medium, g, pulse);
  } else {
    const double covered = static_cast<double>(g.nz) * g.dz;
    if (std::abs(covered - cfg.length()) > 1e-9 * cfg.length()) {
      throw ValidationError(fmt::format(
        "nz * dz = {} does not match the medium length {}", covered, cfg.length()));
    }
  }
  for (std::size_t i = 0; i <= g.nz; ++i) {
    theta_of_z(profile, std::min(cfg.length(), static_cast<double>(i) * g.dz));
  }
  if (cfg.vortex) {
    make_vortex(cfg.vortex->l, cfg.vortex->waist_um, 1.0, cfg.vortex->grid);
    if (!(cfg.vortex->wavelength_um > 0.0)) {
      throw ValidationError("vortex.wavelength must be > 0");
    }
    for (double z : cfg.vortex->map_z) {
      if (!(z >= 0.0 && z <= cfg.length() * (1.0 + 1e-12))) {
        throw ValidationError(fmt::format("vortex.map_z entry {} outside the medium", z));
      }
    }
  }
  return cfg;
}

} // namespace dlambda::harness
