#include "ewave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ewave/claims.hpp"
#include "ewave/errors.hpp"
#include "ewave/metrology.hpp"

namespace ewave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v, int line) {
  const std::string s = trim(v);
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key + ": expected a number, got '" + v + "'", line);
  return out;
}

long long to_int(const std::string& key, const std::string& v, int line) {
  const std::string s = trim(v);
  long long out = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key + ": expected an integer, got '" + v + "'", line);
  return out;
}

bool to_bool(const std::string& key, const std::string& v, int line) {
  const std::string s = trim(v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'", line);
}

std::array<double, 3> to_vec3(const std::string& key, const std::string& v, int line) {
  const auto parts = split(v, ", \t");
  if (parts.size() != 3) throw ConfigError(key + ": expected three comma-separated numbers", line);
  return {to_double(key, parts[0], line), to_double(key, parts[1], line), to_double(key, parts[2], line)};
}

std::array<int, 3> to_ivec3(const std::string& key, const std::string& v, int line) {
  const auto parts = split(v, ", \t");
  if (parts.size() != 3) throw ConfigError(key + ": expected three comma-separated integers", line);
  return {static_cast<int>(to_int(key, parts[0], line)), static_cast<int>(to_int(key, parts[1], line)),
          static_cast<int>(to_int(key, parts[2], line))};
}

void apply_data(DataSpec& d, const std::string& key, const std::string& field, const std::string& v, int line) {
  if (field.empty()) d.kind = trim(v);
  else if (field == "width") d.width = to_double(key, v, line);
  else if (field == "amplitude") d.amplitude = to_double(key, v, line);
  else if (field == "mask") d.mask = to_vec3(key, v, line);
  else if (field == "center") d.center = to_vec3(key, v, line);
  else if (field == "k") d.k = to_ivec3(key, v, line);
  else if (field == "polarization") d.polarization = to_vec3(key, v, line);
  else if (field == "kmax") d.kmax = static_cast<int>(to_int(key, v, line));
  else if (field == "path") d.path = trim(v);
  else throw ConfigError("unknown key '" + key + "'", line);
}

ClaimRequest parse_claim(const std::string& entry, int line) {
  const auto parts = split(entry, ":");
  if (parts.empty() || parts.size() > 4)
    throw ConfigError("verify.claims: entries look like id:p:alpha:ell, got '" + entry + "'", line);
  ClaimRequest c;
  c.id = parts[0];
  if (parts.size() > 1) c.p = to_double("verify.claims", parts[1], line);
  if (parts.size() > 2) c.alpha = to_double("verify.claims", parts[2], line);
  if (parts.size() > 3) c.ell = static_cast<int>(to_int("verify.claims", parts[3], line));
  return c;
}

std::string data_echo(const std::string& prefix, const DataSpec& d) {
  std::ostringstream s;
  auto v3 = [](const auto& a) {
    return format_number(a[0]) + ", " + format_number(a[1]) + ", " + format_number(a[2]);
  };
  s << prefix << " = " << d.kind << '\n';
  if (d.kind == "zero") return s.str();
  s << prefix << ".amplitude = " << format_number(d.amplitude) << '\n';
  if (d.kind == "gaussian") {
    s << prefix << ".width = " << format_number(d.width) << '\n';
    s << prefix << ".mask = " << v3(d.mask) << '\n';
    s << prefix << ".center = " << v3(d.center) << '\n';
  } else if (d.kind == "mode") {
    s << prefix << ".k = " << d.k[0] << ", " << d.k[1] << ", " << d.k[2] << '\n';
    s << prefix << ".polarization = " << v3(d.polarization) << '\n';
  } else if (d.kind == "broadband") {
    s << prefix << ".kmax = " << d.kmax << '\n';
    s << prefix << ".mask = " << v3(d.mask) << '\n';
  } else if (d.kind == "file") {
    s << prefix << ".path = " << d.path << '\n';
  }
  return s.str();
}

double data_support(const DataSpec& d, double box_length) {
  if (d.kind == "zero") return 0.0;
  if (d.kind == "gaussian") {
    // Radius where exp(-r^2 / (2 w^2)) drops below 1e-8.
    const double radius = d.width * std::sqrt(2.0 * std::log(1e8));
    const double shift = std::sqrt(d.center[0] * d.center[0] + d.center[1] * d.center[1] + d.center[2] * d.center[2]);
    return 2.0 * (radius + shift);
  }
  return std::sqrt(3.0) * box_length;
}

}  // namespace

NonlinearityForm ExperimentConfig::form() const {
  if (nonlinearity == "custom") return NonlinearityForm::custom(parse_terms(terms));
  return nonlinearity_from_string(nonlinearity);
}

double ExperimentConfig::support() const {
  return std::max(data_support(f0, box_length), data_support(f1, box_length));
}

double ExperimentConfig::no_wrap_horizon() const {
  const double speed = std::max(material.fast_speed(), material.slow_speed());
  return std::max(0.0, (box_length - support()) / (2.0 * speed));
}

void apply_setting(ExperimentConfig& cfg, const std::string& key_in, const std::string& value, int line) {
  const std::string key = trim(key_in);
  const std::string v = trim(value);
  cfg.entries.emplace_back(key, v);
  if (key == "name") cfg.name = v;
  else if (key == "material.lambda") cfg.material.lambda = to_double(key, v, line);
  else if (key == "material.mu") cfg.material.mu = to_double(key, v, line);
  else if (key == "material.nu") cfg.material.nu = to_double(key, v, line);
  else if (key == "lattice.n") cfg.n = static_cast<int>(to_int(key, v, line));
  else if (key == "lattice.box_length") cfg.box_length = to_double(key, v, line);
  else if (key == "data.epsilon") cfg.epsilon = to_double(key, v, line);
  else if (key.rfind("data.f0", 0) == 0 || key.rfind("data.f1", 0) == 0) {
    DataSpec& d = key[6] == '0' ? cfg.f0 : cfg.f1;
    if (key.size() > 7 && key[7] != '.') throw ConfigError("unknown key '" + key + "'", line);
    apply_data(d, key, key.size() > 8 ? key.substr(8) : std::string(), v, line);
  } else if (key == "nonlinearity.form") cfg.nonlinearity = v;
  else if (key == "nonlinearity.terms") cfg.terms = v;
  else if (key == "linear.band") {
    try {
      cfg.band = band_from_string(v);
    } catch (const std::exception& e) {
      throw ConfigError(key + ": " + e.what(), line);
    }
  } else if (key == "time.schedule") {
    cfg.schedule.clear();
    for (const auto& s : split(v, ", \t")) cfg.schedule.push_back(to_double(key, s, line));
    cfg.explicit_schedule = true;
  } else if (key == "time.end") cfg.time_end = to_double(key, v, line);
  else if (key == "time.samples") cfg.time_samples = static_cast<int>(to_int(key, v, line));
  else if (key == "time.spacing") cfg.time_spacing = v;
  else if (key == "time.start") cfg.time_start = to_double(key, v, line);
  else if (key == "time.step") cfg.step = to_double(key, v, line);
  else if (key == "solver.blowup_factor") cfg.blowup_factor = to_double(key, v, line);
  else if (key == "solver.allow_wrap") cfg.allow_wrap = to_bool(key, v, line);
  else if (key == "verify.claims") {
    cfg.claims.clear();
    for (const auto& e : split(v, "; \t")) cfg.claims.push_back(parse_claim(e, line));
  } else if (key == "verify.tolerance") cfg.tolerance = to_double(key, v, line);
  else if (key == "verify.t_min") cfg.t_min = to_double(key, v, line);
  else if (key == "verify.t_lo") cfg.t_lo = to_double(key, v, line);
  else if (key == "verify.t_hi") cfg.t_hi = to_double(key, v, line);
  else if (key == "output.dir") cfg.output_dir = v;
  else if (key == "output.snapshots") {
    if (v != "all" && v != "final" && v != "none") throw ConfigError(key + ": expected all, final or none", line);
    cfg.snapshots = v;
  }
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, v, line));
  else if (key == "sweep.parallel") cfg.sweep_parallel = static_cast<int>(to_int(key, v, line));
  else if (key.rfind("sweep.", 0) == 0) {
    const std::string target = key.substr(6);
    if (target.empty() || target.rfind("sweep.", 0) == 0) throw ConfigError("bad sweep key '" + key + "'", line);
    // Check the values parse for the target key.
    ExperimentConfig probe;
    const auto values = split(v, ";");
    if (values.empty()) throw ConfigError(key + ": empty value list", line);
    for (const auto& val : values) apply_setting(probe, target, val, line);
    cfg.sweep[target] = values;
  } else {
    throw ConfigError("unknown key '" + key + "'", line);
  }
}

void finalize_config(ExperimentConfig& cfg) {
  if (cfg.explicit_schedule) return;
  cfg.schedule.clear();
  const int m = cfg.time_samples;
  if (m < 1) throw ConfigError("time.samples must be >= 1");
  if (!(cfg.time_end >= 0.0)) throw ConfigError("time.end must be >= 0");
  if (cfg.time_spacing == "linear") {
    if (m == 1) {
      cfg.schedule.push_back(cfg.time_end);
    } else {
      for (int i = 0; i < m; ++i) cfg.schedule.push_back(cfg.time_end * i / (m - 1));
    }
  } else if (cfg.time_spacing == "log") {
    if (!(cfg.time_start > 0.0) || !(cfg.time_start < cfg.time_end) || m < 2)
      throw ConfigError("time.spacing = log needs 0 < time.start < time.end and time.samples >= 2");
    cfg.schedule.push_back(0.0);
    const double ratio = std::log(cfg.time_end / cfg.time_start);
    for (int i = 0; i < m; ++i) cfg.schedule.push_back(cfg.time_start * std::exp(ratio * i / (m - 1)));
    cfg.schedule.back() = cfg.time_end;
  } else {
    throw ConfigError("time.spacing must be linear or log, got '" + cfg.time_spacing + "'");
  }
}

void validate_config(const ExperimentConfig& cfg) {
  try {
    cfg.material.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("material: ") + e.what() + " (required: mu > 0, lambda + 2 mu > 0, nu > 0)");
  }
  try {
    make_lattice(cfg.n, cfg.box_length);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("lattice: ") + e.what());
  }
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) throw ConfigError("data.epsilon must be finite and >= 0");
  for (const DataSpec* d : {&cfg.f0, &cfg.f1}) {
    const std::string& k = d->kind;
    if (k != "zero" && k != "gaussian" && k != "mode" && k != "broadband" && k != "file")
      throw ConfigError("data kind must be zero, gaussian, mode, broadband or file, got '" + k + "'");
    if (k == "gaussian" && !(d->width > 0.0)) throw ConfigError("gaussian width must be > 0");
    if (k == "broadband" && (d->kmax < 1 || d->kmax >= cfg.n / 2)) throw ConfigError("broadband kmax must be in [1, n/2)");
    if (k == "file" && d->path.empty()) throw ConfigError("file data needs a path");
    if (k == "mode") {
      for (int a = 0; a < 3; ++a) {
        if (d->k[a] <= -cfg.n / 2 || d->k[a] >= cfg.n / 2) throw ConfigError("mode wavevector outside (-n/2, n/2)");
      }
    }
  }
  NonlinearityForm form;
  try {
    form = cfg.form();
    form.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("nonlinearity: ") + e.what());
  }
  if (cfg.band != Band::all && !form.is_zero())
    throw ConfigError("linear.band restricts the linear flow only; set nonlinearity.form = none");
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    if (!(cfg.schedule[i] >= 0.0) || !std::isfinite(cfg.schedule[i]))
      throw ConfigError("time.schedule entries must be finite and >= 0");
    if (i > 0 && !(cfg.schedule[i] > cfg.schedule[i - 1])) throw ConfigError("time.schedule must be increasing");
  }
  if (cfg.step < 0.0) throw ConfigError("time.step must be >= 0");
  if (!(cfg.blowup_factor > 1.0)) throw ConfigError("solver.blowup_factor must be > 1");
  if (!cfg.allow_wrap && cfg.end_time() > cfg.no_wrap_horizon()) {
    throw ConfigError("schedule ends at t = " + format_number(cfg.end_time()) + " beyond the no-wrap bound " +
                      format_number(cfg.no_wrap_horizon()) +
                      " = (box_length - support) / (2 sqrt(lambda + 2 mu)); set solver.allow_wrap = true to override");
  }
  for (const auto& c : cfg.claims) {
    try {
      theoretical_exponent(c.id, c.p, c.alpha, c.ell);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("verify.claims: ") + e.what());
    }
  }
  if (!(cfg.tolerance > 0.0)) throw ConfigError("verify.tolerance must be > 0");
  if (cfg.sweep_parallel < 1) throw ConfigError("sweep.parallel must be >= 1");
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& source) {
  ExperimentConfig cfg;
  cfg.source = source;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", line);
    apply_setting(cfg, section.empty() ? key : section + "." + key, s.substr(eq + 1), line);
  }
  finalize_config(cfg);
  if (cfg.sweep.empty()) validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str(), path);
  // Relative data paths resolve against the config's directory.
  for (DataSpec* d : {&cfg.f0, &cfg.f1}) {
    if (d->kind == "file" && std::filesystem::path(d->path).is_relative())
      d->path = (path.parent_path() / d->path).lexically_normal().string();
  }
  return cfg;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& cfg) {
  std::vector<ExperimentConfig> out;
  if (cfg.sweep.empty()) {
    out.push_back(cfg);
    validate_config(out.back());
    return out;
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> axes(cfg.sweep.begin(), cfg.sweep.end());
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    ExperimentConfig c = cfg;
    c.sweep.clear();
    for (std::size_t i = 0; i < axes.size(); ++i) apply_setting(c, axes[i].first, axes[i].second[pos[i]]);
    finalize_config(c);
    validate_config(c);
    out.push_back(std::move(c));
    std::size_t i = 0;
    for (; i < axes.size(); ++i) {
      if (++pos[i] < axes[i].second.size()) break;
      pos[i] = 0;
    }
    if (i == axes.size()) break;
  }
  return out;
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream s;
  auto num = [](double v) { return format_number(v); };
  s << "name = " << cfg.name << '\n';
  s << "material.lambda = " << num(cfg.material.lambda) << '\n';
  s << "material.mu = " << num(cfg.material.mu) << '\n';
  s << "material.nu = " << num(cfg.material.nu) << '\n';
  s << "lattice.n = " << cfg.n << '\n';
  s << "lattice.box_length = " << num(cfg.box_length) << '\n';
  s << "data.epsilon = " << num(cfg.epsilon) << '\n';
  s << data_echo("data.f0", cfg.f0) << data_echo("data.f1", cfg.f1);
  s << "nonlinearity.form = " << cfg.nonlinearity << '\n';
  if (cfg.nonlinearity == "custom") s << "nonlinearity.terms = " << cfg.terms << '\n';
  s << "linear.band = " << to_string(cfg.band) << '\n';
  s << "time.schedule =";
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) s << (i ? ", " : " ") << num(cfg.schedule[i]);
  s << '\n';
  s << "time.step = " << num(cfg.step) << '\n';
  s << "solver.blowup_factor = " << num(cfg.blowup_factor) << '\n';
  s << "solver.allow_wrap = " << (cfg.allow_wrap ? "true" : "false") << '\n';
  s << "verify.claims =";
  for (const auto& c : cfg.claims) s << ' ' << c.id << ':' << num(c.p) << ':' << num(c.alpha) << ':' << c.ell;
  s << '\n';
  s << "verify.tolerance = " << num(cfg.tolerance) << '\n';
  s << "verify.t_min = " << num(cfg.t_min) << '\n';
  if (!std::isnan(cfg.t_lo)) s << "verify.t_lo = " << num(cfg.t_lo) << '\n';
  if (!std::isnan(cfg.t_hi)) s << "verify.t_hi = " << num(cfg.t_hi) << '\n';
  s << "output.snapshots = " << cfg.snapshots << '\n';
  s << "seed = " << cfg.seed << '\n';
  return s.str();
}

}  // namespace ewave
