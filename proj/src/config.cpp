#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "compdeco/errors.hpp"
#include "compdeco/sweep.hpp"

namespace compdeco {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Entry {
  std::string value;
  int line;
};

class Reader {
public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const auto it = entries_.find(key);
    const std::string where =
        it == entries_.end() ? source_ : source_ + ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": key '" + key + "': " + why, {key});
  }

  double number(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    return parse_number(key, it->second.value);
  }

  double parse_number(const std::string& key, const std::string& text) const {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) fail(key, "'" + text + "' is not a finite number");
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& text = it->second.value;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || v < 0) {
      fail(key, "'" + text + "' is not a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
  }

  std::vector<std::string> list(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? std::vector<std::string>{} : split_list(it->second.value);
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string v = lower(it->second.value);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key, "expected true/false, got '" + it->second.value + "'");
  }

private:
  std::map<std::string, Entry> entries_;
  std::string source_;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "schema_version", "m_a",        "m_b",           "omega",       "omega_b",  "lambda",
      "kb_t",           "hbar",       "sigma",         "sigma_p0",    "cutoff",   "noise_prefactor",
      "separation",     "endpoints",  "x0",            "xf",          "q0",       "qf",
      "dx0",            "dxf",        "dq0",           "dqf",         "t_max",    "n_steps",
      "cases",          "gamma0kT",   "epsilon",       "out_dir",     "formats",  "oracle",
      "quad_rel_tol",   "lyapunov_rule", "lambda_lyap"};
  return keys;
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source_name) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value', got '" +
                        line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": unknown key '" + key + "'", {key});
    }
    if (entries.count(key)) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'", {key});
    }
    entries.emplace(key, Entry{value, line_no});
  }

  const Reader r(std::move(entries), source_name);
  if (!r.has("schema_version")) r.fail("schema_version", "missing (expected " + std::to_string(kConfigSchemaVersion) + ")");
  if (r.count("schema_version", 0) != static_cast<std::size_t>(kConfigSchemaVersion)) {
    r.fail("schema_version", "unsupported version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }

  RunConfig cfg;
  ModelConfig& m = cfg.model;
  m.m_a = r.number("m_a", m.m_a);
  m.m_b = r.number("m_b", m.m_b);
  m.omega = r.number("omega", m.omega);
  m.omega_b = r.number("omega_b", m.omega_b);
  m.lambda = r.number("lambda", m.lambda);
  m.kb_t = r.number("kb_t", m.kb_t);
  m.hbar = r.number("hbar", m.hbar);
  m.sigma = r.number("sigma", m.sigma);
  m.sigma_p0 = r.number("sigma_p0", m.sigma_p0);
  m.cutoff = r.number("cutoff", m.cutoff);
  m.gamma0 = 0.0;

  const std::string prefactor = lower(r.text("noise_prefactor", "single"));
  if (prefactor == "single") {
    m.noise_prefactor = PrefactorConvention::Single;
  } else if (prefactor == "double") {
    m.noise_prefactor = PrefactorConvention::Double;
  } else {
    r.fail("noise_prefactor", "expected single or double");
  }

  cfg.separation = r.number("separation", 2.0 * m.sigma);
  if (!(cfg.separation > 0.0)) r.fail("separation", "must be > 0");

  const std::string endpoints = lower(r.text("endpoints", "free"));
  EndpointMode mode = EndpointMode::FreeEvolution;
  if (endpoints == "fixed") {
    mode = EndpointMode::Fixed;
  } else if (endpoints != "free") {
    r.fail("endpoints", "expected free or fixed");
  }
  cfg.traj = trajectory_for_separation(cfg.separation, mode);
  cfg.traj.dx0 = r.number("dx0", cfg.traj.dx0);
  cfg.traj.dxf = r.number("dxf", cfg.traj.dxf);
  cfg.traj.dq0 = r.number("dq0", 0.0);
  cfg.traj.dqf = r.number("dqf", 0.0);
  cfg.traj.x0 = r.number("x0", 0.0);
  cfg.traj.xf = r.number("xf", 0.0);
  cfg.traj.q0 = r.number("q0", 0.0);
  cfg.traj.qf = r.number("qf", 0.0);

  try {
    cfg.grid = TimeGrid(r.number("t_max", 10.0), r.count("n_steps", 1000));
  } catch (const ConfigError& e) {
    r.fail(e.fields().empty() ? "n_steps" : e.fields().front(), e.what());
  }

  for (const std::string& label : r.list("cases")) {
    try {
      cfg.cases.push_back(case_from_label(label));
    } catch (const ConfigError& e) {
      r.fail("cases", e.what());
    }
  }
  if (cfg.cases.empty()) r.fail("cases", "at least one case label (a, b, c, d) is required");

  for (const std::string& item : r.list("gamma0kT")) {
    const double v = r.parse_number("gamma0kT", item);
    if (v < 0.0) r.fail("gamma0kT", "values must be >= 0");
    cfg.gamma0_kt.push_back(v);
  }
  if (cfg.gamma0_kt.empty()) r.fail("gamma0kT", "at least one temperature point is required");
  if (m.kb_t == 0.0) {
    for (double g : cfg.gamma0_kt) {
      if (g > 0.0) r.fail("gamma0kT", "a positive gamma0 k_B T needs kb_t > 0");
    }
  }

  cfg.epsilon = r.number("epsilon", cfg.epsilon);
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) r.fail("epsilon", "must lie in (0, 1)");

  cfg.outputs.directory = r.text("out_dir", cfg.outputs.directory.string());
  if (r.has("formats")) {
    cfg.outputs.csv = false;
    cfg.outputs.svg = false;
    for (const std::string& f : r.list("formats")) {
      const std::string v = lower(f);
      if (v == "csv") {
        cfg.outputs.csv = true;
      } else if (v == "svg") {
        cfg.outputs.svg = true;
      } else {
        r.fail("formats", "unknown format '" + f + "' (allowed: csv, svg)");
      }
    }
  }
  cfg.oracle = r.flag("oracle", false);

  cfg.quad.rel_tol = r.number("quad_rel_tol", cfg.quad.rel_tol);
  if (!(cfg.quad.rel_tol > 0.0)) r.fail("quad_rel_tol", "must be > 0");

  const std::string rule = lower(r.text("lyapunov_rule", "frequency"));
  if (rule == "frequency") {
    cfg.timescales.rule = LyapunovRule::Frequency;
  } else if (rule == "two_omega_squared") {
    cfg.timescales.rule = LyapunovRule::TwoOmegaSquared;
  } else {
    r.fail("lyapunov_rule", "expected frequency or two_omega_squared");
  }
  if (r.has("lambda_lyap")) {
    const double v = r.number("lambda_lyap", 1.0);
    if (!(v > 0.0)) r.fail("lambda_lyap", "must be > 0");
    cfg.timescales.lambda_override = v;
  }

  validate_config(m);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string(), {"config"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace compdeco
