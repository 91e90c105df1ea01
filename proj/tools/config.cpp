#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace softdeco::app {

namespace {

using json = nlohmann::json;

enum class Kind { number, integer, optional_number, string, string_list };

struct KeySpec {
  const char* path;
  Kind kind;
};

// Schema in document order. Sections are the first path component.
const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s = {
      {"geometry.l", Kind::number},
      {"geometry.tau", Kind::number},
      {"cutoffs.lambda_ir", Kind::number},
      {"cutoffs.omega_uv", Kind::number},
      {"cutoffs.beta", Kind::optional_number},
      {"charge.Q", Kind::number},
      {"charge.alpha", Kind::number},
      {"quadrature.n_theta", Kind::integer},
      {"quadrature.n_phi", Kind::integer},
      {"quadrature.panels_per_period", Kind::integer},
      {"quadrature.rel_tol", Kind::number},
      {"quadrature.abs_tol", Kind::number},
      {"variants", Kind::string_list},
      {"sweep.parameter", Kind::string},
      {"sweep.start", Kind::number},
      {"sweep.stop", Kind::number},
      {"sweep.points", Kind::integer},
      {"sweep.scale", Kind::string},
      {"slit.a_o", Kind::number},
      {"slit.b_o", Kind::number},
      {"slit.d_o", Kind::number},
      {"slit.L_o", Kind::number},
      {"slit.v_over_c", Kind::number},
      {"slit.Q", Kind::number},
      {"slit.alpha", Kind::number},
      {"slit.ell_o", Kind::number},
      {"slit.z_f", Kind::number},
      {"mirror.r_o", Kind::number},
      {"mirror.Z_o", Kind::number},
      {"mirror.epsilon", Kind::number},
      {"mirror.g_o", Kind::number},
      {"mirror.q", Kind::number},
      {"mirror.X_o", Kind::number},
      {"mirror.U_o", Kind::number},
      {"mirror.q_scatter", Kind::number},
  };
  return s;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) out.push_back(part);
  return out;
}

const KeySpec* find_key(const std::string& path) {
  for (const auto& k : schema())
    if (path == k.path) return &k;
  return nullptr;
}

json* node_at(json& root, const std::string& path, bool create) {
  json* cur = &root;
  for (const auto& part : split_path(path)) {
    if (create && cur->is_null()) *cur = json::object();
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(part);
    if (it == cur->end()) {
      if (!create) return nullptr;
      cur = &(*cur)[part];
    } else {
      cur = &*it;
    }
  }
  return cur;
}

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

std::optional<double> parse_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

json env_value(const KeySpec& k, const std::string& raw, const std::string& var) {
  auto bad = [&](const char* what) {
    return ConfigError(k.path, "environment variable " + var, std::string("expected ") + what + ", got '" + raw + "'");
  };
  switch (k.kind) {
    case Kind::number:
    case Kind::integer: {
      const auto v = parse_double(raw);
      if (!v) throw bad("a number");
      return *v;
    }
    case Kind::optional_number: {
      const std::string t = trim(raw);
      if (t.empty() || t == "null") return nullptr;
      const auto v = parse_double(t);
      if (!v) throw bad("a number or null");
      return *v;
    }
    case Kind::string:
      return trim(raw);
    case Kind::string_list: {
      json arr = json::array();
      std::stringstream ss(raw);
      for (std::string item; std::getline(ss, item, ',');)
        if (!trim(item).empty()) arr.push_back(trim(item));
      return arr;
    }
  }
  return nullptr;
}

class Reader {
 public:
  Reader(json& root, RunConfig& cfg) : root_(root), cfg_(cfg) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(key, cfg_.where(key), msg);
  }

  void reject_unknown() const {
    if (!root_.is_object()) fail("", "top level must be an object");
    for (auto it = root_.begin(); it != root_.end(); ++it) {
      const std::string sec = it.key();
      if (sec == "variants") continue;
      bool known_section = false;
      for (const auto& k : schema())
        if (split_path(k.path)[0] == sec && std::string(k.path) != "variants") known_section = true;
      if (!known_section) fail(sec, "unknown key");
      if (!it->is_object()) fail(sec, "expected an object");
      for (auto jt = it->begin(); jt != it->end(); ++jt) {
        const std::string path = sec + "." + jt.key();
        if (!find_key(path)) fail(path, "unknown key");
      }
    }
  }

  bool has(const std::string& key) const {
    const json* n = node_at(root_, key, false);
    return n != nullptr && !n->is_null();
  }

  std::optional<double> number(const std::string& key) const {
    const json* n = node_at(root_, key, false);
    if (!n || n->is_null()) return std::nullopt;
    if (!n->is_number()) fail(key, "expected a number");
    const double v = n->get<double>();
    if (!std::isfinite(v)) fail(key, "must be finite");
    return v;
  }

  std::optional<int> integer(const std::string& key) const {
    const auto v = number(key);
    if (!v) return std::nullopt;
    if (std::floor(*v) != *v || std::abs(*v) > 1e9) fail(key, "expected an integer");
    return static_cast<int>(*v);
  }

  std::optional<std::string> string(const std::string& key) const {
    const json* n = node_at(root_, key, false);
    if (!n || n->is_null()) return std::nullopt;
    if (!n->is_string()) fail(key, "expected a string");
    return n->get<std::string>();
  }

  std::optional<std::vector<std::string>> string_list(const std::string& key) const {
    const json* n = node_at(root_, key, false);
    if (!n || n->is_null()) return std::nullopt;
    if (!n->is_array()) fail(key, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& item : *n) {
      if (!item.is_string()) fail(key, "expected an array of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

 private:
  json& root_;
  RunConfig& cfg_;
};

void check(const RunConfig& cfg, bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError(key, cfg.where(key), msg);
}

std::size_t line_of(const std::string& text, const std::string& key) {
  std::size_t pos = 0;
  for (const auto& part : split_path(key)) {
    const auto found = text.find("\"" + part + "\"", pos);
    if (found == std::string::npos) return 0;
    pos = found;
  }
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

RunConfig build(json root, RunConfig cfg, const EnvLookup& env) {
  for (const auto& k : schema()) {
    const std::string var = env_name(k.path);
    const auto raw = env ? env(var) : std::nullopt;
    if (!raw) continue;
    json* slot = node_at(root, k.path, true);
    if (!slot) throw ConfigError(k.path, "environment variable " + var, "cannot override: parent is not an object");
    *slot = env_value(k, *raw, var);
    cfg.overridden.push_back(k.path);
  }

  Reader rd(root, cfg);
  rd.reject_unknown();

  cfg.l = rd.number("geometry.l");
  cfg.tau = rd.number("geometry.tau");
  if (auto v = rd.number("cutoffs.lambda_ir")) cfg.cutoffs.lambda_ir = *v;
  if (auto v = rd.number("cutoffs.omega_uv")) {
    cfg.cutoffs.omega_uv = *v;
    cfg.has_omega_uv = true;
  }
  cfg.cutoffs.beta = rd.number("cutoffs.beta");
  if (auto v = rd.number("charge.Q")) cfg.Q = *v;
  if (auto v = rd.number("charge.alpha")) cfg.alpha = *v;
  if (auto v = rd.integer("quadrature.n_theta")) cfg.quadrature.n_theta = *v;
  if (auto v = rd.integer("quadrature.n_phi")) cfg.quadrature.n_phi = *v;
  if (auto v = rd.integer("quadrature.panels_per_period")) cfg.quadrature.panels_per_period = *v;
  if (auto v = rd.number("quadrature.rel_tol")) cfg.quadrature.rel_tol = *v;
  if (auto v = rd.number("quadrature.abs_tol")) cfg.quadrature.abs_tol = *v;

  if (auto names = rd.string_list("variants")) {
    cfg.variants.clear();
    for (const auto& n : *names) {
      const auto v = parse_variant(n);
      if (!v) rd.fail("variants", "unknown variant '" + n + "' (expected full, dressed, sub or hard)");
      if (std::find(cfg.variants.begin(), cfg.variants.end(), *v) != cfg.variants.end())
        rd.fail("variants", "duplicate variant '" + n + "'");
      cfg.variants.push_back(*v);
    }
  }

  if (root.contains("sweep")) {
    SweepSpec s;
    auto need = [&](const std::string& key) {
      if (!rd.has(key)) rd.fail(key, "missing required key");
    };
    for (const char* k : {"sweep.parameter", "sweep.start", "sweep.stop", "sweep.points"}) need(k);
    s.parameter = *rd.string("sweep.parameter");
    s.start = *rd.number("sweep.start");
    s.stop = *rd.number("sweep.stop");
    s.points = *rd.integer("sweep.points");
    const std::string scale = rd.string("sweep.scale").value_or("linear");
    if (scale == "linear")
      s.scale = SweepScale::linear;
    else if (scale == "log")
      s.scale = SweepScale::log;
    else
      rd.fail("sweep.scale", "expected 'linear' or 'log'");
    cfg.sweep = s;
  }

  if (root.contains("slit")) {
    SlitBlock b;
    auto& g = b.geometry;
    for (const char* k : {"slit.a_o", "slit.b_o", "slit.d_o", "slit.L_o", "slit.v_over_c"})
      if (!rd.has(k)) rd.fail(k, "missing required key");
    g.a_o = *rd.number("slit.a_o");
    g.b_o = *rd.number("slit.b_o");
    g.d_o = *rd.number("slit.d_o");
    g.L_o = *rd.number("slit.L_o");
    g.v_over_c = *rd.number("slit.v_over_c");
    g.Q = rd.number("slit.Q").value_or(1.0);
    g.alpha = rd.number("slit.alpha").value_or(kFineStructure);
    b.ell_o = rd.number("slit.ell_o");
    b.z_f = rd.number("slit.z_f").value_or(0.0);
    cfg.slit = b;
  }

  if (root.contains("mirror")) {
    MirrorBlock b;
    auto& m = b.mirror;
    for (const char* k : {"mirror.r_o", "mirror.Z_o", "mirror.epsilon"})
      if (!rd.has(k)) rd.fail(k, "missing required key");
    m.r_o = *rd.number("mirror.r_o");
    m.Z_o = *rd.number("mirror.Z_o");
    m.epsilon = *rd.number("mirror.epsilon");
    m.g_o = rd.number("mirror.g_o").value_or(1.0);
    m.q = rd.number("mirror.q").value_or(1.0);
    m.X_o = rd.number("mirror.X_o").value_or(0.0);
    m.U_o = rd.number("mirror.U_o").value_or(0.0);
    b.q_scatter = rd.number("mirror.q_scatter");
    cfg.mirror = b;
  }

  validate(cfg);
  return cfg;
}

}  // namespace

ConfigError::ConfigError(std::string key, std::string where, const std::string& message)
    : std::runtime_error((where.empty() ? std::string() : where + ": ") +
                         (key.empty() ? message : "key '" + key + "': " + message)),
      key_(std::move(key)),
      where_(std::move(where)) {}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    if (scale == SweepScale::log)
      out.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
    else
      out.push_back(start + t * (stop - start));
  }
  // pin the endpoints so they are not subject to exp/log rounding
  if (!out.empty()) out.front() = start;
  if (out.size() > 1) out.back() = stop;
  return out;
}

std::string RunConfig::where(const std::string& key) const {
  if (std::find(overridden.begin(), overridden.end(), key) != overridden.end())
    return "environment variable " + env_name(key);
  const std::size_t line = key.empty() ? 0 : line_of(text, key);
  if (line == 0) return source;
  return source + ":" + std::to_string(line);
}

double RunConfig::charge() const { return std::abs(Q) * elementary_charge(alpha); }

InterferometerGeometry RunConfig::geometry() const {
  if (!l || !tau) throw ConfigError(!l ? "geometry.l" : "geometry.tau", source, "missing required key");
  return interferometer_geometry(*l, *tau, charge());
}

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

std::string env_name(const std::string& key_path) {
  std::string out = "SOFTDECO_";
  for (char c : key_path) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

const std::vector<std::string>& schema_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : schema()) out.emplace_back(k.path);
    return out;
  }();
  return keys;
}

const std::vector<std::string>& sweepable_keys() {
  static const std::vector<std::string> keys = {"geometry.l",       "geometry.tau", "cutoffs.lambda_ir",
                                                "cutoffs.omega_uv", "cutoffs.beta", "charge.Q",
                                                "charge.alpha"};
  return keys;
}

RunConfig parse_config(const std::string& text, const std::string& source, const EnvLookup& env) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    // byte offset to a line number; the library message carries the column
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError("", source + ":" + std::to_string(line), std::string("malformed JSON: ") + e.what());
  }
  RunConfig cfg;
  cfg.source = source;
  cfg.text = text;
  return build(std::move(root), std::move(cfg), env);
}

RunConfig load_config(const std::string& path, const EnvLookup& env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, env);
}

RunConfig default_config(const EnvLookup& env) {
  RunConfig cfg;
  cfg.source = "<defaults>";
  return build(json::object(), std::move(cfg), env);
}

void validate(const RunConfig& c) {
  if (c.l) check(c, *c.l >= 0.0, "geometry.l", "must be >= 0");
  if (c.tau) check(c, *c.tau > 0.0, "geometry.tau", "must be > 0");
  if (c.l && c.tau) check(c, *c.l < *c.tau, "geometry.l", "l / tau must be below 1 (speed of light)");

  const auto& cut = c.cutoffs;
  check(c, cut.lambda_ir >= 0.0, "cutoffs.lambda_ir", "must be >= 0");
  check(c, cut.omega_uv > cut.lambda_ir, "cutoffs.omega_uv", "must be greater than cutoffs.lambda_ir");
  if (cut.beta) check(c, *cut.beta > 0.0, "cutoffs.beta", "must be > 0 (omit it for zero temperature)");

  check(c, c.alpha > 0.0, "charge.alpha", "must be > 0");

  const auto& q = c.quadrature;
  check(c, q.n_theta >= 8, "quadrature.n_theta", "must be >= 8");
  check(c, q.n_phi >= 16, "quadrature.n_phi", "must be >= 16");
  check(c, q.panels_per_period >= 4, "quadrature.panels_per_period", "must be >= 4");
  check(c, q.rel_tol > 0.0, "quadrature.rel_tol", "must be > 0");
  check(c, q.abs_tol > 0.0, "quadrature.abs_tol", "must be > 0");

  check(c, !c.variants.empty(), "variants", "must name at least one variant");

  if (c.sweep) {
    const auto& s = *c.sweep;
    const auto& keys = sweepable_keys();
    check(c, std::find(keys.begin(), keys.end(), s.parameter) != keys.end(), "sweep.parameter",
          "'" + s.parameter + "' cannot be swept");
    check(c, s.points >= 0, "sweep.points", "must be >= 0");
    if (s.scale == SweepScale::log) {
      check(c, s.start > 0.0, "sweep.start", "must be > 0 on a log scale");
      check(c, s.stop > 0.0, "sweep.stop", "must be > 0 on a log scale");
    }
  }

  if (c.slit) {
    const auto& g = c.slit->geometry;
    check(c, g.a_o > 0.0, "slit.a_o", "must be > 0");
    check(c, g.b_o > 0.0, "slit.b_o", "must be > 0");
    check(c, g.d_o > 0.0, "slit.d_o", "must be > 0");
    check(c, g.L_o > 0.0, "slit.L_o", "must be > 0");
    check(c, g.L_o >= g.a_o, "slit.L_o", "must not be smaller than slit.a_o");
    check(c, g.v_over_c > 0.0 && g.v_over_c < 1.0, "slit.v_over_c", "must lie in (0, 1)");
    check(c, g.alpha > 0.0, "slit.alpha", "must be > 0");
    if (c.slit->ell_o) check(c, *c.slit->ell_o > 0.0, "slit.ell_o", "must be > 0");
  }

  if (c.mirror) {
    const auto& m = c.mirror->mirror;
    check(c, m.r_o > 0.0, "mirror.r_o", "must be > 0");
    check(c, m.Z_o > 0.0, "mirror.Z_o", "must be > 0");
    check(c, m.epsilon > 1.0, "mirror.epsilon", "must be > 1");
    check(c, m.q * m.Z_o > 0.0, "mirror.q", "q Z_o must be > 0");
    if (c.mirror->q_scatter) check(c, *c.mirror->q_scatter > 0.0, "mirror.q_scatter", "must be > 0");
  }
}

void require_interferometer(const RunConfig& c) {
  if (!c.l) throw ConfigError("geometry.l", c.source, "missing required key");
  if (!c.tau) throw ConfigError("geometry.tau", c.source, "missing required key");
  if (!c.has_omega_uv) throw ConfigError("cutoffs.omega_uv", c.source, "missing required key");
  const bool full = std::find(c.variants.begin(), c.variants.end(), Variant::full) != c.variants.end();
  if (full && c.cutoffs.lambda_ir == 0.0)
    throw ConfigError("cutoffs.lambda_ir", c.where("cutoffs.lambda_ir"),
                      "variant 'full' needs lambda_ir > 0: the leading soft current makes the undressed "
                      "functional diverge like ln(1/lambda)");
}

RunConfig with_parameter(const RunConfig& cfg, const std::string& key, double value) {
  RunConfig out = cfg;
  if (key == "geometry.l")
    out.l = value;
  else if (key == "geometry.tau")
    out.tau = value;
  else if (key == "cutoffs.lambda_ir")
    out.cutoffs.lambda_ir = value;
  else if (key == "cutoffs.omega_uv") {
    out.cutoffs.omega_uv = value;
    out.has_omega_uv = true;
  } else if (key == "cutoffs.beta")
    out.cutoffs.beta = value;
  else if (key == "charge.Q")
    out.Q = value;
  else if (key == "charge.alpha")
    out.alpha = value;
  else
    throw ConfigError(key, cfg.where("sweep.parameter"), "cannot be swept");
  return out;
}

}  // namespace softdeco::app
