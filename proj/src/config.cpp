#include "cppou/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cppou/error.hpp"

namespace cppou {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown.
class Block {
 public:
  Block(const json& j, std::string prefix) : prefix_(std::move(prefix)) {
    if (j.is_null()) return;
    if (!j.is_object()) throw ConfigError(name(""), "must be an object");
    obj_ = &j;
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    if (it == obj_->end()) return nullptr;
    return &*it;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    const json* v = get(key);
    if (!v || v->is_null()) return;
    out = convert<T>(*v, key);
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    const json* v = get(key);
    if (!v) return;
    if (v->is_null()) {
      out.reset();
      return;
    }
    out = convert<T>(*v, key);
  }

  Block child(const std::string& key) {
    const json* v = get(key);
    static const json null_json;
    return Block(v ? *v : null_json, name(key));
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key) && !(*obj_)[key].is_null(); }

  void finish() const {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items()) {
      if (!seen_.count(k)) throw ConfigError(name(k), "unknown key");
    }
  }

  std::string name(const std::string& key) const {
    if (prefix_.empty()) return key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  template <class T>
  T convert(const json& v, const std::string& key) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(name(key), "expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(name(key), "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(name(key), "expected a number");
      return v.get<double>();
    } else if constexpr (std::is_integral_v<T>) {
      if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
      if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0 && std::is_unsigned_v<T>) {
          throw ConfigError(name(key), "must be nonnegative");
        }
        return static_cast<T>(v.get<std::int64_t>());
      }
      throw ConfigError(name(key), "expected an integer");
    } else {
      // vector<double>
      if (!v.is_array()) throw ConfigError(name(key), "expected a list of numbers");
      T out;
      for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(name(key), "expected a list of numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
  }

  const json* obj_ = nullptr;
  std::string prefix_;
  std::set<std::string> seen_;
};

// Model-level errors name bare fields ("lambda"); report them under "model.".
[[noreturn]] void rethrow_in_model(const ConfigError& e) {
  const std::string full = e.what();
  const std::string prefix = e.field() + ": ";
  const std::string msg = full.rfind(prefix, 0) == 0 ? full.substr(prefix.size()) : full;
  const std::string field = e.field().rfind("model.", 0) == 0 ? e.field() : "model." + e.field();
  throw ConfigError(field, msg);
}

CppOuModel read_model_unchecked(Block& b);

CppOuModel read_model(Block b) {
  try {
    auto m = read_model_unchecked(b);
    m.validate();
    return m;
  } catch (const ConfigError& e) {
    rethrow_in_model(e);
  }
}

CppOuModel read_model_unchecked(Block& b) {
  CppOuModel m;
  b.read("lambda", m.lambda);
  b.read("alpha", m.alpha);
  auto jb = b.child("jump");
  std::string kind = "gamma";
  jb.read("kind", kind);
  double shape = 2.0;
  double rate = 1.0;
  if (kind == "gamma") {
    jb.read("shape", shape);
    jb.read("rate", rate);
    m.jump = JumpDistribution::gamma(shape, rate);
  } else if (kind == "exponential") {
    if (jb.has("shape")) throw ConfigError("model.jump.shape", "not a parameter of exponential jumps");
    jb.read("rate", rate);
    m.jump = JumpDistribution::exponential(rate);
  } else {
    throw ConfigError("model.jump.kind", "expected 'gamma' or 'exponential'");
  }
  jb.finish();
  b.finish();
  return m;
}

json model_to_json(const CppOuModel& m) {
  json jump;
  jump["kind"] = std::string(m.jump.kind());
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GammaJumps>) jump["shape"] = p.shape;
        jump["rate"] = p.rate;
      },
      m.jump.params());
  return json{{"lambda", m.lambda}, {"alpha", m.alpha}, {"jump", jump}};
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

double RunConfig::theta_for(std::size_t sample_size) const {
  return theta ? *theta : default_theta(sample_size, theta_c);
}

std::size_t RunConfig::replications_or_default() const {
  if (replications) return *replications;
  switch (kind) {
    case StudyKind::normality: return 1000;
    case StudyKind::coverage: return 500;
    case StudyKind::bandwidth_diagnostic: return 5;
    case StudyKind::consistency: return 100;
    case StudyKind::bias: return 200;
    case StudyKind::oracle: return 1;
  }
  return 1;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Block root(j, "");
  c.model = read_model(root.child("model"));

  auto s = root.child("sampling");
  s.read("n", c.n);
  s.read("delta", c.delta);
  s.read("seed", c.seed);
  s.read("burn_in", c.burn_in);
  s.finish();

  auto sp = root.child("spectral");
  sp.read("h", c.h);
  auto sel = sp.child("selector");
  sel.read("pilot", c.pilot);
  sel.read("J", c.J);
  sel.read("kappa", c.kappa);
  sel.finish();
  sp.read("theta", c.theta);
  sp.read("theta_c", c.theta_c);
  auto kb = sp.child("kernel");
  double b = 1.0, cc = 0.05;
  kb.read("b", b);
  kb.read("c", cc);
  kb.finish();
  c.kernel = FlatTopKernel(b, cc);
  sp.read("quad_panels", c.quad_panels);
  auto gb = sp.child("grid");
  gb.read("start", c.grid.start);
  gb.read("step", c.grid.step);
  gb.read("count", c.grid.count);
  gb.finish();
  sp.finish();

  auto inf = root.child("inference");
  inf.read("tau", c.taus);
  inf.read("monotonize", c.monotonize);
  inf.finish();

  auto st = root.child("study");
  std::string kind(to_string(c.kind));
  st.read("kind", kind);
  c.kind = parse_study_kind(kind);
  st.read("replications", c.replications);
  st.read("points", c.points);
  st.read("threads", c.threads);
  st.read("large_n", c.large_n);
  st.read("bias_h", c.bias_h);
  st.finish();

  auto out = root.child("output");
  out.read("format", c.format);
  out.read("path", c.path);
  out.finish();
  root.finish();

  // Semantic checks beyond types.
  if (c.n < 2) throw ConfigError("sampling.n", "must be at least 2");
  if (!(c.delta > 0.0)) throw ConfigError("sampling.delta", "must be positive");
  if (c.burn_in && !(*c.burn_in >= 0.0)) throw ConfigError("sampling.burn_in", "must be nonnegative");
  if (c.h && !(*c.h > 0.0)) throw ConfigError("spectral.h", "must be positive");
  if (c.J < 2) throw ConfigError("spectral.selector.J", "must be at least 2");
  if (!(c.kappa > 1.0)) throw ConfigError("spectral.selector.kappa", "must exceed 1");
  if (!(c.pilot > 0.0)) throw ConfigError("spectral.selector.pilot", "must be positive");
  if (c.theta && !(*c.theta > 0.0)) throw ConfigError("spectral.theta", "must be positive");
  if (!(c.theta_c > 0.0)) throw ConfigError("spectral.theta_c", "must be positive");
  if (c.quad_panels < kMinQuadPanels) throw ConfigError("spectral.quad_panels", "must be at least 256");
  if (c.grid.count < 1) throw ConfigError("spectral.grid.count", "must be at least 1");
  if (!(c.grid.step > 0.0) && c.grid.count > 1) throw ConfigError("spectral.grid.step", "must be positive");
  if (!(c.grid.start > 0.0)) throw ConfigError("spectral.grid.start", "must be positive");
  if (c.taus.empty()) throw ConfigError("inference.tau", "needs at least one level");
  for (double t : c.taus) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("inference.tau", "levels must lie in (0, 1)");
  }
  if (c.replications && *c.replications < 1) throw ConfigError("study.replications", "must be at least 1");
  if (c.points.empty()) throw ConfigError("study.points", "needs at least one point");
  if (!(c.bias_h > 0.0)) throw ConfigError("study.bias_h", "must be positive");
  if (c.format != "csv" && c.format != "json") throw ConfigError("output.format", "expected 'csv' or 'json'");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["model"] = model_to_json(c.model);
  j["sampling"] = {{"n", c.n}, {"delta", c.delta}, {"seed", c.seed}, {"burn_in", opt(c.burn_in)}};
  j["spectral"] = {
      {"h", opt(c.h)},
      {"selector", {{"pilot", c.pilot}, {"J", c.J}, {"kappa", c.kappa}}},
      {"theta", opt(c.theta)},
      {"theta_c", c.theta_c},
      {"kernel", {{"b", c.kernel.b()}, {"c", c.kernel.c()}}},
      {"quad_panels", c.quad_panels},
      {"grid", {{"start", c.grid.start}, {"step", c.grid.step}, {"count", c.grid.count}}}};
  j["inference"] = {{"tau", c.taus}, {"monotonize", c.monotonize}};
  j["study"] = {{"kind", std::string(to_string(c.kind))},
                {"replications", opt(c.replications)},
                {"points", c.points},
                {"threads", c.threads},
                {"large_n", c.large_n},
                {"bias_h", c.bias_h}};
  j["output"] = {{"format", c.format}, {"path", c.path}};
  return j;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like key.path=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ConfigError(key, "empty component in override key");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError(key, "override walks into a non-object value");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  *node = std::move(value);
}

RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (file) {
    std::ifstream in(*file);
    if (!in) throw IoError("cannot open config file '" + file->string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    doc = json::parse(ss.str(), nullptr, false, /*ignore_comments=*/true);
    if (doc.is_discarded()) throw ConfigError("config", "'" + file->string() + "' is not valid JSON");
    if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

std::string config_hash(const RunConfig& cfg) {
  json j = config_to_json(cfg);
  j["output"].erase("path");
  j["study"].erase("threads");
  return fnv1a_hex(j.dump());
}

std::string model_hash(const CppOuModel& model) { return fnv1a_hex(model_to_json(model).dump()); }

SpectralConfig spectral_config(const RunConfig& cfg, std::size_t n, double h) {
  SpectralConfig s;
  s.h = h;
  s.theta = cfg.theta_for(n);
  s.kernel = cfg.kernel;
  s.quad_panels = cfg.quad_panels;
  s.design_points = cfg.design_points();
  return s;
}

StudySpec study_spec(const RunConfig& cfg) {
  StudySpec s;
  s.kind = cfg.kind;
  s.model = cfg.model;
  s.n = cfg.n;
  s.delta = cfg.delta;
  s.grid = cfg.design_points();
  s.points = cfg.points;
  s.taus = cfg.taus;
  s.kernel = cfg.kernel;
  s.theta_c = cfg.theta_c;
  s.theta = cfg.theta;
  s.quad_panels = cfg.quad_panels;
  s.bandwidth.fixed_h = cfg.h;
  s.bandwidth.pilot = cfg.pilot;
  s.bandwidth.J = cfg.J;
  s.bandwidth.kappa = cfg.kappa;
  s.replications = cfg.replications_or_default();
  s.base_seed = cfg.seed;
  s.large_n = cfg.large_n;
  s.bias_h = cfg.bias_h;
  s.monotonize = cfg.monotonize;
  s.threads = cfg.threads;
  return s;
}

}  // namespace cppou
