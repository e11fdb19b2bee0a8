#include "nsfd/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nsfd/errors.hpp"

namespace nsfd {

namespace {

struct RawConfig {
  // section -> ordered key/value pairs; duplicate keys are a parse error
  std::map<std::string, std::map<std::string, std::string>> kv;
  std::map<std::string, std::map<std::string, bool>> used;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = kv.find(sec);
    return s != kv.end() && s->second.count(key) > 0;
  }
  std::string take(const std::string& sec, const std::string& key) {
    used[sec][key] = true;
    return kv.at(sec).at(key);
  }
  std::string take_or(const std::string& sec, const std::string& key, const std::string& dflt) {
    if (!has(sec, key)) return dflt;
    return take(sec, key);
  }
  void finish() const {
    for (const auto& [sec, keys] : kv)
      for (const auto& [key, value] : keys) {
        (void)value;
        auto su = used.find(sec);
        if (su == used.end() || su->second.count(key) == 0)
          throw ConfigError("[" + sec + "]." + key + ": unknown key");
      }
  }
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RawConfig parse_raw(const std::string& text) {
  RawConfig raw;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    std::string sec = section.empty() ? "" : section;
    if (raw.kv[sec].count(key))
      throw ConfigError("[" + sec + "]." + key + ": duplicate key");
    raw.kv[sec][key] = value;
  }
  return raw;
}

void apply_overrides(RawConfig& raw, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + ov + "': expected key=value");
    std::string path = trim(ov.substr(0, eq));
    std::string value = trim(ov.substr(eq + 1));
    auto dot = path.find('.');
    std::string sec = dot == std::string::npos ? "" : path.substr(0, dot);
    std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
    raw.kv[sec][key] = value;
  }
}

double to_double(const std::string& sec, const std::string& key, const std::string& v) {
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("[" + sec + "]." + key + ": '" + v + "' is not a number");
  return x;
}

int to_int(const std::string& sec, const std::string& key, const std::string& v) {
  double x = to_double(sec, key, v);
  int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw ConfigError("[" + sec + "]." + key + ": '" + v + "' is not an integer");
  return i;
}

bool to_bool(const std::string& sec, const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("[" + sec + "]." + key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_vec(const std::string& sec, const std::string& key, const std::string& v,
                           std::size_t want = 0) {
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(to_double(sec, key, tok));
  if (want != 0 && out.size() != want)
    throw ConfigError("[" + sec + "]." + key + ": expected " + std::to_string(want) + " numbers");
  return out;
}

Point to_point(const std::string& sec, const std::string& key, const std::string& v) {
  auto xs = to_vec(sec, key, v, 3);
  return {xs[0], xs[1], xs[2]};
}

DomainSpec parse_domain(RawConfig& raw) {
  DomainSpec spec;
  std::string kind = raw.take_or("domain", "kind", "box");
  if (kind == "box") {
    spec.kind = ShapeKind::Box;
    spec.box.lo = to_point("domain", "lo", raw.take_or("domain", "lo", "0 0 0"));
    spec.box.hi = to_point("domain", "hi", raw.take_or("domain", "hi", "1 1 1"));
  } else if (kind == "ball") {
    spec.kind = ShapeKind::Ball;
    spec.ball_center = to_point("domain", "center", raw.take_or("domain", "center", "0 0 0"));
    spec.ball_radius = to_double("domain", "radius", raw.take_or("domain", "radius", "1"));
  } else if (kind == "lshape") {
    spec.kind = ShapeKind::LShape;
    spec.box.lo = to_point("domain", "lo", raw.take("domain", "lo"));
    spec.box.hi = to_point("domain", "hi", raw.take("domain", "hi"));
    spec.box2.lo = to_point("domain", "lo2", raw.take("domain", "lo2"));
    spec.box2.hi = to_point("domain", "hi2", raw.take("domain", "hi2"));
  } else if (kind == "mask") {
    spec.kind = ShapeKind::Mask;
    spec.mask = read_mask_file(raw.take("domain", "file"));
  } else {
    throw ConfigError("[domain].kind: unknown shape '" + kind + "'");
  }
  return spec;
}

FieldSpec parse_field(RawConfig& raw, const std::string& sec, bool is_force) {
  FieldSpec f;
  std::string kind = raw.take_or(sec, "kind", "zero");
  if (kind == "zero") {
    f.kind = FieldSpec::Kind::Zero;
  } else if (kind == "constant") {
    f.kind = FieldSpec::Kind::Constant;
    auto v = to_vec(sec, "value", raw.take_or(sec, "value", "0 0 0"), 3);
    f.value = {v[0], v[1], v[2]};
  } else if (kind == "solenoidal-bump") {
    f.kind = FieldSpec::Kind::SolenoidalBump;
  } else if (kind == "decaying-swirl" && is_force) {
    f.kind = FieldSpec::Kind::DecayingSwirl;
    f.decay = to_double(sec, "decay", raw.take_or(sec, "decay", "1"));
  } else if (kind == "file") {
    f.kind = FieldSpec::Kind::File;
    f.file = raw.take(sec, "file");
  } else {
    throw ConfigError("[" + sec + "].kind: unknown field '" + kind + "'");
  }
  if (f.kind == FieldSpec::Kind::SolenoidalBump || f.kind == FieldSpec::Kind::DecayingSwirl) {
    f.center = to_point(sec, "center", raw.take_or(sec, "center", "0.5 0.5 0.5"));
    f.halfwidth = to_point(sec, "halfwidth", raw.take_or(sec, "halfwidth", "0.22 0.22 0.22"));
    f.amplitude = to_double(sec, "amplitude", raw.take_or(sec, "amplitude", "1"));
    if (f.kind == FieldSpec::Kind::SolenoidalBump) {
      auto p = to_vec(sec, "potential", raw.take_or(sec, "potential", "0 0 1"), 3);
      f.potential = {p[0], p[1], p[2]};
    }
  }
  return f;
}

RunConfig build_run_config(RawConfig& raw) {
  RunConfig cfg;
  cfg.schema = to_int("", "schema", raw.take_or("", "schema", "1"));
  cfg.domain = parse_domain(raw);
  cfg.h = to_double("grid", "h", raw.take_or("grid", "h", "0.0625"));
  cfg.T = to_double("time", "T", raw.take_or("time", "T", "0.25"));
  if (raw.has("time", "tau")) cfg.tau = to_double("time", "tau", raw.take("time", "tau"));
  if (raw.has("time", "alpha")) cfg.alpha = to_double("time", "alpha", raw.take("time", "alpha"));
  if (!cfg.tau && !cfg.alpha) cfg.alpha = 2.0;
  cfg.initial = parse_field(raw, "initial", false);
  cfg.force = parse_field(raw, "force", true);
  cfg.hodge.tol = to_double("solver", "hodge_tol", raw.take_or("solver", "hodge_tol", "1e-12"));
  cfg.hodge.max_iter_factor =
      to_int("solver", "hodge_max_iter_factor", raw.take_or("solver", "hodge_max_iter_factor", "10"));
  cfg.momentum.tol =
      to_double("solver", "momentum_tol", raw.take_or("solver", "momentum_tol", "1e-10"));
  cfg.momentum.max_iter_factor = to_int("solver", "momentum_max_iter_factor",
                                        raw.take_or("solver", "momentum_max_iter_factor", "20"));
  cfg.momentum.div_warn =
      to_double("solver", "momentum_div_warn", raw.take_or("solver", "momentum_div_warn", "1e-8"));
  cfg.sum_mode = to_bool("solver", "compensated_sums",
                         raw.take_or("solver", "compensated_sums", "false"))
                     ? SumMode::Compensated
                     : SumMode::Sequential;
  cfg.out_dir = raw.take_or("output", "directory", "out");
  cfg.cadence = to_int("output", "cadence", raw.take_or("output", "cadence", "0"));
  cfg.vtk = to_bool("output", "vtk", raw.take_or("output", "vtk", "false"));
  return cfg;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Point& p) { return fmt(p[0]) + " " + fmt(p[1]) + " " + fmt(p[2]); }

void serialize_field(std::ostringstream& os, const std::string& sec, const FieldSpec& f) {
  os << "[" << sec << "]\n";
  os << "kind = " << f.kind_name() << "\n";
  switch (f.kind) {
    case FieldSpec::Kind::Zero:
      break;
    case FieldSpec::Kind::Constant:
      os << "value = " << fmt(f.value) << "\n";
      break;
    case FieldSpec::Kind::DecayingSwirl:
      os << "decay = " << fmt(f.decay) << "\n";
      [[fallthrough]];
    case FieldSpec::Kind::SolenoidalBump:
      if (f.kind == FieldSpec::Kind::SolenoidalBump)
        os << "potential = " << fmt(f.potential) << "\n";
      os << "center = " << fmt(f.center) << "\n";
      os << "halfwidth = " << fmt(f.halfwidth) << "\n";
      os << "amplitude = " << fmt(f.amplitude) << "\n";
      break;
    case FieldSpec::Kind::File:
      os << "file = " << f.file << "\n";
      break;
  }
}

void serialize_run_body(std::ostringstream& os, const RunConfig& cfg) {
  os << "schema = " << cfg.schema << "\n\n";
  os << "[domain]\n";
  os << "kind = " << cfg.domain.kind_name() << "\n";
  switch (cfg.domain.kind) {
    case ShapeKind::Box:
      os << "lo = " << fmt(cfg.domain.box.lo) << "\n";
      os << "hi = " << fmt(cfg.domain.box.hi) << "\n";
      break;
    case ShapeKind::Ball:
      os << "center = " << fmt(cfg.domain.ball_center) << "\n";
      os << "radius = " << fmt(cfg.domain.ball_radius) << "\n";
      break;
    case ShapeKind::LShape:
      os << "lo = " << fmt(cfg.domain.box.lo) << "\n";
      os << "hi = " << fmt(cfg.domain.box.hi) << "\n";
      os << "lo2 = " << fmt(cfg.domain.box2.lo) << "\n";
      os << "hi2 = " << fmt(cfg.domain.box2.hi) << "\n";
      break;
    case ShapeKind::Mask:
      os << "# mask geometry is file-backed and not round-tripped\n";
      break;
  }
  os << "\n[grid]\n";
  os << "h = " << fmt(cfg.h) << "\n";
  os << "\n[time]\n";
  os << "T = " << fmt(cfg.T) << "\n";
  if (cfg.tau) os << "tau = " << fmt(*cfg.tau) << "\n";
  if (cfg.alpha) os << "alpha = " << fmt(*cfg.alpha) << "\n";
  os << "\n";
  serialize_field(os, "initial", cfg.initial);
  os << "\n";
  serialize_field(os, "force", cfg.force);
  os << "\n[solver]\n";
  os << "hodge_tol = " << fmt(cfg.hodge.tol) << "\n";
  os << "hodge_max_iter_factor = " << cfg.hodge.max_iter_factor << "\n";
  os << "momentum_tol = " << fmt(cfg.momentum.tol) << "\n";
  os << "momentum_max_iter_factor = " << cfg.momentum.max_iter_factor << "\n";
  os << "momentum_div_warn = " << fmt(cfg.momentum.div_warn) << "\n";
  os << "compensated_sums = " << (cfg.sum_mode == SumMode::Compensated ? "true" : "false")
     << "\n";
  os << "\n[output]\n";
  os << "directory = " << cfg.out_dir << "\n";
  os << "cadence = " << cfg.cadence << "\n";
  os << "vtk = " << (cfg.vtk ? "true" : "false") << "\n";
}

}  // namespace

RunConfig parse_run_config(const std::string& text) { return parse_run_config(text, {}); }

RunConfig parse_run_config(const std::string& text, const std::vector<std::string>& overrides) {
  RawConfig raw = parse_raw(text);
  apply_overrides(raw, overrides);
  RunConfig cfg = build_run_config(raw);
  raw.finish();
  cfg.validate();
  return cfg;
}

StudyPlan parse_study_config(const std::string& text) { return parse_study_config(text, {}); }

StudyPlan parse_study_config(const std::string& text, const std::vector<std::string>& overrides) {
  RawConfig raw = parse_raw(text);
  apply_overrides(raw, overrides);
  StudyPlan plan;
  plan.alpha = to_double("study", "alpha", raw.take_or("study", "alpha", "2"));
  plan.levels_h = to_vec("study", "levels", raw.take_or("study", "levels", ""));
  if (raw.has("study", "dictionary")) {
    std::istringstream is(raw.take("study", "dictionary"));
    std::string tok;
    while (is >> tok) plan.dictionary_names.push_back(tok);
  }
  plan.weak_form = to_bool("study", "weak_form", raw.take_or("study", "weak_form", "true"));
  plan.div_bound = to_bool("study", "div_bound", raw.take_or("study", "div_bound", "true"));
  plan.base = build_run_config(raw);
  raw.finish();
  // the per-level tau comes from the dyadic rule; the base must still carry
  // a valid time discretization for serialization round-trips
  plan.base.validate();
  plan.validate();
  return plan;
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::ostringstream os;
  serialize_run_body(os, cfg);
  return os.str();
}

std::string serialize_study_config(const StudyPlan& plan) {
  std::ostringstream os;
  serialize_run_body(os, plan.base);
  os << "\n[study]\n";
  os << "levels =";
  for (double h : plan.levels_h) os << " " << fmt(h);
  os << "\n";
  os << "alpha = " << fmt(plan.alpha) << "\n";
  if (!plan.dictionary_names.empty()) {
    os << "dictionary =";
    for (const std::string& n : plan.dictionary_names) os << " " << n;
    os << "\n";
  }
  os << "weak_form = " << (plan.weak_form ? "true" : "false") << "\n";
  os << "div_bound = " << (plan.div_bound ? "true" : "false") << "\n";
  return os.str();
}

VoxelMask read_mask_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("[domain].file: cannot open '" + path + "'");
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "nsfd-mask" || version != 1)
    throw ConfigError("[domain].file: '" + path + "' is not a version-1 mask file");
  VoxelMask m;
  std::string key;
  is >> key;
  if (key != "origin") throw ConfigError("mask file: expected 'origin'");
  is >> m.origin[0] >> m.origin[1] >> m.origin[2];
  is >> key;
  if (key != "voxel") throw ConfigError("mask file: expected 'voxel'");
  is >> m.voxel;
  is >> key;
  if (key != "dims") throw ConfigError("mask file: expected 'dims'");
  is >> m.dims[0] >> m.dims[1] >> m.dims[2];
  std::size_t n = static_cast<std::size_t>(m.dims[0] * m.dims[1] * m.dims[2]);
  m.occ.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int b = 0;
    if (!(is >> b)) throw ConfigError("mask file: truncated occupancy data");
    m.occ[i] = b ? 1 : 0;
  }
  return m;
}

}  // namespace nsfd
