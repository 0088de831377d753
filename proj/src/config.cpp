#include "crossdiff/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace crossdiff {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// key-value view over the config text with error accumulation
struct Parser {
  std::map<std::string, std::string> kv;
  std::vector<std::string> errors;

  void fail(const std::string& key, const std::string& what) {
    errors.push_back(key + ": " + what);
  }

  bool take(const std::string& key, std::string& out) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    out = it->second;
    kv.erase(it);
    return true;
  }

  double number(const std::string& key, double fallback, bool required) {
    std::string raw;
    if (!take(key, raw)) {
      if (required) fail(key, "required key missing");
      return fallback;
    }
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0' || !std::isfinite(v)) {
      fail(key, "not a finite number: '" + raw + "'");
      return fallback;
    }
    return v;
  }

  long integer(const std::string& key, long fallback, bool required) {
    const double v = number(key, static_cast<double>(fallback), required);
    if (v != std::floor(v) || std::abs(v) > 9e15) {
      fail(key, "not an integer");
      return fallback;
    }
    return static_cast<long>(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    std::string raw;
    if (!take(key, raw)) return fallback;
    if (raw == "true") return true;
    if (raw == "false") return false;
    fail(key, "expected true or false, got '" + raw + "'");
    return fallback;
  }
};

bool parse_init_spec(const std::string& raw, InitSpec& out, std::string& err) {
  std::istringstream in(raw);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  size_t pos = 0;

  out = InitSpec{};
  if (pos < tokens.size() && tokens[pos] == "one-minus") {
    out.one_minus = true;
    ++pos;
  }
  const auto want_number = [&](double& v) {
    if (pos >= tokens.size()) return false;
    char* end = nullptr;
    v = std::strtod(tokens[pos].c_str(), &end);
    if (end == tokens[pos].c_str() || *end != '\0' || !std::isfinite(v)) return false;
    ++pos;
    return true;
  };

  while (true) {
    if (pos >= tokens.size()) {
      err = "expected an initial-data term";
      return false;
    }
    InitTerm term;
    if (tokens[pos] == "constant") {
      ++pos;
      term.kind = InitTerm::Kind::Constant;
      if (!want_number(term.value)) {
        err = "constant needs one numeric value";
        return false;
      }
    } else if (tokens[pos] == "bump") {
      ++pos;
      term.kind = InitTerm::Kind::Bump;
      if (!want_number(term.center) || !want_number(term.width) ||
          !want_number(term.amplitude)) {
        err = "bump needs center, width, amplitude";
        return false;
      }
      if (!(term.width > 0.0)) {
        err = "bump width must be > 0";
        return false;
      }
    } else {
      err = "unknown term '" + tokens[pos] + "' (expected constant or bump)";
      return false;
    }
    out.terms.push_back(term);
    if (pos == tokens.size()) return true;
    if (tokens[pos] != "+") {
      err = "expected '+' between terms, got '" + tokens[pos] + "'";
      return false;
    }
    ++pos;
  }
}

std::string emit_init_spec(const InitSpec& spec) {
  std::string out;
  if (spec.one_minus) out += "one-minus ";
  for (size_t i = 0; i < spec.terms.size(); ++i) {
    if (i > 0) out += " + ";
    const InitTerm& t = spec.terms[i];
    if (t.kind == InitTerm::Kind::Constant) {
      out += "constant " + fmt(t.value);
    } else {
      out += "bump " + fmt(t.center) + " " + fmt(t.width) + " " + fmt(t.amplitude);
    }
  }
  return out;
}

}  // namespace

NodalField build_init(const InitSpec& spec, const Mesh1D& mesh) {
  if (spec.terms.empty()) throw ConfigError("build_init: empty initial-data spec");
  return interpolate(
      [&spec](double x) {
        double v = 0.0;
        for (const InitTerm& t : spec.terms) {
          if (t.kind == InitTerm::Kind::Constant) {
            v += t.value;
          } else {
            const double d = x - t.center;
            v += t.amplitude * std::exp(-d * d / t.width);
          }
        }
        return spec.one_minus ? 1.0 - v : v;
      },
      mesh);
}

RunConfig parse_config(const std::string& text, const std::string& name) {
  Parser p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) {
      p.errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    if (p.kv.count(key)) {
      p.fail(key, "duplicate key");
      continue;
    }
    p.kv[key] = val;
  }

  RunConfig cfg;
  cfg.name = name;

  cfg.mesh_left = p.number("mesh.left", 0.0, true);
  cfg.mesh_right = p.number("mesh.right", 1.0, true);
  cfg.mesh_cells = static_cast<int>(p.integer("mesh.cells", 100, true));

  std::string raw;
  if (p.take("flux.kind", raw)) {
    if (raw == "bt") cfg.flux_family = FluxFamily::BT;
    else if (raw == "skt") cfg.flux_family = FluxFamily::SKT;
    else if (raw == "btdelta") cfg.flux_family = FluxFamily::BTDelta;
    else p.fail("flux.kind", "expected bt, skt or btdelta, got '" + raw + "'");
  } else {
    p.fail("flux.kind", "required key missing");
  }
  const bool has_delta = p.kv.count("flux.delta") > 0;
  cfg.flux_delta = p.number("flux.delta", 0.0, false);
  if (cfg.flux_family == FluxFamily::BTDelta) {
    if (!has_delta) p.fail("flux.delta", "required for flux.kind = btdelta");
    else if (!(cfg.flux_delta > 0.0)) p.fail("flux.delta", "must be > 0");
  } else if (has_delta) {
    p.fail("flux.delta", "only meaningful for flux.kind = btdelta");
  }

  cfg.a[0][0] = p.number("coeff.a11", 0.0, false);
  cfg.a[0][1] = p.number("coeff.a12", 0.0, false);
  cfg.a[1][0] = p.number("coeff.a21", 0.0, false);
  cfg.a[1][1] = p.number("coeff.a22", 0.0, false);
  cfg.b1 = p.number("coeff.b1", 0.0, false);
  cfg.b2 = p.number("coeff.b2", 0.0, false);
  cfg.c1 = p.number("coeff.c1", 0.0, false);
  cfg.c2 = p.number("coeff.c2", 0.0, false);
  cfg.alpha1 = p.number("coeff.alpha1", 0.0, false);
  cfg.alpha2 = p.number("coeff.alpha2", 0.0, false);
  cfg.beta[0][0] = p.number("coeff.beta11", 0.0, false);
  cfg.beta[0][1] = p.number("coeff.beta12", 0.0, false);
  cfg.beta[1][0] = p.number("coeff.beta21", 0.0, false);
  cfg.beta[1][1] = p.number("coeff.beta22", 0.0, false);

  if (p.take("drift.kind", raw)) {
    if (raw == "none") cfg.drift_kind = DriftKind::None;
    else if (raw == "affine") cfg.drift_kind = DriftKind::Affine;
    else p.fail("drift.kind", "expected none or affine, got '" + raw + "'");
  }
  const bool has_drift_param = p.kv.count("drift.scale") || p.kv.count("drift.center");
  cfg.drift_scale = p.number("drift.scale", 0.0, false);
  cfg.drift_center = p.number("drift.center", 0.0, false);
  if (cfg.drift_kind == DriftKind::None && has_drift_param) {
    p.fail("drift.scale", "only meaningful for drift.kind = affine");
  }

  for (int i = 0; i < 2; ++i) {
    const std::string key = i == 0 ? "init.u1" : "init.u2";
    InitSpec& spec = i == 0 ? cfg.init1 : cfg.init2;
    if (p.take(key, raw)) {
      std::string err;
      if (!parse_init_spec(raw, spec, err)) p.fail(key, err);
    } else {
      p.fail(key, "required key missing");
    }
  }

  if (p.take("solver.eps", raw)) {
    if (raw == "auto") {
      cfg.eps_auto = true;
    } else {
      cfg.eps_auto = false;
      char* end = nullptr;
      cfg.eps_value = std::strtod(raw.c_str(), &end);
      if (end == raw.c_str() || *end != '\0' || !std::isfinite(cfg.eps_value)) {
        p.fail("solver.eps", "expected auto or a number, got '" + raw + "'");
      } else if (!(cfg.eps_value > 0.0) || !(cfg.eps_value < std::exp(-2.0))) {
        p.fail("solver.eps", "must lie in (0, e^-2)");
      }
    }
  }
  cfg.tau = p.number("solver.tau", 0.0, true);
  cfg.tol = p.number("solver.tol", 0.0, true);
  cfg.tol_s = p.number("solver.tol_s", 1e-8, false);
  cfg.max_fp_iters = static_cast<int>(p.integer("solver.max_fp_iters", 200, false));
  cfg.delta0 = p.number("solver.delta0", 0.5, false);

  if (p.take("run.mode", raw)) {
    if (raw == "time") cfg.mode = RunMode::Time;
    else if (raw == "steady") cfg.mode = RunMode::Steady;
    else p.fail("run.mode", "expected time or steady, got '" + raw + "'");
  } else {
    p.fail("run.mode", "required key missing");
  }
  const bool has_t_end = p.kv.count("run.t_end") > 0;
  cfg.t_end = p.number("run.t_end", 0.0, false);
  if (cfg.mode == RunMode::Time && !has_t_end) p.fail("run.t_end", "required for run.mode = time");
  cfg.max_steps = p.integer("run.max_steps", 500000, false);

  if (p.take("run.snapshots", raw)) {
    std::istringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(item.c_str(), &end);
      if (end == item.c_str() || *end != '\0' || !std::isfinite(v) || v < 0.0) {
        p.fail("run.snapshots", "bad snapshot time '" + item + "'");
        break;
      }
      cfg.snapshots.push_back(v);
    }
  }

  p.take("output.dir", cfg.output_dir);
  if (p.take("output.zoom", raw)) {
    cfg.has_zoom = true;
    const auto comma = raw.find(',');
    bool ok = comma != std::string::npos;
    if (ok) {
      char *e1 = nullptr, *e2 = nullptr;
      const std::string lo = trim(raw.substr(0, comma)), hi = trim(raw.substr(comma + 1));
      cfg.zoom_lo = std::strtod(lo.c_str(), &e1);
      cfg.zoom_hi = std::strtod(hi.c_str(), &e2);
      ok = e1 != lo.c_str() && *e1 == '\0' && e2 != hi.c_str() && *e2 == '\0' &&
           cfg.zoom_lo < cfg.zoom_hi;
    }
    if (!ok) p.fail("output.zoom", "expected 'lo,hi' with lo < hi");
  }

  cfg.particles.enabled = p.boolean("particles.enabled", false);
  cfg.particles.n = static_cast<int>(p.integer("particles.n", 1000, false));
  cfg.particles.sigma1 = p.number("particles.sigma1", 0.0, false);
  cfg.particles.sigma2 = p.number("particles.sigma2", 0.0, false);
  cfg.particles.seed = static_cast<std::uint64_t>(p.integer("particles.seed", 1, false));
  cfg.particles.bandwidth = p.number("particles.bandwidth", 0.02, false);
  cfg.particles.kernel_eps = p.number("particles.kernel_eps", 0.03, false);
  cfg.particles.dt = p.number("particles.dt", 0.0, false);

  for (const auto& [key, _] : p.kv) p.errors.push_back("unknown key '" + key + "'");

  // cross-field validation
  if (!(cfg.mesh_left < cfg.mesh_right)) p.fail("mesh.left", "need mesh.left < mesh.right");
  if (cfg.mesh_cells < 1) p.fail("mesh.cells", "must be >= 1");
  const auto nonneg = [&p](const char* key, double v) {
    if (!(v >= 0.0)) p.fail(key, "must be >= 0");
  };
  nonneg("coeff.a11", cfg.a[0][0]);
  nonneg("coeff.a12", cfg.a[0][1]);
  nonneg("coeff.a21", cfg.a[1][0]);
  nonneg("coeff.a22", cfg.a[1][1]);
  nonneg("coeff.c1", cfg.c1);
  nonneg("coeff.c2", cfg.c2);
  nonneg("coeff.alpha1", cfg.alpha1);
  nonneg("coeff.alpha2", cfg.alpha2);
  nonneg("coeff.beta11", cfg.beta[0][0]);
  nonneg("coeff.beta12", cfg.beta[0][1]);
  nonneg("coeff.beta21", cfg.beta[1][0]);
  nonneg("coeff.beta22", cfg.beta[1][1]);
  if (!(cfg.tau > 0.0)) p.fail("solver.tau", "must be > 0");
  if (!(cfg.tol > 0.0)) p.fail("solver.tol", "must be > 0");
  if (!(cfg.tol_s > 0.0)) p.fail("solver.tol_s", "must be > 0");
  if (cfg.max_fp_iters < 1) p.fail("solver.max_fp_iters", "must be >= 1");
  if (!(cfg.delta0 > 0.0 && cfg.delta0 < 1.0)) p.fail("solver.delta0", "must lie in (0, 1)");
  if (cfg.mode == RunMode::Time && has_t_end && !(cfg.t_end >= 0.0)) {
    p.fail("run.t_end", "must be >= 0");
  }
  if (cfg.max_steps < 0) p.fail("run.max_steps", "must be >= 0");

  if (cfg.tau > 0.0 && cfg.delta0 > 0.0 && cfg.delta0 < 1.0) {
    const double omega = std::max(2.0 * cfg.alpha1 + cfg.beta[0][0] + cfg.beta[0][1],
                                  2.0 * cfg.alpha2 + cfg.beta[1][0] + cfg.beta[1][1]);
    const double bound = 1.0 - cfg.delta0;
    if (omega * cfg.tau > bound) {
      p.fail("solver.tau", "time step constraint omega*tau <= 1 - delta0 violated: omega = " +
                               fmt_short(omega) + ", tau = " + fmt_short(cfg.tau) +
                               ", omega*tau = " + fmt_short(omega * cfg.tau) + " > " +
                               fmt_short(bound));
    }
  }

  if (cfg.particles.enabled) {
    if (cfg.mode != RunMode::Time) p.fail("particles.enabled", "needs run.mode = time");
    if (cfg.particles.n < 1) p.fail("particles.n", "must be >= 1");
    nonneg("particles.sigma1", cfg.particles.sigma1);
    nonneg("particles.sigma2", cfg.particles.sigma2);
    if (!(cfg.particles.bandwidth > 0.0)) p.fail("particles.bandwidth", "must be > 0");
    if (!(cfg.particles.kernel_eps > 0.0)) p.fail("particles.kernel_eps", "must be > 0");
    if (!(cfg.particles.dt >= 0.0)) p.fail("particles.dt", "must be >= 0");
  }
  if (cfg.has_zoom && (cfg.zoom_lo < cfg.mesh_left || cfg.zoom_hi > cfg.mesh_right)) {
    p.fail("output.zoom", "zoom window must lie inside the domain");
  }

  if (!p.errors.empty()) {
    std::string msg = "config '" + name + "':";
    for (const std::string& e : p.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::filesystem::path(path).stem().string());
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "mesh.left = " << fmt(cfg.mesh_left) << "\n";
  out << "mesh.right = " << fmt(cfg.mesh_right) << "\n";
  out << "mesh.cells = " << cfg.mesh_cells << "\n";
  out << "flux.kind = " << make_flux(cfg).name() << "\n";
  if (cfg.flux_family == FluxFamily::BTDelta) {
    out << "flux.delta = " << fmt(cfg.flux_delta) << "\n";
  }
  out << "coeff.a11 = " << fmt(cfg.a[0][0]) << "\n";
  out << "coeff.a12 = " << fmt(cfg.a[0][1]) << "\n";
  out << "coeff.a21 = " << fmt(cfg.a[1][0]) << "\n";
  out << "coeff.a22 = " << fmt(cfg.a[1][1]) << "\n";
  out << "coeff.b1 = " << fmt(cfg.b1) << "\n";
  out << "coeff.b2 = " << fmt(cfg.b2) << "\n";
  out << "coeff.c1 = " << fmt(cfg.c1) << "\n";
  out << "coeff.c2 = " << fmt(cfg.c2) << "\n";
  out << "coeff.alpha1 = " << fmt(cfg.alpha1) << "\n";
  out << "coeff.alpha2 = " << fmt(cfg.alpha2) << "\n";
  out << "coeff.beta11 = " << fmt(cfg.beta[0][0]) << "\n";
  out << "coeff.beta12 = " << fmt(cfg.beta[0][1]) << "\n";
  out << "coeff.beta21 = " << fmt(cfg.beta[1][0]) << "\n";
  out << "coeff.beta22 = " << fmt(cfg.beta[1][1]) << "\n";
  out << "drift.kind = " << (cfg.drift_kind == DriftKind::None ? "none" : "affine") << "\n";
  if (cfg.drift_kind == DriftKind::Affine) {
    out << "drift.scale = " << fmt(cfg.drift_scale) << "\n";
    out << "drift.center = " << fmt(cfg.drift_center) << "\n";
  }
  out << "init.u1 = " << emit_init_spec(cfg.init1) << "\n";
  out << "init.u2 = " << emit_init_spec(cfg.init2) << "\n";
  out << "solver.eps = " << (cfg.eps_auto ? std::string("auto") : fmt(cfg.eps_value)) << "\n";
  out << "solver.tau = " << fmt(cfg.tau) << "\n";
  out << "solver.tol = " << fmt(cfg.tol) << "\n";
  out << "solver.tol_s = " << fmt(cfg.tol_s) << "\n";
  out << "solver.max_fp_iters = " << cfg.max_fp_iters << "\n";
  out << "solver.delta0 = " << fmt(cfg.delta0) << "\n";
  out << "run.mode = " << (cfg.mode == RunMode::Time ? "time" : "steady") << "\n";
  if (cfg.mode == RunMode::Time) out << "run.t_end = " << fmt(cfg.t_end) << "\n";
  out << "run.max_steps = " << cfg.max_steps << "\n";
  if (!cfg.snapshots.empty()) {
    out << "run.snapshots = ";
    for (size_t i = 0; i < cfg.snapshots.size(); ++i) {
      if (i > 0) out << ",";
      out << fmt(cfg.snapshots[i]);
    }
    out << "\n";
  }
  if (!cfg.output_dir.empty()) out << "output.dir = " << cfg.output_dir << "\n";
  if (cfg.has_zoom) {
    out << "output.zoom = " << fmt(cfg.zoom_lo) << "," << fmt(cfg.zoom_hi) << "\n";
  }
  out << "particles.enabled = " << (cfg.particles.enabled ? "true" : "false") << "\n";
  if (cfg.particles.enabled) {
    out << "particles.n = " << cfg.particles.n << "\n";
    out << "particles.sigma1 = " << fmt(cfg.particles.sigma1) << "\n";
    out << "particles.sigma2 = " << fmt(cfg.particles.sigma2) << "\n";
    out << "particles.seed = " << cfg.particles.seed << "\n";
    out << "particles.bandwidth = " << fmt(cfg.particles.bandwidth) << "\n";
    out << "particles.kernel_eps = " << fmt(cfg.particles.kernel_eps) << "\n";
    out << "particles.dt = " << fmt(cfg.particles.dt) << "\n";
  }
  return out.str();
}

Mesh1D make_mesh(const RunConfig& cfg) {
  return Mesh1D(cfg.mesh_left, cfg.mesh_right, cfg.mesh_cells);
}

FluxKind make_flux(const RunConfig& cfg) {
  switch (cfg.flux_family) {
    case FluxFamily::SKT: return FluxKind::skt();
    case FluxFamily::BTDelta: return FluxKind::bt_delta(cfg.flux_delta);
    case FluxFamily::BT: break;
  }
  return FluxKind::bt();
}

Coefficients make_coefficients(const RunConfig& cfg) {
  Coefficients co;
  co.a = cfg.a;
  co.b = {cfg.b1, cfg.b2};
  co.c = {cfg.c1, cfg.c2};
  co.alpha = {cfg.alpha1, cfg.alpha2};
  co.beta = cfg.beta;
  if (cfg.drift_kind == DriftKind::Affine) {
    const double scale = cfg.drift_scale, center = cfg.drift_center;
    co.q = [scale, center](double x) { return scale * (x - center); };
  }
  return co;
}

SolverParams make_solver_params(const RunConfig& cfg) {
  const Mesh1D mesh = make_mesh(cfg);
  SolverParams sp{RegParam(cfg.eps_auto ? default_eps(mesh.h()) : cfg.eps_value),
                  cfg.tau,
                  cfg.tol,
                  cfg.tol_s,
                  cfg.max_fp_iters,
                  cfg.delta0,
                  {}};
  if (cfg.mode == RunMode::Time) sp.t_end = cfg.t_end;
  return sp;
}

namespace {

RunConfig exp1_base(double b1) {
  RunConfig cfg;
  cfg.mesh_left = 0.0;
  cfg.mesh_right = 3.0;
  cfg.mesh_cells = 301;
  cfg.flux_family = FluxFamily::BT;
  cfg.a = {{{1.0, 1.0}, {1.0, 1.0}}};
  cfg.b1 = b1;
  cfg.b2 = 1.0;
  cfg.c1 = cfg.c2 = 1.0;
  cfg.drift_kind = DriftKind::Affine;
  cfg.drift_scale = -3.0;
  cfg.drift_center = 0.5;
  cfg.init1.terms = {{InitTerm::Kind::Constant, 10.0, 0, 0, 0}};
  cfg.init2.terms = {{InitTerm::Kind::Constant, 10.0, 0, 0, 0}};
  cfg.tau = 1e-3;
  cfg.tol = 1e-7;
  cfg.tol_s = 5e-8;
  cfg.mode = RunMode::Steady;
  cfg.max_steps = 500000;
  // strong drift makes the early lagged iterations heavily damped, so the
  // march out of the flat initial state needs a generous iteration budget
  cfg.max_fp_iters = 5000;
  return cfg;
}

RunConfig exp2_base() {
  RunConfig cfg;
  cfg.mesh_cells = 1001;
  cfg.flux_family = FluxFamily::BT;
  cfg.a = {{{1.0, 1.0}, {1.0, 1.0}}};
  cfg.init1.terms = {{InitTerm::Kind::Bump, 0, 0.4, 0.001, 1.0}};
  cfg.init2.terms = {{InitTerm::Kind::Bump, 0, 0.6, 0.001, 1.0}};
  cfg.tau = 1e-5;
  cfg.tol = 1e-4;
  cfg.mode = RunMode::Time;
  cfg.t_end = 0.17;
  cfg.snapshots = {0.0, 0.05, 0.17};
  cfg.has_zoom = true;
  cfg.zoom_lo = 0.45;
  cfg.zoom_hi = 0.55;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"exp1_b4",        "exp1_b8",        "exp1_b20",  "exp1_b40",
          "exp1_skt_b20",   "exp1_posdef",    "exp2_delta0", "exp2_delta1em3",
          "exp2_delta1em2", "exp3",           "exp4_case1",  "exp4_case2",
          "particles_meanfield"};
}

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  if (name == "exp1_b4") {
    cfg = exp1_base(4.0);
  } else if (name == "exp1_b8") {
    cfg = exp1_base(8.0);
  } else if (name == "exp1_b20") {
    cfg = exp1_base(20.0);
  } else if (name == "exp1_b40") {
    cfg = exp1_base(40.0);
  } else if (name == "exp1_skt_b20") {
    cfg = exp1_base(20.0);
    cfg.flux_family = FluxFamily::SKT;
  } else if (name == "exp1_posdef") {
    // the strong a21 coupling drives the species-2 front hard against zero;
    // tau = 1e-5 keeps the lagged iteration contractive along that front
    cfg = exp2_base();
    cfg.mesh_cells = 201;
    cfg.a = {{{4.0, 0.0}, {3.9, 1.0}}};
    cfg.tau = 1e-5;
    cfg.tol = 1e-10;
    cfg.t_end = 0.005;
    cfg.snapshots = {0.0, 0.005};
    cfg.has_zoom = false;
  } else if (name == "exp2_delta0") {
    cfg = exp2_base();
  } else if (name == "exp2_delta1em3") {
    cfg = exp2_base();
    cfg.flux_family = FluxFamily::BTDelta;
    cfg.flux_delta = 1e-3;
  } else if (name == "exp2_delta1em2") {
    cfg = exp2_base();
    cfg.flux_family = FluxFamily::BTDelta;
    cfg.flux_delta = 1e-2;
  } else if (name == "exp3") {
    cfg = exp2_base();
    cfg.init1.terms = {{InitTerm::Kind::Bump, 0, 0.4, 0.001, 0.1}};
    cfg.init2.one_minus = true;
    cfg.init2.terms = {{InitTerm::Kind::Bump, 0, 0.4, 0.001, 0.1}};
    cfg.alpha1 = cfg.alpha2 = 1.0;
    cfg.beta = {{{1.0, 1.0}, {2.0, 2.0}}};
    cfg.t_end = 7.0;
    cfg.snapshots = {0.0, 5.0, 7.0};
    cfg.has_zoom = false;
  } else if (name == "exp4_case1") {
    cfg = exp2_base();
    cfg.a = {{{3.0, 3.0}, {1.0, 1.0}}};
    cfg.has_zoom = false;
  } else if (name == "exp4_case2") {
    cfg = exp2_base();
    cfg.b1 = 1.0;
    cfg.b2 = 10.0;
    cfg.drift_kind = DriftKind::Affine;
    cfg.drift_scale = -3.0;
    cfg.drift_center = 0.5;
    cfg.has_zoom = false;
  } else if (name == "particles_meanfield") {
    cfg = exp2_base();
    cfg.mesh_cells = 201;
    cfg.c1 = cfg.c2 = 0.05;
    cfg.tau = 1e-3;
    cfg.tol = 1e-8;
    cfg.t_end = 0.05;
    cfg.snapshots = {0.0, 0.05};
    cfg.has_zoom = false;
    cfg.particles.enabled = true;
    cfg.particles.n = 2000;
    cfg.particles.sigma1 = cfg.particles.sigma2 = std::sqrt(0.1);
    cfg.particles.seed = 1;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  cfg.name = name;
  return cfg;
}

std::string preset_comment(const std::string& name) {
  if (name.rfind("exp1_skt", 0) == 0) {
    return "# quadratic-flux variant of the segregation run at drift weight b1 = 20";
  }
  if (name == "exp1_posdef") {
    return "# transient two-bump run with a positive-definite diffusion matrix (margin 0.79)";
  }
  if (name.rfind("exp1", 0) == 0) {
    return "# steady segregation of two competing dispersers; affine environmental field";
  }
  if (name.rfind("exp2", 0) == 0) {
    return "# two colliding bumps, pure nonlinear diffusion; zoom covers the contact region";
  }
  if (name == "exp3") {
    return "# invasion run: small mutant bump inside a resident population, logistic competition";
  }
  if (name == "exp4_case1") {
    return "# colliding bumps with an indefinite diffusion matrix (margin -4)";
  }
  if (name == "exp4_case2") {
    return "# colliding bumps with an affine environmental field and weights b = (1, 10)";
  }
  if (name == "particles_meanfield") {
    return "# particle ensemble next to its mean-field PDE; c_i matches sigma_i^2 / 2";
  }
  return "#";
}

}  // namespace crossdiff
