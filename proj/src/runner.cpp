#include "crossdiff/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/errors.hpp"

namespace crossdiff {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "# crossdiff v1\n";
  return out;
}

void write_profile_csv(const std::string& path, const NodalField& u1, const NodalField& u2,
                       double lo, double hi) {
  std::ofstream out = open_out(path);
  out << "x,u1,u2\n";
  for (int j = 0; j < u1.size(); ++j) {
    const double x = u1.mesh.node(j);
    if (x < lo || x > hi) continue;
    out << num(x) << ',' << num(u1[j]) << ',' << num(u2[j]) << '\n';
  }
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& hist) {
  std::ofstream out = open_out(path);
  out << "n,t,mass1,mass2,entropy1,entropy2,grad1,grad2,overlap,min1,min2,fp_iters\n";
  for (const DiagnosticRecord& r : hist) {
    out << r.step << ',' << num(r.time) << ',' << num(r.mass1) << ',' << num(r.mass2) << ','
        << num(r.entropy1) << ',' << num(r.entropy2) << ',' << num(r.grad1) << ','
        << num(r.grad2) << ',' << num(r.overlap) << ',' << num(r.min1) << ',' << num(r.min2)
        << ',' << r.fp_iters << '\n';
  }
}

// minimal standalone plot: axes with 5 ticks per side and one polyline per species
void write_profile_svg(const std::string& path, const std::string& title,
                       const NodalField& u1, const NodalField& u2) {
  const double W = 700, H = 420, ml = 64, mr = 18, mt = 34, mb = 42;
  const double pw = W - ml - mr, ph = H - mt - mb;

  const Mesh1D& mesh = u1.mesh;
  double ymin = u1[0], ymax = u1[0];
  for (int j = 0; j < u1.size(); ++j) {
    ymin = std::min({ymin, u1[j], u2[j]});
    ymax = std::max({ymax, u1[j], u2[j]});
  }
  if (!(ymax - ymin > 0.0)) {
    const double pad = std::max(1.0, std::abs(ymax)) * 0.1;
    ymin -= pad;
    ymax += pad;
  }
  const auto px = [&](double x) {
    return ml + pw * (x - mesh.left) / (mesh.right - mesh.left);
  };
  const auto py = [&](double y) { return mt + ph * (ymax - y) / (ymax - ymin); };
  const auto polyline = [&](const NodalField& u, const char* color) {
    std::string pts;
    for (int j = 0; j < u.size(); ++j) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(mesh.node(j)), py(u[j]));
      pts += buf;
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = mesh.left + (mesh.right - mesh.left) * k / 4.0;
    const double y = ymin + (ymax - ymin) * k / 4.0;
    out << "<line x1=\"" << px(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(x) << "\" y2=\""
        << mt + ph + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(x) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << time_label(x) << "</text>\n"
        << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << ml << "\" y2=\""
        << py(y) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << time_label(y) << "</text>\n";
  }
  out << polyline(u1, "#1f6fb2") << polyline(u2, "#c23b22");
  out << "<line x1=\"" << ml + pw - 110 << "\" y1=\"" << mt + 10 << "\" x2=\"" << ml + pw - 80
      << "\" y2=\"" << mt + 10 << "\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n"
      << "<text x=\"" << ml + pw - 74 << "\" y=\"" << mt + 14 << "\" font-size=\"12\">u1</text>\n"
      << "<line x1=\"" << ml + pw - 110 << "\" y1=\"" << mt + 28 << "\" x2=\"" << ml + pw - 80
      << "\" y2=\"" << mt + 28 << "\" stroke=\"#c23b22\" stroke-width=\"1.5\"/>\n"
      << "<text x=\"" << ml + pw - 74 << "\" y=\"" << mt + 32 << "\" font-size=\"12\">u2</text>\n"
      << "</svg>\n";
}

std::vector<double> effective_snapshots(const RunConfig& cfg, const RunOverrides& ov) {
  std::vector<double> snaps = ov.snapshots.empty() ? cfg.snapshots : ov.snapshots;
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
  return snaps;
}

ParticleReport run_particles(const RunConfig& cfg, std::uint64_t seed, const Mesh1D& mesh,
                             const NodalField& u1_0, const NodalField& u2_0,
                             const Trajectory& traj, const std::string& dir) {
  const ParticleConfig& pc = cfg.particles;
  ParticleEnsemble ens;
  ens.positions[0] = sample_from_density(u1_0, pc.n, seed, 0);
  ens.positions[1] = sample_from_density(u2_0, pc.n, seed, 1);
  ens.sigma = {pc.sigma1, pc.sigma2};
  ens.rng_seed = seed;
  ens.left = mesh.left;
  ens.right = mesh.right;

  const Coefficients co = make_coefficients(cfg);
  // the field q in the flux is the negative potential gradient of the
  // particle model, so the particle drift uses -q
  GradPotential grad_phi = [](double) { return 0.0; };
  if (co.q) {
    auto q = co.q;
    grad_phi = [q](double x) { return -q(x); };
  }
  const KernelSpec kernel(pc.kernel_eps);
  const double dt = pc.dt > 0.0 ? pc.dt : cfg.tau;
  const long n_steps = steps_for(cfg.t_end, dt);
  for (long s = 0; s < n_steps; ++s) {
    ens = em_step(std::move(ens), kernel, co.a, co.b, grad_phi, dt);
  }

  const auto density = empirical_density(ens, mesh, pc.bandwidth);

  ParticleReport rep;
  rep.n = pc.n;
  rep.l1_u1 = compare_to_pde(density[0], traj.state.u1);
  rep.l1_u2 = compare_to_pde(density[1], traj.state.u2);
  rep.boundary_frac1 = boundary_mass_fraction(density[0], 3.0 * pc.bandwidth);
  rep.boundary_frac2 = boundary_mass_fraction(density[1], 3.0 * pc.bandwidth);

  {
    std::ofstream out = open_out(dir + "/particles.csv");
    out << "# n=" << pc.n << " per species, t=" << time_label(ens.step_count * dt) << "\n";
    out << "species,x\n";
    for (int i = 0; i < 2; ++i) {
      for (double x : ens.positions[static_cast<size_t>(i)]) {
        out << (i + 1) << ',' << num(x) << '\n';
      }
    }
  }
  {
    std::ofstream out = open_out(dir + "/particle_density.csv");
    out << "x,rho1,rho2\n";
    for (int j = 0; j < density[0].size(); ++j) {
      out << num(mesh.node(j)) << ',' << num(density[0][j]) << ',' << num(density[1][j])
          << '\n';
    }
  }
  {
    std::ofstream out = open_out(dir + "/particle_report.csv");
    out << "n,l1_u1,l1_u2,boundary_frac1,boundary_frac2\n";
    out << rep.n << ',' << num(rep.l1_u1) << ',' << num(rep.l1_u2) << ','
        << num(rep.boundary_frac1) << ',' << num(rep.boundary_frac2) << '\n';
  }
  return rep;
}

}  // namespace

std::string resolve_out_dir(const RunConfig& cfg, const RunOverrides& ov) {
  if (ov.out_dir) return *ov.out_dir;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  const char* base = std::getenv("CROSSDIFF_OUT");
  return std::string(base && *base ? base : "out") + "/" + cfg.name;
}

RunResult run(const RunConfig& cfg, const RunOverrides& ov) {
  const Mesh1D mesh = make_mesh(cfg);
  const FluxKind kind = make_flux(cfg);
  const Coefficients coeffs = make_coefficients(cfg);
  const SolverParams params = make_solver_params(cfg);
  const std::vector<double> snaps = effective_snapshots(cfg, ov);
  const std::uint64_t seed = ov.seed ? *ov.seed : cfg.particles.seed;

  if (params.tau > mesh.h() * mesh.h()) {
    std::fprintf(stderr, "warning: run '%s': tau = %g exceeds h^2 = %g; expect visible time error\n",
                 cfg.name.c_str(), params.tau, mesh.h() * mesh.h());
  }

  const NodalField u1_0 = build_init(cfg.init1, mesh);
  const NodalField u2_0 = build_init(cfg.init2, mesh);

  Trajectory traj = [&]() -> Trajectory {
    if (cfg.mode == RunMode::Time) {
      return solve_to_time(u1_0, u2_0, kind, coeffs, params, snaps);
    }
    SimulationState st = solve_to_steady(u1_0, u2_0, kind, coeffs, params, cfg.max_steps);
    Trajectory t{std::move(st), {}};
    t.snapshots.push_back({0, 0.0, u1_0, u2_0});
    t.snapshots.push_back({t.state.step, t.state.time, t.state.u1, t.state.u2});
    return t;
  }();

  const bool stationary = traj.state.stationary;
  RunResult res{cfg.name, resolve_out_dir(cfg, ov),
                cfg.flux_family == FluxFamily::BTDelta ? cfg.flux_delta : 0.0, std::move(traj),
                stationary, std::nullopt};

  ensure_dir(res.out_dir);

  {
    RunConfig echo = cfg;
    echo.snapshots = snaps;
    echo.output_dir = res.out_dir;
    echo.particles.seed = seed;
    std::ofstream out(res.out_dir + "/config.out.conf", std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + res.out_dir + "/config.out.conf'");
    out << preset_comment(cfg.name) << "\n" << emit_config(echo);
  }

  write_diagnostics_csv(res.out_dir + "/diagnostics.csv", res.traj.state.history);

  const double inf = std::numeric_limits<double>::infinity();
  for (const Snapshot& s : res.traj.snapshots) {
    const std::string label = time_label(s.time);
    write_profile_csv(res.out_dir + "/profile_t" + label + ".csv", s.u1, s.u2, -inf, inf);
    write_profile_svg(res.out_dir + "/profile_t" + label + ".svg",
                      cfg.name + "  t = " + label, s.u1, s.u2);
    if (cfg.has_zoom) {
      write_profile_csv(res.out_dir + "/zoom_t" + label + ".csv", s.u1, s.u2, cfg.zoom_lo,
                        cfg.zoom_hi);
    }
  }
  write_profile_csv(res.out_dir + "/profile_final.csv", res.traj.state.u1, res.traj.state.u2,
                    -inf, inf);
  write_profile_svg(res.out_dir + "/profile_final.svg",
                    cfg.name + "  t = " + time_label(res.traj.state.time), res.traj.state.u1,
                    res.traj.state.u2);

  if (cfg.particles.enabled) {
    res.particles = run_particles(cfg, seed, mesh, u1_0, u2_0, res.traj, res.out_dir);
  }
  return res;
}

std::vector<RunResult> sweep(const std::vector<RunConfig>& cfgs, const RunOverrides& ov) {
  {
    std::set<std::string> names;
    for (const RunConfig& c : cfgs) {
      if (!names.insert(c.name).second) {
        throw ConfigError("sweep: duplicate run name '" + c.name + "'");
      }
    }
  }
  const char* env = std::getenv("CROSSDIFF_OUT");
  const std::string base = ov.out_dir ? *ov.out_dir : std::string(env && *env ? env : "out");
  ensure_dir(base);

  std::vector<std::future<RunResult>> futures;
  futures.reserve(cfgs.size());
  for (const RunConfig& cfg : cfgs) {
    RunOverrides sub = ov;
    sub.out_dir = base + "/" + cfg.name;
    futures.push_back(std::async(std::launch::async, [cfg, sub] { return run(cfg, sub); }));
  }

  std::vector<RunResult> results;
  for (size_t i = 0; i < futures.size(); ++i) {
    try {
      results.push_back(futures[i].get());
    } catch (const std::exception& e) {
      std::fprintf(stderr, "sweep: run '%s' failed: %s\n", cfgs[i].name.c_str(), e.what());
    }
  }

  {
    std::ofstream out = open_out(base + "/sweep_summary.csv");
    out << "name,steps,t,mass1,mass2,entropy1,entropy2,grad1,grad2,overlap,min1,min2,"
           "stationary\n";
    for (const RunResult& r : results) {
      const DiagnosticRecord& d = r.traj.state.history.back();
      out << r.name << ',' << d.step << ',' << num(d.time) << ',' << num(d.mass1) << ','
          << num(d.mass2) << ',' << num(d.entropy1) << ',' << num(d.entropy2) << ','
          << num(d.grad1) << ',' << num(d.grad2) << ',' << num(d.overlap) << ','
          << num(d.min1) << ',' << num(d.min2) << ',' << (r.stationary ? 1 : 0) << '\n';
    }
  }

  // delta-scaling table only when the runs are the same experiment at
  // different regularization strengths
  bool delta_family = cfgs.size() >= 2;
  std::string reference;
  for (size_t i = 0; i < cfgs.size() && delta_family; ++i) {
    RunConfig c = cfgs[i];
    c.name.clear();
    c.flux_family = FluxFamily::BT;
    c.flux_delta = 0.0;
    c.output_dir.clear();
    const std::string canon = emit_config(c);
    if (i == 0) reference = canon;
    else if (canon != reference) delta_family = false;
  }
  if (delta_family && results.size() >= 2) {
    std::vector<std::pair<double, double>> totals;
    for (const RunResult& r : results) {
      totals.emplace_back(r.delta, r.traj.state.grad_qt[0] + r.traj.state.grad_qt[1]);
    }
    std::ofstream out = open_out(base + "/delta_scaling.csv");
    out << "delta,product\n";
    for (const DeltaScalingRow& row : delta_scaling_probe(totals)) {
      out << num(row.delta) << ',' << num(row.product) << '\n';
    }
  }
  return results;
}

}  // namespace crossdiff
