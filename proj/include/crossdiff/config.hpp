#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossdiff/flux_models.hpp"
#include "crossdiff/mesh_fe.hpp"
#include "crossdiff/solver_params.hpp"

namespace crossdiff {

// Initial datum: optional complement of a sum of primitive terms.
//   constant <value>
//   bump <center> <width> <amplitude>   meaning amplitude * exp(-(x-center)^2 / width)
// joined by " + ", optionally prefixed by "one-minus".
struct InitTerm {
  enum class Kind { Constant, Bump };
  Kind kind = Kind::Constant;
  double value = 0.0;
  double center = 0.0, width = 0.0, amplitude = 0.0;
};

struct InitSpec {
  bool one_minus = false;
  std::vector<InitTerm> terms;
};

NodalField build_init(const InitSpec& spec, const Mesh1D& mesh);

enum class DriftKind { None, Affine };
enum class RunMode { Time, Steady };

struct ParticleConfig {
  bool enabled = false;
  int n = 1000;
  double sigma1 = 0.0, sigma2 = 0.0;
  std::uint64_t seed = 1;
  double bandwidth = 0.02;
  double kernel_eps = 0.03;
  double dt = 0.0;  // 0 means: use solver.tau
};

// Flat key-value run description; see emit_config for the canonical key set.
struct RunConfig {
  std::string name = "run";

  double mesh_left = 0.0, mesh_right = 1.0;
  int mesh_cells = 100;

  FluxFamily flux_family = FluxFamily::BT;
  double flux_delta = 0.0;

  Matrix2 a{};
  double b1 = 0.0, b2 = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  Matrix2 beta{};

  DriftKind drift_kind = DriftKind::None;
  double drift_scale = 0.0, drift_center = 0.0;  // q(x) = scale * (x - center)

  InitSpec init1, init2;

  bool eps_auto = true;
  double eps_value = 0.0;
  double tau = 0.0;
  double tol = 0.0;
  double tol_s = 1e-8;
  int max_fp_iters = 200;
  double delta0 = 0.5;

  RunMode mode = RunMode::Time;
  double t_end = 0.0;
  long max_steps = 500000;
  std::vector<double> snapshots;

  std::string output_dir;
  bool has_zoom = false;
  double zoom_lo = 0.0, zoom_hi = 0.0;

  ParticleConfig particles;
};

// Parses and fully validates; unknown keys and every constraint violation are
// reported together with their key path.
RunConfig parse_config(const std::string& text, const std::string& name);
RunConfig load_config(const std::string& path);

// Canonical serialization; parse_config(emit_config(c)) reproduces c exactly.
std::string emit_config(const RunConfig& cfg);

Mesh1D make_mesh(const RunConfig& cfg);
FluxKind make_flux(const RunConfig& cfg);
Coefficients make_coefficients(const RunConfig& cfg);
SolverParams make_solver_params(const RunConfig& cfg);

RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();
// Short description emitted as a comment header by `preset --emit`.
std::string preset_comment(const std::string& name);

}  // namespace crossdiff
