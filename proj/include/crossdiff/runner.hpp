#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crossdiff/config.hpp"
#include "crossdiff/particle_sim.hpp"
#include "crossdiff/time_stepper.hpp"

namespace crossdiff {

// Command-line adjustments; snapshots, when nonempty, replace the config's.
struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<double> snapshots;
};

struct ParticleReport {
  int n = 0;
  double l1_u1 = 0.0, l1_u2 = 0.0;
  // lumped mass within 3 KDE bandwidths of a wall; large values mean the
  // unbounded-domain comparison is not trustworthy
  double boundary_frac1 = 0.0, boundary_frac2 = 0.0;
};

struct RunResult {
  std::string name;
  std::string out_dir;
  double delta = 0.0;  // flux delta (0 outside the btdelta family)
  Trajectory traj;
  bool stationary = false;
  std::optional<ParticleReport> particles;
};

// Priority: override, then output.dir from the config, then $CROSSDIFF_OUT/<name>,
// then out/<name>.
std::string resolve_out_dir(const RunConfig& cfg, const RunOverrides& ov);

// Executes the configured run and writes diagnostics.csv, profile CSVs and SVG
// plots per snapshot, zoom CSVs when a zoom window is set, the canonical
// config echo, and the particle artifacts when enabled.
RunResult run(const RunConfig& cfg, const RunOverrides& ov = {});

// Runs the configs concurrently into sibling directories under the base output
// directory and joins their final diagnostics into sweep_summary.csv; when the
// configs differ only in the flux delta, also writes delta_scaling.csv. A run
// that fails is reported on stderr and skipped in the outputs; the survivors
// are returned (compare sizes to detect partial failure).
std::vector<RunResult> sweep(const std::vector<RunConfig>& cfgs, const RunOverrides& ov = {});

}  // namespace crossdiff
