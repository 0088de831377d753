#pragma once

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/flux_models.hpp"
#include "crossdiff/mesh_fe.hpp"
#include "crossdiff/solver_params.hpp"

namespace crossdiff {

struct TimeConstraintCheck {
  bool ok;       // omega * tau <= 1 - delta0
  double omega;  // max_i 2 alpha_i + beta_i1 + beta_i2
  double bound;  // 1 - delta0
};

TimeConstraintCheck check_time_constraint(const SolverParams& params,
                                          const Coefficients& coeffs);

// Extra right-hand side g(species, x, t); used by manufactured-solution studies.
using Forcing = std::function<double(int, double, double)>;

struct SimulationState {
  NodalField u1;
  NodalField u2;
  long step = 0;
  double time = 0.0;
  int last_fp_iters = 0;
  double last_first_update = 0.0;  // |u^{n,1} - u^{n,0}|_inf of the latest step
  bool stationary = false;
  std::array<double, 2> grad_qt{0.0, 0.0};  // accumulated tau * grad_l2_sq per species
  std::vector<DiagnosticRecord> history;    // one record per completed step
  // relaxation memory of the lagged iteration, carried between steps so
  // consecutive steps do not rediscover the same stability threshold
  double fp_relax = 1.0;
  double fp_barrier = std::numeric_limits<double>::infinity();
  // previous-step fields feeding the extrapolated seed of the next step's
  // second iterate; empty until two steps exist
  std::vector<double> fp_prev1, fp_prev2;

  SimulationState(NodalField u1_, NodalField u2_);
};

// One backward Euler step: mobilities and the competition factor are lagged and
// updated by fixed point iteration until the max-norm update drops below tol.
// Throws FixedPointDivergence or SingularSystem on failure.
SimulationState fixed_point_step(SimulationState state, const FluxKind& kind,
                                 const Coefficients& coeffs, const SolverParams& params,
                                 const Forcing& forcing = {});

struct Snapshot {
  long step;
  double time;
  NodalField u1;
  NodalField u2;
};

struct Trajectory {
  SimulationState state;
  std::vector<Snapshot> snapshots;
};

// Integrate to params.t_end, recording snapshots at the requested times
// (rounded to the nearest step).
Trajectory solve_to_time(const NodalField& u1_0, const NodalField& u2_0,
                         const FluxKind& kind, const Coefficients& coeffs,
                         const SolverParams& params,
                         const std::vector<double>& snapshot_times = {},
                         const Forcing& forcing = {});

// Step until the first fixed point update of a step falls below tol_s; the
// returned state is flagged stationary. Throws NoSteadyState when max_steps
// runs out.
SimulationState solve_to_steady(const NodalField& u1_0, const NodalField& u2_0,
                                const FluxKind& kind, const Coefficients& coeffs,
                                const SolverParams& params, long max_steps);

}  // namespace crossdiff
