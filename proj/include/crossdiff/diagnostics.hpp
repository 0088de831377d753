#pragma once

#include <array>
#include <utility>
#include <vector>

#include "crossdiff/flux_models.hpp"
#include "crossdiff/mesh_fe.hpp"
#include "crossdiff/regularization.hpp"
#include "crossdiff/solver_params.hpp"

namespace crossdiff {

struct DiagnosticRecord {
  long step = 0;
  double time = 0.0;
  double mass1 = 0.0, mass2 = 0.0;
  double entropy1 = 0.0, entropy2 = 0.0;
  double grad1 = 0.0, grad2 = 0.0;
  double overlap = 0.0;
  double min1 = 0.0, min2 = 0.0;
  int fp_iters = 0;
};

// (f_eps(u), 1)^h
double entropy(const NodalField& u, const RegParam& reg);

// sum_cells h (grad u)^2
double grad_l2_sq(const NodalField& u);

// grad_l2_sq of the nodewise sqrt(max(u, 0)); the c-weighted term of the
// delta-scaling estimate
double grad_sqrt_l2_sq(const NodalField& u);

// (u1, u2)^h; vanishes exactly for nodally disjoint supports
double overlap(const NodalField& u1, const NodalField& u2);

// sum_cells |u_{k+1} - u_k|
double total_variation(const NodalField& u);

DiagnosticRecord record_diagnostics(const NodalField& u1, const NodalField& u2,
                                    const RegParam& reg, long step, double time,
                                    int fp_iters);

struct DeltaScalingRow {
  double delta;
  double product;
};

// delta * sum_i grad_l2_sq(u_i) over final fields of runs differing only in delta.
std::vector<DeltaScalingRow> delta_scaling_probe(
    const std::vector<std::pair<double, std::array<NodalField, 2>>>& results);

// Same product built from accumulated space-time gradient norms
// sum_n tau sum_i grad_l2_sq(u_i^n), one total per run.
std::vector<DeltaScalingRow> delta_scaling_probe(
    const std::vector<std::pair<double, double>>& grad_qt_totals);

struct ScalarTrajectory {
  NodalField final_u;
  std::vector<std::pair<double, NodalField>> snapshots;
  long steps = 0;
  double grad_qt = 0.0;              // accumulated tau * grad_l2_sq
  std::vector<double> mass_history;  // lumped mass, entry per step incl. step 0
};

// Scalar aggregate problem with flux (a + delta) u u_x + b q u + c u_x and
// reaction u (alpha - beta u), discretized by the same lagged-mobility backward
// Euler scheme. The coefficient set must collapse to shared scalars (all a_ij
// equal and positive, b_1 = b_2, c_1 = c_2, alpha_1 = alpha_2, all beta_ij
// equal); anything else is rejected.
ScalarTrajectory solve_aggregate(const NodalField& u0, const Coefficients& coeffs,
                                 double delta, const SolverParams& params,
                                 const std::vector<double>& snapshot_times = {});

}  // namespace crossdiff
