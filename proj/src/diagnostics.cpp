#include "crossdiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace crossdiff {

double entropy(const NodalField& u, const RegParam& reg) {
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    acc += lumped_weight(u.mesh, j) * f_eps(u[j], reg);
  }
  return acc;
}

double grad_l2_sq(const NodalField& u) {
  const double h = u.mesh.h();
  double acc = 0.0;
  for (int k = 0; k < u.mesh.num_cells; ++k) {
    const double g = (u[k + 1] - u[k]) / h;
    acc += h * g * g;
  }
  return acc;
}

double grad_sqrt_l2_sq(const NodalField& u) {
  NodalField root = u;
  for (double& v : root.values) v = std::sqrt(std::max(v, 0.0));
  return grad_l2_sq(root);
}

double overlap(const NodalField& u1, const NodalField& u2) {
  return lumped_inner(u1, u2);
}

double total_variation(const NodalField& u) {
  double acc = 0.0;
  for (int k = 0; k < u.mesh.num_cells; ++k) acc += std::abs(u[k + 1] - u[k]);
  return acc;
}

DiagnosticRecord record_diagnostics(const NodalField& u1, const NodalField& u2,
                                    const RegParam& reg, long step, double time,
                                    int fp_iters) {
  require_same_mesh(u1, u2, "record_diagnostics");
  DiagnosticRecord r;
  r.step = step;
  r.time = time;
  NodalField ones(u1.mesh, 1.0);
  r.mass1 = lumped_inner(u1, ones);
  r.mass2 = lumped_inner(u2, ones);
  r.entropy1 = entropy(u1, reg);
  r.entropy2 = entropy(u2, reg);
  r.grad1 = grad_l2_sq(u1);
  r.grad2 = grad_l2_sq(u2);
  r.overlap = overlap(u1, u2);
  r.min1 = *std::min_element(u1.values.begin(), u1.values.end());
  r.min2 = *std::min_element(u2.values.begin(), u2.values.end());
  r.fp_iters = fp_iters;
  return r;
}

std::vector<DeltaScalingRow> delta_scaling_probe(
    const std::vector<std::pair<double, std::array<NodalField, 2>>>& results) {
  std::vector<DeltaScalingRow> table;
  table.reserve(results.size());
  for (size_t i = 0; i < results.size(); ++i) {
    if (i > 0 && results[i].second[0].mesh != results[0].second[0].mesh) {
      throw std::invalid_argument("delta_scaling_probe: inconsistent meshes across results");
    }
    require_same_mesh(results[i].second[0], results[i].second[1], "delta_scaling_probe");
    const double g = grad_l2_sq(results[i].second[0]) + grad_l2_sq(results[i].second[1]);
    table.push_back({results[i].first, results[i].first * g});
  }
  return table;
}

std::vector<DeltaScalingRow> delta_scaling_probe(
    const std::vector<std::pair<double, double>>& grad_qt_totals) {
  std::vector<DeltaScalingRow> table;
  table.reserve(grad_qt_totals.size());
  for (const auto& [delta, total] : grad_qt_totals) {
    table.push_back({delta, delta * total});
  }
  return table;
}

namespace {

struct ScalarCoefficients {
  double a, b, c, alpha, beta;
};

ScalarCoefficients collapse(const Coefficients& co) {
  const auto equal4 = [](const Matrix2& m) {
    return m[0][0] == m[0][1] && m[0][0] == m[1][0] && m[0][0] == m[1][1];
  };
  std::string bad;
  if (!equal4(co.a)) bad += " a";
  if (co.b[0] != co.b[1]) bad += " b";
  if (co.c[0] != co.c[1]) bad += " c";
  if (co.alpha[0] != co.alpha[1]) bad += " alpha";
  if (!equal4(co.beta)) bad += " beta";
  if (!bad.empty()) {
    throw std::invalid_argument(
        "solve_aggregate: coefficients do not collapse to shared scalars:" + bad);
  }
  if (!(co.a[0][0] > 0.0)) {
    throw std::invalid_argument("solve_aggregate: shared diffusion a must be > 0");
  }
  co.validate();
  return {co.a[0][0], co.b[0], co.c[0], co.alpha[0], co.beta[0][0]};
}

}  // namespace

ScalarTrajectory solve_aggregate(const NodalField& u0, const Coefficients& coeffs,
                                 double delta, const SolverParams& params,
                                 const std::vector<double>& snapshot_times) {
  const ScalarCoefficients sc = collapse(coeffs);
  if (!(delta >= 0.0)) throw std::invalid_argument("solve_aggregate: delta must be >= 0");
  params.validate();
  if (!params.t_end) throw std::invalid_argument("solve_aggregate: t_end required");

  const Mesh1D mesh = u0.mesh;
  const int m = mesh.num_cells;
  const int nn = mesh.num_nodes();
  const double tau = params.tau;
  const RegParam& reg = params.reg;

  const NodalField q = coeffs.q ? interpolate(coeffs.q, mesh) : NodalField(mesh, 0.0);

  const long n_steps = steps_for(*params.t_end, tau);
  std::vector<long> snap_steps;
  snap_steps.reserve(snapshot_times.size());
  for (double ts : snapshot_times) {
    snap_steps.push_back(std::clamp(std::lround(ts / tau), 0l, n_steps));
  }

  ScalarTrajectory traj{u0, {}, 0, 0.0, {}};
  NodalField ones(mesh, 1.0);
  traj.mass_history.push_back(lumped_inner(traj.final_u, ones));
  for (size_t s = 0; s < snap_steps.size(); ++s) {
    if (snap_steps[s] == 0) traj.snapshots.emplace_back(0.0, traj.final_u);
  }

  std::vector<double> cell_coeff(static_cast<size_t>(m));
  std::vector<double> drift(static_cast<size_t>(m));
  std::vector<double> diag(static_cast<size_t>(nn), -sc.alpha);
  std::vector<double> rhs(static_cast<size_t>(nn));

  for (long n = 1; n <= n_steps; ++n) {
    const NodalField u_prev = traj.final_u;
    NodalField lag = u_prev;
    bool converged = false;
    double update = 0.0;
    double prev_update = std::numeric_limits<double>::infinity();
    double relax = 1.0;  // same stall-damping relaxation as the coupled stepper
    std::vector<double> res(static_cast<size_t>(nn));
    std::vector<double> res_prev;
    int iters = 0;

    for (int k = 1; k <= params.max_fp_iters; ++k) {
      for (int cell = 0; cell < m; ++cell) {
        const double lam = lambda_matrix_cell(lag[cell], lag[cell + 1], reg);
        cell_coeff[static_cast<size_t>(cell)] = (sc.a + delta) * lam + sc.c;
        drift[static_cast<size_t>(cell)] = sc.b * lam * 0.5 * (q[cell] + q[cell + 1]);
      }
      BandedMatrix A = assemble_scalar(mesh, cell_coeff, diag, 1.0 / tau);
      for (int j = 0; j < nn; ++j) {
        const double w = lumped_weight(mesh, j);
        const double competition =
            -sc.beta * lambda_eps(lag[j], reg) * lambda_eps(u_prev[j], reg);
        double r = w * (u_prev[j] / tau + competition);
        if (j > 0) r += drift[static_cast<size_t>(j - 1)];
        if (j < m) r -= drift[static_cast<size_t>(j)];
        rhs[static_cast<size_t>(j)] = r;
      }
      std::vector<double> x;
      try {
        x = banded_solve(std::move(A), rhs);
      } catch (const SingularSystem& e) {
        throw SingularSystem(e.pivot_index,
                             "solve_aggregate: step " + std::to_string(n) + ": " + e.what());
      }
      update = 0.0;
      for (int j = 0; j < nn; ++j) {
        if (!std::isfinite(x[static_cast<size_t>(j)])) {
          throw FixedPointDivergence(
              std::numeric_limits<double>::quiet_NaN(), k,
              "solve_aggregate: non-finite iterate at step " + std::to_string(n));
        }
        res[static_cast<size_t>(j)] = x[static_cast<size_t>(j)] - lag[j];
        update = std::max(update, std::abs(res[static_cast<size_t>(j)]));
      }
      iters = k;
      if (update < params.tol) {
        lag.values = std::move(x);
        converged = true;
        break;
      }
      if (k >= 2 && prev_update < std::numeric_limits<double>::infinity()) {
        double dot = 0.0, nsq = 0.0, psq = 0.0;
        for (size_t j = 0; j < res.size(); ++j) {
          dot += res[j] * res_prev[j];
          nsq += res[j] * res[j];
          psq += res_prev[j] * res_prev[j];
        }
        const double align = dot / std::max(std::sqrt(nsq * psq), 1e-300);
        const double ratio = update / prev_update;
        if ((ratio > 0.9 && align <= 0.5) || (ratio > 0.5 && align < -0.5)) {
          relax = std::max(relax * 0.5, 1e-3);
        } else if (align > 0.5 && ratio < 0.9) {
          relax = std::min(relax * 1.25, 1.0);
        }
      }
      prev_update = update;
      res_prev = res;
      for (int j = 0; j < nn; ++j) {
        lag[j] += relax * res[static_cast<size_t>(j)];
      }
    }
    if (!converged) {
      char upd[32];
      std::snprintf(upd, sizeof upd, "%.3e", update);
      throw FixedPointDivergence(update, iters,
                                 "solve_aggregate: fixed point not converged at step " +
                                     std::to_string(n) + ", last update " + upd);
    }

    traj.final_u = std::move(lag);
    traj.steps = n;
    traj.grad_qt += tau * grad_l2_sq(traj.final_u);
    traj.mass_history.push_back(lumped_inner(traj.final_u, ones));
    for (size_t s = 0; s < snap_steps.size(); ++s) {
      if (snap_steps[s] == n) {
        traj.snapshots.emplace_back(static_cast<double>(n) * tau, traj.final_u);
      }
    }
  }
  return traj;
}

}  // namespace crossdiff
