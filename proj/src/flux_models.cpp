#include "crossdiff/flux_models.hpp"

#include <cmath>
#include <string>

namespace crossdiff {

FluxKind FluxKind::bt_delta(double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("FluxKind: btdelta needs delta > 0, got " +
                                std::to_string(delta));
  }
  return {FluxFamily::BTDelta, delta};
}

const char* FluxKind::name() const {
  switch (family) {
    case FluxFamily::BT: return "bt";
    case FluxFamily::SKT: return "skt";
    case FluxFamily::BTDelta: return "btdelta";
  }
  return "?";
}

void Coefficients::validate() const {
  std::string bad;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (!(a[i][j] >= 0.0)) bad += " a" + std::to_string(i + 1) + std::to_string(j + 1);
      if (!(beta[i][j] >= 0.0)) bad += " beta" + std::to_string(i + 1) + std::to_string(j + 1);
    }
    if (!(c[i] >= 0.0)) bad += " c" + std::to_string(i + 1);
    if (!(alpha[i] >= 0.0)) bad += " alpha" + std::to_string(i + 1);
    if (!std::isfinite(b[i])) bad += " b" + std::to_string(i + 1);
  }
  if (!bad.empty()) {
    throw std::invalid_argument("Coefficients: entries out of range:" + bad);
  }
}

double Coefficients::omega() const {
  double w = 0.0;
  for (int i = 0; i < 2; ++i) {
    w = std::max(w, 2.0 * alpha[i] + beta[i][0] + beta[i][1]);
  }
  return w;
}

double ellipticity_margin(const Matrix2& a) {
  const double s = a[0][1] + a[1][0];
  return 4.0 * a[0][0] * a[1][1] - s * s;
}

namespace {

// BT blocks with the c term optional, the shared building brick of all kinds.
void bt_blocks(const std::array<double, 2>& lam_cell, const Coefficients& co,
               bool with_c, SpeciesBlock& out) {
  for (int i = 0; i < 2; ++i) {
    for (int s = 0; s < 2; ++s) {
      out[i][s] = co.a[i][s] * lam_cell[i];
    }
    if (with_c) out[i][i] += co.c[i];
  }
}

void skt_blocks(const std::array<double, 2>& lam_cell, const std::array<double, 2>& lbar,
                const Coefficients& co, bool with_c, SpeciesBlock& out) {
  bt_blocks(lam_cell, co, with_c, out);
  for (int i = 0; i < 2; ++i) {
    out[i][i] += co.a[i][0] * lbar[0] + co.a[i][1] * lbar[1];
  }
}

}  // namespace

std::vector<SpeciesBlock> diffusion_blocks(const FluxKind& kind,
                                           const NodalField& u1_lag,
                                           const NodalField& u2_lag,
                                           const Coefficients& coeffs,
                                           const RegParam& reg) {
  require_same_mesh(u1_lag, u2_lag, "diffusion_blocks");
  const int m = u1_lag.mesh.num_cells;
  std::vector<SpeciesBlock> out(static_cast<size_t>(m));

  for (int k = 0; k < m; ++k) {
    const std::array<double, 2> lam_cell = {
        lambda_matrix_cell(u1_lag[k], u1_lag[k + 1], reg),
        lambda_matrix_cell(u2_lag[k], u2_lag[k + 1], reg)};
    const std::array<double, 2> lbar = {
        0.5 * (lambda_eps(u1_lag[k], reg) + lambda_eps(u1_lag[k + 1], reg)),
        0.5 * (lambda_eps(u2_lag[k], reg) + lambda_eps(u2_lag[k + 1], reg))};

    SpeciesBlock& blk = out[static_cast<size_t>(k)];
    switch (kind.family) {
      case FluxFamily::BT:
        bt_blocks(lam_cell, coeffs, true, blk);
        break;
      case FluxFamily::SKT:
        skt_blocks(lam_cell, lbar, coeffs, true, blk);
        break;
      case FluxFamily::BTDelta: {
        bt_blocks(lam_cell, coeffs, true, blk);
        SpeciesBlock skt{};
        skt_blocks(lam_cell, lbar, coeffs, false, skt);
        for (int i = 0; i < 2; ++i) {
          for (int s = 0; s < 2; ++s) blk[i][s] += 0.5 * kind.delta * skt[i][s];
        }
        break;
      }
    }
  }
  return out;
}

std::vector<double> drift_load(const NodalField& u_lag, const NodalField& q,
                               double b_i, const RegParam& reg) {
  require_same_mesh(u_lag, q, "drift_load");
  const int m = u_lag.mesh.num_cells;
  std::vector<double> out(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double lam = lambda_matrix_cell(u_lag[k], u_lag[k + 1], reg);
    out[static_cast<size_t>(k)] = lam * b_i * 0.5 * (q[k] + q[k + 1]);
  }
  return out;
}

ReactionTerms reaction_terms(const std::array<NodalField, 2>& u_lag,
                             const std::array<NodalField, 2>& u_prev,
                             const Coefficients& coeffs, const RegParam& reg) {
  require_same_mesh(u_lag[0], u_lag[1], "reaction_terms");
  require_same_mesh(u_lag[0], u_prev[0], "reaction_terms");
  require_same_mesh(u_lag[0], u_prev[1], "reaction_terms");
  const int nn = u_lag[0].mesh.num_nodes();

  ReactionTerms rt;
  for (int i = 0; i < 2; ++i) {
    rt.implicit_diag[i].assign(static_cast<size_t>(nn), -coeffs.alpha[i]);
    rt.explicit_load[i].resize(static_cast<size_t>(nn));
    for (int j = 0; j < nn; ++j) {
      const double competition = coeffs.beta[i][0] * lambda_eps(u_prev[0][j], reg) +
                                 coeffs.beta[i][1] * lambda_eps(u_prev[1][j], reg);
      rt.explicit_load[i][static_cast<size_t>(j)] =
          -lambda_eps(u_lag[i][j], reg) * competition;
    }
  }
  return rt;
}

}  // namespace crossdiff
