#pragma once

#include <array>
#include <functional>
#include <vector>

#include "crossdiff/mesh_fe.hpp"
#include "crossdiff/regularization.hpp"

namespace crossdiff {

using Matrix2 = std::array<std::array<double, 2>, 2>;

enum class FluxFamily { BT, SKT, BTDelta };

struct FluxKind {
  FluxFamily family = FluxFamily::BT;
  double delta = 0.0;  // used by BTDelta only

  static FluxKind bt() { return {FluxFamily::BT, 0.0}; }
  static FluxKind skt() { return {FluxFamily::SKT, 0.0}; }
  static FluxKind bt_delta(double delta);

  const char* name() const;
};

// Model data: diffusion matrix a, drift weights b, linear diffusion c,
// growth rates alpha, competition matrix beta, drift field q.
struct Coefficients {
  Matrix2 a{};
  std::array<double, 2> b{};
  std::array<double, 2> c{};
  std::array<double, 2> alpha{};
  Matrix2 beta{};
  std::function<double(double)> q;  // empty means zero drift

  void validate() const;  // nonnegativity of a, c, alpha, beta
  double omega() const;   // max_i 2 alpha_i + beta_i1 + beta_i2
};

// 4 a11 a22 - (a12 + a21)^2; the system is uniformly parabolic when positive.
double ellipticity_margin(const Matrix2& a);

// Per-cell species coupling blocks of the linearized diffusive form, with all
// mobilities frozen at the lagged fields:
//   BT       B_ii = a_ii Lam_i + c_i,                        B_ij = a_ij Lam_i
//   SKT      B_ii = a_i1 lbar_1 + a_i2 lbar_2 + a_ii Lam_i + c_i, B_ij = a_ij Lam_i
//   BTDelta  BT + (delta/2) * SKT with c = 0
// where Lam_i is the cell mobility of species i and lbar_k the average of the
// nodal mobilities of species k over the cell.
std::vector<SpeciesBlock> diffusion_blocks(const FluxKind& kind,
                                           const NodalField& u1_lag,
                                           const NodalField& u2_lag,
                                           const Coefficients& coeffs,
                                           const RegParam& reg);

// Per-cell drift flux Lambda_i b_i mean(q); moves to the right-hand side with
// a minus sign. q must be sampled on the same mesh as u_lag.
std::vector<double> drift_load(const NodalField& u_lag, const NodalField& q,
                               double b_i, const RegParam& reg);

struct ReactionTerms {
  std::array<std::vector<double>, 2> implicit_diag;  // per node, equals -alpha_i
  std::array<std::vector<double>, 2> explicit_load;  // per node
};

// Lotka-Volterra terms of the linearized step: the growth part alpha_i u stays
// implicit (returned as a diagonal contribution), the competition part is
// evaluated at clamped lagged/previous values and loads the right-hand side.
ReactionTerms reaction_terms(const std::array<NodalField, 2>& u_lag,
                             const std::array<NodalField, 2>& u_prev,
                             const Coefficients& coeffs, const RegParam& reg);

}  // namespace crossdiff
