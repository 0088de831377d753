#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "crossdiff/flux_models.hpp"
#include "crossdiff/mesh_fe.hpp"

namespace crossdiff {

// Smooth bump exp(-1/(1-x^2)) on (-1,1), rescaled to width eps_scale and
// normalized to unit integral.
struct KernelSpec {
  double eps_scale;
  double norm;  // reciprocal of the unscaled bump integral

  explicit KernelSpec(double eps_scale_);

  double support() const { return eps_scale; }
  double value(double y) const;
  double derivative(double y) const;
};

struct ParticleEnsemble {
  std::array<std::vector<double>, 2> positions;  // equal length per species
  std::array<double, 2> sigma{0.0, 0.0};
  std::uint64_t rng_seed = 0;
  double left = 0.0;
  double right = 1.0;
  long step_count = 0;

  int count() const { return static_cast<int>(positions[0].size()); }
  void validate() const;
};

using GradPotential = std::function<double(double)>;

// Drift of every particle: pairwise kernel-smoothed repulsion
//   -sum_k (a_ik / n) sum_l zeta_eps'(X_j^i - X_l^k)
// plus the potential term b_i grad_phi(X_j^i). Direct summation with an
// early-out for pairs beyond the kernel support.
std::array<std::vector<double>, 2> interaction_drift(const ParticleEnsemble& ens,
                                                     const KernelSpec& kernel,
                                                     const Matrix2& a,
                                                     const std::array<double, 2>& b,
                                                     const GradPotential& grad_phi);

// One Euler-Maruyama step with reflecting walls. Noise comes from streams
// keyed on (seed, species, particle index, step index), so results do not
// depend on evaluation order.
ParticleEnsemble em_step(ParticleEnsemble ens, const KernelSpec& kernel, const Matrix2& a,
                         const std::array<double, 2>& b, const GradPotential& grad_phi,
                         double dt);

// Gaussian kernel density estimate per species, normalized to unit lumped mass.
std::array<NodalField, 2> empirical_density(const ParticleEnsemble& ens, const Mesh1D& mesh,
                                            double bandwidth);

// L1 distance after rescaling the PDE field to unit lumped mass.
double compare_to_pde(const NodalField& particle_density, const NodalField& pde_solution);

// Inverse-CDF draws from a nonnegative nodal density, using the deterministic
// stream with step index 0.
std::vector<double> sample_from_density(const NodalField& density, int n,
                                        std::uint64_t seed, int species);

// Fraction of lumped mass within `margin` of either end of the domain.
double boundary_mass_fraction(const NodalField& density, double margin);

}  // namespace crossdiff
