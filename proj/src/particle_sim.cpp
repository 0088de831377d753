#include "crossdiff/particle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace crossdiff {

namespace {

double bump(double z) {
  const double t = 1.0 - z * z;
  return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

// splitmix64; a fresh generator per (seed, species, particle, step) keeps the
// draws independent of evaluation order.
struct SplitMix {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

std::uint64_t stream_key(std::uint64_t seed, int species, std::uint64_t index,
                         std::uint64_t step) {
  SplitMix g{seed ^ 0x853C49E6748FEA9Bull};
  std::uint64_t k = g.next();
  SplitMix g2{k ^ (static_cast<std::uint64_t>(species) + 0x9E3779B9ull)};
  k = g2.next();
  SplitMix g3{k ^ index};
  k = g3.next();
  SplitMix g4{k ^ step};
  return g4.next();
}

// uniform in (0,1)
double to_unit(std::uint64_t v) { return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53 * (1.0 - 0x1.0p-53); }

double normal_draw(std::uint64_t key) {
  SplitMix g{key};
  const double u1 = to_unit(g.next());
  const double u2 = to_unit(g.next());
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_draw(std::uint64_t key) {
  SplitMix g{key};
  return to_unit(g.next());
}

}  // namespace

KernelSpec::KernelSpec(double eps_scale_) : eps_scale(eps_scale_), norm(0.0) {
  if (!(eps_scale > 0.0)) {
    throw std::invalid_argument("KernelSpec: eps_scale must be > 0, got " +
                                std::to_string(eps_scale_));
  }
  // Simpson quadrature of the unscaled bump; the integrand is smooth and
  // vanishes with all derivatives at the ends.
  const int n = 4000;
  const double dx = 2.0 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * bump(-1.0 + i * dx);
  }
  norm = 1.0 / (acc * dx / 3.0);
}

double KernelSpec::value(double y) const {
  const double z = y / eps_scale;
  return norm / eps_scale * bump(z);
}

double KernelSpec::derivative(double y) const {
  const double z = y / eps_scale;
  const double t = 1.0 - z * z;
  if (t <= 0.0) return 0.0;
  return norm / (eps_scale * eps_scale) * std::exp(-1.0 / t) * (-2.0 * z / (t * t));
}

void ParticleEnsemble::validate() const {
  if (!(left < right)) throw std::invalid_argument("ParticleEnsemble: left < right required");
  if (positions[0].size() != positions[1].size()) {
    throw std::invalid_argument("ParticleEnsemble: species particle counts differ");
  }
  for (int i = 0; i < 2; ++i) {
    if (!(sigma[i] >= 0.0)) throw std::invalid_argument("ParticleEnsemble: sigma must be >= 0");
    for (double x : positions[i]) {
      if (!std::isfinite(x) || x < left || x > right) {
        throw std::invalid_argument("ParticleEnsemble: particle outside the domain");
      }
    }
  }
}

std::array<std::vector<double>, 2> interaction_drift(const ParticleEnsemble& ens,
                                                     const KernelSpec& kernel,
                                                     const Matrix2& a,
                                                     const std::array<double, 2>& b,
                                                     const GradPotential& grad_phi) {
  ens.validate();
  const int n = ens.count();
  const double supp = kernel.support();

  std::array<std::vector<double>, 2> sorted = ens.positions;
  std::sort(sorted[0].begin(), sorted[0].end());
  std::sort(sorted[1].begin(), sorted[1].end());

  std::array<std::vector<double>, 2> out;
  for (int i = 0; i < 2; ++i) {
    out[i].assign(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      const double x = ens.positions[i][static_cast<size_t>(j)];
      double acc = 0.0;
      for (int k = 0; k < 2; ++k) {
        if (a[i][k] == 0.0 || n == 0) continue;
        const auto& src = sorted[static_cast<size_t>(k)];
        auto lo = std::lower_bound(src.begin(), src.end(), x - supp);
        auto hi = std::upper_bound(src.begin(), src.end(), x + supp);
        double s = 0.0;
        for (auto it = lo; it != hi; ++it) s += kernel.derivative(x - *it);
        acc -= a[i][k] / static_cast<double>(n) * s;
      }
      if (grad_phi) acc += b[i] * grad_phi(x);
      out[i][static_cast<size_t>(j)] = acc;
    }
  }
  return out;
}

ParticleEnsemble em_step(ParticleEnsemble ens, const KernelSpec& kernel, const Matrix2& a,
                         const std::array<double, 2>& b, const GradPotential& grad_phi,
                         double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("em_step: dt must be > 0");
  const auto drift = interaction_drift(ens, kernel, a, b, grad_phi);
  const double sq = std::sqrt(dt);
  const std::uint64_t step_idx = static_cast<std::uint64_t>(ens.step_count) + 1;

  for (int i = 0; i < 2; ++i) {
    for (size_t j = 0; j < ens.positions[i].size(); ++j) {
      const double z = normal_draw(stream_key(ens.rng_seed, i, j, step_idx));
      double x = ens.positions[i][j] + drift[i][j] * dt + ens.sigma[i] * sq * z;
      if (!std::isfinite(x)) {
        throw SolverError("em_step: non-finite particle position");
      }
      // reflect across the violated wall until inside
      while (x < ens.left || x > ens.right) {
        x = (x < ens.left) ? 2.0 * ens.left - x : 2.0 * ens.right - x;
      }
      ens.positions[i][j] = x;
    }
  }
  ens.step_count += 1;
  return ens;
}

std::array<NodalField, 2> empirical_density(const ParticleEnsemble& ens, const Mesh1D& mesh,
                                            double bandwidth) {
  ens.validate();
  if (!(bandwidth > 0.0)) throw std::invalid_argument("empirical_density: bandwidth must be > 0");
  const int n = ens.count();
  if (n == 0) throw std::invalid_argument("empirical_density: empty ensemble");

  const double norm = 1.0 / (bandwidth * std::sqrt(2.0 * std::numbers::pi) * n);
  std::array<NodalField, 2> out = {NodalField(mesh), NodalField(mesh)};
  NodalField ones(mesh, 1.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < mesh.num_nodes(); ++j) {
      const double xj = mesh.node(j);
      double acc = 0.0;
      for (double xp : ens.positions[i]) {
        const double s = (xj - xp) / bandwidth;
        acc += std::exp(-0.5 * s * s);
      }
      out[i][j] = acc * norm;
    }
    const double mass = lumped_inner(out[i], ones);
    if (!(mass > 0.0)) throw SolverError("empirical_density: zero mass estimate");
    for (int j = 0; j < mesh.num_nodes(); ++j) out[i][j] /= mass;
  }
  return out;
}

double compare_to_pde(const NodalField& particle_density, const NodalField& pde_solution) {
  require_same_mesh(particle_density, pde_solution, "compare_to_pde");
  NodalField ones(particle_density.mesh, 1.0);
  const double mass = lumped_inner(pde_solution, ones);
  if (!(mass > 0.0)) {
    throw std::invalid_argument("compare_to_pde: PDE field has nonpositive mass");
  }
  double acc = 0.0;
  for (int j = 0; j < particle_density.size(); ++j) {
    acc += lumped_weight(particle_density.mesh, j) *
           std::abs(particle_density[j] - pde_solution[j] / mass);
  }
  return acc;
}

std::vector<double> sample_from_density(const NodalField& density, int n,
                                        std::uint64_t seed, int species) {
  if (n < 1) throw std::invalid_argument("sample_from_density: n must be >= 1");
  const Mesh1D& mesh = density.mesh;
  const double h = mesh.h();
  const int m = mesh.num_cells;

  // piecewise linear density -> piecewise quadratic CDF over cells
  std::vector<double> cdf(static_cast<size_t>(m) + 1, 0.0);
  for (int k = 0; k < m; ++k) {
    const double dl = density[k], dr = density[k + 1];
    if (dl < 0.0 || dr < 0.0) {
      throw std::invalid_argument("sample_from_density: density must be nonnegative");
    }
    cdf[static_cast<size_t>(k) + 1] = cdf[static_cast<size_t>(k)] + 0.5 * h * (dl + dr);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw std::invalid_argument("sample_from_density: zero total mass");

  std::vector<double> out(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) {
    const double u =
        uniform_draw(stream_key(seed, species, static_cast<std::uint64_t>(p), 0)) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const int k = std::clamp(static_cast<int>(it - cdf.begin()) - 1, 0, m - 1);
    const double r = u - cdf[static_cast<size_t>(k)];
    const double dl = density[k];
    const double slope = (density[k + 1] - density[k]) / h;
    double s;
    if (std::abs(slope) * h > 1e-12 * std::max(dl, 1e-300)) {
      // solve (slope/2) s^2 + dl s = r for s in [0, h]
      const double disc = std::max(dl * dl + 2.0 * slope * r, 0.0);
      s = (-dl + std::sqrt(disc)) / slope;
    } else {
      s = dl > 0.0 ? r / dl : 0.5 * h;
    }
    out[static_cast<size_t>(p)] = std::clamp(mesh.node(k) + s, mesh.left, mesh.right);
  }
  return out;
}

double boundary_mass_fraction(const NodalField& density, double margin) {
  if (!(margin >= 0.0)) throw std::invalid_argument("boundary_mass_fraction: margin must be >= 0");
  NodalField ones(density.mesh, 1.0);
  const double total = lumped_inner(density, ones);
  if (!(total > 0.0)) return 0.0;
  double near = 0.0;
  for (int j = 0; j < density.size(); ++j) {
    const double x = density.mesh.node(j);
    if (x <= density.mesh.left + margin || x >= density.mesh.right - margin) {
      near += lumped_weight(density.mesh, j) * density[j];
    }
  }
  return near / total;
}

}  // namespace crossdiff
