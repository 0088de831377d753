#include "crossdiff/mesh_fe.hpp"

#include <lapacke.h>

#include <cassert>
#include <cmath>
#include <cstdio>

namespace crossdiff {

Mesh1D::Mesh1D(double left_, double right_, int num_cells_)
    : left(left_), right(right_), num_cells(num_cells_) {
  if (!(left < right) || !std::isfinite(left) || !std::isfinite(right)) {
    throw ConfigError("Mesh1D: domain endpoints must be finite with left < right");
  }
  if (num_cells < 1) {
    throw ConfigError("Mesh1D: need at least one cell, got " + std::to_string(num_cells));
  }
}

void require_same_mesh(const NodalField& a, const NodalField& b, const std::string& where) {
  if (a.mesh != b.mesh) {
    throw std::invalid_argument(where + ": fields live on different meshes");
  }
}

double lumped_weight(const Mesh1D& mesh, int j) {
  const double h = mesh.h();
  return (j == 0 || j == mesh.num_cells) ? 0.5 * h : h;
}

double lumped_inner(const NodalField& f, const NodalField& g) {
  require_same_mesh(f, g, "lumped_inner");
  const double h = f.mesh.h();
  const int m = f.mesh.num_cells;
  double acc = 0.5 * h * (f[0] * g[0] + f[m] * g[m]);
  for (int j = 1; j < m; ++j) acc += h * f[j] * g[j];
  return acc;
}

NodalField interpolate(const std::function<double(double)>& func, const Mesh1D& mesh) {
  NodalField out(mesh);
  for (int j = 0; j < mesh.num_nodes(); ++j) {
    const double v = func(mesh.node(j));
    if (!std::isfinite(v)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "interpolate: non-finite sample at x=%.12g", mesh.node(j));
      throw std::invalid_argument(buf);
    }
    out[j] = v;
  }
  return out;
}

NodalField l2_project(const std::function<double(double)>& func, const Mesh1D& mesh) {
  // Lumped mass matrix is diagonal, so the projection collapses to nodal values.
  return interpolate(func, mesh);
}

std::vector<double> element_gradient(const NodalField& f) {
  const double h = f.mesh.h();
  std::vector<double> g(static_cast<size_t>(f.mesh.num_cells));
  for (int k = 0; k < f.mesh.num_cells; ++k) g[static_cast<size_t>(k)] = (f[k + 1] - f[k]) / h;
  return g;
}

BandedMatrix::BandedMatrix(int n_, int kl_, int ku_) : n(n_), kl(kl_), ku(ku_) {
  if (n < 1 || kl < 0 || ku < 0) throw std::invalid_argument("BandedMatrix: bad shape");
  data.assign(static_cast<size_t>(n) * static_cast<size_t>(ldab()), 0.0);
}

size_t BandedMatrix::idx(int r, int c) const {
  assert(r >= 0 && r < n && c >= 0 && c < n);
  const int off = kl + ku + r - c;
  assert(off >= kl && off < ldab());
  return static_cast<size_t>(c) * static_cast<size_t>(ldab()) + static_cast<size_t>(off);
}

std::vector<double> banded_solve(BandedMatrix A, std::vector<double> rhs) {
  const int n = A.n;
  if (static_cast<int>(rhs.size()) != n) {
    throw std::invalid_argument("banded_solve: rhs size mismatch");
  }
  std::vector<lapack_int> ipiv(static_cast<size_t>(n));
  const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, A.kl, A.ku, 1, A.data.data(),
                                        A.ldab(), ipiv.data(), rhs.data(), n);
  if (info > 0) {
    throw SingularSystem(static_cast<int>(info) - 1,
                         "banded_solve: singular pivot at row " + std::to_string(info - 1));
  }
  if (info < 0) throw std::invalid_argument("banded_solve: invalid argument to dgbsv");
  return rhs;
}

BandedMatrix assemble_banded(const Mesh1D& mesh,
                             const std::vector<SpeciesBlock>& cell_blocks,
                             const std::array<std::vector<double>, 2>& reaction_diag,
                             double time_weight) {
  const int m = mesh.num_cells;
  if (static_cast<int>(cell_blocks.size()) != m) {
    throw std::invalid_argument("assemble_banded: cell block count != cell count");
  }
  for (int i = 0; i < 2; ++i) {
    if (static_cast<int>(reaction_diag[static_cast<size_t>(i)].size()) != mesh.num_nodes()) {
      throw std::invalid_argument("assemble_banded: reaction diagonal size != node count");
    }
  }
  if (!(time_weight > 0.0)) {
    throw std::invalid_argument("assemble_banded: time weight must be positive");
  }

  const double h = mesh.h();
  BandedMatrix A(2 * mesh.num_nodes(), 3, 3);
  for (int j = 0; j < mesh.num_nodes(); ++j) {
    const double w = lumped_weight(mesh, j);
    for (int i = 0; i < 2; ++i) {
      A.at(2 * j + i, 2 * j + i) +=
          w * (time_weight + reaction_diag[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    }
  }
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int s = 0; s < 2; ++s) {
        const double v = cell_blocks[static_cast<size_t>(k)][static_cast<size_t>(i)]
                                    [static_cast<size_t>(s)] / h;
        const int r0 = 2 * k + i, r1 = 2 * (k + 1) + i;
        const int c0 = 2 * k + s, c1 = 2 * (k + 1) + s;
        A.at(r0, c0) += v;
        A.at(r0, c1) -= v;
        A.at(r1, c1) += v;
        A.at(r1, c0) -= v;
      }
    }
  }
  return A;
}

BandedMatrix assemble_scalar(const Mesh1D& mesh,
                             const std::vector<double>& cell_coeff,
                             const std::vector<double>& reaction_diag,
                             double time_weight) {
  const int m = mesh.num_cells;
  if (static_cast<int>(cell_coeff.size()) != m) {
    throw std::invalid_argument("assemble_scalar: cell coefficient count != cell count");
  }
  if (static_cast<int>(reaction_diag.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("assemble_scalar: reaction diagonal size != node count");
  }
  if (!(time_weight > 0.0)) {
    throw std::invalid_argument("assemble_scalar: time weight must be positive");
  }

  const double h = mesh.h();
  BandedMatrix A(mesh.num_nodes(), 1, 1);
  for (int j = 0; j < mesh.num_nodes(); ++j) {
    A.at(j, j) += lumped_weight(mesh, j) *
                  (time_weight + reaction_diag[static_cast<size_t>(j)]);
  }
  for (int k = 0; k < m; ++k) {
    const double v = cell_coeff[static_cast<size_t>(k)] / h;
    A.at(k, k) += v;
    A.at(k, k + 1) -= v;
    A.at(k + 1, k + 1) += v;
    A.at(k + 1, k) -= v;
  }
  return A;
}

}  // namespace crossdiff
