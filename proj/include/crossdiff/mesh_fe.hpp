#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "crossdiff/errors.hpp"

namespace crossdiff {

// Uniform 1D mesh on (left, right) with num_cells cells and num_cells+1 nodes.
struct Mesh1D {
  double left;
  double right;
  int num_cells;

  Mesh1D(double left_, double right_, int num_cells_);

  double h() const { return (right - left) / num_cells; }
  int num_nodes() const { return num_cells + 1; }
  double node(int j) const {
    return left + (right - left) * static_cast<double>(j) / num_cells;
  }
  double measure() const { return right - left; }

  bool operator==(const Mesh1D& o) const {
    return left == o.left && right == o.right && num_cells == o.num_cells;
  }
  bool operator!=(const Mesh1D& o) const { return !(*this == o); }
};

// Member of the P1 space: one value per node.
struct NodalField {
  Mesh1D mesh;
  std::vector<double> values;

  explicit NodalField(const Mesh1D& m, double fill = 0.0)
      : mesh(m), values(static_cast<size_t>(m.num_nodes()), fill) {}

  double& operator[](int j) { return values[static_cast<size_t>(j)]; }
  double operator[](int j) const { return values[static_cast<size_t>(j)]; }
  int size() const { return static_cast<int>(values.size()); }
};

void require_same_mesh(const NodalField& a, const NodalField& b, const std::string& where);

// Trapezoid weight of node j: h inside, h/2 at the two ends.
double lumped_weight(const Mesh1D& mesh, int j);

// Lumped inner product (f,g)^h = sum_j w_j f_j g_j.
double lumped_inner(const NodalField& f, const NodalField& g);

// Nodal interpolant; rejects non-finite samples.
NodalField interpolate(const std::function<double(double)>& func, const Mesh1D& mesh);

// Lumped-mass L2 projection; for continuous data this is nodal interpolation.
NodalField l2_project(const std::function<double(double)>& func, const Mesh1D& mesh);

// Cell-wise constant gradient (f_{k+1} - f_k)/h, one value per cell.
std::vector<double> element_gradient(const NodalField& f);

// General banded matrix in LAPACK gb storage: column-major, leading dimension
// 2kl+ku+1, entry (r,c) at data[c*ldab + kl+ku+r-c]; the top kl rows per
// column absorb fill-in from row pivoting inside dgbsv.
struct BandedMatrix {
  int n;
  int kl;
  int ku;
  std::vector<double> data;

  BandedMatrix(int n_, int kl_, int ku_);

  int ldab() const { return 2 * kl + ku + 1; }
  double& at(int r, int c) { return data[idx(r, c)]; }
  double get(int r, int c) const { return data[idx(r, c)]; }

 private:
  size_t idx(int r, int c) const;
};

// LAPACK dgbsv (LU with partial pivoting). Consumes its arguments; throws
// SingularSystem with the zero pivot index on breakdown.
std::vector<double> banded_solve(BandedMatrix A, std::vector<double> rhs);

// 2x2 species coupling block of one cell; entry [i][s] multiplies grad u_s in
// the equation tested against species i.
using SpeciesBlock = std::array<std::array<double, 2>, 2>;

// Species-interleaved backward Euler system, row 2j+i = species i at node j:
//   time_weight (u, chi)^h + sum_cells h (B grad u) . grad chi + (diag u, chi)^h.
// Bandwidth kl = ku = 3.
BandedMatrix assemble_banded(const Mesh1D& mesh,
                             const std::vector<SpeciesBlock>& cell_blocks,
                             const std::array<std::vector<double>, 2>& reaction_diag,
                             double time_weight);

// Single-species variant (tridiagonal, kl = ku = 1).
BandedMatrix assemble_scalar(const Mesh1D& mesh,
                             const std::vector<double>& cell_coeff,
                             const std::vector<double>& reaction_diag,
                             double time_weight);

}  // namespace crossdiff
