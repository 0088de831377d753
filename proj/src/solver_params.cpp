#include "crossdiff/solver_params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crossdiff {

void SolverParams::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("SolverParams: tau must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("SolverParams: tol must be > 0");
  if (!(tol_s > 0.0)) throw std::invalid_argument("SolverParams: tol_s must be > 0");
  if (max_fp_iters < 1) throw std::invalid_argument("SolverParams: max_fp_iters must be >= 1");
  if (!(delta0 > 0.0) || !(delta0 < 1.0)) {
    throw std::invalid_argument("SolverParams: delta0 must lie in (0, 1)");
  }
  if (t_end && !(*t_end >= 0.0)) {
    throw std::invalid_argument("SolverParams: t_end must be >= 0");
  }
}

long steps_for(double t_end, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("steps_for: tau must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("steps_for: t_end must be >= 0");
  if (t_end == 0.0) return 0;
  // Guard against t_end/tau landing a hair above an integer.
  const double raw = t_end / tau;
  return static_cast<long>(std::ceil(raw * (1.0 - 1e-12)));
}

}  // namespace crossdiff
