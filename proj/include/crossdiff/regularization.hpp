#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crossdiff {

// Entropy regularization parameter; admissible range is (0, e^-2).
struct RegParam {
  double eps;

  explicit RegParam(double eps_) : eps(eps_) {
    if (!(eps > 0.0) || !(eps < std::exp(-2.0))) {
      throw std::invalid_argument("RegParam: eps must lie in (0, e^-2), got " +
                                  std::to_string(eps_));
    }
  }
};

// Default regularization for mesh width h.
inline double default_eps(double h) { return std::min(1e-8, h * h); }

// Regularized entropy density: s(ln s - 1) + 1 on [eps, 1/eps], extended by
// quadratics outside so the result is C^{2,1} on all of R.
inline double f_eps(double s, const RegParam& reg) {
  const double e = reg.eps;
  if (s <= e) return (s * s - e * e) / (2.0 * e) + s * (std::log(e) - 1.0) + 1.0;
  const double einv = 1.0 / e;
  if (s >= einv) return e * (s * s - einv * einv) / 2.0 + s * (std::log(einv) - 1.0) + 1.0;
  return s * (std::log(s) - 1.0) + 1.0;
}

inline double f_eps_prime(double s, const RegParam& reg) {
  const double e = reg.eps;
  if (s <= e) return (s - e) / e + std::log(e);
  const double einv = 1.0 / e;
  if (s >= einv) return e * (s - einv) + std::log(einv);
  return std::log(s);
}

inline double f_eps_second(double s, const RegParam& reg) {
  const double e = reg.eps;
  if (s <= e) return 1.0 / e;
  if (s >= 1.0 / e) return e;
  return 1.0 / s;
}

// Nodal mobility 1/f_eps'' = clamp(s, eps, 1/eps); monotone and 1-Lipschitz.
inline double lambda_eps(double s, const RegParam& reg) {
  return std::clamp(s, reg.eps, 1.0 / reg.eps);
}

// Cell mobility: difference quotient of f_eps' between the endpoint values, so
// that Lambda * d/dx(f_eps'(z)) = dz/dx holds exactly on the cell. Falls back
// to lambda_eps at the midpoint when the quotient degenerates. The mean value
// theorem keeps the result in [eps, 1/eps].
inline double lambda_matrix_cell(double z_left, double z_right, const RegParam& reg) {
  const double fl = f_eps_prime(z_left, reg);
  const double fr = f_eps_prime(z_right, reg);
  const double tol = 1e-14 * std::max({1.0, std::abs(fl), std::abs(fr)});
  if (std::abs(fr - fl) <= tol) {
    return lambda_eps(0.5 * (z_left + z_right), reg);
  }
  const double lam = (z_right - z_left) / (fr - fl);
  return std::clamp(lam, reg.eps, 1.0 / reg.eps);
}

}  // namespace crossdiff
