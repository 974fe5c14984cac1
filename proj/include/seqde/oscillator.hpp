// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0
//
// Damped oscillator with a piecewise restoring force, driven by a truncated
// random forcing expansion. The observable is the time-averaged displacement.

#ifndef SEQDE_OSCILLATOR_HPP
#define SEQDE_OSCILLATOR_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "seqde/errors.hpp"
#include "seqde/kl.hpp"

namespace seqde {

struct OscillatorParams {
  double delta = 1.5;   // damping
  double alpha_r = 1.0; // linear restoring slope
  double beta = 0.1;    // cubic stiffening coefficient
  double x1 = 0.5;      // end of the linear regime
  double x2 = 1.5;      // start of the stiffening regime
  double sigma_z = 4.0; // forcing amplitude
  double ell_z = 0.1;   // forcing correlation length
  double horizon = 25.0;
  int modes = 3;
  double step = 0.01;

  void validate() const {
    if (!(x1 < x2)) throw ConfigError("oscillator requires x1 < x2");
    for (double v : {delta, beta, sigma_z, ell_z, horizon, step})
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(
            "oscillator constants must be positive and finite");
    if (!std::isfinite(alpha_r) || !std::isfinite(x1))
      throw ConfigError("oscillator constants must be finite");
    if (modes < 1) throw ConfigError("oscillator needs at least one mode");
  }
};

// Odd in x: linear up to x1, flat plateau to x2, cubic stiffening beyond.
inline double piecewise_restoring(double x, const OscillatorParams& p) {
  const double ax = std::abs(x);
  double f;
  if (ax <= p.x1) {
    f = p.alpha_r * ax;
  } else if (ax <= p.x2) {
    f = p.alpha_r * p.x1;
  } else {
    const double e = ax - p.x2;
    f = p.alpha_r * p.x1 + p.beta * e * e * e;
  }
  return x < 0.0 ? -f : f;
}

namespace detail {

// Linear interpolation of a signal sampled on a uniform grid over
// [0, horizon]; queries are clamped to the grid range.
struct UniformSignal {
  const Eigen::VectorXd* values;
  double spacing;

  double operator()(double t) const {
    const Eigen::VectorXd& v = *values;
    const long last = v.size() - 1;
    double u = t / spacing;
    if (u <= 0.0) return v[0];
    if (u >= static_cast<double>(last)) return v[last];
    const long i = static_cast<long>(u);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
  }
};

} // namespace detail

// Integrates x'' + delta x' + F(x) = forcing(t) from rest with classical
// fourth-order Runge-Kutta and returns the trapezoid time average of x. The
// step is rounded so an integer number of steps lands exactly on the
// horizon.
inline double oscillator_map(const Eigen::VectorXd& theta,
                             const OscillatorParams& params,
                             const KlBasis& basis) {
  params.validate();
  if (theta.size() != basis.modes())
    throw DimensionMismatch("theta has " + std::to_string(theta.size()) +
                            " entries, basis has " +
                            std::to_string(basis.modes()) + " modes");
  const double horizon = basis.time_grid[basis.grid_size() - 1];
  if (std::abs(horizon - params.horizon) > 1e-12 * params.horizon)
    throw ConfigError("basis horizon does not match oscillator horizon");

  const Eigen::VectorXd zeta = forcing_signal(basis, theta);
  const detail::UniformSignal forcing{
      &zeta, params.horizon / (basis.grid_size() - 1)};

  const long steps =
      std::max(1L, std::lround(params.horizon / params.step));
  const double h = params.horizon / static_cast<double>(steps);

  double x = 0.0;
  double v = 0.0;
  double integral = 0.5 * x;
  for (long k = 0; k < steps; ++k) {
    const double t = h * static_cast<double>(k);
    const double f0 = forcing(t);
    const double fh = forcing(t + 0.5 * h);
    const double f1 = forcing(t + h);

    const double k1x = v;
    const double k1v = f0 - params.delta * v - piecewise_restoring(x, params);
    const double x2s = x + 0.5 * h * k1x;
    const double v2s = v + 0.5 * h * k1v;
    const double k2x = v2s;
    const double k2v =
        fh - params.delta * v2s - piecewise_restoring(x2s, params);
    const double x3s = x + 0.5 * h * k2x;
    const double v3s = v + 0.5 * h * k2v;
    const double k3x = v3s;
    const double k3v =
        fh - params.delta * v3s - piecewise_restoring(x3s, params);
    const double x4s = x + h * k3x;
    const double v4s = v + h * k3v;
    const double k4x = v4s;
    const double k4v =
        f1 - params.delta * v4s - piecewise_restoring(x4s, params);

    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(x) || !std::isfinite(v))
      throw NonFiniteState("oscillator state diverged at t=" +
                           std::to_string(t + h) +
                           "; reduce the step or the forcing");
    integral += (k + 1 == steps ? 0.5 : 1.0) * x;
  }
  return integral * h / params.horizon;
}

} // namespace seqde

#endif // SEQDE_OSCILLATOR_HPP
