#pragma once

// Adaptive Dormand-Prince 5(4) for complex linear-sized systems.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>

#include "hirota/error.hpp"

namespace hirota::ode {

using cplx = std::complex<double>;

template <std::size_t N>
using CVec = std::array<cplx, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 1e-2;
  double min_step = 1e-12;
  std::size_t max_steps = 500000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

template <std::size_t N>
using Rhs = std::function<void(double x, const CVec<N>& y, CVec<N>& dy)>;

template <std::size_t N>
using Observer = std::function<void(double x, const CVec<N>& y)>;

// Integrates y from x0 to x1 (either direction) in place. `observe` sees every accepted step.
// Throws IntegrationFailure.
template <std::size_t N>
Stats integrate(const Rhs<N>& rhs, double x0, double x1, CVec<N>& y, const Options& opt = {},
                const Observer<N>& observe = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b*, the embedded 4th-order difference
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  Stats stats;
  if (x1 == x0) return stats;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  double h = dir * std::min(opt.initial_step, std::abs(x1 - x0));
  double x = x0;

  CVec<N> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
  rhs(x, y, k1);
  while (dir * (x1 - x) > 0.0) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      throw Error(ErrorCode::IntegrationFailure, "step budget exhausted");
    if (dir * (x + h - x1) > 0.0) h = x1 - x;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    rhs(x + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(x + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(x + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(x + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(x + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(x + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) throw Error(ErrorCode::IntegrationFailure, "non-finite state");

    if (err <= 1.0) {
      x += h;
      y = ynew;
      k1 = k7;
      ++stats.accepted;
      if (observe) observe(x, y);
    } else {
      ++stats.rejected;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
    if (std::abs(h) < opt.min_step && dir * (x1 - x) > opt.min_step)
      throw Error(ErrorCode::IntegrationFailure, "step size underflow");
  }
  return stats;
}

}  // namespace hirota::ode
