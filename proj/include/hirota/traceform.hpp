#pragma once

// Trace formula for det a(z) and the asymptotic phase condition, focusing case.

#include <vector>

#include "hirota/spectral.hpp"

namespace hirota {

struct RhoSample {
  cplx z;
  cplx weight;       // oriented dz
  CMat2 rho;         // rho(z)
  CMat2 rho_conj;    // rho(conj z)
};

struct TraceInput {
  std::vector<cplx> simple_zeros;
  std::vector<cplx> double_zeros;
  std::vector<RhoSample> rho_samples;  // nodes in contour order
  Background bg;

  void validate() const;
};

// Blaschke-type product over the zeros times the continuum factor (when samples are present).
cplx trace_det_a(cplx z, const TraceInput& in);

struct ThetaCondition {
  double simple_sign;    // integral + 4 sum delta_n + 8 sum delta_double, in [0, 2 pi)
  double combined_sign;  // integral - 4 sum delta_n - 8 sum delta_double, in [0, 2 pi)
  double integral;       // (1 / 2 pi) integral of log det(I + rho^dag rho) dz / z

  // The variant that matches measured asymptotic phases.
  double primary() const { return simple_sign; }
};

ThetaCondition theta_condition(const TraceInput& in);

// Reduces an angle to [0, 2 pi).
double wrap_angle(double a);

// Distance between two angles on the circle.
double angle_distance(double a, double b);

}  // namespace hirota
