#pragma once

// Finite-difference checks on constructed fields.

#include <vector>

#include "hirota/inverse.hpp"

namespace hirota {

struct Region2D {
  double xmin = -5.0, xmax = 5.0;
  double tmin = -3.0, tmax = 3.0;
};

struct ResidualReport {
  double max_residual = 0.0;
  double argmax_x = 0.0;
  double argmax_t = 0.0;
  double h = 0.0;
  int stencil_order = 6;
  std::size_t points = 0;
};

// Cubic term of the evolution equation. LaxConsistent: -3 sigma (Q Q^dag Q_x + Q_x Q^dag Q), the
// form compatible with U and V. Printed: -6 sigma Q Q^dag Q_x.
enum class NonlinearForm { LaxConsistent, Printed };

// |i Q_t + alpha (Q_xx - 2 sigma (Q Q^dag - k0^2 I) Q) + i beta (Q_xxx + cubic)|_max at one point,
// sixth-order central differences.
double pde_residual_at(const Field& field, double x, double t, double h, const Background& bg,
                       NonlinearForm form = NonlinearForm::LaxConsistent);

// Max residual over n_probe Halton points in the region.
ResidualReport pde_residual(const Field& field, const Region2D& region, std::size_t n_probe, double h,
                            const Background& bg, NonlinearForm form = NonlinearForm::LaxConsistent);

// Max residual over every node of a grid.
ResidualReport pde_residual_grid(const Field& field, const GridAxes& axes, double h, const Background& bg,
                                 NonlinearForm form = NonlinearForm::LaxConsistent);

struct DecayReport {
  double right_deviation = 0.0;  // |Q(x_far) - Q+|
  double left_deviation = 0.0;   // |Q(-x_far) - Q-meas|
  double rate = 0.0;             // fitted from |Q(x) - Q+| on [x_far / 2, x_far]
  CMat2 Qminus_measured;
};

// Q-meas is the field at x = -2 x_far.
DecayReport boundary_decay(const Field& field, double t, const Background& bg, double x_far);

double symmetry_residual(const FieldGrid& grid);

enum class Axis { X, T };

// max over n Halton points p of the region of | |Q(p)| - |Q(p + period e_axis)| |, entrywise moduli.
double periodicity_probe(const Field& field, Axis axis, double period, std::size_t n,
                         const Region2D& region = {});

// Radical-inverse low-discrepancy sequence.
double halton(std::size_t index, unsigned base);

}  // namespace hirota
