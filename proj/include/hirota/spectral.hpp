#pragma once

#include <vector>

#include "hirota/matcore.hpp"

namespace hirota {

struct Background {
  int sigma = -1;  // +1 defocusing, -1 focusing
  double k0 = 1.0;
  double alpha = 1.0;
  double beta = 0.0;
  CMat2 Qplus = CMat2::identity();
  CMat2 Qminus = CMat2::identity();

  // Throws InvalidBackground when k0 <= 0, sigma is not +-1, or Q+- break the boundary constraints.
  void validate() const;

  // Q+ = Q- = k0 I.
  static Background focusing(double alpha, double beta, double k0 = 1.0);
};

// Boundary constraints on one matrix: Q Q^dag = Q^dag Q = k0^2 I, Q = Q^T and the entrywise
// relations |q1| = |q-1|, |q0|^2 = k0^2 - |q1|^2, q1 conj(q0) + q0 conj(q-1) = 0.
// Returns the largest violation.
double boundary_violation(const CMat2& Q, double k0);

enum class Region { DPlus, DMinus, Sigma, BranchPoint };

const char* to_string(Region r) noexcept;

struct SpectralPoint {
  cplx z;
  cplx k;
  cplx lambda;
  cplx gamma;
  Region region;
};

double region_tolerance(const Background& bg) noexcept;

SpectralPoint uniformize(cplx z, const Background& bg);
Region classify_region(cplx z, const Background& bg);

// theta = lambda * (-x - [beta (4k^2 + 2 sigma k0^2) + 2 alpha k] t)
cplx theta(double x, double t, cplx z, const Background& bg);
cplx theta(double x, double t, const SpectralPoint& sp, const Background& bg);

// Quadrature node on the continuous spectrum; `weight` carries dz with orientation.
struct ContourNode {
  cplx z;
  cplx weight;
};

// Gauss-Legendre panels on [-L, L] (left to right), plus for sigma = -1 a counterclockwise
// trapezoid rule on |z| = k0 with nodes nudged off the branch points.
std::vector<ContourNode> contour_samples(const Background& bg, int n_real, int n_circle, double L);

}  // namespace hirota
