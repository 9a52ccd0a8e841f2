#pragma once

// Numerical direct scattering at fixed time.

#include <string>
#include <vector>

#include "hirota/lax.hpp"

namespace hirota {

enum class Side { Left, Right };

// Which 4x2 halves of the modified eigenfunctions to integrate.
enum class Halves { Both, Analytic };

struct ScatterOptions {
  double L = 20.0;
  double tol = 1e-10;
  double t0 = 0.0;
};

// Modified eigenfunctions at x = 0. Left: columns (M, Mbar), started from X- at x = -L.
// Right: columns (Nbar, N), started from X+ at x = +L. Columns not integrated stay zero.
struct JostHalf {
  cplx z;
  double t0 = 0.0;
  Side side = Side::Left;
  CMat4 value;
  std::size_t steps = 0;
  double det_drift = 0.0;  // max over the path of |det - gamma^2| / |gamma^2|, when both halves are integrated
};

JostHalf integrate_jost(const Field& field, cplx z, Side side, const Background& bg, const ScatterOptions& opt = {},
                        Halves halves = Halves::Both);

struct ScatteringSample {
  cplx z;
  CMat4 S;
  CMat2 a, b, abar, bbar;
  CMat2 rho, rhobar;
};

ScatteringSample scattering_matrix(const Field& field, cplx z, const Background& bg, const ScatterOptions& opt = {});

struct SymmetryReport {
  double first = 0.0;        // S^dag(z*) J S(z) - J
  double third = 0.0;        // S^T sigma2 S - sigma2
  double rho_symmetric = 0.0;  // rho - rho^T
  double second = 0.0;       // rho(sigma k0^2 / z) + (sigma / k0^2) Q+^dag rhobar(z) Q+^dag
  double abar = 0.0;         // abar(z) - conj(a(z*))

  double max() const;
};

// Every sample needs its conjugate and its sigma k0^2 / z image in the list. Throws MissingPartner.
SymmetryReport audit_symmetries(const std::vector<ScatteringSample>& samples, const Background& bg);

// Sample points on the continuum closed under z -> conj(z) and z -> sigma k0^2 / z.
std::vector<cplx> symmetric_sigma_points(const Background& bg, int n_real_orbits, int n_circle_orbits);

// det a(z) = det(M(0), N(0)) / gamma^2 for z in D+.
cplx det_a(const Field& field, cplx z, const Background& bg, const ScatterOptions& opt = {});

struct SearchBox {
  double re_min, re_max, im_min, im_max;
};

struct FoundZero {
  cplx z;
  int multiplicity = 1;
  double residual = 0.0;  // |det a| at z
};

struct SpectrumResult {
  std::vector<FoundZero> zeros;
  std::vector<std::string> diagnostics;

  std::vector<cplx> values() const;
};

struct SpectrumOptions {
  int cells_re = 4;
  int cells_im = 4;
  int max_level = 4;
  int boundary_points = 64;
  ScatterOptions scatter;
};

SpectrumResult find_discrete_spectrum(const Field& field, const SearchBox& box, const Background& bg,
                                      const SpectrumOptions& opt = {});

// Background with Q- replaced by the field value at x = -x_far (time t0).
Background with_measured_minus(const Background& bg, const Field& field, double t0, double x_far = 40.0);

}  // namespace hirota
