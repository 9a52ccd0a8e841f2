#pragma once

#include <functional>
#include <optional>

#include "hirota/spectral.hpp"

namespace hirota {

// Q(x, t) evaluated by a solver or read from data.
using Field = std::function<CMat2(double x, double t)>;

struct PotentialSample {
  CMat2 Q;
  std::optional<CMat2> Qx;
  std::optional<CMat2> Qxx;
};

// [[0, Q], [sigma Q^dag, 0]]
CMat4 embed(const CMat2& Q, int sigma);

// U = -i k sigma3 + embed(Q)
CMat4 assemble_U(const PotentialSample& p, const SpectralPoint& sp, const Background& bg);

// V = alpha T_nls + beta T_cmkdv. Throws MissingDerivatives when Qx or Qxx is absent.
CMat4 assemble_V(const PotentialSample& p, const SpectralPoint& sp, const Background& bg);

struct EigenvectorMatrix {
  CMat4 X;
  CMat4 Xinv;
};

// X = I - (i/z) sigma3 embed(Qpm), Xinv = (I + (i/z) sigma3 embed(Qpm)) / gamma.
EigenvectorMatrix asymptotic_eigenvectors(const SpectralPoint& sp, const CMat2& Qpm, const Background& bg);

// max |U_t - V_x + [U, V]| at (x, t), all derivatives by second-order central differences of step h.
double zero_curvature_residual(const Field& field, cplx z, double x, double t, double h, const Background& bg);

}  // namespace hirota
