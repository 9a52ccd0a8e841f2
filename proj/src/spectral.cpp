#include "hirota/spectral.hpp"

#include <numbers>
#include <string>

namespace hirota {

double boundary_violation(const CMat2& Q, double k0) {
  const double k2 = k0 * k0;
  const CMat2 target = CMat2::diag(k2);
  double v = std::max(norm_max(Q * dagger(Q) - target), norm_max(dagger(Q) * Q - target));
  v = std::max(v, norm_max(Q - transpose(Q)));
  const cplx q1 = Q(0, 0), q0 = Q(0, 1), qm1 = Q(1, 1);
  v = std::max(v, std::abs(std::abs(q1) - std::abs(qm1)));
  v = std::max(v, std::abs(std::norm(q0) - (k2 - std::norm(q1))));
  v = std::max(v, std::abs(q1 * std::conj(q0) + q0 * std::conj(qm1)));
  return v;
}

void Background::validate() const {
  if (sigma != 1 && sigma != -1) throw Error(ErrorCode::InvalidBackground, "sigma must be +1 or -1");
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw Error(ErrorCode::InvalidBackground, "k0 must be positive");
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidBackground, "alpha and beta must be finite");
  const double tol = 1e-12 * std::max(1.0, k0 * k0);
  if (!is_finite(Qplus) || boundary_violation(Qplus, k0) > tol)
    throw Error(ErrorCode::InvalidBackground, "Q+ violates the boundary constraints");
  if (!is_finite(Qminus) || boundary_violation(Qminus, k0) > tol)
    throw Error(ErrorCode::InvalidBackground, "Q- violates the boundary constraints");
}

Background Background::focusing(double alpha, double beta, double k0) {
  Background bg;
  bg.sigma = -1;
  bg.k0 = k0;
  bg.alpha = alpha;
  bg.beta = beta;
  bg.Qplus = CMat2::diag(k0);
  bg.Qminus = CMat2::diag(k0);
  return bg;
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::DPlus: return "DPlus";
    case Region::DMinus: return "DMinus";
    case Region::Sigma: return "Sigma";
    case Region::BranchPoint: return "BranchPoint";
  }
  return "?";
}

double region_tolerance(const Background& bg) noexcept { return 1e-9 * std::max(1.0, bg.k0 * bg.k0); }

Region classify_region(cplx z, const Background& bg) {
  if (z == 0.0) throw Error(ErrorCode::ZeroArgument, "z = 0");
  const double tol = region_tolerance(bg);
  // branch points: +-k0 (defocusing), +-i k0 (focusing)
  const cplx b = bg.sigma > 0 ? cplx(bg.k0, 0.0) : cplx(0.0, bg.k0);
  if (std::abs(z - b) <= tol || std::abs(z + b) <= tol) return Region::BranchPoint;
  const double s = (std::norm(z) + bg.sigma * bg.k0 * bg.k0) * z.imag();
  if (s > tol) return Region::DPlus;
  if (s < -tol) return Region::DMinus;
  return Region::Sigma;
}

SpectralPoint uniformize(cplx z, const Background& bg) {
  if (z == 0.0) throw Error(ErrorCode::ZeroArgument, "z = 0");
  const cplx r = bg.sigma * bg.k0 * bg.k0 / z;
  SpectralPoint sp;
  sp.z = z;
  sp.k = 0.5 * (z + r);
  sp.lambda = 0.5 * (z - r);
  sp.gamma = 1.0 - r / z;
  sp.region = classify_region(z, bg);
  return sp;
}

cplx theta(double x, double t, const SpectralPoint& sp, const Background& bg) {
  const cplx k = sp.k;
  const cplx omega = bg.beta * (4.0 * k * k + 2.0 * bg.sigma * bg.k0 * bg.k0) + 2.0 * bg.alpha * k;
  return sp.lambda * (-x - omega * t);
}

cplx theta(double x, double t, cplx z, const Background& bg) { return theta(x, t, uniformize(z, bg), bg); }

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGLNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

}  // namespace

std::vector<ContourNode> contour_samples(const Background& bg, int n_real, int n_circle, double L) {
  if (!(L > bg.k0)) throw Error(ErrorCode::BadContour, "L must exceed k0");
  if (n_real < 2) throw Error(ErrorCode::BadContour, "need at least 2 real-axis nodes");
  if (bg.sigma < 0 && n_circle < 2) throw Error(ErrorCode::BadContour, "need at least 2 circle nodes");

  std::vector<ContourNode> nodes;
  const double tol = region_tolerance(bg);

  const int panels = std::max(1, (n_real + 7) / 8);
  const double width = 2.0 * L / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = -L + (p + 0.5) * width;
    for (std::size_t q = 0; q < kGLNodes.size(); ++q) {
      double x = mid + 0.5 * width * kGLNodes[q];
      if (bg.sigma > 0 && std::abs(std::abs(x) - bg.k0) <= tol) x += 2.0 * tol;
      nodes.push_back({cplx(x, 0.0), cplx(0.5 * width * kGLWeights[q], 0.0)});
    }
  }

  if (bg.sigma < 0) {
    const double dphi = 2.0 * std::numbers::pi / n_circle;
    for (int j = 0; j < n_circle; ++j) {
      double phi = j * dphi;
      cplx z = std::polar(bg.k0, phi);
      if (std::abs(z - cplx(0.0, bg.k0)) <= tol || std::abs(z + cplx(0.0, bg.k0)) <= tol) {
        phi += 2.0 * tol / bg.k0;
        z = std::polar(bg.k0, phi);
      }
      nodes.push_back({z, I_unit * z * dphi});
    }
  }
  return nodes;
}

}  // namespace hirota
