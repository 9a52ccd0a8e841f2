#include "hirota/lax.hpp"

namespace hirota {

CMat4 embed(const CMat2& Q, int sigma) {
  return CMat4::from_blocks(CMat2::zero(), Q, dagger(Q) * cplx(sigma), CMat2::zero());
}

CMat4 assemble_U(const PotentialSample& p, const SpectralPoint& sp, const Background& bg) {
  const auto pauli = PauliSet::make(bg.sigma);
  return pauli.sigma3 * (-I_unit * sp.k) + embed(p.Q, bg.sigma);
}

CMat4 assemble_V(const PotentialSample& p, const SpectralPoint& sp, const Background& bg) {
  if (!p.Qx || !p.Qxx) throw Error(ErrorCode::MissingDerivatives, "V needs Qx and Qxx");
  const auto pauli = PauliSet::make(bg.sigma);
  const CMat4& s3 = pauli.sigma3;
  const CMat4 U = assemble_U(p, sp, bg);
  const CMat4 Qe = embed(p.Q, bg.sigma);
  const CMat4 Qex = embed(*p.Qx, bg.sigma);
  const CMat4 Qexx = embed(*p.Qxx, bg.sigma);
  const cplx sk2 = bg.sigma * bg.k0 * bg.k0;
  const CMat4 Qe2 = Qe * Qe;

  const CMat4 t_nls = 2.0 * sp.k * U + I_unit * s3 * (Qex - Qe2 + CMat4::identity() * sk2);
  const CMat4 t_cmkdv = 2.0 * sp.k * (t_nls - s3 * (I_unit * sk2)) - (Qe * Qex - Qex * Qe) +
                        2.0 * (Qe2 * Qe) - Qexx;
  return bg.alpha * t_nls + bg.beta * t_cmkdv;
}

EigenvectorMatrix asymptotic_eigenvectors(const SpectralPoint& sp, const CMat2& Qpm, const Background& bg) {
  if (sp.region == Region::BranchPoint || std::abs(sp.gamma) < region_tolerance(bg))
    throw Error(ErrorCode::BranchPointSingular, "gamma vanishes at a branch point");
  const auto pauli = PauliSet::make(bg.sigma);
  const CMat4 s3Q = pauli.sigma3 * embed(Qpm, bg.sigma);
  const cplx c = I_unit / sp.z;
  EigenvectorMatrix out;
  out.X = CMat4::identity() - s3Q * c;
  out.Xinv = (CMat4::identity() + s3Q * c) * (1.0 / sp.gamma);
  return out;
}

namespace {

PotentialSample sample_with_derivatives(const Field& field, double x, double t, double h) {
  const CMat2 qm = field(x - h, t), q0 = field(x, t), qp = field(x + h, t);
  PotentialSample p;
  p.Q = q0;
  p.Qx = (qp - qm) * cplx(0.5 / h);
  p.Qxx = (qp - q0 * cplx(2.0) + qm) * cplx(1.0 / (h * h));
  return p;
}

}  // namespace

double zero_curvature_residual(const Field& field, cplx z, double x, double t, double h, const Background& bg) {
  const SpectralPoint sp = uniformize(z, bg);
  const auto at = [&](double xx, double tt) { return sample_with_derivatives(field, xx, tt, h); };

  const CMat4 U_t = (assemble_U({field(x, t + h), {}, {}}, sp, bg) - assemble_U({field(x, t - h), {}, {}}, sp, bg)) *
                    cplx(0.5 / h);
  const CMat4 V_x = (assemble_V(at(x + h, t), sp, bg) - assemble_V(at(x - h, t), sp, bg)) * cplx(0.5 / h);
  const PotentialSample p = at(x, t);
  const CMat4 U = assemble_U(p, sp, bg);
  const CMat4 V = assemble_V(p, sp, bg);
  return norm_max(U_t - V_x + U * V - V * U);
}

}  // namespace hirota
