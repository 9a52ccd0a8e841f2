#include "hirota/traceform.hpp"

#include <numbers>

namespace hirota {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_focusing(const Background& bg) {
  if (bg.sigma != -1) throw Error(ErrorCode::DefocusingUnsupported, "trace formula is implemented for sigma = -1");
}

// log det(I + rho^dag(conj z) rho(z)) along the samples, unwrapped to a continuous branch.
std::vector<cplx> continuum_logs(const std::vector<RhoSample>& samples) {
  std::vector<cplx> out;
  out.reserve(samples.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    cplx v = std::log(det2(CMat2::identity() + dagger(s.rho_conj) * s.rho));
    if (i > 0) {
      double im = v.imag();
      while (im - prev > std::numbers::pi) im -= kTwoPi;
      while (im - prev < -std::numbers::pi) im += kTwoPi;
      v = cplx(v.real(), im);
    }
    prev = v.imag();
    out.push_back(v);
  }
  return out;
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

double angle_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

void TraceInput::validate() const {
  require_focusing(bg);
  std::vector<cplx> all = simple_zeros;
  all.insert(all.end(), double_zeros.begin(), double_zeros.end());
  for (const cplx z : all)
    if (classify_region(z, bg) != Region::DPlus || z.imag() <= 0.0 || std::abs(z) <= bg.k0)
      throw Error(ErrorCode::InvalidEigenpair, "trace zeros must lie in D+ with Im z > 0 and |z| > k0");
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(all[i] - all[j]) < 1e-8) throw Error(ErrorCode::DuplicateEigenvalue, "zeros closer than 1e-8");
}

cplx trace_det_a(cplx z, const TraceInput& in) {
  in.validate();
  const Background& bg = in.bg;
  if (classify_region(z, bg) != Region::DPlus) throw Error(ErrorCode::OutsideDomain, "z must lie in D+");
  const double k2 = bg.k0 * bg.k0;

  auto factor = [&](cplx zn) {
    const cplx den = (z - std::conj(zn)) * (z + k2 / zn);
    if (std::abs(den) < 1e-14 * std::max(1.0, std::norm(z))) throw Error(ErrorCode::PoleHit, "z at a pole");
    return (z - zn) * (z + k2 / std::conj(zn)) / den;
  };
  cplx value = 1.0;
  for (const cplx zn : in.simple_zeros) value *= factor(zn);
  for (const cplx zn : in.double_zeros) {
    const cplx f = factor(zn);
    value *= f * f;
  }

  if (!in.rho_samples.empty()) {
    const auto logs = continuum_logs(in.rho_samples);
    cplx integral = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      const auto& s = in.rho_samples[i];
      if (std::abs(s.z - z) < 1e-12) throw Error(ErrorCode::PoleHit, "z on a quadrature node");
      integral += logs[i] * s.weight / (s.z - z);
    }
    value *= std::exp(-integral / (kTwoPi * I_unit));
  }
  return value;
}

ThetaCondition theta_condition(const TraceInput& in) {
  in.validate();
  double integral = 0.0;
  if (!in.rho_samples.empty()) {
    const auto logs = continuum_logs(in.rho_samples);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) acc += logs[i] * in.rho_samples[i].weight / in.rho_samples[i].z;
    integral = acc.real() / kTwoPi;
  }
  double simple = 0.0, dbl = 0.0;
  for (const cplx z : in.simple_zeros) simple += std::arg(z);
  for (const cplx z : in.double_zeros) dbl += std::arg(z);

  ThetaCondition tc;
  tc.integral = integral;
  tc.simple_sign = wrap_angle(integral + 4.0 * simple + 8.0 * dbl);
  tc.combined_sign = wrap_angle(integral - 4.0 * simple - 8.0 * dbl);
  return tc;
}

}  // namespace hirota
