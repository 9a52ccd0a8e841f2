#include "hirota/matcore.hpp"

namespace hirota {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::BadContour: return "BadContour";
    case ErrorCode::InvalidBackground: return "InvalidBackground";
    case ErrorCode::MissingDerivatives: return "MissingDerivatives";
    case ErrorCode::BranchPointSingular: return "BranchPointSingular";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::SingularWronskian: return "SingularWronskian";
    case ErrorCode::MissingPartner: return "MissingPartner";
    case ErrorCode::DefocusingUnsupported: return "DefocusingUnsupported";
    case ErrorCode::EigenvalueTooCloseToSigma: return "EigenvalueTooCloseToSigma";
    case ErrorCode::InvalidEigenpair: return "InvalidEigenpair";
    case ErrorCode::DuplicateEigenvalue: return "DuplicateEigenvalue";
    case ErrorCode::PoleCollision: return "PoleCollision";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::BadSearchBox: return "BadSearchBox";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

bool is_finite(const CMat2& m) {
  return std::all_of(m.a.begin(), m.a.end(),
                     [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

CMat2 CMat4::block(int bi, int bj) const {
  const auto& m = *this;
  const int r = 2 * bi, c = 2 * bj;
  return CMat2{{m(r, c), m(r, c + 1), m(r + 1, c), m(r + 1, c + 1)}};
}

void CMat4::set_block(int bi, int bj, const CMat2& b) {
  auto& m = *this;
  const int r = 2 * bi, c = 2 * bj;
  m(r, c) = b(0, 0);
  m(r, c + 1) = b(0, 1);
  m(r + 1, c) = b(1, 0);
  m(r + 1, c + 1) = b(1, 1);
}

CMat4 CMat4::identity() {
  CMat4 m;
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

CMat4 CMat4::from_blocks(const CMat2& ul, const CMat2& ur, const CMat2& dl, const CMat2& dr) {
  CMat4 m;
  m.set_block(0, 0, ul);
  m.set_block(0, 1, ur);
  m.set_block(1, 0, dl);
  m.set_block(1, 1, dr);
  return m;
}

CMat4& CMat4::operator+=(const CMat4& o) {
  for (std::size_t k = 0; k < 16; ++k) a[k] += o.a[k];
  return *this;
}

CMat4& CMat4::operator-=(const CMat4& o) {
  for (std::size_t k = 0; k < 16; ++k) a[k] -= o.a[k];
  return *this;
}

CMat4& CMat4::operator*=(cplx s) {
  for (auto& v : a) v *= s;
  return *this;
}

CMat4 operator+(CMat4 l, const CMat4& r) { return l += r; }
CMat4 operator-(CMat4 l, const CMat4& r) { return l -= r; }
CMat4 operator*(CMat4 m, cplx s) { return m *= s; }
CMat4 operator*(cplx s, CMat4 m) { return m *= s; }

CMat4 operator*(const CMat4& l, const CMat4& r) {
  CMat4 out;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const cplx lik = l(i, k);
      for (int j = 0; j < 4; ++j) out(i, j) += lik * r(k, j);
    }
  return out;
}

CMat4 transpose(const CMat4& m) {
  CMat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m(j, i);
  return out;
}

CMat4 dagger(const CMat4& m) {
  CMat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = std::conj(m(j, i));
  return out;
}

cplx trace(const CMat4& m) { return m(0, 0) + m(1, 1) + m(2, 2) + m(3, 3); }

double norm_max(const CMat4& m) {
  double best = 0.0;
  for (const auto& v : m.a) best = std::max(best, std::abs(v));
  return best;
}

bool is_finite(const CMat4& m) {
  return std::all_of(m.a.begin(), m.a.end(),
                     [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

namespace {

// 3x3 minor of m with row `skip_r` and column `skip_c` removed.
cplx minor3(const CMat4& m, int skip_r, int skip_c) {
  int rows[3], cols[3];
  for (int i = 0, r = 0; i < 4; ++i)
    if (i != skip_r) rows[r++] = i;
  for (int j = 0, c = 0; j < 4; ++j)
    if (j != skip_c) cols[c++] = j;
  auto e = [&](int i, int j) { return m(rows[i], cols[j]); };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
         e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

double singular_threshold(const CMat4& m) {
  const double n = norm_max(m);
  return 1e-300 * std::max(1.0, n * n);
}

}  // namespace

cplx det4_cofactor(const CMat4& m) {
  cplx d = 0.0;
  for (int j = 0; j < 4; ++j) {
    const cplx term = m(0, j) * minor3(m, 0, j);
    d += (j % 2 == 0) ? term : -term;
  }
  return d;
}

cplx det4(const CMat4& m) {
  const CMat2 A = m.block(0, 0), B = m.block(0, 1), C = m.block(1, 0), D = m.block(1, 1);
  const CMat2 CD = C * D, DC = D * C;
  if (CD.a == DC.a) return det2(A * D - B * C);
  return det4_cofactor(m);
}

CMat4 inv4(const CMat4& m) {
  const cplx d = det4(m);
  if (!(std::abs(d) > singular_threshold(m)))
    throw Error(ErrorCode::SingularMatrix, "4x4 determinant below threshold");
  CMat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const cplx cof = minor3(m, j, i);
      out(i, j) = ((i + j) % 2 == 0 ? cof : -cof) / d;
    }
  return out;
}

PauliSet PauliSet::make(int sigma) {
  const CMat2 I = CMat2::identity(), Z = CMat2::zero();
  PauliSet p;
  p.sigma3 = CMat4::from_blocks(I, Z, Z, -I);
  p.sigma2 = CMat4::from_blocks(Z, I * I_unit, -(I * I_unit), Z);
  p.J = CMat4::from_blocks(I, Z, Z, I * cplx(-sigma));
  return p;
}

}  // namespace hirota
