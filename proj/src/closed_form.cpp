#include <boost/multiprecision/cpp_complex.hpp>
#include <optional>

#include "hirota/inverse.hpp"

namespace hirota {

namespace {

using ext_cplx = boost::multiprecision::cpp_complex_100;

template <class T>
T lift(cplx v) {
  return T(v.real(), v.imag());
}

template <class T>
Mat2<T> lift(const CMat2& m) {
  return Mat2<T>{{lift<T>(m.a[0]), lift<T>(m.a[1]), lift<T>(m.a[2]), lift<T>(m.a[3])}};
}

template <class T>
cplx lower(const T& v) {
  return cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

template <class T>
struct Evaluator {
  T sigma, k0sq, alpha, beta, x, t;

  T theta(const T& z) const {
    const T r = sigma * k0sq / z;
    const T k = (z + r) / T(2);
    const T lam = (z - r) / T(2);
    const T omega = beta * (T(4) * k * k + T(2) * sigma * k0sq) + T(2) * alpha * k;
    return lam * (-x - omega * t);
  }
};

// false when D1 is singular; the field is smooth there but this factorization is 0/0
template <class T>
bool closed_form(const T& x, const T& t, const DiscreteEigenpair& seed, const Background& bg, double singular,
                 Mat2<T>& Q) {
  using std::abs;
  using std::conj;
  using std::exp;
  const Evaluator<T> ev{T(bg.sigma), T(bg.k0 * bg.k0), T(bg.alpha), T(bg.beta), x, t};
  const T i(0, 1);
  const T z1 = lift<T>(seed.z);
  const T zc = conj(z1);
  const T k0sq = ev.k0sq;
  const Mat2<T> I = Mat2<T>::identity();
  const Mat2<T> Qp = lift<T>(bg.Qplus);
  const Mat2<T> Qpd = dagger(Qp);
  const Mat2<T> C1 = lift<T>(seed.C);
  const Mat2<T> C1d = dagger(C1);

  const T e1 = exp(-T(2) * i * ev.theta(z1));   // e^{-2i theta(z1)}
  const T e1c = exp(T(2) * i * ev.theta(zc));   // e^{2i theta(conj z1)}

  const Mat2<T> D1 = I + C1d * Qpd * (i * e1c / (zc * zc + k0sq));
  const Mat2<T> D2 = dagger(D1);
  const Mat2<T> c1 = C1 * (e1 / (zc - z1));
  const Mat2<T> c2 = Qpd * C1d * Qpd * (z1 * e1c / (zc * k0sq * (zc - z1)));

  if (abs(det2(D1)) <= singular * (1 + abs(D1.a[0] * D1.a[3]) + abs(D1.a[1] * D1.a[2]))) return false;
  const Mat2<T> D1i = inv2(D1), D2i = inv2(D2);
  const T mix = zc / (z1 * k0sq);
  const Mat2<T> X1 = (I - D2i * Qp * c1 * (i / z1)) * inv2(D1 - Qp * c2 * D2i * Qp * c1 * mix);
  const Mat2<T> X2 = (I + D1i * Qp * c2 * (i * zc / k0sq)) * inv2(D2 - Qp * c1 * D1i * Qp * c2 * mix);

  Q = Qp - X1 * C1d * (i * e1c) + X2 * Qp * C1 * Qp * (i * e1 / (z1 * z1));
  return true;
}

template <class T>
CMat2 lower(const Mat2<T>& Q) {
  CMat2 out;
  for (std::size_t k = 0; k < 4; ++k) out.a[k] = lower(Q.a[k]);
  if (!is_finite(out)) throw Error(ErrorCode::SingularSystem, "closed form overflowed");
  return out;
}

std::optional<CMat2> closed_form_double(double x, double t, const DiscreteEigenpair& seed, const Background& bg) {
  Mat2<cplx> Q;
  if (closed_form<cplx>(x, t, seed, bg, 1e-12, Q)) return lower(Q);
  return std::nullopt;
}

// at a singular point of D1 take the symmetric limit in x; the O(delta^2) error is far below double precision
CMat2 closed_form_extended(double x, double t, const DiscreteEigenpair& seed, const Background& bg) {
  using R = ext_cplx::value_type;
  Mat2<ext_cplx> Q;
  if (closed_form<ext_cplx>(ext_cplx(x), ext_cplx(t), seed, bg, 1e-60, Q)) return lower(Q);
  const R delta("1e-25");
  Mat2<ext_cplx> L, U;
  if (!closed_form<ext_cplx>(ext_cplx(R(x) - delta), ext_cplx(t), seed, bg, 1e-60, L) ||
      !closed_form<ext_cplx>(ext_cplx(R(x) + delta), ext_cplx(t), seed, bg, 1e-60, U))
    throw Error(ErrorCode::SingularSystem, "closed form singular along x");
  return lower((L + U) * ext_cplx(R("0.5")));
}

}  // namespace

CMat2 one_soliton_closed_form(double x, double t, const DiscreteEigenpair& seed, const Background& bg,
                              Precision precision, QuartetPolicy policy) {
  // validates the seed and the background
  (void)expand_quartets(std::span<const DiscreteEigenpair>(&seed, 1), bg, policy);
  try {
    if (precision == Precision::Extended) return closed_form_extended(x, t, seed, bg);
    if (auto Q = closed_form_double(x, t, seed, bg)) return *Q;
    return closed_form_extended(x, t, seed, bg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularMatrix) throw Error(ErrorCode::SingularSystem, e.what());
    throw;
  }
}

}  // namespace hirota
