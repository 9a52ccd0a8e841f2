#pragma once

// Small dense complex matrices: 2x2 blocks and the 4x4 matrices built from them.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "hirota/error.hpp"

namespace hirota {

using cplx = std::complex<double>;
inline constexpr cplx I_unit{0.0, 1.0};

template <class T>
struct Mat2 {
  std::array<T, 4> a{};  // row-major: a11, a12, a21, a22

  constexpr T& operator()(int i, int j) { return a[static_cast<std::size_t>(2 * i + j)]; }
  constexpr const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(2 * i + j)]; }

  static Mat2 identity() { return Mat2{{T(1), T(0), T(0), T(1)}}; }
  static Mat2 zero() { return Mat2{{T(0), T(0), T(0), T(0)}}; }
  static Mat2 diag(const T& d) { return Mat2{{d, T(0), T(0), d}}; }

  Mat2& operator+=(const Mat2& o) {
    for (std::size_t k = 0; k < 4; ++k) a[k] += o.a[k];
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    for (std::size_t k = 0; k < 4; ++k) a[k] -= o.a[k];
    return *this;
  }
  Mat2& operator*=(const T& s) {
    for (auto& v : a) v *= s;
    return *this;
  }
  Mat2& operator/=(const T& s) {
    for (auto& v : a) v /= s;
    return *this;
  }
};

using CMat2 = Mat2<cplx>;

template <class T>
Mat2<T> operator+(Mat2<T> l, const Mat2<T>& r) { return l += r; }
template <class T>
Mat2<T> operator-(Mat2<T> l, const Mat2<T>& r) { return l -= r; }
template <class T>
Mat2<T> operator-(Mat2<T> m) {
  for (auto& v : m.a) v = -v;
  return m;
}
template <class T>
Mat2<T> operator*(Mat2<T> m, const T& s) { return m *= s; }
template <class T>
Mat2<T> operator*(const T& s, Mat2<T> m) { return m *= s; }
template <class T>
Mat2<T> operator/(Mat2<T> m, const T& s) { return m /= s; }

template <class T>
Mat2<T> operator*(const Mat2<T>& l, const Mat2<T>& r) {
  return Mat2<T>{{l.a[0] * r.a[0] + l.a[1] * r.a[2], l.a[0] * r.a[1] + l.a[1] * r.a[3],
                  l.a[2] * r.a[0] + l.a[3] * r.a[2], l.a[2] * r.a[1] + l.a[3] * r.a[3]}};
}

template <class T>
Mat2<T> transpose(const Mat2<T>& m) { return Mat2<T>{{m.a[0], m.a[2], m.a[1], m.a[3]}}; }

template <class T>
Mat2<T> dagger(const Mat2<T>& m) {
  using std::conj;
  return Mat2<T>{{conj(m.a[0]), conj(m.a[2]), conj(m.a[1]), conj(m.a[3])}};
}

template <class T>
Mat2<T> conjugate(const Mat2<T>& m) {
  using std::conj;
  return Mat2<T>{{conj(m.a[0]), conj(m.a[1]), conj(m.a[2]), conj(m.a[3])}};
}

template <class T>
T trace(const Mat2<T>& m) { return m.a[0] + m.a[3]; }

template <class T>
T det2(const Mat2<T>& m) { return m.a[0] * m.a[3] - m.a[1] * m.a[2]; }

template <class T>
auto norm_max(const Mat2<T>& m) {
  using std::abs;
  auto best = abs(m.a[0]);
  for (std::size_t k = 1; k < 4; ++k) {
    auto v = abs(m.a[k]);
    if (v > best) best = v;
  }
  return best;
}

// |det| must exceed 1e-300 * max(1, |M|_max^2).
template <class T>
Mat2<T> inv2(const Mat2<T>& m) {
  using std::abs;
  const T d = det2(m);
  auto scale = norm_max(m);
  scale *= scale;
  if (scale < 1) scale = 1;
  if (!(abs(d) > scale * 1e-300)) throw Error(ErrorCode::SingularMatrix, "2x2 determinant below threshold");
  return Mat2<T>{{m.a[3] / d, -m.a[1] / d, -m.a[2] / d, m.a[0] / d}};
}

bool is_finite(const CMat2& m);

struct CMat4 {
  std::array<cplx, 16> a{};  // row-major

  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(4 * i + j)]; }
  const cplx& operator()(int i, int j) const { return a[static_cast<std::size_t>(4 * i + j)]; }

  // bi, bj in {0, 1}: (0,0) up-left, (0,1) up-right, (1,0) down-left, (1,1) down-right.
  CMat2 block(int bi, int bj) const;
  void set_block(int bi, int bj, const CMat2& b);

  static CMat4 identity();
  static CMat4 zero() { return CMat4{}; }
  static CMat4 from_blocks(const CMat2& ul, const CMat2& ur, const CMat2& dl, const CMat2& dr);

  CMat4& operator+=(const CMat4& o);
  CMat4& operator-=(const CMat4& o);
  CMat4& operator*=(cplx s);
};

CMat4 operator+(CMat4 l, const CMat4& r);
CMat4 operator-(CMat4 l, const CMat4& r);
CMat4 operator*(CMat4 m, cplx s);
CMat4 operator*(cplx s, CMat4 m);
CMat4 operator*(const CMat4& l, const CMat4& r);

CMat4 transpose(const CMat4& m);
CMat4 dagger(const CMat4& m);
cplx trace(const CMat4& m);
double norm_max(const CMat4& m);
bool is_finite(const CMat4& m);

cplx det4(const CMat4& m);
// Laplace expansion along the first row; used by det4 when the block formula does not apply.
cplx det4_cofactor(const CMat4& m);
CMat4 inv4(const CMat4& m);

// sigma3 = diag(I, -I), sigma2 = [[0, iI], [-iI, 0]], J = diag(I, -sigma I).
struct PauliSet {
  CMat4 sigma3;
  CMat4 sigma2;
  CMat4 J;

  static PauliSet make(int sigma);
};

}  // namespace hirota
