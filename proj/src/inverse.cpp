#include "hirota/inverse.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <atomic>
#include <thread>

#include "hirota/version.hpp"

namespace hirota {

namespace {

double symmetric_tolerance(const CMat2& C) { return 1e-14 * std::max(1.0, norm_max(C)); }

void validate_seed(const DiscreteEigenpair& s, const Background& bg, QuartetPolicy policy) {
  if (!std::isfinite(s.z.real()) || !std::isfinite(s.z.imag()) || !is_finite(s.C))
    throw Error(ErrorCode::InvalidEigenpair, "non-finite seed");
  if (norm_max(s.C - transpose(s.C)) > symmetric_tolerance(s.C))
    throw Error(ErrorCode::InvalidEigenpair, "norming constant must be symmetric");
  if (s.rank == NormingRank::Rank1 && std::abs(det2(s.C)) > 1e-12)
    throw Error(ErrorCode::InvalidEigenpair, "rank-1 norming constant has nonzero determinant");
  if (s.z == 0.0) throw Error(ErrorCode::ZeroArgument, "seed eigenvalue at the origin");

  const Region region = classify_region(s.z, bg);
  if (region == Region::BranchPoint)
    throw Error(ErrorCode::EigenvalueTooCloseToSigma, "seed eigenvalue at a branch point");
  if (policy == QuartetPolicy::OffSpectrum) {
    if (std::abs(s.z.imag()) <= region_tolerance(bg))
      throw Error(ErrorCode::EigenvalueTooCloseToSigma, "seed eigenvalue on the real axis");
    return;
  }
  if (region == Region::Sigma) throw Error(ErrorCode::EigenvalueTooCloseToSigma, "seed eigenvalue on the continuum");
  if (region != Region::DPlus || s.z.imag() <= 0.0 || std::abs(s.z) <= bg.k0)
    throw Error(ErrorCode::InvalidEigenpair, "seed eigenvalue must satisfy Im z > 0 and |z| > k0");
}

void check_poles(const std::vector<QuartetEntry>& e) {
  for (std::size_t n = 0; n < e.size(); ++n)
    for (std::size_t j = 0; j < e.size(); ++j)
      if (std::abs(std::conj(e[n].zeta) - e[j].zeta) < 1e-10)
        throw Error(ErrorCode::PoleCollision, "conj(zeta_n) coincides with zeta_j");
}

// C = U V with U 2 x r and V r x 2, r = numerical rank.
struct RankFactor {
  int rank = 0;
  std::array<cplx, 4> U{};  // column-major 2 x r
  std::array<cplx, 4> V{};  // row-major r x 2
};

RankFactor factor(const CMat2& C) {
  RankFactor f;
  const double scale = norm_max(C);
  if (scale == 0.0) return f;
  double fro2 = 0.0;
  for (const auto& v : C.a) fro2 += std::norm(v);
  if (std::abs(det2(C)) > 1e-13 * fro2) {
    f.rank = 2;
    f.U = {C(0, 0), C(1, 0), C(0, 1), C(1, 1)};
    f.V = {1.0, 0.0, 0.0, 1.0};
    return f;
  }
  int pi = 0, pj = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(C(i, j)) > std::abs(C(pi, pj))) {
        pi = i;
        pj = j;
      }
  f.rank = 1;
  f.U = {C(0, pj), C(1, pj), 0.0, 0.0};
  f.V = {C(pi, 0) / C(pi, pj), C(pi, 1) / C(pi, pj), 0.0, 0.0};
  return f;
}

double condition(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

bool all_finite(const Eigen::MatrixXcd& M) { return M.allFinite(); }

// W with W M = B, solved on the row and column equilibrated M
Eigen::MatrixXcd solve_right(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& B, double max_condition = 1e12) {
  const Eigen::VectorXd dr = M.cwiseAbs().rowwise().maxCoeff();
  const Eigen::MatrixXcd Mr = dr.cwiseInverse().asDiagonal() * M;
  const Eigen::VectorXd dc = Mr.cwiseAbs().colwise().maxCoeff().transpose();
  if ((dr.array() == 0.0).any() || (dc.array() == 0.0).any())
    throw Error(ErrorCode::SingularSystem, "zero row or column");
  const Eigen::MatrixXcd Ms = Mr * dc.cwiseInverse().asDiagonal();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Ms.transpose());
  if (!(lu.rcond() * max_condition >= 1.0)) throw Error(ErrorCode::SingularSystem, "condition number above threshold");
  const Eigen::MatrixXcd Ws = lu.solve((B * dc.cwiseInverse().asDiagonal()).transpose()).transpose();
  return Ws * dr.cwiseInverse().asDiagonal();
}

using quad_cplx = boost::multiprecision::complex128;
using ext_cplx = boost::multiprecision::cpp_complex_100;

template <class T>
T lift(cplx v) {
  return T(v.real(), v.imag());
}

template <class T>
Mat2<T> lift(const CMat2& m) {
  return Mat2<T>{{lift<T>(m.a[0]), lift<T>(m.a[1]), lift<T>(m.a[2]), lift<T>(m.a[3])}};
}

// e^a, in T when it would overflow a double; a rounded exponential only moves that soliton by O(eps)
template <class T>
T exp_lift(cplx a) {
  using std::exp;
  if (std::abs(a.real()) < 700.0) return lift<T>(std::exp(a));
  return exp(lift<T>(a));
}

// the rank-reduced system W (I + A1 A2) = B P in extended arithmetic
template <class T>
CMat2 reconstruct_in(double x, double t, const SolitonSpec& spec, const std::vector<RankFactor>& f) {
  using std::abs;
  using std::conj;
  auto mag = [](const T& v) { return abs(v.real()) + abs(v.imag()); };
  const auto& e = spec.entries;
  const std::size_t n = e.size();
  std::vector<std::size_t> off(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) off[j + 1] = off[j] + static_cast<std::size_t>(f[j].rank);
  const std::size_t R = off[n];
  const T i(0, 1);

  std::vector<T> z(n), zc(n), E(n), Ebar(n);
  for (std::size_t j = 0; j < n; ++j) {
    z[j] = lift<T>(e[j].zeta);
    zc[j] = conj(z[j]);
    E[j] = exp_lift<T>(-2.0 * I_unit * theta(x, t, e[j].zeta, spec.bg));
    Ebar[j] = exp_lift<T>(2.0 * I_unit * theta(x, t, std::conj(e[j].zeta), spec.bg));
  }
  // U_j is 2 x r column-major, V_j is r x 2 row-major
  auto U = [&](std::size_t j, int row, int col) { return lift<T>(f[j].U[static_cast<std::size_t>(2 * col + row)]); };
  auto V = [&](std::size_t j, int row, int col) { return lift<T>(f[j].V[static_cast<std::size_t>(2 * row + col)]); };

  std::vector<T> A1(R * R, T(0)), A2(R * R, T(0)), BP(2 * R, T(0));
  const Mat2<T> Qp = lift<T>(spec.bg.Qplus);
  for (std::size_t l = 0; l < n; ++l) {
    const int rl = f[l].rank;
    for (std::size_t j = 0; j < n; ++j) {
      const int rj = f[j].rank;
      const T s1 = E[j] / (z[j] - zc[l]), s2 = Ebar[l] / (zc[l] - z[j]);
      for (int a = 0; a < rl; ++a)
        for (int b = 0; b < rj; ++b) {
          T u(0), v(0);
          for (int k = 0; k < 2; ++k) {
            u += conj(U(l, k, a)) * U(j, k, b);
            v += V(j, b, k) * conj(V(l, a, k));
          }
          A1[(off[l] + a) * R + off[j] + b] = u * s1;
          A2[(off[j] + b) * R + off[l] + a] = v * s2;
        }
    }
    Mat2<T> sum = Mat2<T>::zero();
    for (std::size_t j = 0; j < n; ++j) sum += lift<T>(e[j].C) * (E[j] / ((zc[l] - z[j]) * z[j]));
    const Mat2<T> B = Mat2<T>::identity() - Qp * sum * i;
    for (int r = 0; r < 2; ++r)
      for (int a = 0; a < rl; ++a)
        BP[r * R + off[l] + a] = (B(r, 0) * conj(V(l, a, 0)) + B(r, 1) * conj(V(l, a, 1))) * Ebar[l];
  }

  // G = M^T = (I + A1 A2)^T, solve G W^T = BP^T
  std::vector<T> G(R * R), W(R * 2);
  for (std::size_t p = 0; p < R; ++p)
    for (std::size_t q = 0; q < R; ++q) {
      T acc = p == q ? T(1) : T(0);
      for (std::size_t k = 0; k < R; ++k) acc += A1[q * R + k] * A2[k * R + p];
      G[p * R + q] = acc;
    }
  for (std::size_t p = 0; p < R; ++p)
    for (std::size_t r = 0; r < 2; ++r) W[p * 2 + r] = BP[r * R + p];
  for (std::size_t k = 0; k < R; ++k) {
    std::size_t pv = k;
    for (std::size_t p = k + 1; p < R; ++p)
      if (mag(G[p * R + k]) > mag(G[pv * R + k])) pv = p;
    if (mag(G[pv * R + k]) == 0) throw Error(ErrorCode::SingularSystem, "singular reduced system");
    if (pv != k) {
      for (std::size_t q = 0; q < R; ++q) std::swap(G[k * R + q], G[pv * R + q]);
      std::swap(W[2 * k], W[2 * pv]);
      std::swap(W[2 * k + 1], W[2 * pv + 1]);
    }
    for (std::size_t p = k + 1; p < R; ++p) {
      const T m = G[p * R + k] / G[k * R + k];
      for (std::size_t q = k; q < R; ++q) G[p * R + q] -= m * G[k * R + q];
      W[2 * p] -= m * W[2 * k];
      W[2 * p + 1] -= m * W[2 * k + 1];
    }
  }
  for (std::size_t k = R; k-- > 0;)
    for (std::size_t r = 0; r < 2; ++r) {
      T v = W[2 * k + r];
      for (std::size_t q = k + 1; q < R; ++q) v -= G[k * R + q] * W[2 * q + r];
      W[2 * k + r] = v / G[k * R + k];
    }

  Mat2<T> Q = Qp;
  for (std::size_t j = 0; j < n; ++j)
    for (int a = 0; a < f[j].rank; ++a)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) Q(r, c) -= i * W[2 * (off[j] + static_cast<std::size_t>(a)) + static_cast<std::size_t>(r)] * conj(U(j, c, a));
  CMat2 out;
  for (std::size_t k = 0; k < 4; ++k)
    out.a[k] = cplx(static_cast<double>(Q.a[k].real()), static_cast<double>(Q.a[k].imag()));
  if (!is_finite(out)) throw Error(ErrorCode::SingularSystem, "non-finite reconstruction");
  return out;
}

// quad precision covers a loss of eps_quad |B| up to |B| ~ 1e18
CMat2 reconstruct_extended(double x, double t, const SolitonSpec& spec, const std::vector<RankFactor>& f,
                           double bmax) {
  if (bmax <= 1e18) return reconstruct_in<quad_cplx>(x, t, spec, f);
  return reconstruct_in<ext_cplx>(x, t, spec, f);
}

}  // namespace

cplx quartet_partner(cplx z, const Background& bg) {
  using L = std::complex<long double>;
  const long double k = bg.k0;
  const L w = -(k * k) / std::conj(L(z.real(), z.imag()));
  return {static_cast<double>(w.real()), static_cast<double>(w.imag())};
}

SolitonSpec expand_quartets(std::span<const DiscreteEigenpair> seeds, const Background& bg, QuartetPolicy policy) {
  if (bg.sigma != -1) throw Error(ErrorCode::DefocusingUnsupported, "soliton construction needs sigma = -1");
  bg.validate();
  for (const auto& s : seeds) validate_seed(s, bg, policy);

  SolitonSpec spec;
  spec.bg = bg;
  const CMat2 Qd = dagger(bg.Qplus);
  for (const auto& s : seeds) spec.entries.push_back({s.z, s.C, -dagger(s.C)});
  for (const auto& s : seeds) {
    const cplx zc = std::conj(s.z);
    const CMat2 Cbar = -dagger(s.C);
    const CMat2 C = Qd * Cbar * Qd / (zc * zc);
    spec.entries.push_back({quartet_partner(s.z, bg), C, -dagger(C)});
  }
  for (std::size_t i = 0; i < spec.entries.size(); ++i)
    for (std::size_t j = i + 1; j < spec.entries.size(); ++j)
      if (std::abs(spec.entries[i].zeta - spec.entries[j].zeta) < 1e-8)
        throw Error(ErrorCode::DuplicateEigenvalue, "eigenvalues closer than 1e-8");
  check_poles(spec.entries);
  return spec;
}

LinearSystem assemble_system(double x, double t, const SolitonSpec& spec) {
  const auto& e = spec.entries;
  const std::size_t n = e.size();
  check_poles(e);
  const auto& bg = spec.bg;

  std::vector<cplx> E(n);
  for (std::size_t j = 0; j < n; ++j) E[j] = std::exp(-2.0 * I_unit * theta(x, t, e[j].zeta, bg));
  // c[row][j] = c_j(conj(zeta_row))
  std::vector<CMat2> c(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < n; ++j) c[r * n + j] = e[j].C * (E[j] / (std::conj(e[r].zeta) - e[j].zeta));

  LinearSystem sys;
  sys.n = n;
  sys.A.assign(n * n, CMat2::zero());
  sys.B.assign(n, CMat2::identity());
  for (std::size_t row = 0; row < n; ++row) {
    CMat2 sum = CMat2::zero();
    for (std::size_t j = 0; j < n; ++j) sum += c[row * n + j] / e[j].zeta;
    sys.B[row] = CMat2::identity() - I_unit * (bg.Qplus * sum);
    for (std::size_t l = 0; l < n; ++l) {
      CMat2 gamma = CMat2::zero();
      for (std::size_t j = 0; j < n; ++j) gamma += dagger(c[j * n + l]) * c[row * n + j];
      sys.A[row * n + l] = (row == l ? CMat2::identity() : CMat2::zero()) + gamma;
    }
  }
  return sys;
}

namespace {

// M(2l + i, 2row + k) = A(row, l)(i, k), so that [X_1 ... X_n] M = [B_1 ... B_n].
Eigen::MatrixXcd flatten(const LinearSystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.n);
  Eigen::MatrixXcd M(2 * n, 2 * n);
  for (Eigen::Index row = 0; row < n; ++row)
    for (Eigen::Index l = 0; l < n; ++l) {
      const CMat2& blk = sys.a(static_cast<std::size_t>(row), static_cast<std::size_t>(l));
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) M(2 * l + i, 2 * row + k) = blk(i, k);
    }
  return M;
}

}  // namespace

std::vector<CMat2> LinearSystem::solve() const {
  const Eigen::MatrixXcd M = flatten(*this);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd Brow(2, 2 * nn);
  for (Eigen::Index k = 0; k < nn; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) Brow(i, 2 * k + j) = B[static_cast<std::size_t>(k)](i, j);
  if (!all_finite(M) || !all_finite(Brow)) throw Error(ErrorCode::SingularSystem, "non-finite system entries");
  const Eigen::MatrixXcd Xr = solve_right(M, Brow);
  std::vector<CMat2> X(n);
  for (Eigen::Index k = 0; k < nn; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) X[static_cast<std::size_t>(k)](i, j) = Xr(i, 2 * k + j);
  return X;
}

double LinearSystem::residual(std::span<const CMat2> X) const {
  double worst = 0.0;
  for (std::size_t row = 0; row < n; ++row) {
    CMat2 lhs = CMat2::zero();
    for (std::size_t l = 0; l < n; ++l) lhs += X[l] * a(row, l);
    worst = std::max(worst, norm_max(lhs - B[row]));
  }
  return worst;
}

double LinearSystem::condition_number() const { return condition(flatten(*this)); }

CMat2 reconstruct_Q_flat(double x, double t, const SolitonSpec& spec) {
  const LinearSystem sys = assemble_system(x, t, spec);
  const std::vector<CMat2> X = sys.solve();
  CMat2 Q = spec.bg.Qplus;
  for (std::size_t k = 0; k < sys.n; ++k) {
    const auto& e = spec.entries[k];
    const cplx w = std::exp(2.0 * I_unit * theta(x, t, std::conj(e.zeta), spec.bg));
    Q += (X[k] * e.Cbar) * (I_unit * w);
  }
  return Q;
}

CMat2 reconstruct_Q(double x, double t, const SolitonSpec& spec) {
  const auto& e = spec.entries;
  const auto& bg = spec.bg;
  const std::size_t n = e.size();
  check_poles(e);

  std::vector<RankFactor> f(n);
  std::vector<Eigen::Index> off(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    f[j] = factor(e[j].C);
    off[j + 1] = off[j] + f[j].rank;
  }
  const Eigen::Index R = off[n];
  if (R == 0) return bg.Qplus;

  std::vector<cplx> E(n), Ebar(n);
  for (std::size_t j = 0; j < n; ++j) {
    E[j] = std::exp(-2.0 * I_unit * theta(x, t, e[j].zeta, bg));
    Ebar[j] = std::exp(2.0 * I_unit * theta(x, t, std::conj(e[j].zeta), bg));
  }

  auto Umat = [&](std::size_t j) {
    Eigen::MatrixXcd U(2, f[j].rank);
    for (int c = 0; c < f[j].rank; ++c) {
      U(0, c) = f[j].U[static_cast<std::size_t>(2 * c)];
      U(1, c) = f[j].U[static_cast<std::size_t>(2 * c + 1)];
    }
    return U;
  };
  auto Vmat = [&](std::size_t j) {
    Eigen::MatrixXcd V(f[j].rank, 2);
    for (int r = 0; r < f[j].rank; ++r) {
      V(r, 0) = f[j].V[static_cast<std::size_t>(2 * r)];
      V(r, 1) = f[j].V[static_cast<std::size_t>(2 * r + 1)];
    }
    return V;
  };
  std::vector<Eigen::MatrixXcd> U(n), V(n);
  for (std::size_t j = 0; j < n; ++j) {
    U[j] = Umat(j);
    V[j] = Vmat(j);
  }

  Eigen::MatrixXcd A1 = Eigen::MatrixXcd::Zero(R, R), A2 = Eigen::MatrixXcd::Zero(R, R);
  Eigen::MatrixXcd BP = Eigen::MatrixXcd::Zero(2, R);
  double bmax = 0.0;
  Eigen::Matrix2cd Qp;
  Qp << bg.Qplus(0, 0), bg.Qplus(0, 1), bg.Qplus(1, 0), bg.Qplus(1, 1);
  for (std::size_t l = 0; l < n; ++l) {
    const Eigen::Index rl = f[l].rank;
    if (rl == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Index rj = f[j].rank;
      if (rj == 0) continue;
      A1.block(off[l], off[j], rl, rj) = U[l].adjoint() * U[j] * (E[j] / (e[j].zeta - std::conj(e[l].zeta)));
      A2.block(off[j], off[l], rj, rl) = V[j] * V[l].adjoint() * (Ebar[l] / (std::conj(e[l].zeta) - e[j].zeta));
    }
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::Matrix2cd Cj;
      Cj << e[j].C(0, 0), e[j].C(0, 1), e[j].C(1, 0), e[j].C(1, 1);
      sum += Cj * (E[j] / ((std::conj(e[l].zeta) - e[j].zeta) * e[j].zeta));
    }
    const Eigen::Matrix2cd Bl = Eigen::Matrix2cd::Identity() - I_unit * Qp * sum;
    bmax = std::max(bmax, Bl.cwiseAbs().maxCoeff());
    BP.block(0, off[l], 2, rl) = Bl * V[l].adjoint() * Ebar[l];
  }
  // several quartets lose about eps |B| in double; one quartet does not
  if (n > 2 && bmax > 1e3) return reconstruct_extended(x, t, spec, f, bmax);
  // W (I + A1 A2) = BP, bordered with Y = W A1 so the exponentials are never multiplied together
  Eigen::MatrixXcd K(2 * R, 2 * R);
  K << Eigen::MatrixXcd::Identity(R, R), -A1, A2, Eigen::MatrixXcd::Identity(R, R);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2, 2 * R);
  rhs.leftCols(R) = BP;
  if (!all_finite(K) || !all_finite(BP)) return reconstruct_extended(x, t, spec, f, HUGE_VAL);
  Eigen::MatrixXcd W;
  try {
    W = solve_right(K, rhs, 1e6).leftCols(R);
  } catch (const Error&) {
    return reconstruct_extended(x, t, spec, f, HUGE_VAL);
  }

  Eigen::Matrix2cd corr = Eigen::Matrix2cd::Zero();
  for (std::size_t j = 0; j < n; ++j)
    if (f[j].rank > 0) corr += W.block(0, off[j], 2, f[j].rank) * U[j].adjoint();
  CMat2 Q = bg.Qplus;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) Q(i, k) -= I_unit * corr(i, k);
  if (!is_finite(Q)) throw Error(ErrorCode::SingularSystem, "non-finite reconstruction");
  return Q;
}

std::vector<double> GridAxes::x_values() const {
  std::vector<double> v(nx);
  for (std::size_t i = 0; i < nx; ++i)
    v[i] = nx == 1 ? xmin : xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(nx - 1);
  return v;
}

std::vector<double> GridAxes::t_values() const {
  std::vector<double> v(nt);
  for (std::size_t i = 0; i < nt; ++i)
    v[i] = nt == 1 ? tmin : tmin + (tmax - tmin) * static_cast<double>(i) / static_cast<double>(nt - 1);
  return v;
}

std::size_t FieldGrid::masked_count() const {
  std::size_t c = 0;
  for (auto m : mask) c += m != 0;
  return c;
}

void FieldGrid::validate() const {
  auto increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (!increasing(x) || !increasing(t)) throw Error(ErrorCode::BadConfig, "grid axes must be strictly increasing");
  if (values.size() != x.size() * t.size()) throw Error(ErrorCode::BadConfig, "value count must equal nx * nt");
  if (mask.size() != values.size()) throw Error(ErrorCode::BadConfig, "mask size mismatch");
}

FieldGrid eval_field(const GridAxes& axes, const SolitonSpec& spec) {
  if (axes.nx < 2 || axes.nt < 2) throw Error(ErrorCode::BadConfig, "grid needs at least 2 points per axis");
  if (!(axes.xmax > axes.xmin) || !(axes.tmax > axes.tmin))
    throw Error(ErrorCode::BadConfig, "grid ranges must be increasing");
  FieldGrid g;
  g.x = axes.x_values();
  g.t = axes.t_values();
  g.version = kVersion;
  const std::size_t total = g.x.size() * g.t.size();
  g.values.assign(total, FieldValue{});
  g.mask.assign(total, 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t row; (row = next.fetch_add(1)) < g.t.size();) {
      for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
        const std::size_t k = row * g.x.size() + ix;
        try {
          g.values[k] = FieldValue::from(reconstruct_Q(g.x[ix], g.t[row], spec));
        } catch (const Error&) {
          g.values[k] = FieldValue{cplx(NAN, NAN), cplx(NAN, NAN), cplx(NAN, NAN)};
          g.mask[k] = 1;
        }
      }
    }
  };
  const unsigned threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return g;
}

Field make_field(const SolitonSpec& spec) {
  return [spec](double x, double t) { return reconstruct_Q(x, t, spec); };
}

}  // namespace hirota
