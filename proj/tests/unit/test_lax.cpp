#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hirota/inverse.hpp"
#include "hirota/lax.hpp"

using namespace hirota;

namespace {

std::mt19937_64 g(99);

cplx rand_c() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(g), u(g)};
}

CMat2 rand_sym() {
  const cplx o = rand_c();
  return CMat2{{rand_c(), o, o, rand_c()}};
}

cplx rand_off_sigma(const Background& bg) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (;;) {
    const cplx z(u(g), u(g));
    if (std::abs(z) > 0.05 && std::abs(std::abs(z) - bg.k0) > 0.05 && std::abs(z.imag()) > 0.05) return z;
  }
}

double dist(const CMat4& a, const CMat4& b) { return norm_max(a - b); }

const Background fig3 = Background::focusing(1.0, 0.1);

}  // namespace

TEST_CASE("embed examples") {
  CHECK(norm_max(embed(CMat2::zero(), -1)) == 0.0);
  const CMat4 E = embed(CMat2::identity(), -1);
  CHECK(norm_max(E.block(0, 1) - CMat2::identity()) == 0.0);
  CHECK(norm_max(E.block(1, 0) + CMat2::identity()) == 0.0);
  CHECK(norm_max(E.block(0, 0)) == 0.0);
  CHECK(norm_max(E.block(1, 1)) == 0.0);
  for (int sigma : {-1, 1})
    for (int trial = 0; trial < 50; ++trial) {
      const CMat2 Q{{rand_c(), rand_c(), rand_c(), rand_c()}};
      const CMat4 sq = embed(Q, sigma) * embed(Q, sigma);
      const cplx s(sigma);
      const CMat4 oracle = CMat4::from_blocks(s * (Q * dagger(Q)), CMat2::zero(), CMat2::zero(), s * (dagger(Q) * Q));
      CHECK(dist(sq, oracle) <= 1e-15);
    }
}

TEST_CASE("assemble_U examples") {
  const SpectralPoint bp = uniformize(cplx(0, 1), fig3);
  const CMat4 Ub = assemble_U({CMat2::identity(), {}, {}}, bp, fig3);
  CHECK(norm_max(Ub * Ub) <= 1e-15);  // nilpotent: both eigenvalues +-i lambda vanish

  for (int trial = 0; trial < 100; ++trial) {
    const SpectralPoint sp = uniformize(rand_off_sigma(fig3), fig3);
    const CMat4 U = assemble_U({fig3.Qplus, {}, {}}, sp, fig3);
    const auto ev = asymptotic_eigenvectors(sp, fig3.Qplus, fig3);
    const CMat4 s3 = PauliSet::make(-1).sigma3;
    CHECK(dist(U * ev.X, ev.X * s3 * (-I_unit * sp.lambda)) <= 1e-12 * std::max(1.0, std::abs(sp.lambda)));
    const CMat4 Ur = assemble_U({rand_sym(), {}, {}}, sp, fig3);
    CHECK(std::abs(trace(Ur)) <= 1e-15);
  }
}

TEST_CASE("assemble_V examples") {
  const cplx z(0.4, 1.7);
  const SpectralPoint sp = uniformize(z, fig3);
  const PotentialSample bgp{fig3.Qplus, CMat2::zero(), CMat2::zero()};
  Background nls = fig3;
  nls.beta = 0.0;
  const CMat4 U = assemble_U(bgp, sp, nls);
  CHECK(dist(assemble_V(bgp, sp, nls), U * (2.0 * sp.k)) <= 1e-14);

  Background b0 = fig3;
  b0.beta = 0.0;
  b0.alpha = 1.0;
  Background a0 = fig3;
  a0.alpha = 0.0;
  a0.beta = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const PotentialSample p{rand_sym(), rand_sym(), rand_sym()};
    const CMat4 Vn = assemble_V(p, sp, b0), Vc = assemble_V(p, sp, a0);
    CHECK(dist(assemble_V(p, sp, fig3), Vn * cplx(fig3.alpha) + Vc * cplx(fig3.beta)) <= 1e-13);
    CHECK(std::abs(trace(assemble_V(p, sp, fig3))) <= 1e-12);
  }
  try {
    (void)assemble_V({fig3.Qplus, {}, CMat2::zero()}, sp, fig3);
    FAIL("expected MissingDerivatives");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingDerivatives);
  }
}

TEST_CASE("asymptotic eigenvectors") {
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralPoint sp = uniformize(rand_off_sigma(fig3), fig3);
    const auto ev = asymptotic_eigenvectors(sp, fig3.Qplus, fig3);
    CHECK(dist(ev.X * ev.Xinv, CMat4::identity()) <= 1e-12 * std::max(1.0, 1.0 / std::abs(sp.gamma)));
    const cplx g2 = sp.gamma * sp.gamma;
    CHECK(std::abs(det4(ev.X) - g2) <= 1e-12 * std::max(1.0, std::abs(g2)));
    CHECK(dist(ev.Xinv, inv4(ev.X)) <= 1e-12 * std::max(1.0, norm_max(ev.Xinv)));
  }
  const auto far = asymptotic_eigenvectors(uniformize(cplx(0, 1e8), fig3), fig3.Qplus, fig3);
  CHECK(dist(far.X, CMat4::identity()) <= 1e-7);
  try {
    (void)asymptotic_eigenvectors(uniformize(cplx(0, 1), fig3), fig3.Qplus, fig3);
    FAIL("expected BranchPointSingular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchPointSingular);
  }
}

TEST_CASE("zero curvature") {
  const Field flat = [](double, double) { return CMat2::identity(); };
  CHECK(zero_curvature_residual(flat, cplx(0.3, 2.0), 0.1, 0.2, 1e-3, fig3) <= 1e-10);

  const SolitonSpec spec = expand_quartets(std::vector<DiscreteEigenpair>{{cplx(0, 2), CMat2{{1, 1, 1, 1}}, NormingRank::Rank1}}, fig3);
  const Field sol = make_field(spec);
  for (double x : {-1.0, 0.3, 1.4})
    CHECK(zero_curvature_residual(sol, cplx(3, 3), x, 0.2, 1e-3, fig3) <= 1e-5);

  const Field bump = [](double x, double t) {
    const double e = 0.3 * std::exp(-x * x - t * t);
    return CMat2{{1.0 + e, 0.5 * e, 0.5 * e, 1.0 + e}};
  };
  CHECK(zero_curvature_residual(bump, cplx(3, 3), 0.2, 0.1, 1e-3, fig3) > 1e-1);
}
