#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include "hirota/direct.hpp"
#include "hirota/inverse.hpp"
#include "hirota/traceform.hpp"

using namespace hirota;

namespace {

const Background fig3 = Background::focusing(1.0, 0.1);
const Field flat = [](double, double) { return CMat2::identity(); };
const CMat2 ones{{1, 1, 1, 1}};

SolitonSpec fig3_spec() { return expand_quartets(std::vector<DiscreteEigenpair>{{cplx(0, 2), ones, NormingRank::Rank1}}, fig3); }

struct Fig3 {
  Field field = make_field(fig3_spec());
  Background bg = with_measured_minus(fig3, field, 0.0);
};

const Fig3& fig3_case() {
  static const Fig3 c;
  return c;
}

double cond(const CMat4& m) {
  Eigen::Matrix4cd e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = m(i, j);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(e);
  return svd.singularValues()(0) / svd.singularValues()(3);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::BadConfig;
}

}  // namespace

TEST_CASE("jost solutions of the background") {
  for (cplx z : {cplx(0.5, 0), cplx(2, 0), cplx(0, 2), std::polar(1.0, 0.7)}) {
    const auto ev = asymptotic_eigenvectors(uniformize(z, fig3), fig3.Qplus, fig3);
    const JostHalf l = integrate_jost(flat, z, Side::Left, fig3);
    const JostHalf r = integrate_jost(flat, z, Side::Right, fig3);
    CHECK(norm_max(l.value - ev.X) <= 1e-9);
    CHECK(norm_max(r.value - ev.X) <= 1e-9);
  }
}

TEST_CASE("jost solutions of the fig3 soliton") {
  const auto& c = fig3_case();
  const JostHalf l = integrate_jost(c.field, 0.5, Side::Left, c.bg);
  CHECK(is_finite(l.value));
  CHECK(cond(l.value) < 1e6);
  const cplx g = uniformize(0.5, c.bg).gamma;
  CHECK(std::abs(det4(l.value) - g * g) <= 1e-9 * std::abs(g * g));
  CHECK(l.det_drift <= 1e-9);
  CHECK(l.steps > 0);
  const JostHalf r = integrate_jost(c.field, std::polar(1.0, 2.0), Side::Right, c.bg);
  CHECK(r.det_drift <= 1e-9);
  CHECK(code_of([&] { integrate_jost(c.field, cplx(0, 1), Side::Left, c.bg); }) == ErrorCode::BranchPointSingular);
}

TEST_CASE("scattering matrix examples") {
  const ScatteringSample s0 = scattering_matrix(flat, 0.5, fig3);
  CHECK(norm_max(s0.S - CMat4::identity()) <= 1e-9);

  const auto& c = fig3_case();
  const ScatteringSample s = scattering_matrix(c.field, 0.5, c.bg);
  CHECK(norm_max(s.rho) <= 1e-4);
  CHECK(std::abs(det4(s.S) - 1.0) <= 1e-8);
  CHECK(norm_max(s.rho - s.b * inv2(s.a)) <= 1e-14);
  CHECK(norm_max(s.rhobar - s.bbar * inv2(s.abar)) <= 1e-14);
  CHECK(norm_max(s.a - s.S.block(0, 0)) == 0.0);
  CHECK(norm_max(s.abar - s.S.block(1, 1)) == 0.0);
}

TEST_CASE("scattering data is independent of time") {
  const auto& c = fig3_case();
  ScatterOptions later;
  later.t0 = 0.5;
  const Background bg_later = with_measured_minus(fig3, c.field, 0.5);
  for (cplx z : {cplx(0.5, 0), cplx(-2.2, 0), std::polar(1.0, 1.1)}) {
    const ScatteringSample a = scattering_matrix(c.field, z, c.bg);
    const ScatteringSample b = scattering_matrix(c.field, z, bg_later, later);
    CHECK(norm_max(a.S - b.S) <= 1e-6);
  }
}

TEST_CASE("symmetry audit") {
  const auto pts = symmetric_sigma_points(fig3, 4, 2);
  CHECK(pts.size() == 16);
  std::vector<ScatteringSample> bg_samples;
  for (cplx z : pts) bg_samples.push_back(scattering_matrix(flat, z, fig3));
  CHECK(audit_symmetries(bg_samples, fig3).max() <= 1e-8);

  const auto& c = fig3_case();
  std::vector<ScatteringSample> samples;
  for (cplx z : pts) samples.push_back(scattering_matrix(c.field, z, c.bg));
  const SymmetryReport rep = audit_symmetries(samples, c.bg);
  CHECK(rep.first <= 1e-6);
  CHECK(rep.third <= 1e-6);
  CHECK(rep.rho_symmetric <= 1e-6);
  CHECK(rep.second <= 1e-6);
  CHECK(rep.abar <= 1e-6);

  auto corrupted = samples;
  corrupted[3].b += CMat2{{0.1, 0, 0, 0}};
  corrupted[3].S.set_block(1, 0, corrupted[3].b);
  corrupted[3].rho = corrupted[3].b * inv2(corrupted[3].a);
  CHECK(audit_symmetries(corrupted, c.bg).max() > 1e-2);

  std::vector<ScatteringSample> lonely{samples[0]};
  CHECK(code_of([&] { audit_symmetries(lonely, c.bg); }) == ErrorCode::MissingPartner);
}

TEST_CASE("first symmetry deviation follows the integration tolerance") {
  const auto& c = fig3_case();
  const auto pts = symmetric_sigma_points(c.bg, 2, 1);
  double prev = 0.0;
  for (double tol : {1e-8, 5e-9}) {
    ScatterOptions o;
    o.tol = tol;
    std::vector<ScatteringSample> s;
    for (cplx z : pts) s.push_back(scattering_matrix(c.field, z, c.bg, o));
    const double dev = audit_symmetries(s, c.bg).first;
    if (prev > 0.0) {
      CHECK(prev / dev >= 2.0 / 4.0);
      CHECK(prev / dev <= 2.0 * 4.0);
    }
    prev = dev;
  }
}

TEST_CASE("det a examples") {
  CHECK(std::abs(det_a(flat, cplx(0, 3), fig3) - 1.0) <= 1e-9);
  const auto& c = fig3_case();
  CHECK(std::abs(det_a(c.field, cplx(0, 3), c.bg) - 0.28) <= 1e-3);
  CHECK(code_of([&] { det_a(c.field, cplx(0, -3), c.bg); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("det a at |z| = 50" * doctest::may_fail()) {
  const auto& c = fig3_case();
  CHECK(std::abs(det_a(c.field, cplx(0, 50), c.bg) - 1.0) <= 1e-3);
}

TEST_CASE("det a far out matches the product form") {
  const auto& c = fig3_case();
  TraceInput in;
  in.bg = fig3;
  in.simple_zeros = {cplx(0, 2)};
  for (double y : {20.0, 50.0}) CHECK(std::abs(det_a(c.field, cplx(0, y), c.bg) - trace_det_a(cplx(0, y), in)) <= 1e-8);
}

TEST_CASE("det a is analytic") {
  const auto& c = fig3_case();
  const double h = 1e-3;
  for (cplx z : {cplx(0.7, 2.6), cplx(-1.5, 1.4), cplx(0.2, -0.5)}) {
    const cplx dx = (det_a(c.field, z + h, c.bg) - det_a(c.field, z - h, c.bg)) / (2 * h);
    const cplx dy = (det_a(c.field, z + I_unit * h, c.bg) - det_a(c.field, z - I_unit * h, c.bg)) / (2 * h);
    CHECK(std::abs(dy - I_unit * dx) <= 1e-5);
  }
}

TEST_CASE("discrete spectrum search") {
  CHECK(find_discrete_spectrum(flat, {-1, 1, 1.2, 3}, fig3).zeros.empty());

  const auto& c = fig3_case();
  const SpectrumResult r = find_discrete_spectrum(c.field, {-1, 1, 1.2, 3}, c.bg);
  REQUIRE(r.zeros.size() == 1);
  CHECK(std::abs(r.zeros[0].z - cplx(0, 2)) <= 1e-4);
  CHECK(r.zeros[0].multiplicity == 1);
  CHECK(r.values() == std::vector<cplx>{r.zeros[0].z});

  CHECK(code_of([&] { find_discrete_spectrum(c.field, {1, -1, 1.2, 3}, c.bg); }) == ErrorCode::BadSearchBox);
  CHECK(code_of([&] { find_discrete_spectrum(c.field, {-1, 1, -1, 3}, c.bg); }) == ErrorCode::BadSearchBox);
}

TEST_CASE("two-eigenvalue round trip") {
  const SolitonSpec s = expand_quartets(std::vector<DiscreteEigenpair>{{cplx(0, 2), ones, NormingRank::Rank1},
                                                                       {cplx(1, 2), CMat2{{1, 1, 1, 2}}, NormingRank::Rank2}},
                                        fig3);
  const Field f = make_field(s);
  const Background bg = with_measured_minus(fig3, f, 0.0);
  const SpectrumResult r = find_discrete_spectrum(f, {-1.5, 1.5, 1.3, 3}, bg);
  REQUIRE(r.zeros.size() == 2);
  int total = 0;
  for (cplx want : {cplx(0, 2), cplx(1, 2)}) {
    double best = 1e9;
    for (const auto& z : r.zeros) best = std::min(best, std::abs(z.z - want));
    CHECK(best <= 1e-3);
  }
  for (const auto& z : r.zeros) total += z.multiplicity;
  CHECK(total == 3);
}

TEST_CASE("sigma sample points are closed under the symmetries") {
  const auto pts = symmetric_sigma_points(fig3, 8, 4);
  CHECK(pts.size() == 32);
  for (cplx z : pts) {
    CHECK(classify_region(z, fig3) == Region::Sigma);
    const cplx c = std::conj(z), inv = -1.0 / z;
    bool has_c = false, has_inv = false;
    for (cplx w : pts) {
      has_c = has_c || std::abs(w - c) <= 1e-14;
      has_inv = has_inv || std::abs(w - inv) <= 1e-14;
    }
    CHECK(has_c);
    CHECK(has_inv);
  }
}
