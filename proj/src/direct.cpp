#include "hirota/direct.hpp"

#include <functional>
#include <map>
#include <numbers>

#include "hirota/ode.hpp"

namespace hirota {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClusterRadius = 1e-3;

// Column c of the modified eigenfunction obeys v' = (U + i lambda s_c) v, s = +1 for c < 2.
template <std::size_t N>
ode::Rhs<N> column_rhs(const Field& field, const SpectralPoint& sp, const Background& bg, double t0,
                       std::array<double, N / 4> signs) {
  return [&field, sp, sigma = static_cast<double>(bg.sigma), t0, signs](double x, const ode::CVec<N>& y, ode::CVec<N>& dy) {
    const CMat2 Q = field(x, t0);
    const cplx mik = -I_unit * sp.k;
    const cplx sQd[4] = {sigma * std::conj(Q(0, 0)), sigma * std::conj(Q(1, 0)), sigma * std::conj(Q(0, 1)),
                         sigma * std::conj(Q(1, 1))};
    for (std::size_t c = 0; c < N / 4; ++c) {
      const cplx* v = &y[4 * c];
      cplx* d = &dy[4 * c];
      const cplx shift = I_unit * sp.lambda * signs[c];
      d[0] = (mik + shift) * v[0] + Q(0, 0) * v[2] + Q(0, 1) * v[3];
      d[1] = (mik + shift) * v[1] + Q(1, 0) * v[2] + Q(1, 1) * v[3];
      d[2] = sQd[0] * v[0] + sQd[1] * v[1] + (-mik + shift) * v[2];
      d[3] = sQd[2] * v[0] + sQd[3] * v[1] + (-mik + shift) * v[3];
    }
  };
}

ode::Options ode_options(const ScatterOptions& opt) {
  ode::Options o;
  o.rtol = opt.tol;
  o.atol = opt.tol;
  o.initial_step = 1e-2;
  return o;
}

}  // namespace

JostHalf integrate_jost(const Field& field, cplx z, Side side, const Background& bg, const ScatterOptions& opt,
                        Halves halves) {
  if (!(opt.L > 0.0)) throw Error(ErrorCode::IntegrationFailure, "L must be positive");
  const SpectralPoint sp = uniformize(z, bg);
  const CMat2& Qpm = side == Side::Left ? bg.Qminus : bg.Qplus;
  const CMat4 X = asymptotic_eigenvectors(sp, Qpm, bg).X;
  const double x0 = side == Side::Left ? -opt.L : opt.L;

  JostHalf out;
  out.z = z;
  out.t0 = opt.t0;
  out.side = side;

  if (halves == Halves::Both) {
    ode::CVec<16> y;
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 4; ++r) y[static_cast<std::size_t>(4 * c + r)] = X(r, c);
    const cplx g2 = sp.gamma * sp.gamma;
    double drift = 0.0;
    auto observe = [&](double, const ode::CVec<16>& v) {
      CMat4 m;
      for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) m(r, c) = v[static_cast<std::size_t>(4 * c + r)];
      drift = std::max(drift, std::abs(det4(m) - g2) / std::abs(g2));
    };
    const auto stats = ode::integrate<16>(column_rhs<16>(field, sp, bg, opt.t0, {1.0, 1.0, -1.0, -1.0}), x0, 0.0, y,
                                          ode_options(opt), observe);
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 4; ++r) out.value(r, c) = y[static_cast<std::size_t>(4 * c + r)];
    out.steps = stats.accepted;
    out.det_drift = drift;
    return out;
  }

  // M (left, columns 0-1) and N (right, columns 2-3) are the halves analytic in D+.
  const int first = side == Side::Left ? 0 : 2;
  const double sign = side == Side::Left ? 1.0 : -1.0;
  ode::CVec<8> y;
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 4; ++r) y[static_cast<std::size_t>(4 * c + r)] = X(r, first + c);
  const auto stats =
      ode::integrate<8>(column_rhs<8>(field, sp, bg, opt.t0, {sign, sign}), x0, 0.0, y, ode_options(opt));
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 4; ++r) out.value(r, first + c) = y[static_cast<std::size_t>(4 * c + r)];
  out.steps = stats.accepted;
  return out;
}

ScatteringSample scattering_matrix(const Field& field, cplx z, const Background& bg, const ScatterOptions& opt) {
  const JostHalf left = integrate_jost(field, z, Side::Left, bg, opt);
  const JostHalf right = integrate_jost(field, z, Side::Right, bg, opt);
  const cplx th = theta(0.0, opt.t0, z, bg);
  const cplx ep = std::exp(I_unit * th), em = std::exp(-I_unit * th);
  CMat4 phase;
  phase(0, 0) = ep;
  phase(1, 1) = ep;
  phase(2, 2) = em;
  phase(3, 3) = em;
  const CMat4 Phi = left.value * phase;
  const CMat4 Psi = right.value * phase;
  if (std::abs(det4(Psi)) < region_tolerance(bg)) throw Error(ErrorCode::SingularWronskian, "det Psi(0) vanishes");

  ScatteringSample s;
  s.z = z;
  s.S = inv4(Psi) * Phi;
  s.a = s.S.block(0, 0);
  s.bbar = s.S.block(0, 1);
  s.b = s.S.block(1, 0);
  s.abar = s.S.block(1, 1);
  s.rho = s.b * inv2(s.a);
  s.rhobar = s.bbar * inv2(s.abar);
  return s;
}

double SymmetryReport::max() const { return std::max({first, third, rho_symmetric, second, abar}); }

SymmetryReport audit_symmetries(const std::vector<ScatteringSample>& samples, const Background& bg) {
  const auto pauli = PauliSet::make(bg.sigma);
  const double k2 = bg.k0 * bg.k0;
  auto find = [&](cplx w) -> const ScatteringSample& {
    for (const auto& s : samples)
      if (std::abs(s.z - w) <= 1e-9 * std::max(1.0, std::abs(w))) return s;
    throw Error(ErrorCode::MissingPartner, "no sample near the partner point");
  };
  const CMat2 Qd = dagger(bg.Qplus);
  SymmetryReport r;
  for (const auto& s : samples) {
    const ScatteringSample& conj_partner = find(std::conj(s.z));
    const ScatteringSample& inv_partner = find(bg.sigma * k2 / s.z);
    r.first = std::max(r.first, norm_max(dagger(conj_partner.S) * pauli.J * s.S - pauli.J));
    r.third = std::max(r.third, norm_max(transpose(s.S) * pauli.sigma2 * s.S - pauli.sigma2));
    r.rho_symmetric = std::max(r.rho_symmetric, norm_max(s.rho - transpose(s.rho)));
    r.second = std::max(r.second, norm_max(inv_partner.rho + Qd * s.rhobar * Qd * cplx(bg.sigma / k2)));
    r.abar = std::max(r.abar, norm_max(s.abar - conjugate(conj_partner.a)));
  }
  return r;
}

std::vector<cplx> symmetric_sigma_points(const Background& bg, int n_real_orbits, int n_circle_orbits) {
  std::vector<cplx> pts;
  const double k2 = bg.k0 * bg.k0;
  for (int j = 0; j < n_real_orbits; ++j) {
    const double x = bg.k0 * (1.3 + 0.9 * j);
    pts.emplace_back(x, 0.0);
    pts.emplace_back(bg.sigma * k2 / x, 0.0);
  }
  if (bg.sigma < 0) {
    for (int j = 0; j < n_circle_orbits; ++j) {
      const double phi = 0.5 * kPi * (j + 0.5) / n_circle_orbits;
      const cplx w = std::polar(bg.k0, phi);
      pts.push_back(w);
      pts.push_back(std::conj(w));
      pts.push_back(-std::conj(w));
      pts.push_back(-w);
    }
  }
  return pts;
}

cplx det_a(const Field& field, cplx z, const Background& bg, const ScatterOptions& opt) {
  const SpectralPoint sp = uniformize(z, bg);
  if (sp.region != Region::DPlus) throw Error(ErrorCode::OutsideDomain, "det a is evaluated in D+ only");
  const JostHalf left = integrate_jost(field, z, Side::Left, bg, opt, Halves::Analytic);
  const JostHalf right = integrate_jost(field, z, Side::Right, bg, opt, Halves::Analytic);
  CMat4 W;
  for (int r = 0; r < 4; ++r) {
    W(r, 0) = left.value(r, 0);
    W(r, 1) = left.value(r, 1);
    W(r, 2) = right.value(r, 2);
    W(r, 3) = right.value(r, 3);
  }
  return det4(W) / (sp.gamma * sp.gamma);
}

std::vector<cplx> SpectrumResult::values() const {
  std::vector<cplx> v;
  for (const auto& z : zeros) v.push_back(z.z);
  return v;
}

Background with_measured_minus(const Background& bg, const Field& field, double t0, double x_far) {
  Background out = bg;
  const CMat2 Q = field(-x_far, t0);
  out.Qminus = (Q + transpose(Q)) * cplx(0.5);
  return out;
}

namespace {

struct Rect {
  double x0, x1, y0, y1;
  double diameter() const { return std::hypot(x1 - x0, y1 - y0); }
};

class ZeroSearch {
 public:
  ZeroSearch(const Field& field, const Background& bg, const SpectrumOptions& opt)
      : field_(field), bg_(bg), opt_(opt) {}

  cplx f(cplx z) {
    const auto key = std::make_pair(z.real(), z.imag());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const cplx v = det_a(field_, z, bg_, opt_.scatter);
    memo_.emplace(key, v);
    return v;
  }

  bool inside_dplus(const Rect& r) const {
    if (r.y0 <= 0.0) return false;
    const double cx = std::clamp(0.0, r.x0, r.x1);
    return std::hypot(cx, r.y0) > bg_.k0 + 1e-6;
  }

  struct Winding {
    bool ok = true;
    int count = 0;
    cplx moment{};  // sum z dlog f, for the centroid
  };

  Winding winding(const Rect& r) {
    const int per_edge = std::max(1, opt_.boundary_points / 4);
    std::vector<cplx> corners{{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    Winding w;
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
      const cplx a = corners[static_cast<std::size_t>(e)], b = corners[static_cast<std::size_t>((e + 1) % 4)];
      for (int k = 0; k < per_edge; ++k) {
        const cplx p = a + (b - a) * (double(k) / per_edge);
        const cplx q = a + (b - a) * (double(k + 1) / per_edge);
        if (!segment(p, q, f(p), f(q), 0, total, w.moment)) w.ok = false;
      }
    }
    const double turns = total / (2.0 * kPi);
    w.count = static_cast<int>(std::lround(turns));
    if (std::abs(turns - w.count) > 0.05) w.ok = false;
    return w;
  }

  // Adds arg and log increments of f along [p, q], bisecting where arg jumps by more than pi/3.
  bool segment(cplx p, cplx q, cplx fp, cplx fq, int depth, double& total, cplx& moment) {
    if (std::abs(fp) < 1e-14 || std::abs(fq) < 1e-14) return false;
    const cplx dlog = std::log(fq / fp);
    if (std::abs(dlog.imag()) > kPi / 3.0) {
      if (depth >= 8) return false;
      const cplx m = 0.5 * (p + q);
      const cplx fm = f(m);
      return segment(p, m, fp, fm, depth + 1, total, moment) && segment(m, q, fm, fq, depth + 1, total, moment);
    }
    total += dlog.imag();
    moment += 0.5 * (p + q) * dlog;
    return true;
  }

  // Modified Newton with multiplicity m and a central-difference derivative.
  std::optional<FoundZero> refine(cplx z, int m, const Rect& cell) {
    const double hd = 1e-6 * std::max(1.0, std::abs(z));
    cplx best = z;
    cplx fb = f(z);
    for (int it = 0; it < 40; ++it) {
      const cplx d = (f(z + hd) - f(z - hd)) / (2.0 * hd);
      if (d == 0.0) break;
      const cplx step = double(m) * fb / d;
      z -= step;
      if (std::abs(z - best) > cell.diameter() || classify_region(z, bg_) != Region::DPlus) break;
      const cplx fz = f(z);
      if (std::abs(fz) < std::abs(fb)) {
        best = z;
        fb = fz;
      }
      if (std::abs(step) < 1e-13) break;
    }
    if (std::abs(fb) >= 1e-8) return std::nullopt;
    return FoundZero{best, m, std::abs(fb)};
  }

  // Returns false when a boundary could not be resolved (zero on an edge).
  bool process(const Rect& r, int level, std::vector<FoundZero>& found, std::vector<std::string>& diag) {
    const Winding w = winding(r);
    if (!w.ok) return false;
    if (w.count <= 0) return true;
    if (w.count > 1 && level < opt_.max_level) {
      const double xm = 0.5 * (r.x0 + r.x1), ym = 0.5 * (r.y0 + r.y1);
      const Rect kids[4] = {{r.x0, xm, r.y0, ym}, {xm, r.x1, r.y0, ym}, {r.x0, xm, ym, r.y1}, {xm, r.x1, ym, r.y1}};
      std::vector<FoundZero> sub;
      int sum = 0;
      bool ok = true;
      for (const auto& k : kids) {
        const Winding kw = winding(k);
        if (!kw.ok) {
          ok = false;
          break;
        }
        sum += kw.count;
      }
      if (ok && sum == w.count) {
        for (const auto& k : kids)
          if (!process(k, level + 1, sub, diag)) return false;
        found.insert(found.end(), sub.begin(), sub.end());
        return true;
      }
    }
    const cplx centroid = w.moment / (2.0 * kPi * I_unit * double(w.count));
    if (auto z = refine(centroid, w.count, r)) {
      found.push_back(*z);
    } else {
      diag.push_back("NoConvergence: cell at level " + std::to_string(level) + " with winding " +
                     std::to_string(w.count) + " near " + std::to_string(centroid.real()) + "+" +
                     std::to_string(centroid.imag()) + "i");
    }
    return true;
  }

 private:
  const Field& field_;
  const Background& bg_;
  const SpectrumOptions& opt_;
  std::map<std::pair<double, double>, cplx> memo_;
};

}  // namespace

SpectrumResult find_discrete_spectrum(const Field& field, const SearchBox& box, const Background& bg,
                                      const SpectrumOptions& opt) {
  if (!(box.re_max > box.re_min) || !(box.im_max > box.im_min) || !(box.im_min > 0.0))
    throw Error(ErrorCode::BadSearchBox, "search box must be a nondegenerate rectangle in Im z > 0");
  if (opt.cells_re < 1 || opt.cells_im < 1 || opt.boundary_points < 4)
    throw Error(ErrorCode::BadSearchBox, "bad cell counts");

  ZeroSearch search(field, bg, opt);
  const double dx = (box.re_max - box.re_min) / opt.cells_re;
  const double dy = (box.im_max - box.im_min) / opt.cells_im;

  SpectrumResult result;
  // Lattice shifts used when a zero sits on a cell edge.
  for (double shift : {0.0, 0.3183, 0.6180}) {
    std::vector<FoundZero> found;
    std::vector<std::string> diag;
    bool clean = true;
    const int extra = shift == 0.0 ? 0 : 1;
    for (int i = 0; i < opt.cells_re + extra && clean; ++i)
      for (int j = 0; j < opt.cells_im + extra && clean; ++j) {
        const Rect r{box.re_min + (i - shift) * dx, box.re_min + (i + 1 - shift) * dx,
                     box.im_min + (j - shift) * dy, box.im_min + (j + 1 - shift) * dy};
        if (!search.inside_dplus(r)) continue;
        clean = search.process(r, 0, found, diag);
      }
    result.diagnostics = diag;
    result.zeros.clear();
    if (!clean) {
      result.diagnostics.push_back("cell boundary crosses a zero; shifting lattice");
      continue;
    }
    for (const auto& z : found) {
      if (z.z.real() < box.re_min || z.z.real() > box.re_max || z.z.imag() < box.im_min || z.z.imag() > box.im_max)
        continue;
      if (std::abs(std::abs(z.z) - bg.k0) < 1e-6 || z.z.imag() < 1e-6) {
        result.diagnostics.push_back("rejected zero within 1e-6 of the continuum");
        continue;
      }
      bool merged = false;
      for (auto& kept : result.zeros)
        if (!merged && std::abs(kept.z - z.z) < 1e-6) {
          merged = true;
          kept.multiplicity += z.multiplicity;
          result.diagnostics.push_back("merged zeros found from adjacent cells");
        }
      if (!merged) result.zeros.push_back(z);
    }
    // A multiple zero on a cell edge is split between neighbours and each half converges slowly
    // to a nearby point; pool such clusters and refine once with the combined multiplicity.
    std::vector<FoundZero> pooled;
    std::vector<bool> used(result.zeros.size(), false);
    for (std::size_t i = 0; i < result.zeros.size(); ++i) {
      if (used[i]) continue;
      std::vector<std::size_t> members{i};
      for (std::size_t j = i + 1; j < result.zeros.size(); ++j)
        if (!used[j] && std::abs(result.zeros[j].z - result.zeros[i].z) < kClusterRadius) {
          used[j] = true;
          members.push_back(j);
        }
      if (members.size() == 1) {
        pooled.push_back(result.zeros[i]);
        continue;
      }
      cplx sum{};
      int m = 0;
      for (auto j : members) {
        sum += result.zeros[j].z * double(result.zeros[j].multiplicity);
        m += result.zeros[j].multiplicity;
      }
      const cplx c = sum / double(m);
      const Rect cell{c.real() - kClusterRadius, c.real() + kClusterRadius, c.imag() - kClusterRadius,
                      c.imag() + kClusterRadius};
      if (auto z = search.refine(c, m, cell)) {
        pooled.push_back(*z);
        result.diagnostics.push_back("pooled " + std::to_string(members.size()) +
                                     " nearby zeros into one of multiplicity " + std::to_string(m));
      } else {
        for (auto j : members) pooled.push_back(result.zeros[j]);
      }
    }
    result.zeros = std::move(pooled);
    return result;
  }
  return result;
}

}  // namespace hirota
