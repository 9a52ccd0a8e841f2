#include "hirota/verify.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace hirota {

namespace {

// one-sided weights w_1..w_n of the sixth-order central stencils
constexpr std::array<double, 3> kD1{3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr std::array<double, 3> kD2{3.0 / 2, -3.0 / 20, 1.0 / 90};
constexpr std::array<double, 4> kD3{-61.0 / 30, 169.0 / 120, -3.0 / 10, 7.0 / 240};

// v holds samples at offsets -M..M; odd: sum w_k (v_k - v_-k), even: sum w_k ((v_k - v_0) + (v_-k - v_0))
template <std::size_t N, std::size_t M>
CMat2 stencil(const std::array<double, N>& w, const std::array<CMat2, 2 * M + 1>& v, bool odd, double scale) {
  const CMat2& c = v[M];
  CMat2 s = CMat2::zero();
  for (std::size_t k = 1; k <= N; ++k) {
    const CMat2 d = odd ? v[M + k] - v[M - k] : (v[M + k] - c) + (v[M - k] - c);
    s += d * cplx(w[k - 1]);
  }
  return s * cplx(scale);
}

}  // namespace

double pde_residual_at(const Field& field, double x, double t, double h, const Background& bg, NonlinearForm form) {
  std::array<CMat2, 9> xs;
  for (int k = -4; k <= 4; ++k) xs[static_cast<std::size_t>(k + 4)] = field(x + k * h, t);
  std::array<CMat2, 7> t7;
  for (int k = -3; k <= 3; ++k) t7[static_cast<std::size_t>(k + 3)] = k == 0 ? xs[4] : field(x, t + k * h);

  const CMat2& Q = xs[4];
  const CMat2 Qx = stencil<3, 4>(kD1, xs, true, 1.0 / h);
  const CMat2 Qxx = stencil<3, 4>(kD2, xs, false, 1.0 / (h * h));
  const CMat2 Qxxx = stencil<4, 4>(kD3, xs, true, 1.0 / (h * h * h));
  const CMat2 Qt = stencil<3, 3>(kD1, t7, true, 1.0 / h);

  const cplx s(bg.sigma);
  const CMat2 Qd = dagger(Q);
  const CMat2 QQd = Q * Qd;
  const CMat2 cubic = form == NonlinearForm::Printed ? QQd * Qx * (-6.0 * s)
                                                     : (QQd * Qx + Qx * Qd * Q) * (-3.0 * s);
  const CMat2 r = Qt * I_unit +
                  (Qxx - (QQd - CMat2::diag(bg.k0 * bg.k0)) * Q * (2.0 * s)) * cplx(bg.alpha) +
                  (Qxxx + cubic) * (I_unit * bg.beta);
  return norm_max(r);
}

double halton(std::size_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  for (std::size_t i = index; i > 0; i /= base) {
    f /= base;
    r += f * static_cast<double>(i % base);
  }
  return r;
}

namespace {

template <class Point>
ResidualReport parallel_max(std::size_t count, Point point, const Field& field, double h, const Background& bg,
                            NonlinearForm form) {
  ResidualReport rep;
  rep.h = h;
  rep.points = count;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    ResidualReport local;
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      const auto [x, t] = point(i);
      const double r = pde_residual_at(field, x, t, h, bg, form);
      if (!(r <= local.max_residual)) {
        local.max_residual = r;
        local.argmax_x = x;
        local.argmax_t = t;
      }
    }
    std::lock_guard lock(mu);
    if (!(local.max_residual <= rep.max_residual)) {
      rep.max_residual = local.max_residual;
      rep.argmax_x = local.argmax_x;
      rep.argmax_t = local.argmax_t;
    }
  };
  const unsigned threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return rep;
}

}  // namespace

ResidualReport pde_residual(const Field& field, const Region2D& region, std::size_t n_probe, double h,
                            const Background& bg, NonlinearForm form) {
  auto point = [&](std::size_t i) {
    return std::pair{region.xmin + (region.xmax - region.xmin) * halton(i + 1, 2),
                     region.tmin + (region.tmax - region.tmin) * halton(i + 1, 3)};
  };
  return parallel_max(n_probe, point, field, h, bg, form);
}

ResidualReport pde_residual_grid(const Field& field, const GridAxes& axes, double h, const Background& bg,
                                 NonlinearForm form) {
  const auto xs = axes.x_values();
  const auto ts = axes.t_values();
  auto point = [&](std::size_t i) { return std::pair{xs[i % xs.size()], ts[i / xs.size()]}; };
  return parallel_max(xs.size() * ts.size(), point, field, h, bg, form);
}

DecayReport boundary_decay(const Field& field, double t, const Background& bg, double x_far) {
  DecayReport rep;
  rep.Qminus_measured = field(-2.0 * x_far, t);
  rep.right_deviation = norm_max(field(x_far, t) - bg.Qplus);
  rep.left_deviation = norm_max(field(-x_far, t) - rep.Qminus_measured);

  // least-squares slope of log |Q - Q+| on [x_far/2, x_far]
  const int n = 41;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * x_far + 0.5 * x_far * i / (n - 1);
    const double d = norm_max(field(x, t) - bg.Qplus);
    if (!(d > 0.0)) continue;
    const double y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used >= 2) {
    const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
    rep.rate = -slope;
  }
  return rep;
}

double symmetry_residual(const FieldGrid& grid) {
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.values.size(); ++k)
    if (grid.mask.empty() || !grid.mask[k]) worst = std::max(worst, std::abs(grid.values[k].skew));
  return worst;
}

double periodicity_probe(const Field& field, Axis axis, double period, std::size_t n, const Region2D& region) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = region.xmin + (region.xmax - region.xmin) * halton(i + 1, 2);
    const double t = region.tmin + (region.tmax - region.tmin) * halton(i + 1, 3);
    const CMat2 a = field(x, t);
    const CMat2 b = axis == Axis::X ? field(x + period, t) : field(x, t + period);
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(std::abs(a.a[k]) - std::abs(b.a[k])));
  }
  return worst;
}

}  // namespace hirota
