#include "qwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwalk/kernels.hpp"

namespace qw {

double similarity(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution shapes differ");
  double sp = 0, sq = 0, b = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
  }
  if (sp <= 0 || sq <= 0) return 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    b += std::sqrt(std::max(p[i], 0.0) / sp * std::max(q[i], 0.0) / sq);
  return std::min(1.0, b * b);
}

double similarity(const Distribution& a, const Distribution& b) {
  if (a.shape != b.shape) throw std::invalid_argument("distribution shapes differ");
  return similarity(a.p, b.p);
}

std::vector<Recurrence> find_recurrences(const Protocol& p,
                                         const LatticeSpec& lattice, int t_max,
                                         double tol,
                                         const MomentumState* initial) {
  const auto grid = build_momentum_grid(lattice);
  MomentumState s = initial ? *initial
                            : prepare_localized(lattice,
                                                std::vector<int>(lattice.dim(), 0),
                                                pol_h());
  const auto u = kernels::unitaries(p, grid);
  std::vector<Mat2> acc(grid.total, Mat2::Identity());
  const Distribution p0 = position_distribution(s);
  std::vector<Recurrence> out;
  for (int t = 1; t <= t_max; ++t) {
    cplx tr = 0;
    for (int k = 0; k < grid.total; ++k) {
      acc[k] = u[k] * acc[k];
      tr += acc[k].trace();
    }
    kernels::apply(u, s.c);
    const double exact = std::abs(tr) / (2.0 * grid.total);
    if (exact >= 1 - tol) out.push_back({t, RecurrenceKind::exact_up_to_phase, exact});
    const double sim = similarity(p0, position_distribution(s));
    if (sim >= 1 - tol) out.push_back({t, RecurrenceKind::distributional, sim});
  }
  return out;
}

Recurrence best_recurrence(const Protocol& p, const MomentumState& initial,
                           int t_lo, int t_hi) {
  const auto u = kernels::unitaries(p, initial.grid);
  const Distribution p0 = position_distribution(initial);
  MomentumState s = initial;
  Recurrence best{t_lo, RecurrenceKind::distributional, -1.0};
  for (int t = 1; t <= t_hi; ++t) {
    kernels::apply(u, s.c);
    if (t < t_lo) continue;
    const double sim = similarity(p0, position_distribution(s));
    if (sim > best.score) best = {t, RecurrenceKind::distributional, sim};
  }
  return best;
}

Trajectory peak_trajectory(const std::vector<Distribution>& frames) {
  Trajectory tr;
  for (const auto& f : frames) {
    const int d = static_cast<int>(f.shape.size());
    const double mx = *std::max_element(f.p.begin(), f.p.end());
    int best = -1;
    int best_dist = 1 << 30;
    for (int k = 0; k < static_cast<int>(f.p.size()); ++k) {
      if (f.p[k] < mx - 1e-12) continue;
      int dist = 0;
      if (!tr.sites.empty()) {
        const auto& prev = tr.sites.back();
        if (d == 1) dist = ring_distance(k, prev[0], f.shape[0]);
        else
          dist = ring_distance(k / f.shape[1], prev[0], f.shape[0]) +
                 ring_distance(k % f.shape[1], prev[1], f.shape[1]);
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    std::vector<int> site = d == 1 ? std::vector<int>{best}
                                   : std::vector<int>{best / f.shape[1], best % f.shape[1]};
    std::vector<double> ang(d);
    for (int a = 0; a < d; ++a) {
      const double raw = two_pi * site[a] / f.shape[a];
      if (tr.unwrapped.empty()) {
        ang[a] = raw;
      } else {
        const double prev = tr.unwrapped.back()[a];
        ang[a] = prev + wrap_signed(raw - prev);
      }
    }
    tr.sites.push_back(site);
    tr.unwrapped.push_back(ang);
  }
  return tr;
}

namespace {
std::vector<double> normalized_abs2(const std::vector<cplx>& a) {
  std::vector<double> p(a.size());
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (p[i] = std::norm(a[i]));
  for (auto& v : p) v /= s;
  return p;
}

std::vector<cplx> normalized(std::vector<cplx> a) {
  double s = 0;
  for (const auto& v : a) s += std::norm(v);
  for (auto& v : a) v /= std::sqrt(s);
  return a;
}
}  // namespace

std::vector<double> scalar_prob(int n, double q0, double w,
                                const std::function<double(double)>& e, int t,
                                int m0) {
  std::vector<cplx> a(n, 0.0);
  for (int h = 1; h <= n; ++h) {
    const double q = two_pi * h / n;
    const double dq = wrap_signed(q - q0);
    const cplx coef = std::exp(-dq * dq * w * w / 4 + I * (e(q) * t));
    for (int m = 0; m < n; ++m) a[m] += std::exp(I * (q * (m - m0))) * coef;
  }
  return normalized_abs2(a);
}

std::vector<double> parabolic_prob(int n, double q0, double w, double beta,
                                   int t, int m0) {
  std::vector<cplx> a(n, 0.0);
  for (int h = 1; h <= n; ++h) {
    const double q = two_pi * h / n;
    const double dq = wrap_signed(q - q0);
    const cplx coef = std::exp(-dq * dq * (w * w / 4 + I * (beta * t)));
    for (int m = 0; m < n; ++m) a[m] += std::exp(I * (q * (m - m0))) * coef;
  }
  return normalized_abs2(a);
}

std::vector<double> few_wave_prob(int n, FewWave regime, double q0, double w,
                                  const std::function<double(double)>& e,
                                  int t, int m0) {
  std::vector<cplx> a(n);
  const double dq = two_pi / n;
  for (int m = 0; m < n; ++m) {
    const double d = m - m0;
    if (regime == FewWave::on_sample_3wave) {
      const double g = std::exp(-dq * dq * w * w / 4);
      a[m] = std::exp(I * (e(q0) * t)) +
             2 * g * std::exp(I * (e(q0 + dq) * t)) * std::cos(dq * d);
    } else {
      const double g1 = std::exp(-(dq / 2) * (dq / 2) * w * w / 4);
      const double g3 = std::exp(-(1.5 * dq) * (1.5 * dq) * w * w / 4);
      a[m] = g1 * std::exp(I * (e(q0 + dq / 2) * t)) * std::cos(dq * d / 2) +
             g3 * std::exp(I * (e(q0 + 1.5 * dq) * t)) * std::cos(1.5 * dq * d);
    }
  }
  return normalized_abs2(a);
}

cplx free_gaussian_psi(double x, double t, const ThetaParams& p) {
  const double s2 = p.sigma_q * p.sigma_q;
  const cplx a = 1.0 / (4 * s2) + I * (t * p.d / 2);
  const cplx norm = std::pow(two_pi * s2, -0.25) * std::sqrt(pi / a);
  const double y = x - p.v * t;
  return norm * std::exp(I * (p.q0 * x - t * p.e0)) * std::exp(-y * y / (4.0 * a));
}

cplx image_sum_psi(double x, double t, const ThetaParams& p, int r_max) {
  cplx s = 0;
  for (int r = -r_max; r <= r_max; ++r) s += free_gaussian_psi(x + r * p.n, t, p);
  return s;
}

ThetaValue jacobi_theta3(cplx z, cplx gamma, int order) {
  const double g = std::abs(gamma);
  if (g >= 1) throw std::invalid_argument("theta nome must satisfy |gamma| < 1");
  const double y = std::abs(z.imag());
  const double lg = std::log(g);
  auto term_log = [&](int l) { return l * double(l) * lg + 2 * l * y; };
  ThetaValue out;
  int l_max = order;
  if (order <= 0) {
    // largest term sits near l = y / |log g|
    double peak = 0;
    for (int l = 0; l <= 1 + static_cast<int>(y / std::max(-lg, 1e-300)) + 1; ++l)
      peak = std::max(peak, term_log(l));
    int l = 1;
    for (; l < 100000; ++l) {
      const double ratio = std::exp((2 * l + 1) * lg + 2 * y);
      const bool tail_small =
          ratio < 1 && term_log(l + 1) - peak + std::log(2.0 / (1 - ratio)) < std::log(1e-12);
      const bool spec_bound = std::pow(g, double(l) * l) / (1 - g) < 1e-12;
      if (tail_small && spec_bound) break;
    }
    l_max = l;
  }
  const cplx lgam = std::log(gamma);
  cplx s = 1.0;
  for (int l = 1; l <= l_max; ++l) {
    const cplx base = double(l) * l * lgam;
    s += std::exp(base + 2.0 * I * z * double(l)) + std::exp(base - 2.0 * I * z * double(l));
  }
  out.value = s;
  out.order = l_max;
  out.truncation_ok = std::pow(g, double(l_max) * l_max) / (1 - g) < 1e-12;
  return out;
}

std::vector<cplx> theta_psi(double t, const ThetaParams& p) {
  const double s2 = p.sigma_q * p.sigma_q;
  const cplx a = 1.0 / (4 * s2) + I * (t * p.d / 2);
  const double nn = p.n;
  const cplx gamma = std::exp(-nn * nn / (4.0 * a));
  std::vector<cplx> out(p.n);
  for (int m = 0; m < p.n; ++m) {
    const cplx z = p.q0 * nn / 2 + I * (m - p.v * t) * nn / (4.0 * a);
    out[m] = free_gaussian_psi(m, t, p) * jacobi_theta3(z, gamma, p.order).value;
  }
  return normalized(out);
}

int image_count(double t, const ThetaParams& p) {
  const double s2 = p.sigma_q * p.sigma_q;
  const cplx a = 1.0 / (4 * s2) + I * (t * p.d / 2);
  // |psi| ~ exp(-y^2 Re(1/4a)); keep images out to exp(-40)
  const double reach = std::sqrt(40.0 / std::real(1.0 / (4.0 * a)));
  return static_cast<int>(std::ceil(reach / p.n)) + 2;
}

std::vector<cplx> image_sum_field(double t, const ThetaParams& p, int r_max) {
  if (r_max <= 0) r_max = image_count(t, p);
  std::vector<cplx> out(p.n);
  for (int m = 0; m < p.n; ++m) out[m] = image_sum_psi(m, t, p, r_max);
  return normalized(out);
}

namespace {
// momentum samples 2 pi k / N carrying non-negligible Gaussian weight
std::pair<int, int> momentum_range(const ThetaParams& p) {
  const double dq = two_pi / p.n;
  const double reach = 12 * p.sigma_q;
  return {static_cast<int>(std::floor((p.q0 - reach) / dq)),
          static_cast<int>(std::ceil((p.q0 + reach) / dq))};
}

double parabola(const ThetaParams& p, double q) {
  const double u = q - p.q0;
  return p.e0 + p.v * u + p.d * u * u / 2;
}
}  // namespace

std::vector<cplx> momentum_sum_field(double t, const ThetaParams& p) {
  const auto [k0, k1] = momentum_range(p);
  std::vector<cplx> out(p.n, 0.0);
  for (int k = k0; k <= k1; ++k) {
    const double q = two_pi * k / p.n, u = q - p.q0;
    const cplx c = std::exp(-u * u / (4 * p.sigma_q * p.sigma_q) - I * (t * parabola(p, q)));
    for (int m = 0; m < p.n; ++m) out[m] += c * std::exp(I * (q * m));
  }
  return normalized(out);
}

std::vector<cplx> correlation_coeffs(const ThetaParams& p, int r_max, double t) {
  if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
  const auto [k0, k1] = momentum_range(p);
  const int len = k1 - k0 + 1;
  std::vector<cplx> phi(len);
  std::vector<double> en(len);
  double s = 0;
  for (int i = 0; i < len; ++i) {
    const double q = two_pi * (k0 + i) / p.n, u = q - p.q0;
    phi[i] = std::exp(-u * u / (4 * p.sigma_q * p.sigma_q));
    en[i] = parabola(p, q);
    s += std::norm(phi[i]);
  }
  for (auto& v : phi) v /= std::sqrt(s);
  std::vector<cplx> c(2 * r_max + 1, 0.0);
  for (int r = -r_max; r <= r_max; ++r) {
    cplx acc = 0;
    for (int i = std::max(0, -r); i < len && i + r < len; ++i)
      acc += phi[i + r] * std::conj(phi[i]) * std::exp(-I * (t * (en[i + r] - en[i])));
    c[r + r_max] = acc / double(p.n);
  }
  return c;
}

std::vector<cplx> correlation_prob(const std::vector<cplx>& c, int n) {
  const int r_max = (static_cast<int>(c.size()) - 1) / 2;
  std::vector<cplx> out(n, 0.0);
  for (int x = 0; x < n; ++x)
    for (int r = -r_max; r <= r_max; ++r)
      out[x] += c[r + r_max] * std::exp(I * (two_pi * r * x / n));
  return out;
}

std::vector<int> antipodal_window(int n, int m0) {
  std::vector<int> s;
  for (int m = 0; m < n; ++m)
    if (ring_distance(m, m0, n) == n / 2) s.push_back(m);
  return s;
}

double window_occupancy(const Distribution& d, const std::vector<int>& sites) {
  double s = 0;
  for (int m : sites) s += d.p[m];
  return s;
}

double dominant_period(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 4) throw std::invalid_argument("series too short");
  double mean = 0;
  for (double v : series) mean += v;
  mean /= n;
  double var = 0;
  for (double v : series) var += (v - mean) * (v - mean);
  if (var < 1e-24 * n) return 0.0;  // flat series has no period
  auto power = [&](double om) {
    cplx s = 0;
    for (int t = 0; t < n; ++t) s += (series[t] - mean) * std::exp(-I * (om * t));
    return std::norm(s);
  };
  // periods no longer than the series
  const double lo = two_pi / n, hi = pi;
  const int steps = 20000;
  double best_om = lo, best_p = -1;
  for (int i = 0; i <= steps; ++i) {
    const double om = lo + (hi - lo) * i / steps;
    const double pw = power(om);
    if (pw > best_p) {
      best_p = pw;
      best_om = om;
    }
  }
  const double h = (hi - lo) / steps;
  if (best_om - h >= lo && best_om + h <= hi) {
    const double pm = power(best_om - h), pp = power(best_om + h);
    const double den = pm - 2 * best_p + pp;
    if (den < 0) best_om += 0.5 * h * (pm - pp) / den;
  }
  return two_pi / best_om;
}

std::vector<int> smoothed_local_maxima(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    int c = 0;
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j, ++c) acc += series[j];
    s[i] = acc / c;
  }
  std::vector<int> out;
  for (int i = 1; i + 1 < n; ++i)
    if (s[i] > s[i - 1] && s[i] >= s[i + 1]) out.push_back(i);
  return out;
}

}  // namespace qw
