// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/cli/scenario.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/masks.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/seed.hpp"
#include "qwalk/spectrum.hpp"

using namespace qw;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string f(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

std::vector<double> series_at(const std::vector<Distribution>& frames, int k) {
  std::vector<double> v;
  for (const auto& d : frames) v.push_back(d.p[k]);
  return v;
}

// Distributions of a bundled scenario, frames 0..steps.
std::vector<Distribution> scenario_frames(const std::string& name, int steps) {
  const auto sc = cli::load_scenario(cli::bundled_scenario_dir() / (name + ".json"));
  const auto lat = cli::scenario_lattice(sc);
  return run_distributions(cli::scenario_initial_state(sc, lat), sc.protocol, steps);
}

Outcome a1() {
  Outcome o;
  const auto ring = LatticeSpec::ring(3);
  const auto grid = build_momentum_grid(ring);
  double dev = 0;
  for (int k = 0; k < grid.total; ++k)
    dev = std::max(dev, (step_power(preset("u1d-sigma0"), grid.point(k), 2) + Mat2::Identity())
                            .cwiseAbs().maxCoeff());
  o.check(dev < 1e-10, f("sigma0: max|U^2 + I| = %.1e", dev));
  auto first_dist = [&](const std::string& name) {
    for (const auto& r : find_recurrences(preset(name), ring, 30, 1e-10))
      if (r.kind == RecurrenceKind::distributional) return r;
    return Recurrence{-1, RecurrenceKind::distributional, 0};
  };
  const auto r0 = first_dist("u1d-sigma0");
  o.check(r0.t == 2, f("sigma0 first recurrence t=%.0f (S=%.12f)", r0.t, r0.score));
  const auto r1 = first_dist("u1d-isigma1");
  o.check(r1.t == 3, f("isigma1 first recurrence t=%.0f (S=%.12f)", r1.t, r1.score));
  const auto s0 = prepare_localized(ring, {0}, pol_h());
  const auto best = best_recurrence(preset("u1d"), s0, 4, 300);
  o.check(best.t == 253 && best.score >= 0.95,
          f("W coin best near-recurrence in [4,300] at t=%.0f with S=%.6f (target t=253, S>=0.95)",
            best.t, best.score));
  return o;
}

Outcome a2() {
  Outcome o;
  const auto ring = LatticeSpec::ring(15);
  const auto s = evolve_stepwise(prepare_localized(ring, {7}, pol_h()), preset("u1d"), 23);
  const auto d = position_distribution(s);
  const int am = static_cast<int>(std::max_element(d.p.begin(), d.p.end()) - d.p.begin());
  o.check(am == 7, f("1D argmax P(m,23) = %.0f (P=%.4f)", am, d.p[am]));
  const auto torus = LatticeSpec::torus(9, 9);
  const auto d2 = position_distribution(
      evolve_stepwise(prepare_localized(torus, {0, 0}, pol_h()), preset("u2d"), 16));
  const int a2 = static_cast<int>(std::max_element(d2.p.begin(), d2.p.end()) - d2.p.begin());
  o.check(a2 == 0, f("2D argmax P(t=16) at (%.0f,%.0f), P=%.4f", a2 / 9, a2 % 9, d2.p[a2]));
  return o;
}

Outcome a3() {
  Outcome o;
  const auto f0 = scenario_frames("ring15-breathing-midpoint", 100);
  const auto fpi = scenario_frames("ring15-breathing-sampled", 100);
  const double t0 = dominant_period(series_at(f0, 7));
  const double tpi = dominant_period(series_at(fpi, 7));
  o.check(t0 >= 38 && t0 <= 42, f("q0=0 revival period %.2f in [38,42]", t0));
  o.check(tpi >= 72 && tpi <= 80, f("q0=pi revival period %.2f in [72,80]", tpi));
  const auto [p0, ppi] = breathing_periods(15);
  o.check(std::abs(p0 - 40.2) <= 0.5 && std::abs(ppi - 75.3) <= 0.5,
          f("predictor (t0, tpi) = (%.3f, %.3f)", p0, ppi));
  const auto [d0, dpi] = band_gap_deltas(15);
  o.check(std::abs(d0 / dpi - 1.87) <= 0.05, f("dE0/dEpi = %.4f", d0 / dpi));
  const auto win = antipodal_window(15, 7);
  double worst = 0;
  int worst_t = 0;
  for (int t = 0; t <= 80; ++t) {
    const double occ = window_occupancy(f0[t], win);
    if (occ > worst) {
      worst = occ;
      worst_t = t;
    }
  }
  o.check(worst < 0.1, f("q0=0 antipodal occupancy (sites 14,0) max %.4f at t=%.0f (< 0.1)",
                         worst, worst_t));
  return o;
}

Outcome a4() {
  Outcome o;
  const auto torus = LatticeSpec::torus(9, 9);
  const auto u = preset("u2d");
  // lattice momentum (pi/4, -pi/4): equal and opposite group velocity components
  const std::vector<double> k{pi / 4, 7 * pi / 4};
  auto e2 = [](double x, double y) { return quasi_energy_2d_lattice(x, y); };
  const double vx = group_velocity(e2, k[0], k[1], 0), vy = group_velocity(e2, k[0], k[1], 1);
  o.check(std::abs(std::abs(vx) - std::abs(vy)) < 1e-9 && std::abs(vx) > 0.3,
          f("diagonal v_g = (%.4f, %.4f)", vx, vy));
  const auto s = prepare_wavepacket(torus, Wavepacket{{4, 4}, {-k[0], -k[1]}, 2.3, pol_h()});
  const auto tr = peak_trajectory(run_distributions(s, u, 16));
  const auto& end = tr.sites[16];
  const int dist = std::max(ring_distance(end[0], 4, 9), ring_distance(end[1], 4, 9));
  const double wx = (tr.unwrapped[16][0] - tr.unwrapped[0][0]) / two_pi;
  const double wy = (tr.unwrapped[16][1] - tr.unwrapped[0][1]) / two_pi;
  o.check(dist <= 1, f("diagonal peak at t=16: (%.0f,%.0f), start (4,4)", end[0], end[1]) +
                         f(", windings (%.2f, %.2f)", wx, wy));
  const auto z = prepare_wavepacket(torus, Wavepacket{{4, 4}, {0, 0}, 2.3, pol_h()});
  const double vz = std::hypot(group_velocity(e2, two_pi, two_pi, 0),
                               group_velocity(e2, two_pi, two_pi, 1));
  const auto tz = peak_trajectory(run_distributions(z, u, 30));
  int visit = -1, back = -1;
  for (int t = 1; t <= 30; ++t) {
    const auto& p = tz.sites[t];
    const bool antipodal = ring_distance(p[0], 4, 9) == 4 && ring_distance(p[1], 4, 9) == 4;
    if (antipodal && visit < 0) visit = t;
    if (visit > 0 && t > visit && ring_distance(p[0], 4, 9) <= 1 && ring_distance(p[1], 4, 9) <= 1) {
      back = t;
      break;
    }
  }
  o.check(vz < 1e-9 && visit > 0 && back > 0,
          f("zero-velocity (|v|=%.1e): antipodal visit t=%.0f, return t=%.0f", vz, visit, back));
  return o;
}

std::vector<double> marginal_x(const Distribution& d) { return marginals(d).first; }

Outcome a5() {
  Outcome o;
  const int ny = 7, steps = 30;
  const auto u = preset("u2d");
  const int win = emulated_window(steps, 1);
  const auto cyl = LatticeSpec::cylinder(ny, win);
  const int cx = win / 2;
  const auto s0 = prepare_localized(cyl, {cx, 0}, pol_h());
  const auto psi0 = to_position(s0);
  const auto full = run_distributions(s0, u, steps);
  double dev = 0;
  for (int t = 0; t <= steps; ++t) {
    const auto eff = distribution_of(cyl.shape(), evolve_cylinder_effective(cyl, psi0, u, t));
    for (size_t k = 0; k < eff.p.size(); ++k) dev = std::max(dev, std::abs(eff.p[k] - full[t].p[k]));
  }
  const MatX ue = effective_cylinder_unitary(u, ny, 0.3);
  const double unit = (ue.adjoint() * ue - MatX::Identity(2 * ny, 2 * ny)).cwiseAbs().maxCoeff();
  o.check(dev < 1e-8 && ue.rows() == 14 && unit < 1e-12,
          f("effective 14-band vs 2D window: max|dP| = %.2e over %.0f steps (window %.0f)", dev,
            steps, win));
  // ballistic peaks of P_m: local maxima above 5% of the largest, per side
  auto peaks = [&](int t) {
    const auto pm = marginal_x(full[t]);
    const double mx = *std::max_element(pm.begin(), pm.end());
    std::vector<int> out;
    for (int m = 1; m + 1 < win; ++m)
      if (pm[m] > pm[m - 1] && pm[m] >= pm[m + 1] && pm[m] > 0.05 * mx) out.push_back(m - cx);
    return out;
  };
  const auto p30 = peaks(30), p20 = peaks(20);
  auto speeds = [](const std::vector<int>& p, int t, int side) {
    std::vector<double> v;
    for (int m : p)
      if (m * side > 0) v.push_back(std::abs(m) / double(t));
    return v;
  };
  bool ok = true;
  std::string desc;
  for (int side : {-1, 1}) {
    const auto v30 = speeds(p30, 30, side), v20 = speeds(p20, 20, side);
    // distinct speeds: separated by at least 2 sites at t=30
    std::vector<double> distinct;
    for (double v : v30)
      if (distinct.empty() || std::abs(v - distinct.back()) * 30 >= 2) distinct.push_back(v);
    // ballistic: each t=30 speed reappears at t=20 within 2 sites
    int ballistic = 0;
    for (double v : distinct)
      for (double w : v20)
        if (std::abs(v - w) * 20 <= 2) {
          ++ballistic;
          break;
        }
    ok = ok && ballistic >= 2;
    desc += (side < 0 ? "left" : " right");
    for (double v : distinct) desc += f(" %.3f", v);
    desc += f(" (%.0f ballistic)", ballistic);
  }
  o.check(ok, "P_m peak speeds: " + desc);
  return o;
}

Outcome a6() {
  Outcome o;
  double worst_route = 0, worst_norm = 0;
  int checked = 0;
  for (const auto& path : cli::bundled_scenarios()) {
    const auto sc = cli::load_scenario(path);
    if (sc.lattice_kind == "cylinder") continue;
    const auto lat = cli::scenario_lattice(sc);
    if (lat.total() > 225) continue;
    const int steps = std::min(sc.steps, 90);
    const auto s0 = cli::scenario_initial_state(sc, lat);
    const auto frames = run_distributions(s0, sc.protocol, steps);
    const MatX big = position_space_unitary(sc.protocol, lat);
    auto psi = to_position(s0);
    Eigen::VectorXcd v(2 * lat.total());
    for (int k = 0; k < lat.total(); ++k) v.segment<2>(2 * k) = psi[k];
    for (int t = 0; t <= steps; ++t) {
      double tot = 0;
      for (int k = 0; k < lat.total(); ++k) {
        const double p = v.segment<2>(2 * k).squaredNorm();
        tot += p;
        worst_route = std::max(worst_route, std::abs(p - frames[t].p[k]));
      }
      worst_norm = std::max({worst_norm, std::abs(tot - 1), std::abs(frames[t].total() - 1)});
      v = big * v;
    }
    const double unit =
        (big.adjoint() * big - MatX::Identity(big.rows(), big.cols())).cwiseAbs().maxCoeff();
    worst_norm = std::max(worst_norm, unit);
    ++checked;
  }
  o.check(checked >= 5 && worst_route < 1e-10,
          f("%.0f scenarios: momentum vs dense position route max|dP| = %.2e", checked, worst_route));
  o.check(worst_norm < 1e-12, f("worst norm/unitarity deviation %.2e", worst_norm));
  return o;
}

Outcome a7() {
  Outcome o;
  const auto u1 = preset("u1d");
  double dev = 0;
  for (int i = 0; i < 10000; ++i) {
    const double q = two_pi * (i + 0.5) / 10000;
    const std::array<double, 1> qq{q};
    dev = std::max(dev, std::abs(quasi_energy_1d_lattice(q) -
                                 bloch_decompose(compose_protocol(u1, qq)).energy));
  }
  o.check(dev < 1e-12, f("E_1D vs eigenphase at 1e4 q: max dev %.2e", dev));
  const auto u2 = preset("u2d");
  double dm = 0, dp = 0;
  for (int n : {9, 12, 15}) {
    std::vector<double> a, b;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        const double qx = two_pi * i / n, qy = two_pi * j / n;
        const std::array<double, 2> qq{qx, qy};
        const double direct = bloch_decompose(compose_protocol(u2, qq)).energy;
        a.push_back(direct);
        b.push_back(quasi_energy_2d(qx, qy));
        dp = std::max(dp, std::abs(direct - quasi_energy_2d_lattice(qx, qy)));
      }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (size_t k = 0; k < a.size(); ++k) dm = std::max(dm, std::abs(a[k] - b[k]));
  }
  o.check(dm < 1e-12, f("E_2D multiset on 9,12,15 grids: max dev %.2e", dm));
  o.check(dp < 1e-12, f("E_2D pointwise with offset %.4f: max dev %.2e", band_offset_2d(), dp));
  return o;
}

Outcome a8() {
  Outcome o;
  std::vector<Mat2> targets;
  std::mt19937_64 rng(kPropertySeed);
  std::normal_distribution<double> g;
  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector4d v(g(rng), g(rng), g(rng), g(rng));
    v.normalize();
    targets.push_back(v(0) * pauli::s0() +
                      I * (v(1) * pauli::s1() + v(2) * pauli::s2() + v(3) * pauli::s3()));
  }
  const auto u1 = preset("u1d"), u2 = preset("u2d");
  const auto g1 = build_momentum_grid(LatticeSpec::ring(15));
  const auto g2 = build_momentum_grid(LatticeSpec::torus(9, 9));
  for (int t = 0; t <= 90; ++t)
    for (int k = 0; k < g1.total; ++k) targets.push_back(step_power(u1, g1.point(k), t));
  for (int t = 0; t <= 30; ++t)
    for (int k = 0; k < g2.total; ++k) targets.push_back(step_power(u2, g2.point(k), t));
  const auto stack = wrap_masks(solve_mask_grid(targets, {static_cast<int>(targets.size())}));
  double worst = 1;
  int fallback = 0;
  for (size_t k = 0; k < targets.size(); ++k) {
    const auto& p = stack.points[k];
    worst = std::min(worst, fidelity(reconstruct(p.d1, p.d2, p.d3), targets[k]));
    fallback += p.branch == MaskBranch::fallback;
  }
  o.check(worst >= 1 - 1e-9 && fallback > 0,
          f("%.0f targets, min fidelity 1-%.1e, %.0f fallback points", targets.size(), 1 - worst,
            fallback));
  return o;
}

Outcome a9() {
  Outcome o;
  std::mt19937_64 rng(kPropertySeed + 9);
  std::uniform_real_distribution<double> un(0, 1);
  double worst = 0;
  for (int i = 0; i < 60; ++i) {
    ThetaParams p;
    p.n = 7 + static_cast<int>(un(rng) * 19);
    p.sigma_q = 0.3 + 0.9 * un(rng);
    p.v = -0.7 + 1.4 * un(rng);
    p.d = -1.5 + 3 * un(rng);
    p.q0 = two_pi * un(rng);
    p.e0 = two_pi * un(rng);
    const double t = 80 * un(rng);
    const auto a = theta_psi(t, p), b = image_sum_field(t, p), c = momentum_sum_field(t, p);
    double ab = 0, ac = 0;
    for (int m = 0; m < p.n; ++m) {
      ab += std::norm(a[m] - b[m]);
      ac += std::norm(a[m] - c[m]);
    }
    worst = std::max({worst, std::sqrt(ab), std::sqrt(ac)});
  }
  o.check(worst < 1e-6, f("theta/image-sum/momentum-sum worst L2 %.2e over 60 draws", worst));

  const auto u = preset("u1d");
  const double k = to_lattice_momentum(u, pi);
  const auto frames = scenario_frames("ring15-breathing-sampled", 80);
  double min_sim = 1;
  int min_t = 0;
  for (int t = 0; t <= 80; ++t) {
    const auto sp = scalar_prob(15, k, 2.8, quasi_energy_1d_lattice, t, 7);
    const double s = similarity(sp, frames[t].p);
    if (s < min_sim) {
      min_sim = s;
      min_t = t;
    }
  }
  o.check(min_sim >= 0.99, f("scalar_prob vs full simulation (q0=pi) min S=%.4f at t=%.0f",
                             min_sim, min_t));
  const double k0 = to_lattice_momentum(u, 0.0);
  const auto win = antipodal_window(15, 7);
  double worst4 = 0;
  for (int t = 0; t <= 100; ++t) {
    const auto p4 = few_wave_prob(15, FewWave::between_samples_4wave, k0, 2.8,
                                  quasi_energy_1d_lattice, t, 7);
    double occ = 0;
    for (int m : win) occ += p4[m];
    worst4 = std::max(worst4, occ);
  }
  o.check(worst4 < 0.02, f("4-wave antipodal occupancy max %.4f", worst4));
  return o;
}

}  // namespace

int main() {
  struct Item {
    const char* name;
    std::function<Outcome()> fn;
    double budget;
  };
  const std::vector<Item> items{
      {"A1 3-cycle recurrences", a1, 1},       {"A2 refocusing", a2, 5},
      {"A3 breathing periods", a3, 10},        {"A4 torus trajectories", a4, 20},
      {"A5 cylinder reduction", a5, 30},       {"A6 oracle equivalence", a6, 1e9},
      {"A7 dispersion correctness", a7, 1e9},  {"A8 mask synthesis", a8, 60},
      {"A9 closed-form models", a9, 1e9}};
  int failed = 0;
  for (const auto& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.fn();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (it.budget < 1e8) o.check(secs < it.budget, f("runtime %.3f s (< %.0f s)", secs, it.budget));
    else o.check(true, f("runtime %.3f s", secs));
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", it.name, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(items.size()) - failed, items.size());
  return failed == 0 ? 0 : 1;
}
