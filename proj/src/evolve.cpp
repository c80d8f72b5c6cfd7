#include "qwalk/evolve.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qwalk/kernels.hpp"

namespace qw {

namespace {

// In-place unitary DFT along one axis. sign=+1: momentum -> position.
void dft_axis(std::vector<Vec2>& data, const std::vector<int>& shape, int axis,
              int sign) {
  const int n = shape[axis];
  const int other = static_cast<int>(data.size()) / n;
  const int stride = (shape.size() == 2 && axis == 0) ? shape[1] : 1;
  std::vector<cplx> tw(static_cast<size_t>(n) * n);
  for (int m = 0; m < n; ++m)
    for (int h = 0; h < n; ++h)
      tw[m * n + h] = std::exp(I * (sign * two_pi * m * (h + 1) / n)) /
                      std::sqrt(static_cast<double>(n));
#pragma omp parallel for schedule(static)
  for (int o = 0; o < other; ++o) {
    // offset of the o-th line along `axis`
    const int base = (stride == 1) ? o * n : o;
    std::vector<Vec2> line(n), out(n, Vec2::Zero());
    for (int i = 0; i < n; ++i) line[i] = data[base + i * stride];
    if (sign > 0) {
      for (int m = 0; m < n; ++m)
        for (int h = 0; h < n; ++h) out[m] += tw[m * n + h] * line[h];
    } else {
      for (int h = 0; h < n; ++h)
        for (int m = 0; m < n; ++m) out[h] += tw[m * n + h] * line[m];
    }
    for (int i = 0; i < n; ++i) data[base + i * stride] = out[i];
  }
}

int minimal_image(int m, int m0, int n) {
  int d = ((m - m0) % n + n) % n;
  if (d > n / 2) d -= n;
  return d;
}

}  // namespace

double MomentumState::norm() const {
  double s = 0;
  for (const auto& v : c) s += v.squaredNorm();
  return std::sqrt(s);
}

double Distribution::total() const {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

MomentumState to_momentum(const MomentumGrid& grid, const std::vector<Vec2>& psi) {
  if (static_cast<int>(psi.size()) != grid.total)
    throw std::invalid_argument("field size does not match grid");
  MomentumState s{grid, psi};
  for (int a = 0; a < grid.dim(); ++a) dft_axis(s.c, grid.shape, a, -1);
  return s;
}

std::vector<Vec2> to_position(const MomentumState& s) {
  std::vector<Vec2> psi = s.c;
  for (int a = 0; a < s.grid.dim(); ++a) dft_axis(psi, s.grid.shape, a, +1);
  return psi;
}

MomentumState prepare_localized(const LatticeSpec& lattice,
                                const std::vector<int>& m0, const Vec2& pol) {
  const auto grid = build_momentum_grid(lattice);
  if (static_cast<int>(m0.size()) != lattice.dim())
    throw std::invalid_argument("site index needs one entry per axis");
  for (int a = 0; a < lattice.dim(); ++a)
    if (m0[a] < 0 || m0[a] >= grid.shape[a])
      throw std::out_of_range("initial site outside the lattice");
  const Vec2 s = pol.normalized();
  MomentumState st{grid, std::vector<Vec2>(grid.total)};
  const double norm = 1.0 / std::sqrt(static_cast<double>(grid.total));
  for (int k = 0; k < grid.total; ++k) {
    const auto q = grid.point(k);
    double ph = 0;
    for (int a = 0; a < lattice.dim(); ++a) ph += q[a] * m0[a];
    st.c[k] = std::exp(-I * ph) * norm * s;
  }
  return st;
}

MomentumState prepare_wavepacket(const LatticeSpec& lattice, const Wavepacket& wp) {
  if (wp.w <= 0) throw std::invalid_argument("wavepacket width must be positive");
  const auto grid = build_momentum_grid(lattice);
  const int d = lattice.dim();
  if (static_cast<int>(wp.m0.size()) != d || static_cast<int>(wp.q0.size()) != d)
    throw std::invalid_argument("wavepacket needs one centre/momentum per axis");
  std::vector<std::vector<cplx>> f(d);
  for (int a = 0; a < d; ++a) {
    const int n = grid.shape[a];
    f[a].resize(n);
    for (int m = 0; m < n; ++m) {
      const int dm = minimal_image(m, wp.m0[a], n);
      f[a][m] = std::exp(-double(dm * dm) / (wp.w * wp.w) -
                         I * (wp.q0[a] * (wp.m0[a] + dm)));
    }
  }
  const Vec2 s = wp.pol.normalized();
  std::vector<Vec2> psi(grid.total);
  double nrm = 0;
  for (int k = 0; k < grid.total; ++k) {
    cplx amp = d == 1 ? f[0][k] : f[0][k / grid.shape[1]] * f[1][k % grid.shape[1]];
    psi[k] = amp * s;
    nrm += std::norm(amp);
  }
  for (auto& v : psi) v /= std::sqrt(nrm);
  return to_momentum(grid, psi);
}

std::vector<double> wavepacket_momentum(const Wavepacket& wp) {
  std::vector<double> k;
  for (double q : wp.q0) k.push_back(wrap_positive(-q));
  return k;
}

MomentumState evolve_eigenphase(const MomentumState& s, const BandStructure& b, int t) {
  if (!s.grid.same_as(b.grid)) throw std::invalid_argument("grid mismatch");
  if (t < 0) throw std::invalid_argument("negative step count");
  MomentumState out = s;
  const int n = s.grid.total;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    const BlochDecomp& bd = b.points[k];
    const Vec2 up = bd.eigenvector(+1), dn = bd.eigenvector(-1);
    const cplx cu = up.dot(s.c[k]), cd = dn.dot(s.c[k]);
    const double g = bd.phase * t, e = bd.energy * t;
    out.c[k] = std::exp(I * (g + e)) * cu * up + std::exp(I * (g - e)) * cd * dn;
  }
  return out;
}

MomentumState evolve_stepwise(const MomentumState& s, const Protocol& p, int t,
                              Exec exec) {
  if (t < 0) throw std::invalid_argument("negative step count");
  MomentumState out = s;
  if (exec == Exec::parallel) {
    kernels::apply(kernels::unitaries(p, s.grid), out.c, t);
  } else {
    serial::apply(serial::unitaries(p, s.grid), out.c, t);
  }
  return out;
}

Distribution distribution_of(const std::vector<int>& shape,
                             const std::vector<Vec2>& psi) {
  Distribution d{shape, std::vector<double>(psi.size())};
  for (size_t k = 0; k < psi.size(); ++k) d.p[k] = psi[k].squaredNorm();
  return d;
}

Distribution position_distribution(const MomentumState& s) {
  return distribution_of(s.grid.shape, to_position(s));
}

std::vector<Distribution> run_distributions(const MomentumState& s0,
                                            const Protocol& p, int t_max,
                                            Exec exec) {
  std::vector<Distribution> out;
  out.reserve(t_max + 1);
  const auto u = exec == Exec::parallel ? kernels::unitaries(p, s0.grid)
                                        : serial::unitaries(p, s0.grid);
  MomentumState s = s0;
  for (int t = 0; t <= t_max; ++t) {
    out.push_back(position_distribution(s));
    if (t == t_max) break;
    if (exec == Exec::parallel) kernels::apply(u, s.c);
    else serial::apply(u, s.c);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> marginals(const Distribution& d) {
  if (d.shape.size() != 2) throw std::invalid_argument("marginals need a 2D field");
  std::vector<double> pm(d.shape[0], 0.0), pn(d.shape[1], 0.0);
  for (int i = 0; i < d.shape[0]; ++i)
    for (int j = 0; j < d.shape[1]; ++j) {
      pm[i] += d.at(i, j);
      pn[j] += d.at(i, j);
    }
  return {pm, pn};
}

double envelope_amplitude(double sigma, double m) {
  if (sigma == 0) return 1.0;
  return std::exp(-sigma * sigma * m * m / 2);
}

Distribution far_field_with_envelope(const MomentumState& s, const EnvelopeSpec& env) {
  if (env.sigma < 0 || env.window < 1)
    throw std::invalid_argument("invalid envelope spec");
  const auto psi = to_position(s);
  const auto& shape = s.grid.shape;
  Distribution d;
  for (int n : shape) d.shape.push_back(n * env.window);
  int total = 1;
  for (int n : d.shape) total *= n;
  d.p.assign(total, 0.0);
  const int rep0 = -(env.window / 2);
  double sum = 0;
  for (int k = 0; k < total; ++k) {
    double g = 1.0;
    int src = 0;
    if (shape.size() == 1) {
      const int m = rep0 * shape[0] + k;
      g = envelope_amplitude(env.sigma, m);
      src = ((m % shape[0]) + shape[0]) % shape[0];
    } else {
      const int i = k / d.shape[1], j = k % d.shape[1];
      const int mx = rep0 * shape[0] + i, my = rep0 * shape[1] + j;
      g = envelope_amplitude(env.sigma, mx) * envelope_amplitude(env.sigma, my);
      src = flat_index(shape, ((mx % shape[0]) + shape[0]) % shape[0],
                       ((my % shape[1]) + shape[1]) % shape[1]);
    }
    d.p[k] = g * g * psi[src].squaredNorm();
    sum += d.p[k];
  }
  for (auto& v : d.p) v /= sum;
  return d;
}

MatX effective_cylinder_unitary(const Protocol& p, int ny, double qx) {
  if (ny < 1) throw std::invalid_argument("ny must be positive");
  const int dim = 2 * ny;
  MatX u = MatX::Identity(dim, dim);
  for (const auto& s : p.steps) {
    MatX op = MatX::Zero(dim, dim);
    if (s.kind == Primitive::Kind::coin) {
      for (int n = 0; n < ny; ++n) op.block<2, 2>(2 * n, 2 * n) = s.coin;
    } else if (s.axis == 0) {
      const Mat2 t = translation_momentum_rep(s.delta, qx);
      for (int n = 0; n < ny; ++n) op.block<2, 2>(2 * n, 2 * n) = t;
    } else {
      const double c = std::cos(s.delta / 2), sn = std::sin(s.delta / 2);
      for (int n = 0; n < ny; ++n) {
        const int np = (n + 1) % ny;
        op(2 * n, 2 * n) += c;
        op(2 * n + 1, 2 * n + 1) += c;
        op(2 * np + 1, 2 * n) += I * sn;
        op(2 * n, 2 * np + 1) += I * sn;
      }
    }
    u = op * u;
  }
  return u;
}

std::vector<Vec2> evolve_cylinder_effective(const LatticeSpec& lattice,
                                            const std::vector<Vec2>& psi,
                                            const Protocol& p, int t) {
  const auto shape = lattice.shape();
  if (shape.size() != 2) throw std::invalid_argument("cylinder lattice is 2D");
  const int nx = shape[0], ny = shape[1];
  std::vector<Vec2> a = psi;
  dft_axis(a, shape, 0, -1);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    const double qx = two_pi * (i + 1) / nx;
    const MatX u = effective_cylinder_unitary(p, ny, qx);
    Eigen::VectorXcd v(2 * ny);
    for (int j = 0; j < ny; ++j) v.segment<2>(2 * j) = a[i * ny + j];
    for (int s = 0; s < t; ++s) v = u * v;
    for (int j = 0; j < ny; ++j) a[i * ny + j] = v.segment<2>(2 * j);
  }
  dft_axis(a, shape, 0, +1);
  return a;
}

}  // namespace qw
