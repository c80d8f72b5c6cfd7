#include "qwalk/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace qw {

namespace {
constexpr double kBandOffset1D = pi;
constexpr double kBandOffset2D = 0.0;
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

Mat2 coin_w() { return inv_sqrt2 * (pauli::s0() + I * pauli::s1()); }
Mat2 coin_w_sigma2() { return inv_sqrt2 * (pauli::s0() + I * pauli::s2()); }
Mat2 coin_identity() { return pauli::s0(); }
Mat2 coin_isigma1() { return I * pauli::s1(); }

Primitive Primitive::translation(int axis, double delta) {
  Primitive p;
  p.kind = Kind::translation;
  p.axis = axis;
  p.delta = delta;
  return p;
}

Primitive Primitive::make_coin(const Mat2& m) {
  Primitive p;
  p.kind = Kind::coin;
  p.coin = m;
  return p;
}

int Protocol::dim() const {
  int d = 1;
  for (const auto& s : steps)
    if (s.kind == Primitive::Kind::translation) d = std::max(d, s.axis + 1);
  return d;
}

void Protocol::validate() const {
  for (const auto& s : steps) {
    if (s.kind == Primitive::Kind::translation && (s.axis < 0 || s.axis > 1))
      throw std::invalid_argument("translation axis must be 0 or 1");
    if (s.kind == Primitive::Kind::coin &&
        !(s.coin.adjoint() * s.coin).isApprox(Mat2::Identity(), 1e-12))
      throw std::invalid_argument("coin matrix is not unitary");
  }
}

Protocol preset(const std::string& name) {
  using P = Primitive;
  Protocol p;
  p.name = name;
  if (name == "u1d" || name == "u1d-sigma0" || name == "u1d-isigma1" ||
      name == "u1d-w2") {
    Mat2 c = coin_w();
    if (name == "u1d-sigma0") c = coin_identity();
    if (name == "u1d-isigma1") c = coin_isigma1();
    if (name == "u1d-w2") c = coin_w_sigma2();
    p.steps = {P::translation(0, pi), P::make_coin(c)};
    p.band_offset = {name == "u1d" ? kBandOffset1D : 0.0};
  } else if (name == "u2d") {
    p.steps = {P::make_coin(coin_w()), P::translation(0, pi / 2),
               P::translation(1, pi / 2)};
    p.band_offset = {kBandOffset2D, kBandOffset2D};
  } else {
    throw std::invalid_argument("unknown protocol preset: " + name);
  }
  return p;
}

std::vector<std::string> preset_names() {
  return {"u1d", "u1d-sigma0", "u1d-isigma1", "u1d-w2", "u2d"};
}

double to_lattice_momentum(const Protocol& p, double q_label, int axis) {
  double off = axis < static_cast<int>(p.band_offset.size())
                   ? p.band_offset[axis] : 0.0;
  return wrap_positive(q_label - off);
}

Mat2 translation_momentum_rep(double delta, double q) {
  const cplx e = std::exp(-I * q);
  return std::cos(delta / 2) * pauli::s0() +
         I * std::sin(delta / 2) *
             (e * pauli::minus() + std::conj(e) * pauli::plus());
}

Mat2 compose_protocol(const Protocol& p, std::span<const double> q) {
  Mat2 u = Mat2::Identity();
  for (const auto& s : p.steps) {
    if (s.kind == Primitive::Kind::coin) {
      u = s.coin * u;
    } else {
      if (s.axis >= static_cast<int>(q.size()))
        throw std::invalid_argument("momentum has fewer components than axes");
      u = translation_momentum_rep(s.delta, q[s.axis]) * u;
    }
  }
  return u;
}

Mat2 mat_power(const Mat2& u, int t) {
  if (t < 0) throw std::invalid_argument("negative power");
  if (t <= 8) {
    Mat2 r = Mat2::Identity();
    for (int i = 0; i < t; ++i) r = u * r;
    return r;
  }
  Eigen::ComplexEigenSolver<Mat2> es(u);
  const Mat2& v = es.eigenvectors();
  Vec2 lam = es.eigenvalues();
  // unit-modulus eigenvalues; renormalize so phases do not drift with t
  for (int i = 0; i < 2; ++i) {
    const double ph = std::arg(lam(i));
    lam(i) = std::exp(I * (ph * t));
  }
  // eigenvectors of a unitary are orthogonal; guard the degenerate case
  if (std::abs(v.col(0).dot(v.col(1))) > 1e-10) {
    Mat2 r = Mat2::Identity(), b = u;
    for (int e = t; e > 0; e >>= 1) {
      if (e & 1) r = b * r;
      b = b * b;
    }
    return r;
  }
  Mat2 vn = v;
  vn.col(0).normalize();
  vn.col(1).normalize();
  return vn * lam.asDiagonal() * vn.adjoint();
}

Mat2 step_power(const Protocol& p, std::span<const double> q, int t) {
  return mat_power(compose_protocol(p, q), t);
}

MatX position_space_unitary(const Protocol& p, const LatticeSpec& lattice) {
  lattice.validate();
  for (const auto& a : lattice.axes)
    if (a.boundary != Boundary::cyclic)
      throw std::invalid_argument("position oracle needs cyclic axes");
  const auto shape = lattice.shape();
  const int nt = lattice.total();
  const int d = lattice.dim();
  MatX u = MatX::Identity(2 * nt, 2 * nt);
  for (const auto& s : p.steps) {
    MatX op = MatX::Zero(2 * nt, 2 * nt);
    if (s.kind == Primitive::Kind::coin) {
      for (int k = 0; k < nt; ++k) op.block<2, 2>(2 * k, 2 * k) = s.coin;
    } else {
      if (s.axis >= d) throw std::invalid_argument("axis beyond lattice");
      const double c = std::cos(s.delta / 2), sn = std::sin(s.delta / 2);
      for (int k = 0; k < nt; ++k) {
        int i = d == 1 ? k : k / shape[1];
        int j = d == 1 ? 0 : k % shape[1];
        int i2 = i, j2 = j;
        if (s.axis == 0) i2 = (i + 1) % shape[0];
        else j2 = (j + 1) % shape[1];
        const int kp = flat_index(shape, i2, j2);
        // cos(d/2) on site; i sin(d/2) (|m+1><m| s- + |m><m+1| s+)
        op(2 * k, 2 * k) += c;
        op(2 * k + 1, 2 * k + 1) += c;
        op(2 * kp + 1, 2 * k) += I * sn;  // H at m -> V at m+1
        op(2 * k, 2 * kp + 1) += I * sn;  // V at m+1 -> H at m
      }
    }
    u = op * u;
  }
  return u;
}

}  // namespace qw
