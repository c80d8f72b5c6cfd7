#include <doctest.h>

#include "oracles.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/seed.hpp"

using namespace qw;

namespace {
double maxabs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }
Mat2 u_at(const Protocol& p, double qx, double qy = 0) {
  const std::array<double, 2> q{qx, qy};
  return compose_protocol(p, std::span<const double>(q.data(), p.dim()));
}
}  // namespace

TEST_CASE("translation in momentum representation") {
  CHECK(maxabs(translation_momentum_rep(0, 1.3) - Mat2::Identity()) < 1e-15);
  const double q = 0.7;
  Mat2 full;
  full << 0, I * std::exp(I * q), I * std::exp(-I * q), 0;
  CHECK(maxabs(translation_momentum_rep(pi, q) - full) < 1e-15);
  std::mt19937_64 rng(kPropertySeed);
  std::uniform_real_distribution<double> un(0, two_pi);
  for (int i = 0; i < 100; ++i) {
    const Mat2 t = translation_momentum_rep(un(rng), un(rng));
    CHECK(maxabs(t.adjoint() * t - Mat2::Identity()) < 1e-14);
  }
}

TEST_CASE("coins") {
  CHECK(maxabs(coin_w() - (pauli::s0() + I * pauli::s1()) / std::sqrt(2.0)) < 1e-15);
  for (const Mat2& c : {coin_w(), coin_w_sigma2(), coin_identity(), coin_isigma1()})
    CHECK(maxabs(c.adjoint() * c - Mat2::Identity()) < 1e-15);
}

TEST_CASE("sigma2 coin preset at q = 0 and pi") {
  const auto p = preset("u1d-w2");
  Mat2 e0;
  e0 << 1, 1, 1, -1;
  e0 *= I / std::sqrt(2.0);
  CHECK(maxabs(u_at(p, 0) - e0) < 1e-15);
  // T(pi) at q = pi is -i s1, so U(pi) = -U(0)
  CHECK(maxabs(u_at(p, pi) + e0) < 1e-14);
}

TEST_CASE("identity coin squares to -I, i sigma1 coin cubes to -I on the 3-ring") {
  std::mt19937_64 rng(kPropertySeed);
  std::uniform_real_distribution<double> un(0, two_pi);
  for (int i = 0; i < 50; ++i)
    CHECK(maxabs(step_power(preset("u1d-sigma0"), std::array<double, 1>{un(rng)}, 2) +
                 Mat2::Identity()) < 1e-14);
  for (int h = 1; h <= 3; ++h)
    CHECK(maxabs(step_power(preset("u1d-isigma1"), std::array<double, 1>{two_pi * h / 3}, 3) +
                 Mat2::Identity()) < 1e-14);
}

TEST_CASE("presets") {
  CHECK(preset("u1d").dim() == 1);
  CHECK(preset("u2d").dim() == 2);
  CHECK(preset_names().size() == 5);
  CHECK_THROWS(preset("nope"));
  CHECK(std::cos(to_lattice_momentum(preset("u1d"), 0.0)) == doctest::Approx(-1));
  CHECK(to_lattice_momentum(preset("u2d"), 1.0, 1) == doctest::Approx(1.0));
  Protocol bad = preset("u1d");
  bad.steps[1].coin(0, 0) = 2;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("dense operator matches the site-by-site oracle") {
  std::mt19937_64 rng(kPropertySeed);
  const std::vector<std::pair<std::string, LatticeSpec>> cases{
      {"u1d", LatticeSpec::ring(1)}, {"u1d", LatticeSpec::ring(2)},
      {"u1d", LatticeSpec::ring(5)}, {"u1d-w2", LatticeSpec::ring(4)},
      {"u2d", LatticeSpec::torus(3, 4)}, {"u2d", LatticeSpec::torus(1, 2)}};
  for (const auto& [name, lat] : cases) {
    const auto p = preset(name);
    const MatX u = position_space_unitary(p, lat);
    const auto psi = oracle::random_field(rng, lat.total());
    Eigen::VectorXcd v(2 * lat.total());
    for (int k = 0; k < lat.total(); ++k) v.segment<2>(2 * k) = psi[k];
    const Eigen::VectorXcd w = u * v;
    const auto ref = oracle::step(psi, p, lat.shape());
    double dev = 0;
    for (int k = 0; k < lat.total(); ++k) dev = std::max(dev, (w.segment<2>(2 * k) - ref[k]).norm());
    CHECK(dev < 1e-14);
    CHECK((u.adjoint() * u - MatX::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS(position_space_unitary(preset("u2d"), LatticeSpec::cylinder(3, 9)));
}

TEST_CASE("the DFT block-diagonalizes one step") {
  std::mt19937_64 rng(kPropertySeed + 1);
  const int n = 7;
  const auto p = preset("u1d");
  const auto psi = oracle::random_field(rng, n);
  const auto before = oracle::dft_1d(psi);
  const auto after = oracle::dft_1d(oracle::step(psi, p, {n}));
  double dev = 0;
  for (int k = 0; k < n; ++k)
    dev = std::max(dev, (after[k] - u_at(p, two_pi * (k + 1) / n) * before[k]).norm());
  CHECK(dev < 1e-13);
}

TEST_CASE("dense operator commutes with lattice shifts") {
  const auto lat = LatticeSpec::torus(3, 4);
  const MatX u = position_space_unitary(preset("u2d"), lat);
  for (int axis : {0, 1}) {
    MatX s = MatX::Zero(u.rows(), u.cols());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) {
        const int to = axis == 0 ? flat_index({3, 4}, (i + 1) % 3, j)
                                 : flat_index({3, 4}, i, (j + 1) % 4);
        const int from = flat_index({3, 4}, i, j);
        s(2 * to, 2 * from) = 1;
        s(2 * to + 1, 2 * from + 1) = 1;
      }
    CHECK((u * s - s * u).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("matrix power agrees with repeated multiplication") {
  std::mt19937_64 rng(kPropertySeed + 2);
  double dev = 0;
  for (int i = 0; i < 20; ++i) {
    const Mat2 u = oracle::random_unitary(rng);
    Mat2 r = Mat2::Identity();
    for (int t = 0; t <= 300; ++t) {
      dev = std::max(dev, maxabs(mat_power(u, t) - r));
      r = u * r;
    }
  }
  CHECK(dev < 1e-10);
  CHECK(maxabs(mat_power(-Mat2::Identity(), 301) + Mat2::Identity()) < 1e-12);
  CHECK_THROWS(mat_power(Mat2::Identity(), -1));
}
