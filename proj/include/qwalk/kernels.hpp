#pragma once
// Data-parallel maps over momentum grids. The kernels:: versions use OpenMP;
// serial:: versions are plain loops kept as the reference for tests and the
// benchmark.

#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/masks.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/spectrum.hpp"

namespace qw::kernels {
std::vector<Mat2> unitaries(const Protocol& p, const MomentumGrid& g);
std::vector<BlochDecomp> band_points(const Protocol& p, const MomentumGrid& g);
void apply(const std::vector<Mat2>& u, std::vector<Vec2>& c, int times = 1);
std::vector<MaskPoint> solve_grid(const std::vector<Mat2>& targets);
}  // namespace qw::kernels

namespace qw::serial {
std::vector<Mat2> unitaries(const Protocol& p, const MomentumGrid& g);
std::vector<BlochDecomp> band_points(const Protocol& p, const MomentumGrid& g);
void apply(const std::vector<Mat2>& u, std::vector<Vec2>& c, int times = 1);
std::vector<MaskPoint> solve_grid(const std::vector<Mat2>& targets);
}  // namespace qw::serial
