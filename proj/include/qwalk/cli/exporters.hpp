#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/evolve.hpp"
#include "qwalk/masks.hpp"
#include "qwalk/spectrum.hpp"

namespace qw::cli {

// %.17g, '.' separator
std::string fmt_num(double v);

void write_text(const std::filesystem::path& p, const std::string& content);
void write_json(const std::filesystem::path& p, const nlohmann::json& j);

// rows: t, m[, n], P  (emulated axes reported relative to their centre)
std::string distributions_csv(const std::vector<Distribution>& frames,
                              const std::vector<int>& origin, int display_offset);
std::vector<std::vector<double>> read_distributions_csv(const std::filesystem::path& p);

std::string bands_csv(const Protocol& p, const MomentumGrid& grid);
std::string mask_csv(const RetarderStack& s, const MomentumGrid& grid, int which);

// 8-bit P5 image; level = floor(delta / 2pi * 256) for delta in [0, 2pi)
std::string mask_pgm(const RetarderStack& s, int which);
int phase_level(double delta);

// Fixed 256-level colormap (index -> "#rrggbb").
std::string colormap_hex(int level);
// rows x cols heatmap, values scaled by the global maximum
std::string heatmap_svg(const std::vector<std::vector<double>>& rows,
                        const std::string& title);

std::string sha256_hex(const std::string& data);
nlohmann::json manifest_for(const std::filesystem::path& dir,
                            const std::vector<std::filesystem::path>& files);

}  // namespace qw::cli
