#include "qwalk/cli/exporters.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qwalk/seed.hpp"

namespace qw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_num(double v) {
  if (v == 0) v = 0;  // drop negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string distributions_csv(const std::vector<Distribution>& frames,
                              const std::vector<int>& origin, int display_offset) {
  std::string out;
  if (frames.empty()) return out;
  const bool two_d = frames[0].shape.size() == 2;
  out += two_d ? "t,m,n,P\n" : "t,m,P\n";
  for (size_t t = 0; t < frames.size(); ++t) {
    const auto& f = frames[t];
    for (size_t k = 0; k < f.p.size(); ++k) {
      out += std::to_string(t) + ",";
      if (two_d) {
        const int i = static_cast<int>(k) / f.shape[1], j = static_cast<int>(k) % f.shape[1];
        out += std::to_string(i - origin[0] + (origin[0] ? 0 : display_offset)) + "," +
               std::to_string(j - origin[1] + (origin[1] ? 0 : display_offset)) + ",";
      } else {
        out += std::to_string(static_cast<int>(k) - origin[0] + display_offset) + ",";
      }
      out += fmt_num(f.p[k]) + "\n";
    }
  }
  return out;
}

std::vector<std::vector<double>> read_distributions_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> frames;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const size_t t = std::stoul(cells.front());
    if (frames.size() <= t) frames.resize(t + 1);
    frames[t].push_back(std::stod(cells.back()));
  }
  return frames;
}

std::string bands_csv(const Protocol& p, const MomentumGrid& grid) {
  const bool two_d = grid.dim() == 2;
  std::string out = two_d ? "q_x,q_y,E_plus,E_minus,n_x,n_y,n_z,v_g\n"
                          : "q_x,E_plus,E_minus,n_x,n_y,n_z,v_g\n";
  for (int k = 0; k < grid.total; ++k) {
    const auto q = grid.point(k);
    const auto b = bloch_decompose(compose_protocol(p, q));
    auto energy = [&](double dx, double dy) {
      const std::array<double, 2> qq{q[0] + dx, q[1] + dy};
      return bloch_decompose(compose_protocol(p, qq)).energy;
    };
    const double h = 1e-5;
    double vg = (energy(h, 0) - energy(-h, 0)) / (2 * h);
    if (two_d) {
      const double vy = (energy(0, h) - energy(0, -h)) / (2 * h);
      vg = std::hypot(vg, vy);
    }
    out += fmt_num(q[0]) + ",";
    if (two_d) out += fmt_num(q[1]) + ",";
    out += fmt_num(b.energy) + "," + fmt_num(-b.energy) + "," + fmt_num(b.axis(0)) + "," +
           fmt_num(b.axis(1)) + "," + fmt_num(b.axis(2)) + "," + fmt_num(vg) + "\n";
  }
  return out;
}

namespace {
double pick(const MaskPoint& p, int which) {
  return which == 1 ? p.d1 : which == 2 ? p.d2 : p.d3;
}
}  // namespace

std::string mask_csv(const RetarderStack& s, const MomentumGrid& grid, int which) {
  const bool two_d = grid.dim() == 2;
  std::string out = two_d ? "h_x,h_y,q_x,q_y,Delta_radians\n" : "h_x,q_x,Delta_radians\n";
  for (int k = 0; k < grid.total; ++k) {
    const auto q = grid.point(k);
    if (two_d) {
      out += std::to_string(k / grid.shape[1] + 1) + "," + std::to_string(k % grid.shape[1] + 1) +
             "," + fmt_num(q[0]) + "," + fmt_num(q[1]) + ",";
    } else {
      out += std::to_string(k + 1) + "," + fmt_num(q[0]) + ",";
    }
    out += fmt_num(pick(s.points[k], which)) + "\n";
  }
  return out;
}

int phase_level(double delta) {
  const int l = static_cast<int>(std::floor(wrap_phase(delta) / two_pi * 256.0));
  return std::clamp(l, 0, 255);
}

std::string mask_pgm(const RetarderStack& s, int which) {
  const int rows = s.shape.size() == 2 ? s.shape[0] : 1;
  const int cols = s.shape.size() == 2 ? s.shape[1] : s.shape[0];
  std::string out = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  for (const auto& p : s.points) out.push_back(static_cast<char>(phase_level(pick(p, which))));
  return out;
}

std::string colormap_hex(int level) {
  // black -> blue -> magenta -> orange -> yellow -> white, linear in 5 segments
  static const std::array<std::array<int, 3>, 6> stops{{{0, 0, 0},
                                                        {20, 30, 140},
                                                        {150, 30, 140},
                                                        {240, 110, 30},
                                                        {250, 220, 40},
                                                        {255, 255, 255}}};
  level = std::clamp(level, 0, 255);
  const double x = level / 255.0 * 5.0;
  const int seg = std::min(4, static_cast<int>(x));
  const double f = x - seg;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(stops[seg][c] + f * (stops[seg + 1][c] - stops[seg][c])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string heatmap_svg(const std::vector<std::vector<double>>& rows, const std::string& title) {
  const int cell = 8;
  const int nr = static_cast<int>(rows.size());
  const int nc = nr ? static_cast<int>(rows[0].size()) : 0;
  double mx = 0;
  for (const auto& r : rows)
    for (double v : r) mx = std::max(mx, v);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(nc * cell) + "\" height=\"" + std::to_string(nr * cell) +
                    "\" shape-rendering=\"crispEdges\">\n<title>" + title + "</title>\n";
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      const int lvl = mx > 0 ? static_cast<int>(std::floor(rows[i][j] / mx * 255.0 + 0.5)) : 0;
      out += "<rect x=\"" + std::to_string(j * cell) + "\" y=\"" + std::to_string(i * cell) +
             "\" width=\"" + std::to_string(cell) + "\" height=\"" + std::to_string(cell) +
             "\" fill=\"" + colormap_hex(lvl) + "\"/>\n";
    }
  out += "</svg>\n";
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

json manifest_for(const fs::path& dir, const std::vector<fs::path>& files) {
  json m;
  m["property_test_seed"] = kPropertySeed;
  json list = json::array();
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    list.push_back({{"file", fs::relative(f, dir).generic_string()},
                    {"bytes", data.size()},
                    {"sha256", sha256_hex(data)}});
  }
  m["files"] = list;
  return m;
}

}  // namespace qw::cli
