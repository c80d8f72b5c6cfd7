#include "qwalk/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qwalk/analysis.hpp"
#include "qwalk/cli/exporters.hpp"
#include "qwalk/masks.hpp"
#include "qwalk/spectrum.hpp"

namespace qw::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw std::runtime_error("scenario field '" + field + "': " + msg);
}

template <class T>
T get_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) field_error(path + key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    field_error(path + key, e.what());
  }
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad number: " + item);
  }
  return out;
}

Mat2 parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) field_error(path, "expected 4 [re, im] pairs");
  Mat2 m;
  for (int k = 0; k < 4; ++k) {
    const auto& e = j[k];
    if (!e.is_array() || e.size() != 2) field_error(path, "expected [re, im]");
    m(k / 2, k % 2) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

Mat2 named_coin(const std::string& n) {
  if (n == "w") return coin_w();
  if (n == "w-sigma2") return coin_w_sigma2();
  if (n == "identity") return coin_identity();
  if (n == "isigma1") return coin_isigma1();
  throw std::runtime_error("unknown coin name: " + n);
}

}  // namespace

Protocol resolve_protocol(const json& j, std::string& label) {
  if (j.is_string()) {
    label = j.get<std::string>();
    return preset(label);
  }
  if (!j.is_object() || !j.contains("primitives"))
    field_error("protocol", "expected preset name or {\"primitives\": [...]}");
  Protocol p;
  p.name = j.value("name", std::string("inline"));
  label = p.name;
  int idx = 0;
  for (const auto& e : j.at("primitives")) {
    const std::string path = "protocol.primitives[" + std::to_string(idx++) + "].";
    const auto type = get_field<std::string>(e, "type", path);
    if (type == "translation") {
      p.steps.push_back(Primitive::translation(get_field<int>(e, "axis", path),
                                               get_field<double>(e, "delta", path)));
    } else if (type == "coin") {
      if (!e.contains("matrix")) field_error(path + "matrix", "missing");
      const auto& m = e.at("matrix");
      p.steps.push_back(Primitive::make_coin(
          m.is_string() ? named_coin(m.get<std::string>()) : parse_matrix(m, path + "matrix")));
    } else {
      field_error(path + "type", "unknown primitive '" + type + "'");
    }
  }
  if (j.contains("band_offset")) p.band_offset = j.at("band_offset").get<std::vector<double>>();
  p.validate();
  return p;
}

InitSpec parse_init_flag(const std::string& s) {
  InitSpec in;
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--init needs kind:values");
  const auto kind = s.substr(0, colon);
  const auto vals = split_doubles(s.substr(colon + 1));
  if (kind == "localized") {
    if (vals.empty() || vals.size() > 2) throw std::invalid_argument("localized:M0[,N0]");
    in.kind = InitSpec::Kind::localized;
    in.site.clear();
    for (double v : vals) in.site.push_back(static_cast<int>(v));
  } else if (kind == "wavepacket") {
    if (vals.size() != 3) throw std::invalid_argument("wavepacket:M0,Q0,W");
    in.kind = InitSpec::Kind::wavepacket;
    in.site = {static_cast<int>(vals[0])};
    in.q0 = {vals[1]};
    in.width = vals[2];
  } else {
    throw std::invalid_argument("unknown init kind: " + kind);
  }
  return in;
}

PolSpec parse_pol_flag(const std::string& s) {
  PolSpec p;
  if (s == "H") p.value = pol_h();
  else if (s == "V") p.value = pol_v();
  else if (s == "band+") p.kind = PolSpec::Kind::band_plus;
  else if (s == "band-") p.kind = PolSpec::Kind::band_minus;
  else if (s.rfind("custom:", 0) == 0) {
    const auto v = split_doubles(s.substr(7));
    if (v.size() != 4) throw std::invalid_argument("custom:a,b,c,d (re/im of H and V)");
    p.value = Vec2(cplx(v[0], v[1]), cplx(v[2], v[3]));
    if (p.value.norm() == 0) throw std::invalid_argument("zero polarization");
    p.value.normalize();
  } else {
    throw std::invalid_argument("unknown polarization: " + s);
  }
  return p;
}

Scenario parse_scenario(const json& j) {
  Scenario s;
  s.name = j.value("name", std::string("adhoc"));
  s.description = j.value("description", std::string());
  if (!j.contains("protocol")) field_error("protocol", "missing");
  s.protocol = resolve_protocol(j.at("protocol"), s.protocol_label);

  const auto& lat = j.contains("lattice") ? j.at("lattice") : json();
  if (!lat.is_object()) field_error("lattice", "missing or not an object");
  s.lattice_kind = get_field<std::string>(lat, "kind", "lattice.");
  if (s.lattice_kind == "ring") {
    s.sizes = {get_field<int>(lat, "n", "lattice.")};
  } else if (s.lattice_kind == "torus") {
    s.sizes = {get_field<int>(lat, "nx", "lattice."), get_field<int>(lat, "ny", "lattice.")};
  } else if (s.lattice_kind == "cylinder") {
    s.sizes = {get_field<int>(lat, "ny", "lattice.")};
    s.window = lat.value("window", 0);
  } else {
    field_error("lattice.kind", "expected ring, torus or cylinder");
  }
  for (int n : s.sizes)
    if (n < 1) field_error("lattice", "sizes must be positive");

  s.steps = j.value("steps", 0);
  if (s.steps < 0) field_error("steps", "must be >= 0");

  if (j.contains("init")) {
    const auto& in = j.at("init");
    const auto kind = get_field<std::string>(in, "kind", "init.");
    if (kind == "localized") {
      s.init.kind = InitSpec::Kind::localized;
      s.init.site = get_field<std::vector<int>>(in, "site", "init.");
    } else if (kind == "wavepacket") {
      s.init.kind = InitSpec::Kind::wavepacket;
      s.init.site = get_field<std::vector<int>>(in, "center", "init.");
      s.init.q0 = get_field<std::vector<double>>(in, "q0", "init.");
      s.init.width = get_field<double>(in, "width", "init.");
      const auto frame = in.value("q0_frame", std::string("lattice"));
      if (frame != "lattice" && frame != "band") field_error("init.q0_frame", "lattice or band");
      s.init.q0_band_frame = frame == "band";
      if (s.init.width <= 0) field_error("init.width", "must be positive");
    } else {
      field_error("init.kind", "expected localized or wavepacket");
    }
  }
  const int dim = static_cast<int>(s.lattice_kind == "ring" ? 1 : 2);
  if (static_cast<int>(s.init.site.size()) != dim)
    field_error("init", "site/center needs " + std::to_string(dim) + " entries");
  if (s.init.kind == InitSpec::Kind::wavepacket && static_cast<int>(s.init.q0.size()) != dim)
    field_error("init.q0", "needs " + std::to_string(dim) + " entries");
  if (s.protocol.dim() > dim) field_error("protocol", "uses more axes than the lattice");

  if (j.contains("polarization")) {
    const auto& p = j.at("polarization");
    if (p.is_string()) {
      try {
        s.pol = parse_pol_flag(p.get<std::string>());
      } catch (const std::exception& e) {
        field_error("polarization", e.what());
      }
    } else if (p.is_array() && p.size() == 4) {
      auto v = p.get<std::vector<double>>();
      s.pol.value = Vec2(cplx(v[0], v[1]), cplx(v[2], v[3])).normalized();
    } else {
      field_error("polarization", "expected H, V, band+, band- or [a,b,c,d]");
    }
  }
  if (j.contains("outputs")) s.outputs = j.at("outputs").get<std::vector<std::string>>();
  for (const auto& o : s.outputs) {
    static const std::vector<std::string> known{"distributions", "analysis", "bands",
                                                "masks", "heatmap", "far_field"};
    if (std::find(known.begin(), known.end(), o) == known.end())
      field_error("outputs", "unknown output '" + o + "'");
  }
  if (j.contains("envelope")) {
    const auto& e = j.at("envelope");
    EnvelopeSpec env{get_field<double>(e, "sigma", "envelope."),
                     e.value("window", 1)};
    if (env.sigma < 0 || env.window < 1) field_error("envelope", "sigma >= 0, window >= 1");
    s.envelope = env;
  }
  s.display_offset = j.value("display_offset", 0);
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return parse_scenario(j);
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["protocol"] = s.protocol_label;
  j["lattice"] = {{"kind", s.lattice_kind}, {"sizes", s.sizes}, {"window", s.window}};
  j["steps"] = s.steps;
  j["outputs"] = s.outputs;
  return j;
}

LatticeSpec scenario_lattice(const Scenario& s) {
  if (s.lattice_kind == "ring") return LatticeSpec::ring(s.sizes[0]);
  if (s.lattice_kind == "torus") return LatticeSpec::torus(s.sizes[0], s.sizes[1]);
  int support = 1;
  if (s.init.kind == InitSpec::Kind::wavepacket)
    support = 2 * static_cast<int>(std::ceil(4 * s.init.width)) + 1;
  const int win = s.window > 0 ? s.window : emulated_window(s.steps, support);
  return LatticeSpec::cylinder(s.sizes[0], win);
}

std::vector<int> scenario_site(const Scenario& s, const LatticeSpec& l) {
  std::vector<int> site = s.init.site;
  for (int a = 0; a < l.dim(); ++a) {
    if (l.axes[a].boundary == Boundary::emulated_infinite) site[a] += l.axes[a].extent() / 2;
    if (site[a] < 0 || site[a] >= l.axes[a].extent())
      throw std::runtime_error("init site outside the lattice on axis " + std::to_string(a));
  }
  return site;
}

MomentumState scenario_initial_state(const Scenario& s, const LatticeSpec& l) {
  const auto site = scenario_site(s, l);
  std::vector<double> k(l.dim(), 0.0);  // lattice momentum of the centre
  std::vector<double> q0(l.dim(), 0.0);
  if (s.init.kind == InitSpec::Kind::wavepacket) {
    for (int a = 0; a < l.dim(); ++a) {
      if (s.init.q0_band_frame) {
        k[a] = to_lattice_momentum(s.protocol, s.init.q0[a], a);
        q0[a] = -k[a];
      } else {
        q0[a] = s.init.q0[a];
        k[a] = wrap_positive(-q0[a]);
      }
    }
  }
  Vec2 pol = s.pol.value;
  if (s.pol.kind != PolSpec::Kind::fixed) {
    const auto b = bloch_decompose(compose_protocol(s.protocol, k));
    pol = b.eigenvector(s.pol.kind == PolSpec::Kind::band_plus ? +1 : -1);
  }
  if (s.init.kind == InitSpec::Kind::localized) return prepare_localized(l, site, pol);
  return prepare_wavepacket(l, Wavepacket{site, q0, s.init.width, pol});
}

namespace {

std::vector<double> site_series(const std::vector<Distribution>& frames, int k) {
  std::vector<double> v;
  for (const auto& f : frames) v.push_back(f.p[k]);
  return v;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const LatticeSpec lattice = scenario_lattice(s);
  const MomentumGrid grid = build_momentum_grid(lattice);
  const MomentumState s0 = scenario_initial_state(s, lattice);
  const auto frames = run_distributions(s0, s.protocol, s.steps);
  const auto site = scenario_site(s, lattice);
  const auto shape = lattice.shape();
  const int k0 = flat_index(shape, site[0], site.size() > 1 ? site[1] : 0);

  RunResult r;
  auto has = [&](const char* o) {
    return std::find(s.outputs.begin(), s.outputs.end(), o) != s.outputs.end();
  };
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text(out_dir / name, content);
    r.files.push_back(out_dir / name);
  };

  double worst_norm = 0;
  for (const auto& f : frames) worst_norm = std::max(worst_norm, std::abs(f.total() - 1));
  if (worst_norm > 1e-10)
    throw std::runtime_error("invariant violated: norm conservation (" +
                             std::to_string(worst_norm) + ")");

  json summary;
  summary["scenario"] = scenario_to_json(s);
  summary["total_sites"] = lattice.total();
  summary["max_norm_deviation"] = worst_norm;

  std::vector<int> origin(lattice.dim(), 0);
  for (int a = 0; a < lattice.dim(); ++a)
    if (lattice.axes[a].boundary == Boundary::emulated_infinite)
      origin[a] = lattice.axes[a].extent() / 2;
  const int offset = s.display_offset;

  if (has("distributions")) emit("distributions.csv", distributions_csv(frames, origin, offset));

  if (has("analysis")) {
    json a;
    const auto tr = peak_trajectory(frames);
    a["peak_trajectory"] = tr.sites;
    a["initial_site_probability"] = site_series(frames, k0);
    if (s.steps >= 4) a["initial_site_dominant_period"] = dominant_period(site_series(frames, k0));
    a["initial_site_local_maxima"] = smoothed_local_maxima(site_series(frames, k0));
    if (lattice.dim() == 1) {
      const auto win = antipodal_window(shape[0], site[0]);
      std::vector<double> occ;
      for (const auto& f : frames) occ.push_back(window_occupancy(f, win));
      a["antipodal_sites"] = win;
      a["antipodal_occupancy"] = occ;
    }
    if (lattice.total() <= 4096 && s.steps >= 1) {
      json rec = json::array();
      for (const auto& x : find_recurrences(s.protocol, lattice, s.steps, 1e-9, &s0))
        rec.push_back({{"t", x.t},
                       {"kind", x.kind == RecurrenceKind::distributional
                                    ? "distributional" : "exact_up_to_phase"},
                       {"score", x.score}});
      a["recurrences"] = rec;
      if (s.steps >= 4) {
        const auto b = best_recurrence(s.protocol, s0, 4, s.steps);
        a["best_near_recurrence"] = {{"t", b.t}, {"similarity", b.score}};
      }
    }
    summary["analysis"] = a;
  }

  if (has("bands")) emit("bands.csv", bands_csv(s.protocol, grid));

  if (has("masks")) {
    std::vector<Mat2> targets(grid.total);
    for (int k = 0; k < grid.total; ++k) targets[k] = step_power(s.protocol, grid.point(k), s.steps);
    const auto stack = wrap_masks(solve_mask_grid(targets, grid.shape));
    double worst = 1;
    int fallbacks = 0;
    for (size_t k = 0; k < stack.points.size(); ++k) {
      const auto& p = stack.points[k];
      worst = std::min(worst, fidelity(reconstruct(p.d1, p.d2, p.d3), targets[k]));
      fallbacks += p.branch == MaskBranch::fallback;
    }
    if (worst < 1 - 1e-9)
      throw std::runtime_error("invariant violated: mask reconstruction fidelity");
    for (int w = 1; w <= 3; ++w) {
      emit("mask_D" + std::to_string(w) + ".csv", mask_csv(stack, grid, w));
      emit("mask_D" + std::to_string(w) + ".pgm", mask_pgm(stack, w));
    }
    summary["masks"] = {{"min_fidelity", worst}, {"fallback_points", fallbacks}};
  }

  if (has("heatmap")) {
    std::vector<std::vector<double>> rows;
    if (lattice.dim() == 1) {
      for (const auto& f : frames) rows.push_back(f.p);
    } else {
      const auto& f = frames.back();
      for (int i = 0; i < shape[0]; ++i)
        rows.emplace_back(f.p.begin() + i * shape[1], f.p.begin() + (i + 1) * shape[1]);
    }
    emit("heatmap.svg", heatmap_svg(rows, s.name));
  }

  if (has("far_field") || s.envelope) {
    const EnvelopeSpec env = s.envelope.value_or(EnvelopeSpec{});
    MomentumState last = evolve_stepwise(s0, s.protocol, s.steps);
    const auto ff = far_field_with_envelope(last, env);
    emit("far_field.csv", distributions_csv({ff}, std::vector<int>(ff.shape.size(), 0), 0));
  }

  emit("summary.json", summary.dump(2) + "\n");
  json manifest = manifest_for(out_dir, r.files);
  write_json(out_dir / "manifest.json", manifest);
  r.files.push_back(out_dir / "manifest.json");
  r.summary = summary;
  return r;
}

RunResult run_scenario_file(const fs::path& path, const fs::path& out_dir) {
  return run_scenario(load_scenario(path), out_dir);
}

fs::path bundled_scenario_dir() {
  if (const char* env = std::getenv("QWALK_SCENARIO_DIR")) return env;
  return QWALK_SCENARIO_DIR;
}

std::vector<fs::path> bundled_scenarios() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(bundled_scenario_dir()))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qw::cli
