#include "qwalk/cli/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "qwalk/analysis.hpp"
#include "qwalk/cli/exporters.hpp"
#include "qwalk/cli/scenario.hpp"

namespace qw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GeometryFlags {
  int ring = 0;
  std::vector<int> torus;
  int cylinder = 0;

  void add(CLI::App* app) {
    auto* r = app->add_option("--ring", ring, "cyclic 1D lattice of N sites");
    auto* t = app->add_option("--torus", torus, "NX NY torus")->expected(2);
    auto* c = app->add_option("--cylinder", cylinder, "cylinder with NY cyclic sites");
    r->excludes(t)->excludes(c);
    t->excludes(c);
  }

  void apply(Scenario& s) const {
    if (!torus.empty()) {
      s.lattice_kind = "torus";
      s.sizes = torus;
    } else if (cylinder > 0) {
      s.lattice_kind = "cylinder";
      s.sizes = {cylinder};
    } else {
      s.lattice_kind = "ring";
      s.sizes = {ring > 0 ? ring : 15};
    }
  }
};

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"qwalk: quantum walks on rings, tori and cylinders"};
  app.require_subcommand(1);

  // bands
  auto* bands = app.add_subcommand("bands", "write the quasi-energy band CSV");
  std::string b_protocol = "u1d";
  int b_samples = 512;
  std::string b_out;
  GeometryFlags b_geo;
  bands->add_option("--protocol", b_protocol, "preset name");
  bands->add_option("--samples", b_samples, "samples per axis when no lattice is given");
  b_geo.add(bands);
  bands->add_option("--out", b_out, "output directory (stdout if omitted)");

  // evolve
  auto* evolve = app.add_subcommand("evolve", "run a walk and write distributions");
  std::string e_protocol = "u1d", e_init = "localized:0", e_pol = "H", e_out = "run",
              e_env;
  int e_steps = 10;
  GeometryFlags e_geo;
  evolve->add_option("--protocol", e_protocol, "preset name");
  e_geo.add(evolve);
  evolve->add_option("--steps", e_steps, "number of steps")->check(CLI::NonNegativeNumber);
  evolve->add_option("--init", e_init, "localized:M0[,N0] | wavepacket:M0,Q0,W");
  evolve->add_option("--pol", e_pol, "H | V | band+ | band- | custom:a,b,c,d");
  evolve->add_option("--envelope", e_env, "SIGMA,WINDOW beamlet envelope");
  evolve->add_option("--out", e_out, "output directory");

  // masks
  auto* masks = app.add_subcommand("masks", "synthesize retarder masks for U^T");
  std::string m_protocol = "u1d", m_out = "masks";
  int m_steps = 1;
  GeometryFlags m_geo;
  masks->add_option("--protocol", m_protocol, "preset name");
  masks->add_option("--steps", m_steps, "power T of the step operator")
      ->check(CLI::NonNegativeNumber);
  m_geo.add(masks);
  masks->add_option("--out", m_out, "output directory");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "per-step similarity of two runs");
  std::string a_a, a_b, a_out;
  analyze->add_option("--a", a_a, "first run directory")->required();
  analyze->add_option("--b", a_b, "second run directory")->required();
  analyze->add_option("--out", a_out, "write analysis.json here");

  // scenarios
  auto* scen = app.add_subcommand("scenarios", "bundled scenario gallery");
  scen->require_subcommand(1);
  auto* s_list = scen->add_subcommand("list", "list bundled scenarios");
  auto* s_run = scen->add_subcommand("run", "run a bundled scenario by name");
  std::string s_name, s_out = "run";
  s_run->add_option("name", s_name, "scenario name")->required();
  s_run->add_option("--out", s_out, "output directory");

  // run
  auto* run = app.add_subcommand("run", "run a scenario JSON file");
  std::string r_file, r_out = "run";
  run->add_option("file", r_file, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", r_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*bands) {
      Scenario s;
      s.protocol = preset(b_protocol);
      MomentumGrid grid;
      const bool two_d = s.protocol.dim() == 2;
      if (b_geo.ring || !b_geo.torus.empty()) {
        b_geo.apply(s);
        grid = build_momentum_grid(scenario_lattice(s));
      } else {
        grid = build_momentum_grid(two_d ? LatticeSpec::torus(b_samples, b_samples)
                                         : LatticeSpec::ring(b_samples));
      }
      const std::string csv = bands_csv(s.protocol, grid);
      if (b_out.empty()) {
        std::cout << csv;
      } else {
        fs::create_directories(b_out);
        write_text(fs::path(b_out) / "bands.csv", csv);
        write_json(fs::path(b_out) / "manifest.json",
                   manifest_for(b_out, {fs::path(b_out) / "bands.csv"}));
      }
      return 0;
    }
    if (*evolve) {
      Scenario s;
      s.name = "evolve";
      s.protocol = preset(e_protocol);
      s.protocol_label = e_protocol;
      e_geo.apply(s);
      s.steps = e_steps;
      s.init = parse_init_flag(e_init);
      s.pol = parse_pol_flag(e_pol);
      const int dim = s.lattice_kind == "ring" ? 1 : 2;
      if (static_cast<int>(s.init.site.size()) < dim) s.init.site.resize(dim, 0);
      if (static_cast<int>(s.init.q0.size()) < dim) s.init.q0.resize(dim, 0.0);
      s.outputs = {"distributions", "analysis", "heatmap"};
      if (!e_env.empty()) {
        const auto comma = e_env.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("--envelope SIGMA,WINDOW");
        s.envelope = EnvelopeSpec{std::stod(e_env.substr(0, comma)),
                                  std::stoi(e_env.substr(comma + 1))};
      }
      const auto r = run_scenario(s, e_out);
      std::cout << "wrote " << r.files.size() << " files to " << e_out << "\n";
      return 0;
    }
    if (*masks) {
      Scenario s;
      s.name = "masks";
      s.protocol = preset(m_protocol);
      s.protocol_label = m_protocol;
      m_geo.apply(s);
      if (s.protocol.dim() == 2 && s.lattice_kind == "ring") {
        s.lattice_kind = "torus";
        s.sizes = {9, 9};
      }
      s.init.site.assign(s.lattice_kind == "ring" ? 1 : 2, 0);
      s.steps = m_steps;
      s.outputs = {"masks"};
      const auto r = run_scenario(s, m_out);
      print_json(r.summary["masks"]);
      return 0;
    }
    if (*analyze) {
      const auto fa = read_distributions_csv(fs::path(a_a) / "distributions.csv");
      const auto fb = read_distributions_csv(fs::path(a_b) / "distributions.csv");
      const size_t n = std::min(fa.size(), fb.size());
      json j;
      std::vector<double> sims;
      for (size_t t = 0; t < n; ++t) sims.push_back(similarity(fa[t], fb[t]));
      j["steps_compared"] = n;
      j["similarity"] = sims;
      if (a_out.empty()) {
        print_json(j);
      } else {
        fs::create_directories(a_out);
        write_json(fs::path(a_out) / "analysis.json", j);
      }
      return 0;
    }
    if (*scen) {
      if (*s_list) {
        for (const auto& p : bundled_scenarios()) {
          const auto sc = load_scenario(p);
          std::cout << sc.name << "\t" << sc.description << "\n";
        }
        return 0;
      }
      for (const auto& p : bundled_scenarios()) {
        if (load_scenario(p).name == s_name) {
          run_scenario_file(p, s_out);
          std::cout << "wrote " << s_out << "\n";
          return 0;
        }
      }
      std::cerr << "unknown scenario: " << s_name << "\n";
      return 2;
    }
    if (*run) {
      run_scenario_file(r_file, r_out);
      std::cout << "wrote " << r_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qw::cli
