#pragma once
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/evolve.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/protocol.hpp"

namespace qw::cli {

struct InitSpec {
  enum class Kind { localized, wavepacket } kind = Kind::localized;
  std::vector<int> site{0};
  std::vector<double> q0{0.0};
  bool q0_band_frame = false;  // q0 holds band-formula labels of the centre
  double width = 1.0;
};

struct PolSpec {
  enum class Kind { fixed, band_plus, band_minus } kind = Kind::fixed;
  Vec2 value = pol_h();
};

struct Scenario {
  std::string name = "adhoc";
  std::string description;
  Protocol protocol;
  std::string protocol_label;
  std::string lattice_kind = "ring";  // ring | torus | cylinder
  std::vector<int> sizes{3};          // ring: {N}; torus: {NX, NY}; cylinder: {NY}
  int window = 0;                     // cylinder x ring size, 0 = automatic
  InitSpec init;
  PolSpec pol;
  int steps = 0;
  std::vector<std::string> outputs{"distributions", "analysis"};
  std::optional<EnvelopeSpec> envelope;
  int display_offset = 0;
};

// Throws std::runtime_error naming the offending field.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario& s);

LatticeSpec scenario_lattice(const Scenario& s);
// Initial site per axis in simulation coordinates (cylinder x is centred).
std::vector<int> scenario_site(const Scenario& s, const LatticeSpec& l);
MomentumState scenario_initial_state(const Scenario& s, const LatticeSpec& l);

struct RunResult {
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir);
RunResult run_scenario_file(const std::filesystem::path& path,
                            const std::filesystem::path& out_dir);

std::filesystem::path bundled_scenario_dir();
std::vector<std::filesystem::path> bundled_scenarios();

// Parse "localized:M0[,N0]" / "wavepacket:M0,Q0,W" and "H|V|custom:a,b,c,d".
InitSpec parse_init_flag(const std::string& s);
PolSpec parse_pol_flag(const std::string& s);
Protocol resolve_protocol(const nlohmann::json& j, std::string& label);

}  // namespace qw::cli
