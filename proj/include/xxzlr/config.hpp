#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xxzlr/cavity.hpp"
#include "xxzlr/dmrg.hpp"
#include "xxzlr/exactdiag.hpp"
#include "xxzlr/model.hpp"

namespace xxzlr {

struct SweepGrid {
  std::vector<double> alpha_values;
  std::vector<double> j_values;
  std::vector<int> sizes;

  std::size_t cardinality() const { return alpha_values.size() * j_values.size(); }
  /// Non-empty axes, sizes strictly increasing, even and >= 8.
  void validate() const;

  bool operator==(const SweepGrid&) const = default;
};

/// Default desk-scale grid: alpha 0..2.5 and J -1..2 in steps of 0.25,
/// sizes {16, 24, 32, 48, 64}.
SweepGrid default_sweep_grid();

struct RunConfig {
  // [run]
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int workers = 1;
  std::string format = "both";  // csv | json | both

  // [model]
  ModelParams model{1.0, 0.0, 12, Boundary::open};

  // [ed]
  SolverPath ed_path = SolverPath::automatic;
  double ed_tolerance = 1e-10;
  int ed_max_iterations = 500;

  // [spinwave]
  std::vector<int> spinwave_sizes;  // empty means 64..4096

  // [dmrg]
  DmrgConfig dmrg;
  std::string checkpoint;  // empty: none

  // [sweep]
  SweepGrid grid = default_sweep_grid();

  // [cavity]
  CavityParams cavity{20.0, 8000.0, 400.0, 1.0, 1.0, 2};
  SimulationOptions simulation{10.0, 0.0, 0.05, 2, {1, 0}};
  bool include_dissipator = true;
  std::string cavity_model = "full";  // full | effective

  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the INI-like config text. Unknown sections or keys, malformed
/// values and duplicates raise ParseError carrying the line and key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical text listing every key; parse_config_text(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

/// Canonical text of the settings that determine sweep results (no output
/// directory, worker count or format), used for record provenance.
std::string physics_config(const RunConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace xxzlr
