#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "angmom/grid.hpp"
#include "angmom/modes.hpp"
#include "angmom/synthesis.hpp"

namespace angmom {

using json = nlohmann::json;

struct OutputSpec {
  std::string kind; // report | wavefunction | expansion | fields | fields_slice | verify
  std::string path;
};

/// Tolerances used when a config does not override them.
const std::map<std::string, double> &default_tolerances();

struct RunConfig {
  GridSpec grid;
  ModeSpec mode;
  std::vector<OutputSpec> outputs;
  std::map<std::string, double> tolerances = default_tolerances();
  std::uint64_t seed = 1;
  Units units;
  int l_max = 16;
  SpaceTimeLattice lattice;
  bool has_lattice = false;
  std::string suite;
  /// Slice plane index for fields_slice outputs; -1 selects the middle plane.
  int slice_iz = -1;

  double tolerance(const std::string &name) const;
};

json to_json(const GridSpec &g);
json to_json(const ModeSpec &m);
json to_json(const SpaceTimeLattice &l);
GridSpec grid_from_json(const json &j);
ModeSpec mode_from_json(const json &j);
SpaceTimeLattice lattice_from_json(const json &j);

/// Reads a JSON file; parse failures become ConfigError with the parser message.
json load_json_file(const std::string &path);

/// Sets a dotted key ("grid.n_k") to value. The value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(json &root, const std::string &dotted_key, const std::string &value);

/// Validates and converts; unknown keys are rejected by name.
RunConfig parse_run_config(const json &root);

/// 64-bit FNV-1a over the canonical (sorted-key) dump, as 16 hex digits.
std::string config_hash(const json &root);

} // namespace angmom
