#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "angmom/config.hpp"
#include "angmom/wavefunction.hpp"

namespace angmom {

struct CheckResult {
  std::string check;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Fitted value for order checks (max_residual is then |value - target|).
  std::optional<double> value;
};

const std::vector<std::string> &suite_names();

/// Runs one suite; tolerances come from the config, randomness from its seed.
std::vector<CheckResult> run_suite(const std::string &suite, const RunConfig &config);

void write_checks_json(std::ostream &out, const std::vector<CheckResult> &checks);

/// Complex Gaussian samples at every node, projected transverse.
TransverseWavefunction random_transverse_state(GridPtr grid, std::mt19937_64 &rng);

/// Random coefficients for every (a, l, m) with l <= l_band and random radial
/// profiles; carries its expansion at truncation l_max >= l_band.
TransverseWavefunction random_bandlimited_state(GridPtr grid, int l_band, int l_max,
                                                std::mt19937_64 &rng);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

} // namespace angmom
