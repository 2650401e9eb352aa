// photon-angmom: build modes and report observables, run identity suites,
// synthesize fields. Exit codes: 0 ok, 2 config error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "angmom/config.hpp"
#include "angmom/modes.hpp"
#include "angmom/operators.hpp"
#include "angmom/synthesis.hpp"
#include "angmom/verify.hpp"
#include "angmom/vsh.hpp"

using namespace angmom;

namespace {

struct Context {
  json root;
  RunConfig config;
  std::string hash;
  std::string command;
};

std::ofstream open_output(const std::string &path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("outputs: cannot write '" + path + "'");
  return out;
}

void write_meta(const Context &ctx, const OutputSpec &o, const json &extra = json::object()) {
  json meta{{"config_hash", ctx.hash},
            {"version", version()},
            {"command", ctx.command},
            {"kind", o.kind},
            {"config", ctx.root}};
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  std::ofstream out = open_output(o.path + ".meta.json");
  out << meta.dump(2) << '\n';
}

void require_kinds(const RunConfig &c, const std::set<std::string> &allowed,
                   const std::string &command) {
  for (std::size_t i = 0; i < c.outputs.size(); ++i)
    if (!allowed.count(c.outputs[i].kind))
      throw ConfigError("outputs[" + std::to_string(i) + "].kind: '" + c.outputs[i].kind +
                        "' is not produced by '" + command + "'");
}

int clamped_l_max(const RunConfig &c, const WaveVectorGrid &g) {
  return std::max(1, std::min(c.l_max, max_resolved_l(g)));
}

int run_mode(const Context &ctx) {
  const RunConfig &c = ctx.config;
  require_kinds(c, {"report", "wavefunction", "expansion"}, "mode");
  GridPtr grid = build_grid(c.grid);
  const TransverseWavefunction v = build_mode(c.mode, grid);
  ReportOptions ro;
  ro.l_max = c.l_max;
  const ObservableReport report = observable_report(v, ro);
  if (c.outputs.empty()) write_report_json(std::cout, report, c.units);
  for (const OutputSpec &o : c.outputs) {
    std::ofstream out = open_output(o.path);
    if (o.kind == "report") {
      write_report_json(out, report, c.units);
    } else if (o.kind == "wavefunction") {
      write_csv(out, v);
    } else {
      const int l = clamped_l_max(c, *grid);
      write_expansion_json(out, analyze(v, l));
    }
    write_meta(ctx, o);
  }
  return 0;
}

int run_verify(const Context &ctx, std::string suite) {
  const RunConfig &c = ctx.config;
  require_kinds(c, {"verify"}, "verify");
  if (suite.empty()) suite = c.suite;
  if (suite.empty()) throw ConfigError("suite: required (--suite or \"suite\" in the config)");
  const std::vector<CheckResult> checks = run_suite(suite, c);
  write_checks_json(std::cout, checks);
  for (const OutputSpec &o : c.outputs) {
    std::ofstream out = open_output(o.path);
    write_checks_json(out, checks);
    write_meta(ctx, o, {{"suite", suite}});
  }
  bool ok = true;
  for (const auto &ch : checks) ok = ok && ch.pass;
  return ok ? 0 : 3;
}

double carrier_k(const ModeSpec &m) {
  return m.kind == ModeKind::vector_lg ? m.k_fixed : m.radial_profile.k0;
}

json com_json(const ConstantsOfMotion &c, const Units &u) {
  json j;
  const auto vals = com_values(c);
  // P^0 carries hbar c, momenta hbar, angular momenta hbar
  for (int q = 0; q < 13; ++q)
    j[com_names()[q]] = vals[q] * u.hbar * (q == 0 ? u.c : 1.0);
  return j;
}

int run_synth(const Context &ctx) {
  const RunConfig &c = ctx.config;
  if (c.outputs.empty()) throw ConfigError("outputs: synth needs at least one output");
  require_kinds(c, {"fields", "fields_slice", "report"}, "synth");
  GridPtr grid = build_grid(c.grid);
  const TransverseWavefunction v = build_mode(c.mode, grid);
  SpaceTimeLattice lattice = c.lattice;
  if (!c.has_lattice) lattice = SpaceTimeLattice::centered_cube(8.0 * 2.0 * kPi / carrier_k(c.mode), 64);
  SynthesisOptions opts;
  opts.strict_aliasing = true;
  bool want_report = false;
  for (const auto &o : c.outputs) want_report = want_report || o.kind == "report";
  opts.gradient = want_report;

  json report = json::array();
  const ConstantsOfMotion ks = want_report ? kspace_com(v, clamped_l_max(c, *grid))
                                           : ConstantsOfMotion{};
  const double n2 = std::pow(norm(v), 2);
  const std::size_t nt = lattice.times.size();
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = lattice.times[it];
    const FieldSnapshot snap = synthesize_fields(v, lattice, t, opts);
    const std::string suffix = nt > 1 ? ".t" + std::to_string(it) : "";
    for (const OutputSpec &o : c.outputs) {
      if (o.kind == "report") continue;
      OutputSpec per = o;
      per.path += suffix;
      if (o.kind == "fields") {
        std::ofstream out = open_output(per.path, true);
        write_fields_binary(out, snap);
        std::ostringstream side;
        write_fields_sidecar(side, lattice, snap);
        write_meta(ctx, per, {{"layout", json::parse(side.str())}});
      } else {
        std::ofstream out = open_output(per.path);
        const int iz = c.slice_iz >= 0 ? c.slice_iz : lattice.n[2] / 2;
        if (iz >= lattice.n[2]) throw ConfigError("slice_iz: outside the lattice");
        write_field_slice_csv(out, snap, iz);
        write_meta(ctx, per, {{"t", t}, {"iz", iz}});
      }
    }
    if (want_report) {
      const ConstantsOfMotion rs = real_space_com(snap);
      const ComComparison cmp = compare_com(rs, ks, n2);
      json rel;
      for (int q = 0; q < 13; ++q) rel[com_names()[q]] = cmp.rel_error[q];
      report.push_back({{"t", t},
                        {"real_space", com_json(rs, c.units)},
                        {"kspace", com_json(ks, c.units)},
                        {"rel_error", rel},
                        {"max_rel_error", cmp.max_rel_error}});
    }
  }
  for (const OutputSpec &o : c.outputs) {
    if (o.kind != "report") continue;
    std::ofstream out = open_output(o.path);
    out << report.dump(2) << '\n';
    write_meta(ctx, o);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Photon angular momentum toolkit"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  std::string config_path, suite;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--set", sets, "Override as key=value (dotted keys), repeatable");
  auto *mode = app.add_subcommand("mode", "Build a mode and write its observable report");
  auto *verify = app.add_subcommand("verify", "Run an identity suite");
  verify->add_option("--suite", suite, "algebraic | spectral | vsh | paraxial | com-crosscheck");
  auto *synth = app.add_subcommand("synth", "Synthesize analytic-signal fields on a lattice");
  for (auto *sub : {mode, verify, synth}) {
    sub->allow_extras();
    sub->fallthrough();
  }
  app.allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Context ctx;
    ctx.root = config_path.empty() ? json::object() : load_json_file(config_path);
    // Extra arguments of the form --key=value mirror JSON keys.
    std::vector<std::string> extras = app.remaining();
    for (auto *sub : {mode, verify, synth})
      for (const auto &s : sub->remaining()) extras.push_back(s);
    for (const std::string &a : extras) {
      const auto eq = a.find('=');
      if (a.rfind("--", 0) != 0 || eq == std::string::npos || eq == 2)
        throw ConfigError("unrecognized argument '" + a + "' (overrides are --key=value)");
      sets.push_back(a.substr(2));
    }
    for (const std::string &s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      apply_override(ctx.root, s.substr(0, eq), s.substr(eq + 1));
    }
    ctx.config = parse_run_config(ctx.root);
    ctx.hash = config_hash(ctx.root);
    if (*mode) {
      ctx.command = "mode";
      return run_mode(ctx);
    }
    if (*verify) {
      ctx.command = "verify";
      return run_verify(ctx, suite);
    }
    ctx.command = "synth";
    return run_synth(ctx);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
