#include "angmom/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace angmom {

const std::map<std::string, double> &default_tolerances() {
  static const std::map<std::string, double> t{
      {"algebraic", 1e-13},        {"spectral", 1e-8},
      {"vsh", 1e-10},              {"transversality", 1e-10},
      {"j3_eigen", 1e-9},          {"moments", 1e-8},
      {"com", 1e-6},               {"com_time", 1e-8},
      {"order_halfwidth", 0.2},    {"lg_norm", 1e-10},
  };
  return t;
}

double RunConfig::tolerance(const std::string &name) const {
  auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("tolerances." + name + ": not defined");
  return it->second;
}

namespace {

void reject_unknown(const json &j, const std::string &where,
                    std::initializer_list<const char *> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key()))
      throw ConfigError((where.empty() ? "" : where + ".") + it.key() + ": unknown key");
}

template <class T> T get(const json &j, const std::string &where, const char *key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw ConfigError((where.empty() ? "" : where + ".") + key + ": wrong type");
  }
}

Vec3 get_vec3(const json &j, const std::string &where, const char *key, Vec3 fallback) {
  if (!j.contains(key)) return fallback;
  const json &a = j.at(key);
  if (!a.is_array() || a.size() != 3)
    throw ConfigError(where + "." + key + ": expected an array of 3 numbers");
  Vec3 v{};
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    v[i] = a[i].get<double>();
  }
  return v;
}

} // namespace

json to_json(const GridSpec &g) {
  return {{"n_k", g.n_k},         {"k_min", g.k_min}, {"k_max", g.k_max},
          {"n_theta", g.n_theta}, {"n_phi", g.n_phi}};
}

GridSpec grid_from_json(const json &j) {
  reject_unknown(j, "grid", {"n_k", "k_min", "k_max", "n_theta", "n_phi"});
  GridSpec g;
  g.n_k = get(j, "grid", "n_k", g.n_k);
  g.k_min = get(j, "grid", "k_min", g.k_min);
  g.k_max = get(j, "grid", "k_max", g.k_max);
  g.n_theta = get(j, "grid", "n_theta", g.n_theta);
  g.n_phi = get(j, "grid", "n_phi", g.n_phi);
  g.validate();
  return g;
}

json to_json(const ModeSpec &m) {
  return {{"kind", to_string(m.kind)},
          {"m", m.m},
          {"w", m.w},
          {"p", m.p},
          {"s_direction", m.s_direction},
          {"kappa", m.kappa},
          {"carrier", to_string(m.carrier)},
          {"radial_profile", {{"k0", m.radial_profile.k0}, {"sigma_k", m.radial_profile.sigma_k}}},
          {"theta_profile",
           {{"kind", to_string(m.theta_profile.kind)},
            {"theta0", m.theta_profile.theta0},
            {"sigma", m.theta_profile.sigma},
            {"theta_min", m.theta_profile.theta_min},
            {"theta_max", m.theta_profile.theta_max}}},
          {"w0", m.w0},
          {"k_fixed", m.k_fixed},
          {"lg_sigma_k", m.lg_sigma_k},
          {"lg_project", m.lg_project}};
}

ModeSpec mode_from_json(const json &j) {
  reject_unknown(j, "mode",
                 {"kind", "m", "w", "p", "s_direction", "kappa", "carrier", "radial_profile",
                  "theta_profile", "w0", "k_fixed", "lg_sigma_k", "lg_project"});
  ModeSpec m;
  if (!j.contains("kind")) throw ConfigError("mode.kind: required");
  m.kind = mode_kind_from_string(get<std::string>(j, "mode", "kind", ""));
  m.m = get(j, "mode", "m", m.m);
  m.w = get(j, "mode", "w", m.w);
  m.p = get(j, "mode", "p", m.p);
  m.s_direction = get_vec3(j, "mode", "s_direction", m.s_direction);
  m.kappa = get(j, "mode", "kappa", m.kappa);
  if (j.contains("carrier"))
    m.carrier = carrier_from_string(get<std::string>(j, "mode", "carrier", ""));
  if (j.contains("radial_profile")) {
    const json &r = j.at("radial_profile");
    reject_unknown(r, "mode.radial_profile", {"k0", "sigma_k"});
    m.radial_profile.k0 = get(r, "mode.radial_profile", "k0", m.radial_profile.k0);
    m.radial_profile.sigma_k = get(r, "mode.radial_profile", "sigma_k", m.radial_profile.sigma_k);
  }
  if (j.contains("theta_profile")) {
    const json &t = j.at("theta_profile");
    const std::string w = "mode.theta_profile";
    reject_unknown(t, w, {"kind", "theta0", "sigma", "theta_min", "theta_max"});
    if (t.contains("kind"))
      m.theta_profile.kind = theta_profile_from_string(get<std::string>(t, w, "kind", ""));
    m.theta_profile.theta0 = get(t, w, "theta0", m.theta_profile.theta0);
    m.theta_profile.sigma = get(t, w, "sigma", m.theta_profile.sigma);
    m.theta_profile.theta_min = get(t, w, "theta_min", m.theta_profile.theta_min);
    m.theta_profile.theta_max = get(t, w, "theta_max", m.theta_profile.theta_max);
  }
  m.w0 = get(j, "mode", "w0", m.w0);
  m.k_fixed = get(j, "mode", "k_fixed", m.k_fixed);
  m.lg_sigma_k = get(j, "mode", "lg_sigma_k", m.lg_sigma_k);
  m.lg_project = get(j, "mode", "lg_project", m.lg_project);
  m.validate();
  return m;
}

json to_json(const SpaceTimeLattice &l) {
  return {{"origin", l.origin}, {"extents", l.extents}, {"n", l.n},
          {"times", l.times},   {"mask_radius", l.mask_radius}};
}

SpaceTimeLattice lattice_from_json(const json &j) {
  reject_unknown(j, "lattice", {"origin", "extents", "n", "times", "mask_radius"});
  SpaceTimeLattice l;
  l.origin = get_vec3(j, "lattice", "origin", l.origin);
  l.extents = get_vec3(j, "lattice", "extents", l.extents);
  if (j.contains("n")) {
    const json &n = j.at("n");
    if (n.is_number_integer()) {
      const int v = n.get<int>();
      l.n = {v, v, v};
    } else if (n.is_array() && n.size() == 3) {
      for (int i = 0; i < 3; ++i) {
        if (!n[i].is_number_integer()) throw ConfigError("lattice.n: expected integers");
        l.n[i] = n[i].get<int>();
      }
    } else {
      throw ConfigError("lattice.n: expected an integer or an array of 3 integers");
    }
  }
  l.times = get(j, "lattice", "times", l.times);
  l.mask_radius = get(j, "lattice", "mask_radius", l.mask_radius);
  l.validate();
  return l;
}

json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

void apply_override(json &root, const std::string &dotted_key, const std::string &value) {
  if (dotted_key.empty()) throw ConfigError("empty override key");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error &) {
    parsed = value;
  }
  json *node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("malformed override key '" + dotted_key + "'");
    if (!node->is_object()) {
      if (node->is_null())
        *node = json::object();
      else
        throw ConfigError(dotted_key + ": cannot descend into a non-object value");
    }
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

RunConfig parse_run_config(const json &root) {
  reject_unknown(root, "",
                 {"grid", "mode", "outputs", "tolerances", "seed", "units", "l_max", "lattice",
                  "suite", "slice_iz"});
  RunConfig c;
  if (root.contains("grid")) c.grid = grid_from_json(root.at("grid"));
  if (root.contains("mode")) c.mode = mode_from_json(root.at("mode"));
  if (root.contains("outputs")) {
    const json &o = root.at("outputs");
    if (!o.is_array()) throw ConfigError("outputs: expected an array");
    static const std::set<std::string> kinds{"report", "wavefunction", "expansion",
                                             "fields", "fields_slice", "verify"};
    for (std::size_t i = 0; i < o.size(); ++i) {
      const std::string w = "outputs[" + std::to_string(i) + "]";
      reject_unknown(o[i], w, {"kind", "path"});
      OutputSpec s;
      s.kind = get<std::string>(o[i], w, "kind", "");
      s.path = get<std::string>(o[i], w, "path", "");
      if (!kinds.count(s.kind)) throw ConfigError(w + ".kind: unknown output kind '" + s.kind + "'");
      if (s.path.empty()) throw ConfigError(w + ".path: required");
      c.outputs.push_back(s);
    }
  }
  if (root.contains("tolerances")) {
    const json &t = root.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances: expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!c.tolerances.count(it.key()))
        throw ConfigError("tolerances." + it.key() + ": unknown key");
      if (!it.value().is_number() || !(it.value().get<double>() > 0.0))
        throw ConfigError("tolerances." + it.key() + ": expected a positive number");
      c.tolerances[it.key()] = it.value().get<double>();
    }
  }
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_integer() || root.at("seed").get<long long>() < 0)
      throw ConfigError("seed: expected a non-negative integer");
    c.seed = root.at("seed").get<std::uint64_t>();
  }
  if (root.contains("units")) {
    const json &u = root.at("units");
    reject_unknown(u, "units", {"hbar", "c"});
    c.units.hbar = get(u, "units", "hbar", 1.0);
    c.units.c = get(u, "units", "c", 1.0);
    if (!(c.units.hbar > 0.0) || !(c.units.c > 0.0))
      throw ConfigError("units: hbar and c must be positive");
  }
  c.l_max = get(root, "", "l_max", c.l_max);
  if (c.l_max < 1) throw ConfigError("l_max: must be >= 1");
  if (root.contains("lattice")) {
    c.lattice = lattice_from_json(root.at("lattice"));
    c.has_lattice = true;
  }
  c.suite = get<std::string>(root, "", "suite", "");
  c.slice_iz = get(root, "", "slice_iz", c.slice_iz);
  return c;
}

std::string config_hash(const json &root) {
  const std::string s = root.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace angmom
