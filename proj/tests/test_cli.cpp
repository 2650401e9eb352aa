#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string bin() {
  if (const char *b = std::getenv("PHOTON_ANGMOM_BIN")) return b;
  return PHOTON_ANGMOM_BIN;
}

fs::path workdir() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("photon_angmom_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

struct Result {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run(const std::string &args) {
  const fs::path o = workdir() / "stdout.txt", e = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" + bin() + "' " + args + " >'" +
                          o.string() + "' 2>'" + e.string() + "'";
  const int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(o), slurp(e)};
}

fs::path write_config(const std::string &name, const json &j) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

json j3w_config() {
  return json::parse(R"({
    "grid": {"n_k": 12, "k_min": 1.0, "k_max": 3.0, "n_theta": 24, "n_phi": 16},
    "mode": {"kind": "j3_w_eigenstate", "m": 1, "w": 1,
             "radial_profile": {"k0": 2.0, "sigma_k": 0.2},
             "theta_profile": {"kind": "gaussian_in_theta", "theta0": 1.2, "sigma": 0.3}}
  })");
}

json lg_config(int m, int w, int p) {
  json j = json::parse(R"({
    "grid": {"n_k": 12, "k_min": 4.98, "k_max": 7.02, "n_theta": 128, "n_phi": 16},
    "mode": {"kind": "vector_lg", "k_fixed": 6.0, "w0": 4.0}
  })");
  j["mode"]["m"] = m;
  j["mode"]["w"] = w;
  j["mode"]["p"] = p;
  return j;
}

std::vector<std::complex<double>> read_binary(const fs::path &p) {
  const std::string b = slurp(p);
  std::vector<std::complex<double>> v(b.size() / 16);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double x[2];
    std::memcpy(x, b.data() + 16 * i, 16);
    v[i] = {x[0], x[1]};
  }
  return v;
}

} // namespace

TEST_CASE("config errors exit 2 and name the offending key") {
  std::ofstream(workdir() / "broken.json") << "{\"grid\": [1,";
  Result r = run("mode --config broken.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("malformed JSON") != std::string::npos);

  json j = j3w_config();
  j["grid"]["nk"] = 4;
  write_config("unknown.json", j);
  r = run("mode --config unknown.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("grid.nk") != std::string::npos);

  CHECK(run("mode --config missing_file.json").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("verify --suite nope").code == 2);
  CHECK(run("synth --config unknown.json").code == 2);
  write_config("j3w.json", j3w_config());
  CHECK(run("synth --config j3w.json").code == 2);
  CHECK(run("mode --config j3w.json --outputs='[{\"kind\":\"fields\",\"path\":\"x\"}]'").code == 2);
}

TEST_CASE("mode report for a J3-W eigenstate") {
  write_config("j3w.json", j3w_config());
  const Result r = run("mode --config j3w.json");
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["eigen_residuals"]["J3"].get<double>() < 1e-10);
  CHECK(rep["eigen_residuals"]["W"].get<double>() < 1e-10);
  CHECK(rep["total_am"][2].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep["helicity"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep["sam_second_moments"].size() == 3);

  // hbar scaling through a dotted override
  const json scaled = json::parse(run("mode --config j3w.json --units.hbar=2").out);
  CHECK(scaled["total_am"][2].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(scaled["sam_second_moments"][2][2].get<double>() ==
        doctest::Approx(4.0 * rep["sam_second_moments"][2][2].get<double>()).epsilon(1e-12));
}

TEST_CASE("vector LG m = 2, w = -1, p = 1 carries J3 = 2") {
  write_config("lg.json", lg_config(2, -1, 1));
  const Result r = run("mode --config lg.json");
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(std::abs(rep["total_am"][2].get<double>() - 2.0) < 1e-8);
  CHECK(rep["eigen_residuals"]["J3"].get<double>() < 1e-9);
}

TEST_CASE("outputs carry sidecars and reruns are bit-identical") {
  json j = j3w_config();
  j["outputs"] = {{{"kind", "report"}, {"path", "rep.json"}},
                  {{"kind", "wavefunction"}, {"path", "wf.csv"}},
                  {{"kind", "expansion"}, {"path", "exp.json"}}};
  write_config("outs.json", j);
  REQUIRE(run("mode --config outs.json").code == 0);
  const std::string first = slurp(workdir() / "rep.json");
  for (const char *f : {"rep.json", "wf.csv", "exp.json"}) {
    const fs::path meta = workdir() / (std::string(f) + ".meta.json");
    REQUIRE(fs::exists(meta));
    const json m = json::parse(slurp(meta));
    CHECK(m["config_hash"].get<std::string>().size() == 16);
    CHECK(m["command"] == "mode");
    CHECK(m.contains("version"));
  }
  REQUIRE(run("mode --config outs.json").code == 0);
  CHECK(slurp(workdir() / "rep.json") == first);
}

TEST_CASE("verify exits 0 on a passing suite and writes the check list") {
  const Result r = run("verify --suite algebraic --outputs='[{\"kind\":\"verify\",\"path\":\"v.json\"}]'");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.is_array());
  for (const auto &c : j) CHECK(c["pass"] == true);
  CHECK(json::parse(slurp(workdir() / "v.json.meta.json"))["suite"] == "algebraic");
  // an impossible tolerance turns the same run into a failure
  CHECK(run("verify --suite algebraic --tolerances.algebraic=1e-300").code == 3);
}

TEST_CASE("synth: phase advances along z for a forward packet") {
  json j = json::parse(R"({
    "grid": {"n_k": 16, "k_min": 3.1, "k_max": 4.9, "n_theta": 96, "n_phi": 8},
    "mode": {"kind": "sam_wavepacket", "kappa": 400, "radial_profile": {"k0": 4.0, "sigma_k": 0.1}},
    "lattice": {"origin": [-0.1, -0.1, -0.6], "extents": [0.2, 0.2, 1.2], "n": [3, 3, 13]},
    "outputs": [{"kind": "fields", "path": "f.bin"}, {"kind": "fields_slice", "path": "s.csv"}]
  })");
  write_config("synth.json", j);
  REQUIRE(run("synth --config synth.json").code == 0);
  const auto v = read_binary(workdir() / "f.bin");
  REQUIRE(v.size() == 3 * 3 * 13 * 9);
  const json meta = json::parse(slurp(workdir() / "f.bin.meta.json"));
  CHECK(meta["layout"]["site_count"] == 117);
  // center column: ix = iy = 1
  double prev = 0.0;
  for (int iz = 0; iz < 13; ++iz) {
    const std::size_t site = (1 * 3 + 1) * 13 + iz;
    const double ph = std::arg(v[site * 9]);
    if (iz > 0) {
      const double d = std::remainder(ph - prev, 2 * M_PI);
      CHECK(d > 0.0);
      CHECK(d == doctest::Approx(0.4).epsilon(0.02));
    }
    prev = ph;
  }
  std::istringstream csv(slurp(workdir() / "s.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 9);

  // several times get numbered outputs
  j["lattice"]["times"] = {0.0, 0.5};
  write_config("synth2.json", j);
  REQUIRE(run("synth --config synth2.json").code == 0);
  CHECK(fs::exists(workdir() / "f.bin.t1"));
  CHECK(fs::exists(workdir() / "s.csv.t1.meta.json"));

  // aliasing is fatal in the CLI
  j["lattice"]["extents"] = {2.0, 2.0, 2.0};
  j["lattice"]["n"] = 3;
  write_config("alias.json", j);
  CHECK(run("synth --config alias.json").code == 3);
}

TEST_CASE("synth: the longitudinal field of an m = 1 LG mode vanishes on axis") {
  json j = lg_config(1, 1, 0);
  j["lattice"] = {{"origin", {-0.8, -0.8, -0.8}}, {"extents", {1.6, 1.6, 1.6}}, {"n", 5}};
  j["outputs"] = {{{"kind", "fields", }, {"path", "lg.bin"}}};
  write_config("lgs.json", j);
  REQUIRE(run("synth --config lgs.json").code == 0);
  const auto v = read_binary(workdir() / "lg.bin");
  REQUIRE(v.size() == 125 * 9);
  double e1 = 0.0, e3 = 0.0;
  for (int iz = 0; iz < 5; ++iz) {
    const std::size_t site = (2 * 5 + 2) * 5 + iz;
    e1 = std::max(e1, std::abs(v[site * 9 + 3]));
    e3 = std::max(e3, std::abs(v[site * 9 + 5]));
  }
  CHECK(e1 > 0.0);
  CHECK(e3 < 1e-10 * e1);
  // off axis the longitudinal part is present
  const std::size_t off = (3 * 5 + 2) * 5 + 2;
  CHECK(std::abs(v[off * 9 + 5]) > 1e-3 * e1);
}
