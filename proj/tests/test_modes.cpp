#include <doctest.h>

#include "angmom/modes.hpp"
#include "angmom/operators.hpp"
#include "angmom/polarization.hpp"
#include "oracles.hpp"

using namespace angmom;
using TW = TransverseWavefunction;

namespace {

double rel(const TW &r, const TW &v) { return norm(r) / norm(v); }

ModeSpec j3w(int m, int w) {
  ModeSpec s;
  s.kind = ModeKind::j3_w_eigenstate;
  s.m = m;
  s.w = w;
  s.radial_profile = {2.0, 0.3};
  return s;
}

GridPtr j3w_grid(int n_theta = 24, int n_phi = 12) {
  return build_grid({12, 2.0 - 6 * 0.3, 2.0 + 6 * 0.3, n_theta, n_phi});
}

ModeSpec sam(Vec3 s, int w, double kappa) {
  ModeSpec m;
  m.kind = ModeKind::sam_wavepacket;
  m.s_direction = s;
  m.w = w;
  m.kappa = kappa;
  m.radial_profile = {2.0, 0.3};
  return m;
}

ModeSpec lg(int m, int p, int w, double w0, double k_fixed) {
  ModeSpec s;
  s.kind = ModeKind::vector_lg;
  s.m = m;
  s.p = p;
  s.w = w;
  s.w0 = w0;
  s.k_fixed = k_fixed;
  return s;
}

GridPtr lg_grid(double w0k, double k_fixed) {
  const double sigma = k_fixed / 50.0;
  return build_grid({10, k_fixed - 8.5 * sigma, k_fixed + 8.5 * sigma, int(8 * w0k) + 64, 16});
}

} // namespace

TEST_CASE("J3-W eigenstate with a uniform band") {
  const TW v = build_mode(j3w(1, 1), j3w_grid());
  CHECK(std::abs(norm(v) - 1.0) < 1e-13);
  CHECK(v.transversality_residual() < 1e-14);
  CHECK(rel(combine(1.0, apply_J3_azimuthal(v), -1.0, v), v) < 1e-10);
  CHECK(rel(apply_W(v) - v, v) < 1e-12);
}

TEST_CASE("m = 0, w = -1 carries e^{i phi} eps-") {
  GridPtr g = j3w_grid();
  const TW v = build_mode(j3w(0, -1), g);
  // all nodes of one ring share the amplitude; the ratio to e^{i phi} eps- is constant
  const std::size_t ring = g->index(5, 7, 0);
  const CVec3 e0 = polarization_vector(-1, g->theta()[ring], g->phi()[ring]);
  const cplx c0 = cdot(e0, v.at(ring)) / std::polar(1.0, g->phi()[ring]);
  for (int ip = 0; ip < g->n_phi(); ++ip) {
    const std::size_t i = ring + ip;
    const CVec3 e = polarization_vector(-1, g->theta()[i], g->phi()[i]);
    CHECK(norm(v.at(i) - (c0 * std::polar(1.0, g->phi()[i])) * e) < 1e-15);
  }
}

TEST_CASE("n_phi must resolve the Cartesian azimuthal orders") {
  CHECK_THROWS_AS(build_mode(j3w(3, 1), j3w_grid(24, 8)), ConfigError);
  CHECK_NOTHROW(build_mode(j3w(3, 1), j3w_grid(24, 9)));
  ModeSpec bad = j3w(1, 2);
  CHECK_THROWS_AS(build_mode(bad, j3w_grid()), ConfigError);
}

TEST_CASE("theta distribution: uniform band on the full sphere") {
  const ThetaDistribution d = theta_distribution(j3w(1, 1));
  CHECK(d.mean_x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d.mean_x2 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (double x : {-0.9, -0.1, 0.3, 0.99}) CHECK(d.p_of_x(x) == doctest::Approx(0.5));
}

TEST_CASE("theta distribution moments against adaptive quadrature") {
  ModeSpec band = j3w(1, 1);
  band.theta_profile.theta_min = 0.4;
  band.theta_profile.theta_max = 1.9;
  ModeSpec narrow = j3w(1, 1);
  narrow.theta_profile.kind = ThetaProfileKind::gaussian_in_theta;
  narrow.theta_profile.theta0 = kPi / 2;
  narrow.theta_profile.sigma = 0.02;
  ModeSpec off = narrow;
  off.theta_profile.theta0 = kPi / 6;
  off.theta_profile.sigma = 0.3;
  for (const ModeSpec &s : {band, narrow, off}) {
    const ThetaDistribution d = theta_distribution(s);
    const auto &p = d.p_of_x;
    double lo = -1.0, hi = 1.0;
    if (s.theta_profile.kind == ThetaProfileKind::uniform_band) {
      lo = std::cos(s.theta_profile.theta_max);
      hi = std::cos(s.theta_profile.theta_min);
    }
    const double z = oracle::simpson(p, lo, hi, 1e-14);
    const double m1 = oracle::simpson([&](double x) { return x * p(x); }, lo, hi, 1e-14);
    const double m2 = oracle::simpson([&](double x) { return x * x * p(x); }, lo, hi, 1e-14);
    CHECK(std::abs(z - 1.0) < 1e-10);
    CHECK(std::abs(m1 - d.mean_x) < 1e-10);
    CHECK(std::abs(m2 - d.mean_x2) < 1e-10);
    for (int i = 0; i <= 200; ++i) CHECK(p(-1.0 + i / 100.0) >= 0.0);
    CHECK(d.mean_x2 - d.mean_x * d.mean_x > 0.0);
  }
  const ThetaDistribution n = theta_distribution(narrow);
  CHECK(std::abs(n.mean_x) < 1e-12);
  CHECK(n.mean_x2 < 1e-3);
}

TEST_CASE("SAM wave packet along zhat") {
  GridPtr g = build_grid({10, 2.0 - 6 * 0.3, 2.0 + 6 * 0.3, 256, 8});
  const TW v = build_mode(sam({0, 0, 1}, 1, 400), g);
  const ObservableReport r = observable_report(v);
  const double err = std::sqrt(r.sam[0] * r.sam[0] + r.sam[1] * r.sam[1] +
                               std::pow(r.sam[2] - 1.0, 2));
  CHECK(err < 2.0 / 400);
  CHECK(err > 0.0);
  CHECK(std::abs(r.helicity - 1.0) < 1e-12);
  CHECK(std::abs(norm(v) - 1.0) < 1e-13);
}

TEST_CASE("w = -1 packet sits at -s and keeps <S> along s") {
  GridPtr g = build_grid({10, 2.0 - 6 * 0.3, 2.0 + 6 * 0.3, 256, 8});
  const TW v = build_mode(sam({0, 0, 1}, -1, 400), g);
  std::vector<double> kz(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) kz[i] = g->khat(2)[i] * std::norm(v.at(i)[0]) +
                                                      g->khat(2)[i] * std::norm(v.at(i)[1]) +
                                                      g->khat(2)[i] * std::norm(v.at(i)[2]);
  CHECK(integrate(*g, kz) < -0.99);
  const ObservableReport r = observable_report(v);
  CHECK(std::abs(r.helicity + 1.0) < 1e-12);
  CHECK(r.sam[2] > 0.99);
}

TEST_CASE("well separated packets are nearly orthogonal") {
  GridPtr g = build_grid({8, 2.0 - 6 * 0.3, 2.0 + 6 * 0.3, 96, 96});
  const TW a = build_mode(sam(unit_vector(0.6, 0.0), 1, 400), g);
  const TW b = build_mode(sam(unit_vector(1.2, 0.4), 1, 400), g);
  CHECK(std::abs(inner_product(a, b)) < 1e-6);
}

TEST_CASE("SAM packet parameter validation") {
  GridPtr g = j3w_grid();
  CHECK_THROWS_AS(build_mode(sam({0, 0, 1}, 1, 0.0), g), ConfigError);
  CHECK_THROWS_AS(build_mode(sam({0, 0, -1}, 1, 10.0), g), ConfigError);
  CHECK_THROWS_AS(build_mode(sam({0, 0, 0}, 1, 10.0), g), ConfigError);
}

TEST_CASE("scalar LG value, norm and radial orthogonality") {
  const double w0 = 1.7;
  CHECK(std::abs(scalar_lg(0, 0, w0, 0.0, 0.3) - w0 / std::sqrt(2 * kPi)) < 1e-15);
  auto radial = [&](int m, int p, double rho) { return scalar_lg(m, p, w0, rho, 0.0); };
  const double top = 14.0 / w0;
  for (auto [m, p] : {std::pair{0, 0}, {2, 1}, {-3, 2}}) {
    const double n = oracle::simpson(
        [&](double rho) { return 2 * kPi * rho * std::norm(radial(m, p, rho)); }, 0.0, top);
    CHECK(std::abs(n - 1.0) < 1e-10);
    for (int q = 0; q <= 3; ++q) {
      if (q == p) continue;
      const double o = oracle::simpson(
          [&](double rho) {
            return 2 * kPi * rho * std::real(std::conj(radial(m, p, rho)) * radial(m, q, rho));
          },
          0.0, top);
      CHECK(std::abs(o) < 1e-10);
    }
  }
  // explicit closed form with the finite-sum Laguerre polynomial
  for (int m : {-2, 0, 3})
    for (int p : {0, 1, 4})
      for (double rho : {0.1, 0.8, 2.0}) {
        const int am = std::abs(m);
        const double u = 0.5 * w0 * w0 * rho * rho;
        const cplx expect = w0 / std::sqrt(2 * kPi) /
                            std::sqrt(oracle::laguerre_norm(p, am)) * std::polar(1.0, m * 0.7) *
                            std::pow(kI * (w0 * rho / std::sqrt(2.0)), am) *
                            oracle::laguerre(p, am, u) * std::exp(-0.5 * u);
        CHECK(std::abs(scalar_lg(m, p, w0, rho, 0.7) - expect) < 1e-13);
      }
  CHECK_THROWS_AS(scalar_lg(0, -1, w0, 0.1, 0.0), ConfigError);
}

TEST_CASE("vector LG modes: exact J3, quadratic helicity defect, small v3") {
  const double k = 10.0;
  for (int m : {-1, 1, 2})
    for (int w : {-1, 1}) {
      const TW a = build_mode(lg(m, 1, w, 2.0, k), lg_grid(20.0, k));
      const TW b = build_mode(lg(m, 1, w, 4.0, k), lg_grid(40.0, k));
      CHECK(std::abs(norm(a) - 1.0) < 1e-13);
      CHECK(rel(combine(1.0, apply_J3_azimuthal(a), -double(m), a), a) < 1e-9);
      const double ra = rel(combine(1.0, apply_W(a), -double(w), a), a);
      const double rb = rel(combine(1.0, apply_W(b), -double(w), b), b);
      CHECK(ra / rb > 3.5);
      CHECK(ra / rb < 4.5);
      // raw paraxial field: the longitudinal part is a small fraction of the norm
      const auto &g = a.grid();
      double lon = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        lon += g.weights()[i] * std::norm(dot(g.khat_at(i), a.at(i)));
      CHECK(std::sqrt(lon) < 1e-2);
    }
}

TEST_CASE("projected vector LG mode is transverse and still a J3 eigenstate") {
  ModeSpec s = lg(2, 1, -1, 3.0, 10.0);
  s.lg_project = true;
  const TW v = build_mode(s, lg_grid(30.0, 10.0));
  CHECK(v.transversality_residual() < 1e-14);
  CHECK(rel(combine(1.0, apply_J3_azimuthal(v), -2.0, v), v) < 1e-9);
}

TEST_CASE("paraxiality warnings and errors") {
  std::vector<std::string> seen;
  set_warning_sink([&](const std::string &m) { seen.push_back(m); });
  GridPtr g = lg_grid(15.0, 10.0);
  build_mode(lg(1, 0, 1, 1.5, 10.0), g);
  CHECK(seen.size() == 1);
  build_mode(lg(1, 0, 1, 2.5, 10.0), g);
  CHECK(seen.size() == 1);
  set_warning_sink(nullptr);
  CHECK_THROWS_AS(build_mode(lg(1, 0, 1, 0.6, 10.0), g), ConfigError);
  CHECK_THROWS_AS(build_mode(lg(1, -1, 1, 2.0, 10.0), g), ConfigError);
}

TEST_CASE("mode kinds round-trip through their names") {
  for (ModeKind k : {ModeKind::j3_w_eigenstate, ModeKind::sam_wavepacket, ModeKind::vector_lg})
    CHECK(mode_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(mode_kind_from_string("plane_wave"), ConfigError);
  CHECK(carrier_from_string("projected") == CarrierKind::projected);
  CHECK(theta_profile_from_string("gaussian_in_theta") == ThetaProfileKind::gaussian_in_theta);
}
