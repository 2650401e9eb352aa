#include <doctest.h>

#include <random>
#include <sstream>

#include "angmom/config.hpp"
#include "angmom/modes.hpp"
#include "angmom/operators.hpp"
#include "angmom/polarization.hpp"
#include "angmom/verify.hpp"
#include "angmom/vsh.hpp"
#include "oracles.hpp"

using namespace angmom;
using TW = TransverseWavefunction;

namespace {

double rel(const TW &r, const TW &v) { return norm(r) / norm(v); }

ModeSpec j3w(int m, int w, ThetaProfile prof) {
  ModeSpec s;
  s.kind = ModeKind::j3_w_eigenstate;
  s.m = m;
  s.w = w;
  s.radial_profile = {2.0, 0.3};
  s.theta_profile = prof;
  return s;
}

ThetaProfile gaussian(double t0, double sigma) {
  ThetaProfile p;
  p.kind = ThetaProfileKind::gaussian_in_theta;
  p.theta0 = t0;
  p.sigma = sigma;
  return p;
}

GridPtr radial_grid(int n_theta, int n_phi) {
  return build_grid({12, 2.0 - 6 * 0.3, 2.0 + 6 * 0.3, n_theta, n_phi});
}

} // namespace

TEST_CASE("S on a positive-helicity state multiplies by khat_l") {
  GridPtr g = radial_grid(16, 8);
  const TW v = build_mode(j3w(1, 1, gaussian(0.4, 0.2)), g);
  for (int l = 1; l <= 3; ++l) {
    const TW s = apply_S(l, v);
    double worst = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
      worst = std::max(worst, norm(s.at(i) - cplx(g->khat(l - 1)[i]) * v.at(i)));
    CHECK(worst < 1e-15);
  }
}

TEST_CASE("pointwise identities on random transverse states") {
  GridPtr g = build_grid({4, 0.5, 2.0, 8, 12});
  std::mt19937_64 rng(21);
  for (int n = 0; n < 5; ++n) {
    const TW v = random_transverse_state(g, rng);
    TW ss = -1.0 * v;
    for (int l = 1; l <= 3; ++l) ss = ss + apply_S(l, apply_S(l, v));
    CHECK(rel(ss, v) < 1e-13);
    CHECK(rel(apply_W(apply_W(v)) - v, v) < 1e-13);
    for (int l = 1; l <= 3; ++l) {
      CHECK(apply_S(l, v).transversality_residual() < 1e-13);
      const int a = l % 3 + 1, b = a % 3 + 1;
      CHECK(rel(apply_P(a, apply_S(b, v)) - apply_P(b, apply_S(a, v)), v) < 1e-13);
      for (int m = 1; m <= 3; ++m) {
        CHECK(rel(apply_S(l, apply_S(m, v)) - apply_S(m, apply_S(l, v)), v) < 1e-13);
        CHECK(rel(apply_S(l, apply_P(m, v)) - apply_P(m, apply_S(l, v)), v) < 1e-13);
        CHECK(rel(apply_P(l, apply_P(m, v)) - apply_P(m, apply_P(l, v)), v) < 1e-15);
      }
      CHECK(rel(apply_S(l, apply_W(v)) - apply_W(apply_S(l, v)), v) < 1e-13);
    }
    // <P0> >= |<P>|
    const double e = inner_product(v, apply_P(0, v)).real();
    Vec3 p;
    for (int l = 1; l <= 3; ++l) p[l - 1] = inner_product(v, apply_P(l, v)).real();
    CHECK(e >= std::sqrt(dot(p, p)));
  }
}

TEST_CASE("helicity eigenvalues") {
  GridPtr g = radial_grid(12, 12);
  const TW vp = build_mode(j3w(2, 1, gaussian(1.2, 0.3)), g);
  const TW vm = build_mode(j3w(2, -1, gaussian(1.2, 0.3)), g);
  CHECK(rel(apply_W(vp) - vp, vp) < 1e-13);
  CHECK(rel(apply_W(vm) + vm, vm) < 1e-13);
  // equal mixture of eps+ and eps- (same |amplitude|) has zero helicity
  const TW mix = normalize(vp + vm);
  CHECK(std::abs(inner_product(mix, apply_W(mix))) < 1e-13);
}

TEST_CASE("P_3 on a packet concentrated near k0 zhat") {
  ModeSpec s;
  s.kind = ModeKind::sam_wavepacket;
  s.kappa = 2000;
  s.radial_profile = {5.0, 0.02};
  GridPtr g = build_grid({16, 5.0 - 0.2, 5.0 + 0.2, 160, 8});
  const TW v = build_mode(s, g);
  const double p3 = inner_product(v, apply_P(3, v)).real();
  CHECK(p3 == doctest::Approx(5.0).epsilon(1e-3));
  CHECK(rel(combine(1.0, apply_P(3, v), -5.0, v), v) < 0.05);
}

TEST_CASE("spectral J actions on basis states") {
  GridPtr g = build_grid({2, 1.0, 2.0, 10, 20});
  const int L = 6;
  VshExpansion e(L, g->n_k());
  for (int ik = 0; ik < g->n_k(); ++ik) e.at(1, 2, 2, ik) = 1.0;
  const VshExpansion j3 = apply_J(3, e);
  CHECK(std::abs(j3.at(1, 2, 2, 0) - 2.0) < 1e-15);

  VshExpansion f(L, g->n_k());
  for (int ik = 0; ik < g->n_k(); ++ik) f.at(2, 3, -1, ik) = 1.0;
  VshExpansion jsq(L, g->n_k());
  for (int l = 1; l <= 3; ++l) jsq.axpy(1.0, apply_J(l, apply_J(l, f)));
  VshExpansion d = apply_J_squared(f);
  for (int ik = 0; ik < g->n_k(); ++ik) {
    CHECK(std::abs(jsq.at(2, 3, -1, ik) - 12.0) < 1e-13);
    CHECK(std::abs(d.at(2, 3, -1, ik) - 12.0) < 1e-13);
  }
  d.axpy(-1.0, jsq);
  CHECK(std::sqrt(d.norm2(g->radial_weights())) < 1e-13);
  // ladder annihilation at m = l: J+ on (1, 2, 2) has no (1, 2, 3) slot,
  // so J1 + i J2 must vanish
  VshExpansion jp = apply_J(1, e);
  jp.axpy(kI, apply_J(2, e));
  CHECK(std::sqrt(jp.norm2(g->radial_weights())) < 1e-15);
}

TEST_CASE("angular-momentum commutators on bandlimited states") {
  GridPtr g = build_grid({3, 1.0, 2.0, 14, 28});
  std::mt19937_64 rng(31);
  const TW v = random_bandlimited_state(g, 11, 12, rng);
  const VshExpansion &e = *v.spectral();
  VshExpansion r = apply_J(1, apply_J(2, e));
  r.axpy(-1.0, apply_J(2, apply_J(1, e)));
  r.axpy(-kI, apply_J(3, e));
  CHECK(std::sqrt(r.norm2(g->radial_weights())) < 1e-12);
  // sample-level route agrees with the expansion route
  const TW j1 = apply_J(1, v);
  CHECK(norm(j1.without_spectral() - synthesize(apply_J(1, e), g).without_spectral()) < 1e-14);
}

TEST_CASE("L requires a spectral form and satisfies L.S = 0, P.L = 0, [L3, W] = 0") {
  GridPtr g = build_grid({3, 1.0, 2.0, 14, 28});
  std::mt19937_64 rng(41);
  const TW v = random_bandlimited_state(g, 11, 12, rng);
  CHECK_THROWS_AS(apply_L(1, v.without_spectral()), ConfigError);
  CHECK_THROWS_AS(apply_J(1, v.without_spectral()), ConfigError);
  TW ls = TW::zero(g), pl = TW::zero(g);
  for (int l = 1; l <= 3; ++l) {
    ls = ls + apply_L(l, with_spectral(apply_S(l, v), 12));
    pl = pl + apply_P(l, apply_L(l, v));
  }
  CHECK(rel(ls, v) < 1e-12);
  CHECK(rel(pl, v) / 2.0 < 1e-12);
  const TW l3w = apply_L(3, with_spectral(apply_W(v), 12)) -
                 apply_W(apply_L(3, v));
  CHECK(rel(l3w, v) < 1e-12);
  // the azimuthal L3 agrees with the spectral one
  CHECK(rel(apply_L3_azimuthal(v) - apply_L(3, v), v) < 1e-12);
}

TEST_CASE("L = J - S agrees with the direct differential form by finite differences") {
  // v(k) = P_T c(khat) with polynomial c; the direct form is
  // (L_l v)_j = -i ((k ^ grad)_l v_j + khat_j (khat ^ v)_l).
  const cplx al(0.3, 0.2), be(-0.7, 0.1), ga(0.5, -0.4), de(0.2, 0.9), ep(-0.1, 0.6);
  auto field = [&](const Vec3 &k) {
    const double r = std::sqrt(dot(k, k));
    const Vec3 u{k[0] / r, k[1] / r, k[2] / r};
    const CVec3 c{al + be * u[0] * u[2], ga * u[1] + de * u[0] * u[0], ep * u[2] * u[1]};
    const cplx l = dot(u, c);
    return CVec3{c[0] - u[0] * l, c[1] - u[1] * l, c[2] - u[2] * l};
  };
  GridPtr g = build_grid({2, 1.0, 2.0, 12, 24});
  VectorSamples s(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) s.set(i, field(g->khat_at(i)));
  const TW v = with_spectral(TW(g, s), 8);
  double worst = 0.0;
  for (int l = 1; l <= 3; ++l) {
    const TW lv = apply_L(l, v);
    for (std::size_t i = 0; i < g->size(); i += 3) {
      const Vec3 k = g->khat_at(i);
      // gradient of each component
      CVec3 grad[3];
      for (int b = 0; b < 3; ++b)
        for (int j = 0; j < 3; ++j)
          grad[j][b] = oracle::derivative(
              [&](double h) {
                Vec3 x = k;
                x[b] += h;
                return field(x)[j];
              },
              0.0, 1e-3);
      const CVec3 vk = field(k);
      const CVec3 kxv = cross(k, vk);
      const int a = l % 3, b = (l + 1) % 3, c = l - 1;
      CVec3 direct;
      for (int j = 0; j < 3; ++j) {
        // (k ^ grad)_l = k_a d_b - k_b d_a with (l, a, b) cyclic
        const cplx kg = k[a] * grad[j][b] - k[b] * grad[j][a];
        direct[j] = -kI * (kg + k[j] * kxv[c]);
      }
      worst = std::max(worst, norm(lv.at(i) - direct));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("azimuthal J3 agrees with spectral J3 and is exact on J3-W states") {
  GridPtr g = build_grid({3, 1.0, 2.0, 14, 28});
  std::mt19937_64 rng(51);
  const TW v = random_bandlimited_state(g, 11, 12, rng);
  CHECK(rel(apply_J3_azimuthal(v) - apply_J(3, v), v) < 1e-12);
  GridPtr h = radial_grid(20, 12);
  for (int m : {-3, 0, 2})
    for (int w : {-1, 1}) {
      const TW s = build_mode(j3w(m, w, gaussian(1.0, 0.3)), h);
      CHECK(rel(combine(1.0, apply_J3_azimuthal(s), -double(m), s), s) < 1e-13);
    }
}

TEST_CASE("Hermiticity of every implemented operator") {
  GridPtr g = build_grid({3, 1.0, 2.0, 14, 28});
  std::mt19937_64 rng(61);
  const TW u = random_bandlimited_state(g, 11, 12, rng);
  const TW v = random_bandlimited_state(g, 11, 12, rng);
  auto check = [&](auto op) {
    const cplx a = inner_product(u, op(v)), b = inner_product(op(u), v);
    CHECK(std::abs(a - b) < 1e-10);
  };
  for (int l = 0; l <= 3; ++l) check([&](const TW &x) { return apply_P(l, x); });
  for (int l = 1; l <= 3; ++l) {
    check([&](const TW &x) { return apply_S(l, x); });
    check([&](const TW &x) { return apply_J(l, x); });
    check([&](const TW &x) { return apply_L(l, x); });
  }
  check([&](const TW &x) { return apply_W(x); });
  check([&](const TW &x) { return apply_J3_azimuthal(x); });
  check([&](const TW &x) { return apply_J_squared(x); });
}

TEST_CASE("observable report for J3-W states follows the p(x) moments") {
  const ThetaProfile profiles[] = {ThetaProfile{}, gaussian(kPi / 2, 0.25), gaussian(1.0, 0.2)};
  for (const ThetaProfile &prof : profiles) {
    const ModeSpec s = j3w(1, 1, prof);
    const int nt = prof.kind == ThetaProfileKind::uniform_band ? 24 : 200;
    const TW v = build_mode(s, radial_grid(nt, 8));
    const ObservableReport r = observable_report(v);
    const ThetaDistribution d = theta_distribution(s);
    CHECK(std::abs(r.sam[0]) < 1e-12);
    CHECK(std::abs(r.sam[1]) < 1e-12);
    CHECK(std::abs(r.sam[2] - d.mean_x) < 1e-8);
    const double t = 0.5 * (1.0 - d.mean_x2);
    CHECK(std::abs(r.sam_second_moments[0][0] - t) < 1e-8);
    CHECK(std::abs(r.sam_second_moments[1][1] - t) < 1e-8);
    CHECK(std::abs(r.sam_second_moments[2][2] - d.mean_x2) < 1e-8);
    CHECK(std::abs(r.sam_second_moments[0][1]) < 1e-10);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        CHECK(std::abs(r.sam_variance[a][b] - (r.sam_second_moments[a][b] - r.sam[a] * r.sam[b])) <
              1e-14);
    CHECK(r.sam_variance[2][2] > 0.0);
    for (int a = 0; a < 3; ++a) {
      CHECK(r.sam_variance[a][a] >= 0.0);
      CHECK(std::abs(r.total_am[a] - r.oam[a] - r.sam[a]) < 1e-10);
    }
    CHECK(std::abs(r.total_am[2] - 1.0) < 1e-10);
    CHECK(std::abs(r.helicity - 1.0) < 1e-12);
    CHECK(r.eigen_residuals.at("J3") < 1e-10);
    CHECK(r.eigen_residuals.at("W") < 1e-12);
    CHECK(r.eigen_residuals.at("S3") > 0.05);
    CHECK(r.eigen_residuals.at("L3") > 0.05);
  }
  // the uniform band gives V = diag(1/3, 1/3, 1/3)
  const TW u = build_mode(j3w(1, 1, ThetaProfile{}), radial_grid(24, 8));
  const ObservableReport r = observable_report(u);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(std::abs(r.sam_variance[a][b] - (a == b ? 1.0 / 3.0 : 0.0)) < 1e-8);
}

TEST_CASE("report rejects unnormalized input and serializes with unit scaling") {
  const TW v = build_mode(j3w(1, 1, ThetaProfile{}), radial_grid(24, 8));
  CHECK_THROWS_AS(observable_report(cplx(2.0) * v), ConfigError);
  const ObservableReport r = observable_report(v);
  std::ostringstream a, b;
  write_report_json(a, r);
  write_report_json(b, r, Units{2.0, 3.0});
  const json ja = json::parse(a.str()), jb = json::parse(b.str());
  for (const char *key : {"energy", "momentum", "total_am", "oam", "sam", "helicity",
                          "sam_second_moments", "sam_variance", "eigen_residuals"})
    CHECK(ja.contains(key));
  CHECK(jb["energy"].get<double>() == doctest::Approx(6.0 * ja["energy"].get<double>()));
  CHECK(jb["total_am"][2].get<double>() == doctest::Approx(2.0 * ja["total_am"][2].get<double>()));
  CHECK(jb["sam_variance"][0][0].get<double>() ==
        doctest::Approx(4.0 * ja["sam_variance"][0][0].get<double>()));
}
