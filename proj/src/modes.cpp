#include "angmom/modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "angmom/polarization.hpp"

namespace angmom {

const char *to_string(ModeKind k) {
  switch (k) {
  case ModeKind::j3_w_eigenstate: return "j3_w_eigenstate";
  case ModeKind::sam_wavepacket: return "sam_wavepacket";
  case ModeKind::vector_lg: return "vector_lg";
  }
  return "?";
}

const char *to_string(ThetaProfileKind k) {
  return k == ThetaProfileKind::gaussian_in_theta ? "gaussian_in_theta" : "uniform_band";
}

const char *to_string(CarrierKind k) {
  return k == CarrierKind::transported ? "transported" : "projected";
}

ModeKind mode_kind_from_string(const std::string &s) {
  if (s == "j3_w_eigenstate") return ModeKind::j3_w_eigenstate;
  if (s == "sam_wavepacket") return ModeKind::sam_wavepacket;
  if (s == "vector_lg") return ModeKind::vector_lg;
  throw ConfigError("mode.kind: unknown value '" + s + "'");
}

ThetaProfileKind theta_profile_from_string(const std::string &s) {
  if (s == "gaussian_in_theta") return ThetaProfileKind::gaussian_in_theta;
  if (s == "uniform_band") return ThetaProfileKind::uniform_band;
  throw ConfigError("mode.theta_profile.kind: unknown value '" + s + "'");
}

CarrierKind carrier_from_string(const std::string &s) {
  if (s == "transported") return CarrierKind::transported;
  if (s == "projected") return CarrierKind::projected;
  throw ConfigError("mode.carrier: unknown value '" + s + "'");
}

double ThetaProfile::amplitude(double theta) const {
  if (kind == ThetaProfileKind::uniform_band)
    return (theta >= theta_min && theta <= theta_max) ? 1.0 : 0.0;
  const double d = theta - theta0;
  return std::exp(-d * d / (4.0 * sigma * sigma));
}

void ModeSpec::validate() const {
  auto fail = [](const std::string &key, const std::string &why) {
    throw ConfigError("mode." + key + ": " + why);
  };
  if (w != 1 && w != -1) fail("w", "must be +1 or -1");
  switch (kind) {
  case ModeKind::j3_w_eigenstate:
    if (theta_profile.kind == ThetaProfileKind::gaussian_in_theta) {
      if (!(theta_profile.sigma > 0.0)) fail("theta_profile.sigma", "must be > 0");
      if (!(theta_profile.theta0 >= 0.0 && theta_profile.theta0 <= kPi))
        fail("theta_profile.theta0", "must lie in [0, pi]");
    } else if (!(theta_profile.theta_min >= 0.0 &&
                 theta_profile.theta_min < theta_profile.theta_max &&
                 theta_profile.theta_max <= kPi)) {
      fail("theta_profile", "require 0 <= theta_min < theta_max <= pi");
    }
    [[fallthrough]];
  case ModeKind::sam_wavepacket:
    if (!(radial_profile.sigma_k > 0.0)) fail("radial_profile.sigma_k", "must be > 0");
    if (!(radial_profile.sigma_k < radial_profile.k0))
      fail("radial_profile.sigma_k", "must be smaller than k0");
    if (kind == ModeKind::sam_wavepacket) {
      if (!(kappa > 0.0)) fail("kappa", "must be > 0");
      const double n = std::sqrt(dot(s_direction, s_direction));
      if (!(n > 0.0)) fail("s_direction", "must be nonzero");
      if (s_direction[2] / n <= -1.0 + 1e-15)
        fail("s_direction", "may not point along -z (polarization basis is multivalued there)");
    }
    break;
  case ModeKind::vector_lg:
    if (p < 0) fail("p", "must be >= 0");
    if (!(w0 > 0.0)) fail("w0", "must be > 0");
    if (!(k_fixed > 0.0)) fail("k_fixed", "must be > 0");
    if (!(w0 * k_fixed > 2.0 * kPi))
      fail("w0", "paraxiality requires w0 * k_fixed > 2 pi");
    if (lg_sigma_k > 0.0 && !(lg_sigma_k < k_fixed))
      fail("lg_sigma_k", "must be smaller than k_fixed");
    break;
  }
}

TransverseWavefunction build_mode(const ModeSpec &spec, GridPtr grid) {
  switch (spec.kind) {
  case ModeKind::j3_w_eigenstate: return build_j3_w_eigenstate(spec, std::move(grid));
  case ModeKind::sam_wavepacket: return build_sam_wavepacket(spec, std::move(grid));
  case ModeKind::vector_lg: return build_vector_lg(spec, std::move(grid));
  }
  throw ConfigError("mode.kind: unsupported");
}

namespace {

double radial_amplitude(double k, double k0, double sigma) {
  const double d = k - k0;
  return std::exp(-d * d / (4.0 * sigma * sigma));
}

TransverseWavefunction finish(GridPtr grid, VectorSamples values, const char *what) {
  TransverseWavefunction v = TransverseWavefunction::measured(std::move(grid), std::move(values));
  if (!(norm(v) > 0.0))
    throw NumericalError(std::string(what) + ": state vanishes on every grid node");
  return normalize(v);
}

} // namespace

TransverseWavefunction build_j3_w_eigenstate(const ModeSpec &spec, GridPtr grid) {
  if (spec.kind != ModeKind::j3_w_eigenstate)
    throw ConfigError("build_j3_w_eigenstate: mode.kind must be j3_w_eigenstate");
  spec.validate();
  const WaveVectorGrid &g = *grid;
  // Cartesian phi-frequencies are m - 1, m, m + 1; all must sit below Nyquist.
  if (!(g.n_phi() > 2 * (std::abs(spec.m) + 1)))
    throw ConfigError("grid.n_phi: must exceed 2 (|m| + 1) = " +
                      std::to_string(2 * (std::abs(spec.m) + 1)) + " for m = " +
                      std::to_string(spec.m));
  VectorSamples values(g.size());
  const int shift = spec.m - spec.w;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = radial_amplitude(g.k()[i], spec.radial_profile.k0,
                                      spec.radial_profile.sigma_k) *
                     spec.theta_profile.amplitude(g.theta()[i]);
    if (a == 0.0) continue;
    const CVec3 eps = polarization_vector(spec.w, g.theta()[i], g.phi()[i]);
    values.set(i, (a * std::polar(1.0, shift * g.phi()[i])) * eps);
  }
  return finish(std::move(grid), std::move(values), "build_j3_w_eigenstate");
}

ThetaDistribution theta_distribution(const ModeSpec &spec) {
  if (spec.kind != ModeKind::j3_w_eigenstate)
    throw ConfigError("theta_distribution: mode.kind must be j3_w_eigenstate");
  spec.validate();
  const ThetaProfile prof = spec.theta_profile;
  ThetaDistribution d;
  double z = 0.0;
  if (prof.kind == ThetaProfileKind::uniform_band) {
    const double c1 = std::cos(prof.theta_min), c2 = std::cos(prof.theta_max);
    z = c1 - c2;
    d.mean_x = (c1 * c1 - c2 * c2) / (2.0 * z);
    d.mean_x2 = (c1 * c1 * c1 - c2 * c2 * c2) / (3.0 * z);
  } else {
    // Smooth integrand in theta; a high-order Gauss rule on [0, pi] is exact
    // to rounding.
    std::vector<double> t, w;
    gauss_legendre(400, 0.0, kPi, t, w);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double a = prof.amplitude(t[i]);
      const double f = w[i] * a * a * std::sin(t[i]);
      const double x = std::cos(t[i]);
      s0 += f;
      s1 += f * x;
      s2 += f * x * x;
    }
    z = s0;
    d.mean_x = s1 / s0;
    d.mean_x2 = s2 / s0;
  }
  d.p_of_x = [prof, z](double x) {
    if (x < -1.0 || x > 1.0) return 0.0;
    const double a = prof.amplitude(std::acos(x));
    return a * a / z;
  };
  return d;
}

namespace {

// Rotation taking unit vector from onto unit vector to along their geodesic.
CVec3 transport(const Vec3 &from, const Vec3 &to, const CVec3 &v) {
  const double c = std::clamp(dot(from, to), -1.0, 1.0);
  Vec3 axis{from[1] * to[2] - from[2] * to[1], from[2] * to[0] - from[0] * to[2],
            from[0] * to[1] - from[1] * to[0]};
  double s = std::sqrt(dot(axis, axis));
  if (s < 1e-300) {
    if (c > 0.0) return v;
    // antipode: any axis perpendicular to from
    axis = std::abs(from[0]) < 0.9 ? Vec3{0.0, -from[2], from[1]}
                                    : Vec3{-from[2], 0.0, from[0]};
    s = std::sqrt(dot(axis, axis));
    for (auto &x : axis) x /= s;
    s = 0.0;
  } else {
    for (auto &x : axis) x /= s;
  }
  const CVec3 uxv = cross(axis, v);
  const cplx uv = dot(axis, v);
  CVec3 out;
  for (int j = 0; j < 3; ++j) out[j] = v[j] * c + uxv[j] * s + axis[j] * uv * (1.0 - c);
  return out;
}

} // namespace

TransverseWavefunction build_sam_wavepacket(const ModeSpec &spec, GridPtr grid) {
  if (spec.kind != ModeKind::sam_wavepacket)
    throw ConfigError("build_sam_wavepacket: mode.kind must be sam_wavepacket");
  spec.validate();
  const WaveVectorGrid &g = *grid;
  const double sn = std::sqrt(dot(spec.s_direction, spec.s_direction));
  const Vec3 s{spec.s_direction[0] / sn, spec.s_direction[1] / sn, spec.s_direction[2] / sn};
  const double theta_s = std::acos(std::clamp(s[2], -1.0, 1.0));
  const double phi_s = std::atan2(s[1], s[0]);
  const CVec3 carrier = polarization_vector(+1, theta_s, phi_s);
  const Vec3 support{spec.w * s[0], spec.w * s[1], spec.w * s[2]};

  VectorSamples values(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 kh = g.khat_at(i);
    // exp(kappa (khat.n - 1)) keeps the exponent <= 0
    const double a = radial_amplitude(g.k()[i], spec.radial_profile.k0,
                                      spec.radial_profile.sigma_k) *
                     std::exp(spec.kappa * (dot(kh, support) - 1.0));
    if (a == 0.0) continue;
    CVec3 e;
    if (spec.carrier == CarrierKind::transported) {
      e = transport(support, kh, carrier);
    } else {
      const cplx l = dot(kh, carrier);
      e = {carrier[0] - kh[0] * l, carrier[1] - kh[1] * l, carrier[2] - kh[2] * l};
    }
    values.set(i, cplx(a) * e);
  }
  return finish(std::move(grid), std::move(values), "build_sam_wavepacket");
}

cplx scalar_lg(int m, int p, double w0, double rho, double phi) {
  if (p < 0) throw ConfigError("scalar_lg: p must be >= 0");
  const unsigned am = static_cast<unsigned>(std::abs(m));
  const double u = 0.5 * w0 * w0 * rho * rho;
  const double pref = w0 / std::sqrt(2.0 * kPi) *
                      std::exp(0.5 * (std::lgamma(p + 1.0) - std::lgamma(p + am + 1.0)));
  cplx poly = 1.0;
  const cplx base = kI * (w0 * rho / std::sqrt(2.0));
  for (unsigned j = 0; j < am; ++j) poly *= base;
  return pref * std::polar(1.0, m * phi) * poly *
         std::assoc_laguerre(static_cast<unsigned>(p), am, u) * std::exp(-0.5 * u);
}

TransverseWavefunction build_vector_lg(const ModeSpec &spec, GridPtr grid) {
  if (spec.kind != ModeKind::vector_lg)
    throw ConfigError("build_vector_lg: mode.kind must be vector_lg");
  spec.validate();
  if (spec.w0 * spec.k_fixed < 20.0)
    warn("vector_lg: w0 * k_fixed = " + std::to_string(spec.w0 * spec.k_fixed) +
         " is below 20; paraxial corrections may be significant");
  const WaveVectorGrid &g = *grid;
  const double sigma = spec.lg_sigma_k > 0.0 ? spec.lg_sigma_k : spec.k_fixed / 50.0;
  const double r2 = 1.0 / std::sqrt(2.0);
  const int order = spec.w > 0 ? spec.m - 1 : spec.m + 1;
  VectorSamples values(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double theta = g.theta()[i];
    if (std::cos(theta) <= 0.0) continue; // forward hemisphere only
    const double k = g.k()[i], phi = g.phi()[i];
    const double radial = radial_amplitude(k, spec.k_fixed, sigma);
    if (radial == 0.0) continue;
    const cplx f = radial * scalar_lg(order, spec.p, spec.w0, k * std::sin(theta), phi);
    CVec3 e;
    if (spec.w > 0)
      e = {r2, kI * r2, -theta * r2 * std::polar(1.0, phi)};
    else
      e = {kI * r2, r2, -kI * theta * r2 * std::polar(1.0, -phi)};
    values.set(i, f * e);
  }
  if (spec.lg_project) {
    TransverseWavefunction raw = TransverseWavefunction::measured(grid, std::move(values));
    TransverseWavefunction projected = project_transverse(raw);
    if (!(norm(projected) > 0.0))
      throw NumericalError("build_vector_lg: state vanishes on every grid node");
    return normalize(projected);
  }
  return finish(std::move(grid), std::move(values), "build_vector_lg");
}

} // namespace angmom
