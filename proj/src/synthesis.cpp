#include "angmom/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <string>

#include <json.hpp>

#include "angmom/kernels.hpp"
#include "angmom/operators.hpp"
#include "angmom/parallel.hpp"
#include "angmom/vsh.hpp"

namespace angmom {

Vec3 SpaceTimeLattice::spacing() const {
  Vec3 h{};
  for (int d = 0; d < 3; ++d) h[d] = n[d] > 1 ? extents[d] / (n[d] - 1) : 0.0;
  return h;
}

Vec3 SpaceTimeLattice::center() const {
  return {origin[0] + 0.5 * extents[0], origin[1] + 0.5 * extents[1],
          origin[2] + 0.5 * extents[2]};
}

void SpaceTimeLattice::validate() const {
  for (int d = 0; d < 3; ++d) {
    if (n[d] < 2) throw ConfigError("lattice.n: every axis needs at least 2 sites");
    if (!(extents[d] > 0.0)) throw ConfigError("lattice.extents: must be > 0");
    if (!std::isfinite(origin[d])) throw ConfigError("lattice.origin: must be finite");
  }
  if (times.empty()) throw ConfigError("lattice.times: at least one time is required");
  if (mask_radius < 0.0) throw ConfigError("lattice.mask_radius: must be >= 0");
}

SpaceTimeLattice SpaceTimeLattice::centered_cube(double side, int n_per_axis) {
  SpaceTimeLattice l;
  l.origin = {-0.5 * side, -0.5 * side, -0.5 * side};
  l.extents = {side, side, side};
  l.n = {n_per_axis, n_per_axis, n_per_axis};
  return l;
}

SpaceTimeLattice SpaceTimeLattice::ball(double radius, double spacing) {
  const int half = static_cast<int>(std::ceil(radius / spacing));
  SpaceTimeLattice l;
  const double side = 2.0 * half * spacing;
  l.origin = {-0.5 * side, -0.5 * side, -0.5 * side};
  l.extents = {side, side, side};
  l.n = {2 * half + 1, 2 * half + 1, 2 * half + 1};
  l.mask_radius = radius;
  return l;
}

bool resolves(const SpaceTimeLattice &lattice, double k_max) {
  const Vec3 h = lattice.spacing();
  for (int d = 0; d < 3; ++d)
    if (!(h[d] < kPi / k_max)) return false;
  return true;
}

namespace {

constexpr std::size_t kSiteBlock = 32;
constexpr std::size_t kNodeBlock = 512;

struct SoaTable {
  std::vector<double> re, im;
};

} // namespace

FieldSnapshot synthesize_fields(const TransverseWavefunction &v,
                                const SpaceTimeLattice &lattice, double t,
                                const SynthesisOptions &options) {
  lattice.validate();
  const WaveVectorGrid &g = v.grid();
  const double k_max = g.spec().k_max;
  if (!resolves(lattice, k_max)) {
    const std::string msg = "synthesize_fields: lattice spacing does not resolve k_max = " +
                            std::to_string(k_max) + " (need spacing < pi / k_max = " +
                            std::to_string(kPi / k_max) + ")";
    if (options.strict_aliasing) throw NumericalError(msg);
    warn(msg);
  }

  // Sites
  FieldSnapshot snap;
  snap.t = t;
  const Vec3 h = lattice.spacing();
  const Vec3 ctr = lattice.center();
  const double r2 = lattice.mask_radius * lattice.mask_radius;
  for (int ix = 0; ix < lattice.n[0]; ++ix)
    for (int iy = 0; iy < lattice.n[1]; ++iy)
      for (int iz = 0; iz < lattice.n[2]; ++iz) {
        const Vec3 x{lattice.origin[0] + ix * h[0], lattice.origin[1] + iy * h[1],
                     lattice.origin[2] + iz * h[2]};
        if (lattice.mask_radius > 0.0) {
          const double dx = x[0] - ctr[0], dy = x[1] - ctr[1], dz = x[2] - ctr[2];
          if (dx * dx + dy * dy + dz * dz > r2) continue;
        }
        double w = h[0] * h[1] * h[2];
        const int id[3] = {ix, iy, iz};
        // trapezoid end weights only where the box faces bound the domain
        if (lattice.mask_radius <= 0.0)
          for (int d = 0; d < 3; ++d)
            if (id[d] == 0 || id[d] == lattice.n[d] - 1) w *= 0.5;
        snap.index.push_back({ix, iy, iz});
        snap.position.push_back(x);
        snap.weight.push_back(w);
      }
  const std::size_t n_sites = snap.size();

  // Active nodes
  const auto &wq = g.weights();
  double top = 0.0;
  std::vector<double> score(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    score[i] = wq[i] * angmom::norm(v.at(i));
    top = std::max(top, score[i]);
  }
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (score[i] > options.node_cutoff * top && score[i] > 0.0) nodes.push_back(i);
  const std::size_t nn = nodes.size();

  // Coefficients per field
  const std::size_t n_fields = 6 + (options.magnetic ? 3 : 0) + (options.gradient ? 9 : 0);
  std::vector<std::vector<double>> cre(n_fields, std::vector<double>(nn)),
      cim(n_fields, std::vector<double>(nn));
  for (std::size_t j = 0; j < nn; ++j) {
    const std::size_t i = nodes[j];
    const double k = g.k()[i];
    const Vec3 kv = g.k_at(i);
    const cplx a = wq[i] * std::polar(1.0, -k * t) / (2.0 * kPi * std::sqrt(k));
    const CVec3 x = v.at(i);
    std::size_t f = 0;
    auto put = [&](cplx c) {
      cre[f][j] = c.real();
      cim[f][j] = c.imag();
      ++f;
    };
    for (int m = 0; m < 3; ++m) put(a * x[m]);
    for (int m = 0; m < 3; ++m) put(kI * k * a * x[m]);
    if (options.magnetic) {
      const CVec3 c = cross(kv, x);
      for (int m = 0; m < 3; ++m) put(kI * a * c[m]);
    }
    if (options.gradient)
      for (int b = 0; b < 3; ++b)
        for (int m = 0; m < 3; ++m) put(kI * kv[b] * a * x[m]);
  }

  // Per-axis phase tables e^{i k_d x_d}
  SoaTable axis[3];
  for (int d = 0; d < 3; ++d) {
    axis[d].re.resize(std::size_t(lattice.n[d]) * nn);
    axis[d].im.resize(std::size_t(lattice.n[d]) * nn);
    for (int ix = 0; ix < lattice.n[d]; ++ix) {
      const double xd = lattice.origin[d] + ix * h[d];
      for (std::size_t j = 0; j < nn; ++j) {
        const double ph = g.k()[nodes[j]] * g.khat(d)[nodes[j]] * xd;
        axis[d].re[ix * nn + j] = std::cos(ph);
        axis[d].im[ix * nn + j] = std::sin(ph);
      }
    }
  }

  std::vector<double> acc_re(n_sites * n_fields, 0.0), acc_im(n_sites * n_fields, 0.0);
  const kernels::KernelTable &kt = kernels::active();
  const std::size_t n_blocks = (n_sites + kSiteBlock - 1) / kSiteBlock;

  parallel_for(n_blocks, [&](std::size_t b0, std::size_t b1) {
    std::vector<double> ph_re(kSiteBlock * kNodeBlock), ph_im(kSiteBlock * kNodeBlock);
    std::vector<double> t_re(kNodeBlock), t_im(kNodeBlock);
    std::vector<const double *> pr(n_fields), pi(n_fields);
    for (std::size_t blk = b0; blk < b1; ++blk) {
      const std::size_t s0 = blk * kSiteBlock;
      const std::size_t ns = std::min(kSiteBlock, n_sites - s0);
      for (std::size_t n0 = 0; n0 < nn; n0 += kNodeBlock) {
        const std::size_t nb = std::min(kNodeBlock, nn - n0);
        for (std::size_t s = 0; s < ns; ++s) {
          const auto &id = snap.index[s0 + s];
          const std::size_t ox = id[0] * nn + n0, oy = id[1] * nn + n0, oz = id[2] * nn + n0;
          kt.cmul(nb, axis[0].re.data() + ox, axis[0].im.data() + ox,
                  axis[1].re.data() + oy, axis[1].im.data() + oy, t_re.data(),
                  t_im.data());
          kt.cmul(nb, t_re.data(), t_im.data(), axis[2].re.data() + oz,
                  axis[2].im.data() + oz, ph_re.data() + s * nb, ph_im.data() + s * nb);
        }
        for (std::size_t f = 0; f < n_fields; ++f) {
          pr[f] = cre[f].data() + n0;
          pi[f] = cim[f].data() + n0;
        }
        kt.plane_wave_block(nb, ns, ph_re.data(), ph_im.data(), n_fields, pr.data(),
                            pi.data(), acc_re.data() + s0 * n_fields,
                            acc_im.data() + s0 * n_fields);
      }
    }
  });

  auto field = [&](std::size_t s, std::size_t f) {
    return cplx(acc_re[s * n_fields + f], acc_im[s * n_fields + f]);
  };
  snap.A.resize(n_sites);
  snap.E.resize(n_sites);
  if (options.magnetic) snap.B.resize(n_sites);
  if (options.gradient) snap.dA.resize(n_sites);
  for (std::size_t s = 0; s < n_sites; ++s) {
    std::size_t f = 0;
    for (int m = 0; m < 3; ++m) snap.A[s][m] = field(s, f++);
    for (int m = 0; m < 3; ++m) snap.E[s][m] = field(s, f++);
    if (options.magnetic)
      for (int m = 0; m < 3; ++m) snap.B[s][m] = field(s, f++);
    if (options.gradient)
      for (int b = 0; b < 3; ++b)
        for (int m = 0; m < 3; ++m) snap.dA[s][b][m] = field(s, f++);
  }
  return snap;
}

ConstantsOfMotion real_space_com(const FieldSnapshot &s) {
  if (s.dA.size() != s.size() || s.E.size() != s.size() || s.A.size() != s.size())
    throw ConfigError("real_space_com: snapshot lacks E, A or grad A");
  double p0 = 0.0;
  double p[3] = {}, sam[3] = {}, oam[3] = {};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = s.weight[i];
    const CVec3 &E = s.E[i];
    const CVec3 &A = s.A[i];
    const auto &dA = s.dA[i];
    const Vec3 &x = s.position[i];
    p0 += w * norm2(E);
    for (int j = 0; j < 3; ++j) p[j] += w * cdot(E, dA[j]).real();
    const CVec3 ea = cross(conj(E), A);
    for (int j = 0; j < 3; ++j) sam[j] += w * ea[j].real();
    // (x ^ grad)_j A_m = eps_jab x_a d_b A_m
    cplx g[3] = {};
    for (int b = 0; b < 3; ++b) g[b] = cdot(E, dA[b]);
    oam[0] += w * (x[1] * g[2] - x[2] * g[1]).real();
    oam[1] += w * (x[2] * g[0] - x[0] * g[2]).real();
    oam[2] += w * (x[0] * g[1] - x[1] * g[0]).real();
  }
  const double pre = 1.0 / (2.0 * kPi);
  ConstantsOfMotion c;
  c.energy = pre * p0;
  for (int j = 0; j < 3; ++j) {
    c.momentum[j] = pre * p[j];
    c.sam[j] = pre * sam[j];
    c.oam[j] = pre * oam[j];
    c.total_am[j] = c.oam[j] + c.sam[j];
  }
  return c;
}

ConstantsOfMotion kspace_com(const TransverseWavefunction &v, int l_max) {
  ConstantsOfMotion c;
  c.energy = inner_product(v, apply_P(0, v)).real();
  for (int j = 0; j < 3; ++j) {
    c.momentum[j] = inner_product(v, apply_P(j + 1, v)).real();
    c.sam[j] = inner_product(v, apply_S(j + 1, v)).real();
  }
  c.total_am[2] = inner_product(v, apply_J3_azimuthal(v)).real();
  ExpansionPtr e = v.spectral();
  if (!e) {
    const int l = std::min(l_max, max_resolved_l(v.grid()));
    if (l >= 1) e = std::make_shared<const VshExpansion>(analyze(v, l));
  }
  if (e) {
    const auto &rw = v.grid().radial_weights();
    for (int j = 1; j <= 2; ++j)
      c.total_am[j - 1] = spectral_inner_product(*e, apply_J(j, *e), rw).real();
  }
  for (int j = 0; j < 3; ++j) c.oam[j] = c.total_am[j] - c.sam[j];
  return c;
}

const std::array<const char *, 13> &com_names() {
  static const std::array<const char *, 13> names{
      "P0", "P1", "P2", "P3", "J1", "J2", "J3", "L1", "L2", "L3", "S1", "S2", "S3"};
  return names;
}

std::array<double, 13> com_values(const ConstantsOfMotion &c) {
  return {c.energy,      c.momentum[0], c.momentum[1], c.momentum[2], c.total_am[0],
          c.total_am[1], c.total_am[2], c.oam[0],      c.oam[1],      c.oam[2],
          c.sam[0],      c.sam[1],      c.sam[2]};
}

ComComparison compare_com(const ConstantsOfMotion &real, const ConstantsOfMotion &kspace,
                          double norm2) {
  ComComparison out;
  out.real = real;
  out.kspace = kspace;
  const auto a = com_values(real), b = com_values(kspace);
  const double pscale = std::abs(kspace.energy);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = i < 4 ? pscale : norm2;
    out.rel_error[i] = std::abs(a[i] - b[i]) / scale;
    out.max_rel_error = std::max(out.max_rel_error, out.rel_error[i]);
  }
  return out;
}

double extent_convergence_shift(const TransverseWavefunction &v,
                                const SpaceTimeLattice &lattice, double t) {
  SynthesisOptions opt;
  opt.magnetic = false;
  opt.gradient = true;
  const ConstantsOfMotion base = real_space_com(synthesize_fields(v, lattice, t, opt));
  SpaceTimeLattice big = lattice;
  const Vec3 ctr = lattice.center();
  for (int d = 0; d < 3; ++d) {
    big.extents[d] = 2.0 * lattice.extents[d];
    big.origin[d] = ctr[d] - lattice.extents[d];
    big.n[d] = 2 * (lattice.n[d] - 1) + 1;
  }
  big.mask_radius = 2.0 * lattice.mask_radius;
  const ConstantsOfMotion wide = real_space_com(synthesize_fields(v, big, t, opt));
  const double n2 = inner_product(v, v).real();
  return compare_com(base, wide, n2).max_rel_error;
}

namespace {

void put_le(std::ostream &out, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  out.write(reinterpret_cast<const char *>(&bits), sizeof bits);
}

} // namespace

void write_fields_binary(std::ostream &out, const FieldSnapshot &s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CVec3 *parts[3] = {&s.A[i], &s.E[i], s.B.empty() ? nullptr : &s.B[i]};
    for (const CVec3 *p : parts) {
      for (int m = 0; m < 3; ++m) {
        const cplx c = p ? (*p)[m] : cplx(0.0);
        put_le(out, c.real());
        put_le(out, c.imag());
      }
    }
  }
}

void write_fields_sidecar(std::ostream &out, const SpaceTimeLattice &lattice,
                          const FieldSnapshot &s) {
  nlohmann::json j;
  j["origin"] = lattice.origin;
  j["extents"] = lattice.extents;
  j["n"] = lattice.n;
  j["spacing"] = lattice.spacing();
  j["mask_radius"] = lattice.mask_radius;
  j["t"] = s.t;
  j["site_count"] = s.size();
  j["site_order"] = "ix-major, then iy, then iz; sites outside the mask are omitted";
  j["components"] = {"A1", "A2", "A3", "E1", "E2", "E3", "B1", "B2", "B3"};
  j["encoding"] = "little-endian float64 (re, im) pairs, site-major, component-minor";
  j["magnetic_present"] = !s.B.empty();
  j["units"] = "hbar = c = 1";
  out << j.dump(2) << '\n';
}

void write_field_slice_csv(std::ostream &out, const FieldSnapshot &s, int iz) {
  out << "x,y,z";
  for (const char *f : {"A", "E", "B"})
    for (int m = 1; m <= 3; ++m) out << ",re_" << f << m << ",im_" << f << m;
  out << '\n';
  char buf[96];
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.index[i][2] != iz) continue;
    const Vec3 &x = s.position[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", x[0], x[1], x[2]);
    out << buf;
    const CVec3 *parts[3] = {&s.A[i], &s.E[i], s.B.empty() ? nullptr : &s.B[i]};
    for (const CVec3 *p : parts)
      for (int m = 0; m < 3; ++m) {
        const cplx c = p ? (*p)[m] : cplx(0.0);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g", c.real(), c.imag());
        out << buf;
      }
    out << '\n';
  }
}

} // namespace angmom
