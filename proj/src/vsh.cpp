#include "angmom/vsh.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "angmom/parallel.hpp"

namespace angmom {

void normalized_legendre(int l_max, double x, std::vector<double> &out) {
  out.assign(legendre_index(l_max, l_max) + 1, 0.0);
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  // Pbar_mm = (-1)^m sqrt((2m+1)/(4 pi) prod_{i<=m} (2i-1)/(2i)) s^m
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 0; m <= l_max; ++m) {
    if (m > 0) pmm *= -s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    out[legendre_index(m, m)] = pmm;
    if (m + 1 > l_max) continue;
    double p_lm2 = pmm;
    double p_lm1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
    out[legendre_index(m + 1, m)] = p_lm1;
    for (int l = m + 2; l <= l_max; ++l) {
      const double l2 = double(l) * l, m2 = double(m) * m;
      const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m2) * (2.0 * l + 1.0) /
                                 ((2.0 * l - 3.0) * (l2 - m2)));
      const double p = a * x * p_lm1 - b * p_lm2;
      out[legendre_index(l, m)] = p;
      p_lm2 = p_lm1;
      p_lm1 = p;
    }
  }
}

namespace {

// Pbar_{l,q} for any integer q, zero when |q| > l.
inline double pbar(const double *table, int l, int q) {
  const int aq = q < 0 ? -q : q;
  if (aq > l) return 0.0;
  const double v = table[legendre_index(l, aq)];
  return (q < 0 && (aq & 1)) ? -v : v;
}

struct Ladder {
  double norm, plus, minus;
};

inline Ladder ladder(int l, int m) {
  const double ll = double(l) * (l + 1);
  return {std::sqrt(ll), std::sqrt(std::max(0.0, ll - double(m) * (m + 1))),
          std::sqrt(std::max(0.0, ll - double(m) * (m - 1)))};
}

// (+, -, z) components of Y^(1)_lm at one direction.
std::array<cplx, 3> y1_spherical(const double *table, int l, int m, double phi) {
  const Ladder c = ladder(l, m);
  return {c.plus / c.norm * pbar(table, l, m + 1) * std::polar(1.0, (m + 1) * phi),
          c.minus / c.norm * pbar(table, l, m - 1) * std::polar(1.0, (m - 1) * phi),
          double(m) / c.norm * pbar(table, l, m) * std::polar(1.0, m * phi)};
}

inline CVec3 to_cartesian(const std::array<cplx, 3> &s) {
  return {0.5 * (s[0] + s[1]), (s[0] - s[1]) / (2.0 * kI), s[2]};
}

void check_lm(int l, int m, const char *where) {
  if (l < 0 || std::abs(m) > l)
    throw ConfigError(std::string(where) + ": require 0 <= |m| <= l");
}

} // namespace

cplx scalar_ylm(int l, int m, double theta, double phi) {
  check_lm(l, m, "scalar_ylm");
  std::vector<double> table;
  normalized_legendre(l, std::cos(theta), table);
  return pbar(table.data(), l, m) * std::polar(1.0, m * phi);
}

std::pair<CVec3, CVec3> vsh_pair(int l, int m, double theta, double phi) {
  check_lm(l, m, "vsh_pair");
  if (l == 0) throw ConfigError("vsh_pair: l = 0 carries no transverse harmonic");
  std::vector<double> table;
  normalized_legendre(l, std::cos(theta), table);
  const CVec3 y1 = to_cartesian(y1_spherical(table.data(), l, m, phi));
  const CVec3 y2 = cross(unit_vector(theta, phi), y1);
  return {y1, y2};
}

VshExpansion::VshExpansion(int l_max, int n_radial)
    : l_max_(l_max), n_radial_(n_radial) {
  if (l_max < 1) throw ConfigError("VshExpansion: l_max must be >= 1");
  if (n_radial < 1) throw ConfigError("VshExpansion: n_radial must be >= 1");
  data_.assign(2 * term_count(l_max) * std::size_t(n_radial), cplx(0.0));
}

VshExpansion &VshExpansion::operator*=(cplx s) {
  for (auto &c : data_) c *= s;
  return *this;
}

void VshExpansion::axpy(cplx s, const VshExpansion &other) {
  if (!same_shape(other)) throw ConfigError("VshExpansion: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
}

double VshExpansion::norm2(std::span<const double> radial_weights) const {
  if (radial_weights.size() != std::size_t(n_radial_))
    throw ConfigError("VshExpansion::norm2: radial weight count mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    s += radial_weights[i % n_radial_] * std::norm(data_[i]);
  return s;
}

int max_resolved_l(const WaveVectorGrid &grid) {
  return std::min(grid.n_theta() - 1, (grid.n_phi() - 1) / 2);
}

namespace {

// Ring-local discrete Fourier machinery: twiddle[(q*p) mod n] = e^{2 pi i q p / n}.
struct RingDft {
  int n;
  std::vector<cplx> twiddle;
  explicit RingDft(int n_phi) : n(n_phi), twiddle(n_phi) {
    for (int j = 0; j < n; ++j) twiddle[j] = std::polar(1.0, 2.0 * kPi * j / n);
  }
  cplx tw(long long qp) const {
    long long r = qp % n;
    if (r < 0) r += n;
    return twiddle[r];
  }
};

void check_resolution(const WaveVectorGrid &g, int l_max, const char *where) {
  if (g.n_theta() < l_max + 1)
    throw ConfigError(std::string(where) + ": n_theta must be >= l_max + 1 (n_theta=" +
                      std::to_string(g.n_theta()) + ", l_max=" + std::to_string(l_max) + ")");
  if (g.n_phi() < 2 * l_max + 1)
    throw ConfigError(std::string(where) + ": n_phi must be >= 2 l_max + 1 (n_phi=" +
                      std::to_string(g.n_phi()) + ", l_max=" + std::to_string(l_max) + ")");
}

std::vector<std::vector<double>> legendre_rings(const AngularRule &r, int l_max) {
  std::vector<std::vector<double>> tables(r.n_theta);
  for (int it = 0; it < r.n_theta; ++it) normalized_legendre(l_max, r.x[it], tables[it]);
  return tables;
}

} // namespace

VshExpansion analyze(const TransverseWavefunction &v, int l_max) {
  const WaveVectorGrid &g = v.grid();
  if (l_max < 1) throw ConfigError("analyze: l_max must be >= 1");
  check_resolution(g, l_max, "analyze");

  const AngularRule &rule = g.angular();
  const int nt = g.n_theta(), np = g.n_phi();
  const int Q = l_max + 1;
  const int nq = 2 * Q + 1;
  const RingDft dft(np);
  const auto tables = legendre_rings(rule, l_max);
  VshExpansion e(l_max, g.n_k());

  parallel_for(std::size_t(g.n_k()), [&](std::size_t k0, std::size_t k1) {
    // F[field][component][q + Q], field 0 = v, 1 = khat ^ v; components (+, -, z)
    std::vector<cplx> F(2 * 3 * nq);
    std::vector<CVec3> ring(np), ring_u(np);
    for (std::size_t ik = k0; ik < k1; ++ik) {
      for (int it = 0; it < nt; ++it) {
        for (int ip = 0; ip < np; ++ip) {
          const std::size_t i = g.index(int(ik), it, ip);
          ring[ip] = v.at(i);
          ring_u[ip] = cross(g.khat_at(i), ring[ip]);
        }
        std::fill(F.begin(), F.end(), cplx(0.0));
        for (int f = 0; f < 2; ++f) {
          const auto &src = f == 0 ? ring : ring_u;
          for (int ip = 0; ip < np; ++ip) {
            const CVec3 &x = src[ip];
            const cplx comp[3] = {x[0] + kI * x[1], x[0] - kI * x[1], x[2]};
            for (int q = -Q; q <= Q; ++q) {
              const cplx t = std::conj(dft.tw(static_cast<long long>(q) * ip));
              for (int c = 0; c < 3; ++c) F[(f * 3 + c) * nq + q + Q] += comp[c] * t;
            }
          }
        }
        const double w = rule.w_theta[it] * rule.w_phi;
        const double *P = tables[it].data();
        for (int l = 1; l <= l_max; ++l) {
          for (int m = -l; m <= l; ++m) {
            const Ladder c = ladder(l, m);
            const double cp = 0.5 * c.plus / c.norm * pbar(P, l, m + 1);
            const double cm = 0.5 * c.minus / c.norm * pbar(P, l, m - 1);
            const double cz = double(m) / c.norm * pbar(P, l, m);
            cplx t[2];
            for (int f = 0; f < 2; ++f) {
              t[f] = cp * F[(f * 3 + 0) * nq + m + 1 + Q] +
                     cm * F[(f * 3 + 1) * nq + m - 1 + Q] + cz * F[(f * 3 + 2) * nq + m + Q];
            }
            e.at(1, l, m, int(ik)) += w * t[0];
            e.at(2, l, m, int(ik)) -= w * t[1];
          }
        }
      }
    }
  });
  return e;
}

TransverseWavefunction synthesize(const VshExpansion &e, GridPtr grid) {
  const WaveVectorGrid &g = *grid;
  if (e.n_radial() != g.n_k())
    throw ConfigError("synthesize: expansion radial size does not match the grid");
  const int l_max = e.l_max();
  const AngularRule &rule = g.angular();
  const int nt = g.n_theta(), np = g.n_phi();
  const int Q = l_max + 1;
  const int nq = 2 * Q + 1;
  const RingDft dft(np);
  const auto tables = legendre_rings(rule, l_max);
  VectorSamples out(g.size());

  parallel_for(std::size_t(g.n_k()), [&](std::size_t k0, std::size_t k1) {
    // G[field][component][q + Q], field 0 = T1, 1 = T2
    std::vector<cplx> G(2 * 3 * nq);
    for (std::size_t ik = k0; ik < k1; ++ik) {
      for (int it = 0; it < nt; ++it) {
        std::fill(G.begin(), G.end(), cplx(0.0));
        const double *P = tables[it].data();
        for (int l = 1; l <= l_max; ++l) {
          for (int m = -l; m <= l; ++m) {
            const Ladder c = ladder(l, m);
            const double cp = c.plus / c.norm * pbar(P, l, m + 1);
            const double cm = c.minus / c.norm * pbar(P, l, m - 1);
            const double cz = double(m) / c.norm * pbar(P, l, m);
            for (int f = 0; f < 2; ++f) {
              const cplx a = e.at(f + 1, l, m, int(ik));
              if (a == cplx(0.0)) continue;
              G[(f * 3 + 0) * nq + m + 1 + Q] += cp * a;
              G[(f * 3 + 1) * nq + m - 1 + Q] += cm * a;
              G[(f * 3 + 2) * nq + m + Q] += cz * a;
            }
          }
        }
        for (int ip = 0; ip < np; ++ip) {
          cplx T[2][3] = {};
          for (int q = -Q; q <= Q; ++q) {
            const cplx t = dft.tw(static_cast<long long>(q) * ip);
            for (int f = 0; f < 2; ++f)
              for (int c = 0; c < 3; ++c) T[f][c] += G[(f * 3 + c) * nq + q + Q] * t;
          }
          const std::size_t i = g.index(int(ik), it, ip);
          const CVec3 t1 = to_cartesian({T[0][0], T[0][1], T[0][2]});
          const CVec3 t2 = to_cartesian({T[1][0], T[1][1], T[1][2]});
          out.set(i, t1 + cross(g.khat_at(i), t2));
        }
      }
    }
  });
  auto spectral = std::make_shared<const VshExpansion>(e);
  return TransverseWavefunction::measured(std::move(grid), std::move(out))
      .with_spectral(std::move(spectral));
}

TransverseWavefunction with_spectral(const TransverseWavefunction &v, int l_max) {
  return v.with_spectral(std::make_shared<const VshExpansion>(analyze(v, l_max)));
}

void write_expansion_json(std::ostream &out, const VshExpansion &e) {
  nlohmann::json arr = nlohmann::json::array();
  for (int a = 1; a <= 2; ++a) {
    for (int l = 1; l <= e.l_max(); ++l) {
      for (int m = -l; m <= l; ++m) {
        nlohmann::json radial = nlohmann::json::array();
        for (const cplx &c : e.radial(a, l, m)) radial.push_back({c.real(), c.imag()});
        arr.push_back({{"a", a}, {"l", l}, {"m", m}, {"radial", std::move(radial)}});
      }
    }
  }
  out << arr.dump(1) << '\n';
}

} // namespace angmom
