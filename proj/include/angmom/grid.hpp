#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "angmom/types.hpp"

namespace angmom {

struct GridSpec {
  int n_k = 16;
  double k_min = 0.5;
  double k_max = 6.0;
  int n_theta = 32;
  int n_phi = 64;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
  bool operator==(const GridSpec &) const = default;
};

/// Gauss-Legendre nodes and weights on [a, b], nodes ascending.
void gauss_legendre(int n, double a, double b, std::vector<double> &nodes,
                    std::vector<double> &weights);

/// Product rule on the unit sphere: Gauss-Legendre in x = cos(theta) times a
/// uniform azimuthal rule. Angular node index is it * n_phi + ip.
struct AngularRule {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> x;       // cos(theta), descending
  std::vector<double> theta;   // acos(x), ascending
  std::vector<double> w_theta; // weights in x, sum to 2
  std::vector<double> phi;     // 2 pi ip / n_phi
  double w_phi = 0.0;          // 2 pi / n_phi

  std::size_t size() const { return std::size_t(n_theta) * n_phi; }
  double weight(std::size_t it, std::size_t ip) const {
    (void)ip;
    return w_theta[it] * w_phi;
  }
};

AngularRule make_angular_rule(int n_theta, int n_phi);

/// Spherical-coordinate discretization of wave-vector space.
/// Node index = (ik * n_theta + it) * n_phi + ip.
class WaveVectorGrid {
public:
  explicit WaveVectorGrid(const GridSpec &spec);

  const GridSpec &spec() const { return spec_; }
  const AngularRule &angular() const { return angular_; }
  std::size_t size() const { return k_.size(); }
  int n_k() const { return spec_.n_k; }
  int n_theta() const { return spec_.n_theta; }
  int n_phi() const { return spec_.n_phi; }
  std::size_t ring_count() const { return std::size_t(spec_.n_k) * spec_.n_theta; }

  std::size_t index(int ik, int it, int ip) const {
    return (std::size_t(ik) * spec_.n_theta + it) * spec_.n_phi + ip;
  }

  /// Radial nodes and weights; radial weights include the k^2 Jacobian.
  const std::vector<double> &radial_nodes() const { return radial_k_; }
  const std::vector<double> &radial_weights() const { return radial_w_; }

  // Per-node arrays.
  const std::vector<double> &k() const { return k_; }
  const std::vector<double> &theta() const { return theta_; }
  const std::vector<double> &phi() const { return phi_; }
  const std::vector<double> &weights() const { return weight_; }
  /// Unit direction, component c in {0,1,2}.
  const std::vector<double> &khat(int c) const { return khat_[c]; }
  const double *const *khat_ptrs() const { return khat_ptr_; }

  Vec3 khat_at(std::size_t i) const {
    return {khat_[0][i], khat_[1][i], khat_[2][i]};
  }
  Vec3 k_at(std::size_t i) const {
    return {k_[i] * khat_[0][i], k_[i] * khat_[1][i], k_[i] * khat_[2][i]};
  }

  bool same_as(const WaveVectorGrid &other) const {
    return this == &other || spec_ == other.spec_;
  }

private:
  GridSpec spec_;
  AngularRule angular_;
  std::vector<double> radial_k_, radial_w_;
  std::vector<double> k_, theta_, phi_, weight_;
  std::vector<double> khat_[3];
  const double *khat_ptr_[3];
};

using GridPtr = std::shared_ptr<const WaveVectorGrid>;

GridPtr build_grid(const GridSpec &spec);

/// sum_i weight_i f_i over all nodes.
cplx integrate(const WaveVectorGrid &grid, std::span<const cplx> f);
double integrate(const WaveVectorGrid &grid, std::span<const double> f);

/// Integral over the unit sphere of f sampled on the angular subgrid
/// (index it * n_phi + ip).
cplx angular_integrate(const WaveVectorGrid &grid, std::span<const cplx> f);
double angular_integrate(const WaveVectorGrid &grid, std::span<const double> f);

} // namespace angmom
