#include "angmom/grid.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace angmom {

void GridSpec::validate() const {
  auto fail = [](const std::string &key, const std::string &why) {
    throw ConfigError("grid." + key + ": " + why);
  };
  if (n_k < 1) fail("n_k", "must be >= 1");
  if (!(std::isfinite(k_min) && k_min > 0.0)) fail("k_min", "must be > 0");
  if (!(std::isfinite(k_max) && k_max > k_min)) fail("k_max", "must exceed k_min");
  if (n_theta < 2) fail("n_theta", "must be >= 2");
  if (n_phi < 4) fail("n_phi", "must be >= 4");
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  if (n == 0) return {1.0, 0.0};
  return {p1, n * (x * p1 - p0) / ((x - 1.0) * (x + 1.0))};
}

} // namespace

void gauss_legendre(int n, double a, double b, std::vector<double> &nodes,
                    std::vector<double> &weights) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
  gsl_integration_glfixed_table *table =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
  if (!table) throw NumericalError("gauss_legendre: table allocation failed");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(-1.0, 1.0, i, &x[i], &w[i], table);
  gsl_integration_glfixed_table_free(table);
  std::sort(x.begin(), x.end());

  // GSL's tables outside its precomputed set are good to ~1e-10 only; a few
  // Newton steps bring nodes and weights to rounding.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double xi = x[i];
    for (int it = 0; it < 3; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, xi);
      xi -= p / dp;
    }
    const double dp = legendre_with_derivative(n, xi).second;
    const double wi = 2.0 / ((1.0 - xi) * (1.0 + xi) * dp * dp);
    x[i] = xi;
    x[n - 1 - i] = -xi;
    w[i] = w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = c + h * x[i];
    weights[i] = h * w[i];
  }
}

AngularRule make_angular_rule(int n_theta, int n_phi) {
  AngularRule r;
  r.n_theta = n_theta;
  r.n_phi = n_phi;
  gauss_legendre(n_theta, -1.0, 1.0, r.x, r.w_theta);
  // theta ascending, i.e. x descending
  std::reverse(r.x.begin(), r.x.end());
  std::reverse(r.w_theta.begin(), r.w_theta.end());
  r.theta.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) r.theta[i] = std::acos(r.x[i]);
  r.phi.resize(n_phi);
  for (int i = 0; i < n_phi; ++i) r.phi[i] = 2.0 * kPi * i / n_phi;
  r.w_phi = 2.0 * kPi / n_phi;
  return r;
}

WaveVectorGrid::WaveVectorGrid(const GridSpec &spec) : spec_(spec) {
  spec_.validate();
  angular_ = make_angular_rule(spec_.n_theta, spec_.n_phi);
  gauss_legendre(spec_.n_k, spec_.k_min, spec_.k_max, radial_k_, radial_w_);
  for (int i = 0; i < spec_.n_k; ++i) radial_w_[i] *= radial_k_[i] * radial_k_[i];

  const std::size_t n = std::size_t(spec_.n_k) * spec_.n_theta * spec_.n_phi;
  k_.resize(n);
  theta_.resize(n);
  phi_.resize(n);
  weight_.resize(n);
  for (auto &c : khat_) c.resize(n);

  std::vector<double> cphi(spec_.n_phi), sphi(spec_.n_phi);
  for (int ip = 0; ip < spec_.n_phi; ++ip) {
    cphi[ip] = std::cos(angular_.phi[ip]);
    sphi[ip] = std::sin(angular_.phi[ip]);
  }
  for (int ik = 0; ik < spec_.n_k; ++ik) {
    for (int it = 0; it < spec_.n_theta; ++it) {
      const double x = angular_.x[it];
      const double st = std::sqrt((1.0 - x) * (1.0 + x));
      for (int ip = 0; ip < spec_.n_phi; ++ip) {
        const std::size_t i = index(ik, it, ip);
        k_[i] = radial_k_[ik];
        theta_[i] = angular_.theta[it];
        phi_[i] = angular_.phi[ip];
        weight_[i] = radial_w_[ik] * angular_.w_theta[it] * angular_.w_phi;
        khat_[0][i] = st * cphi[ip];
        khat_[1][i] = st * sphi[ip];
        khat_[2][i] = x;
      }
    }
  }
  for (int c = 0; c < 3; ++c) khat_ptr_[c] = khat_[c].data();
}

GridPtr build_grid(const GridSpec &spec) {
  return std::make_shared<const WaveVectorGrid>(spec);
}

namespace {

void check_size(std::size_t got, std::size_t want, const char *what) {
  if (got != want)
    throw ConfigError(std::string(what) + ": sample count " + std::to_string(got) +
                      " does not match " + std::to_string(want) + " nodes");
}

} // namespace

cplx integrate(const WaveVectorGrid &grid, std::span<const cplx> f) {
  check_size(f.size(), grid.size(), "integrate");
  const auto &w = grid.weights();
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

double integrate(const WaveVectorGrid &grid, std::span<const double> f) {
  check_size(f.size(), grid.size(), "integrate");
  const auto &w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

cplx angular_integrate(const WaveVectorGrid &grid, std::span<const cplx> f) {
  const AngularRule &r = grid.angular();
  check_size(f.size(), r.size(), "angular_integrate");
  cplx s = 0.0;
  for (int it = 0; it < r.n_theta; ++it) {
    cplx ring = 0.0;
    for (int ip = 0; ip < r.n_phi; ++ip) ring += f[std::size_t(it) * r.n_phi + ip];
    s += r.w_theta[it] * ring;
  }
  return s * r.w_phi;
}

double angular_integrate(const WaveVectorGrid &grid, std::span<const double> f) {
  const AngularRule &r = grid.angular();
  check_size(f.size(), r.size(), "angular_integrate");
  double s = 0.0;
  for (int it = 0; it < r.n_theta; ++it) {
    double ring = 0.0;
    for (int ip = 0; ip < r.n_phi; ++ip) ring += f[std::size_t(it) * r.n_phi + ip];
    s += r.w_theta[it] * ring;
  }
  return s * r.w_phi;
}

} // namespace angmom
