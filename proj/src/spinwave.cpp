#include "xxzlr/spinwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "xxzlr/errors.hpp"

namespace xxzlr {

namespace {

void require_even_periodic(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw InvalidParams("spin-wave formulas need an even chain length, got " + std::to_string(n_sites));
  }
}

double momentum(int n_sites, int k_index) {
  return 2.0 * std::numbers::pi * static_cast<double>(k_index) / static_cast<double>(n_sites);
}

int k_min(int n_sites) { return -n_sites / 2 + 1; }
int k_max(int n_sites) { return n_sites / 2; }

}  // namespace

double long_range_cosine_sum(int n_sites, int k_index) {
  require_even_periodic(n_sites);
  const double q = momentum(n_sites, k_index);
  double s = 0.0;
  for (int r = 1; r <= n_sites / 2; ++r) s += std::cos(q * r);
  return s;
}

double long_range_cosine_sum_closed(int n_sites, int k_index) {
  require_even_periodic(n_sites);
  const int m = n_sites / 2;
  const int kk = ((k_index % n_sites) + n_sites) % n_sites;
  if (kk == 0) return static_cast<double>(m);
  const double q = momentum(n_sites, kk);
  return std::sin(m * q / 2.0) * std::cos((m + 1) * q / 2.0) / std::sin(q / 2.0);
}

double fm_dispersion(const ModelParams& p, int k_index) {
  require_even_periodic(p.n_sites);
  const double q = momentum(p.n_sites, k_index);
  return 1.0 - p.alpha * std::cos(q) + (p.j_lr / p.n_sites) * long_range_cosine_sum_closed(p.n_sites, k_index);
}

FmStability fm_stability(const ModelParams& p) {
  require_even_periodic(p.n_sites);
  FmStability out;
  out.min_omega = std::numeric_limits<double>::infinity();
  for (int k = k_min(p.n_sites); k <= k_max(p.n_sites); ++k) {
    const double w = fm_dispersion(p, k);
    if (w < out.min_omega) {
      out.min_omega = w;
      out.argmin_k = k;
    }
  }
  out.stable = out.min_omega >= -1e-12;
  return out;
}

double fm_phase_boundary(double j_lr) { return j_lr >= 0.0 ? 1.0 : 1.0 + 0.5 * j_lr; }

XyCoefficients xy_coefficients(const ModelParams& p, int k_index) {
  require_even_periodic(p.n_sites);
  const double c = std::cos(momentum(p.n_sites, k_index));
  const double lr = (p.j_lr / (2.0 * p.n_sites)) * long_range_cosine_sum_closed(p.n_sites, k_index);
  XyCoefficients out;
  out.omega = (p.alpha - 0.5 * p.j_lr) - 0.5 * (1.0 + p.alpha) * c + lr;
  out.mu = 0.5 * (1.0 - p.alpha) * c - lr;
  return out;
}

std::optional<double> bogoliubov_energy(double omega, double mu) {
  const double d = omega * omega - mu * mu;
  if (d < 0.0) return std::nullopt;
  return 2.0 * std::sqrt(d);
}

SpinWaveSpectrum fm_spectrum(const ModelParams& p) {
  SpinWaveSpectrum s;
  s.params = p;
  s.params.boundary = Boundary::periodic;
  s.vacuum = Vacuum::fm_z;
  s.min_energy = std::numeric_limits<double>::infinity();
  for (int k = k_min(p.n_sites); k <= k_max(p.n_sites); ++k) {
    const double w = fm_dispersion(p, k);
    s.modes.push_back({k, w, 0.0, w, true});
    s.min_energy = std::min(s.min_energy, w);
  }
  s.stable = s.min_energy > -1e-12;
  return s;
}

SpinWaveSpectrum xy_spectrum(const ModelParams& p) {
  SpinWaveSpectrum s;
  s.params = p;
  s.params.boundary = Boundary::periodic;
  s.vacuum = Vacuum::xy_x;
  s.min_energy = std::numeric_limits<double>::infinity();
  bool all_valid = true;
  for (int k = k_min(p.n_sites); k <= k_max(p.n_sites); ++k) {
    const XyCoefficients c = xy_coefficients(p, k);
    const auto e = bogoliubov_energy(c.omega, c.mu);
    SpinWaveMode m{k, c.omega, c.mu, e.value_or(std::numeric_limits<double>::quiet_NaN()), e.has_value()};
    if (e) s.min_energy = std::min(s.min_energy, *e);
    all_valid = all_valid && m.valid;
    s.modes.push_back(m);
  }
  s.stable = all_valid && s.min_energy > -1e-12;
  return s;
}

double excitation_density_at(double alpha, double j_lr, int n_sites) {
  require_even_periodic(n_sites);
  const ModelParams p{alpha, j_lr, n_sites, Boundary::periodic};
  double sum = 0.0;
  for (int k = k_min(n_sites); k <= k_max(n_sites); ++k) {
    if (k == 0) continue;
    const XyCoefficients c = xy_coefficients(p, k);
    const double ratio = 1.0 - (c.mu * c.mu) / (c.omega * c.omega);
    if (!(ratio > 0.0)) {
      throw ModeInstability("mode k=" + std::to_string(k) + " at N=" + std::to_string(n_sites) +
                                " has omega^2 <= mu^2",
                            n_sites, k);
    }
    sum += 1.0 / std::sqrt(ratio) - 1.0;
  }
  return sum / (2.0 * n_sites);
}

ExcitationDensityResult excitation_density(double alpha, double j_lr, std::span<const int> sizes) {
  if (sizes.size() < 2) throw InsufficientPoints("excitation density needs at least two sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw InvalidParams("sizes must be strictly increasing");
  }
  ExcitationDensityResult out;
  for (int n : sizes) out.finite_n_series.emplace_back(n, excitation_density_at(alpha, j_lr, n));
  out.value = out.finite_n_series.back().second;

  // Least-squares line in ln N over the largest decade.
  const double n_top = static_cast<double>(sizes.back());
  std::vector<std::pair<double, double>> pts;
  for (auto [n, d] : out.finite_n_series) {
    if (static_cast<double>(n) >= n_top / 10.0) pts.emplace_back(std::log(static_cast<double>(n)), d);
  }
  if (pts.size() < 2) {
    pts.clear();
    for (auto [n, d] : out.finite_n_series) pts.emplace_back(std::log(static_cast<double>(n)), d);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  out.log_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.log_intercept = (sy - out.log_slope * sx) / m;
  out.classification =
      out.log_slope > kLogDivergenceSlope ? DensityScaling::log_divergent : DensityScaling::convergent;
  return out;
}

double excitation_integrand(double alpha, double j_lr, double q) {
  // For q != 0 the long-range cosine sum is O(1/N) and drops out.
  const double c = std::cos(q);
  const double omega = (alpha - 0.5 * j_lr) - 0.5 * (1.0 + alpha) * c;
  const double mu = 0.5 * (1.0 - alpha) * c;
  const double ratio = 1.0 - (mu * mu) / (omega * omega);
  if (!(ratio > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 / std::sqrt(ratio) - 1.0;
}

std::vector<int> default_density_sizes() { return {64, 128, 256, 512, 1024, 2048, 4096}; }

Phase classify_spinwave(double alpha, double j_lr) {
  if (alpha <= fm_phase_boundary(j_lr)) return Phase::fm;
  if (j_lr == 0.0) return Phase::tll;
  const auto sizes = default_density_sizes();
  try {
    const auto r = excitation_density(alpha, j_lr, sizes);
    return r.classification == DensityScaling::convergent ? Phase::xy_ssb : Phase::tll;
  } catch (const ModeInstability& e) {
    throw Unclassifiable(std::string("XY spin-wave expansion invalid: ") + e.what());
  }
}

}  // namespace xxzlr
