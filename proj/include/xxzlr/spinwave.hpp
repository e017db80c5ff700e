#pragma once

// Linear spin-wave theory about the z-polarized (ferromagnetic) and the
// x-polarized (XY) classical vacua, on a periodic chain of even length.
// Mode k carries momentum 2*pi*k/N; the Brillouin zone is covered once by
// k = -N/2+1 .. N/2.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "xxzlr/model.hpp"
#include "xxzlr/phase.hpp"

namespace xxzlr {

/// sum_{r=1}^{N/2} cos(2 pi k r / N) by direct summation.
double long_range_cosine_sum(int n_sites, int k_index);
/// The same sum from the closed geometric-series form.
double long_range_cosine_sum_closed(int n_sites, int k_index);

double fm_dispersion(const ModelParams& p, int k_index);

struct FmStability {
  double min_omega = 0.0;
  int argmin_k = 0;
  bool stable = false;
};
FmStability fm_stability(const ModelParams& p);

/// Critical anisotropy below which the z-polarized state is the ground state.
double fm_phase_boundary(double j_lr);

struct XyCoefficients {
  double omega = 0.0;
  double mu = 0.0;
};
XyCoefficients xy_coefficients(const ModelParams& p, int k_index);

/// 2 sqrt(omega^2 - mu^2); nullopt marks a mode with omega^2 < mu^2.
std::optional<double> bogoliubov_energy(double omega, double mu);

enum class Vacuum { fm_z, xy_x };

struct SpinWaveMode {
  int k = 0;
  double omega = 0.0;
  double mu = 0.0;
  double energy = 0.0;  // NaN when the mode is unstable
  bool valid = true;
};

struct SpinWaveSpectrum {
  ModelParams params;
  Vacuum vacuum = Vacuum::fm_z;
  std::vector<SpinWaveMode> modes;
  double min_energy = 0.0;
  bool stable = false;
};

SpinWaveSpectrum fm_spectrum(const ModelParams& p);
SpinWaveSpectrum xy_spectrum(const ModelParams& p);

enum class DensityScaling { convergent, log_divergent };

struct ExcitationDensityResult {
  double value = 0.0;  // density at the largest N
  std::vector<std::pair<int, double>> finite_n_series;
  double log_slope = 0.0;  // d(density)/d(ln N) over the largest decade
  double log_intercept = 0.0;
  DensityScaling classification = DensityScaling::convergent;
};

inline constexpr double kLogDivergenceSlope = 0.01;

/// (1/2N) sum_{k != 0} ([1 - mu_k^2/omega_k^2]^{-1/2} - 1) at one size.
/// Throws ModeInstability when a mode has omega_k^2 < mu_k^2.
double excitation_density_at(double alpha, double j_lr, int n_sites);

/// Series over `sizes` (increasing, even), fitted against ln N.
ExcitationDensityResult excitation_density(double alpha, double j_lr, std::span<const int> sizes);

/// Thermodynamic-limit integrand [1 - mu(q)^2/omega(q)^2]^{-1/2} - 1.
double excitation_integrand(double alpha, double j_lr, double q);

std::vector<int> default_density_sizes();

/// FM below the boundary, TLL on the short-range line, XY_SSB when the
/// excitation density converges. Throws Unclassifiable where the XY
/// expansion breaks down.
Phase classify_spinwave(double alpha, double j_lr);

}  // namespace xxzlr
