#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace xxzlr {

/// Cavity-QED parameters, all in the same angular-frequency unit.
/// delta_c is the atomic transition frequency minus the cavity frequency.
struct CavityParams {
  double g = 0.0;
  double delta_c = 0.0;
  double kappa = 0.0;
  double j_xx = 0.0;
  double j_z = 1.0;
  int n_sites = 2;

  void validate() const;

  bool operator==(const CavityParams&) const = default;
};

struct EffectiveParams {
  double alpha = 0.0;
  double j_over_n = 0.0;            // 4 g^2 / (delta_c j_z)
  double coherent_prefactor = 0.0;  // 4 g^2 delta_c / (4 delta_c^2 + kappa^2), units of j_z
  double gamma_collective = 0.0;    // 2 g^2 kappa / (4 delta_c^2 + kappa^2), units of j_z
  double unitarity_ratio = 0.0;     // delta_c / (kappa / 2); inf for kappa = 0
  double bad_cavity_ratio = 0.0;    // kappa / g; inf for g = 0
  // The i = j part of the pair sum equals coherent_prefactor * sum_i (1 + sz_i) / 2.
  // It commutes with the rest and is left out of H_eff.
  std::string diagonal_terms = "excluded";
};

EffectiveParams effective_params(const CavityParams& cp);

struct SimulationOptions {
  double t_end = 10.0;   // in units of 1 / j_z
  double dt = 0.0;       // RK4 step; 0 means automatic (see integrate notes below)
  double dt_out = 0.05;  // spacing of the returned samples
  int n_max = 4;         // photon cutoff (full model only)
  std::vector<int> initial_up;  // 1 = up per site; empty means up, down, up, ...

  bool operator==(const SimulationOptions&) const = default;
};

/// Time series sampled every dt_out. columns[k][t] belongs to names[k].
struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double dt_used = 0.0;
  std::string integrator;  // "propagator" or "rk4"
  int n_sites = 0;

  const std::vector<double>& column(const std::string& name) const;
  bool has(const std::string& name) const;
};

inline constexpr int kMaxFullSites = 4;
inline constexpr int kMaxPhotonCutoff = 8;
inline constexpr int kMaxEffectiveSites = 6;
inline constexpr double kTraceDriftLimit = 1e-6;
/// With dt = 0 and a Hilbert space of at most this dimension, the Lindblad
/// equation is solved exactly by exponentiating the Liouvillian over dt_out.
/// Larger spaces, or an explicit dt, use fixed-step RK4 with dt snapped to
/// divide dt_out (automatic dt: 0.5 / spectral radius of the effective
/// non-Hermitian Hamiltonian). RK4 halves dt once on TraceDrift.
inline constexpr Eigen::Index kMaxPropagatorDim = 24;

/// Spins plus one lossy cavity mode:
///   H = -delta_c a+a + H_XXZ + g sum_i (a+ s-_i + a s+_i),
///   L = sqrt(kappa) a.
/// Columns: sz_i, n_photon, excitations, energy.
Trajectory simulate_full(const CavityParams& cp, const SimulationOptions& opts);

/// Spins only, with the cavity eliminated:
///   H = coherent_prefactor sum_{i != j} s+_i s-_j + H_XXZ,
///   L = sqrt(2 gamma_collective) sum_i s-_i.
/// Columns: sz_i, energy.
Trajectory simulate_effective(const CavityParams& cp, const SimulationOptions& opts, bool include_dissipator = true);

struct TrajectoryDeviation {
  std::vector<std::string> names;
  std::vector<double> max_abs_deviation;
  std::vector<double> at_time;  // time of the maximum
  double max_sz_deviation = 0.0;
};

/// Compares the columns the two trajectories share. Throws GridMismatch
/// unless both use the same time grid.
TrajectoryDeviation compare_trajectories(const Trajectory& a, const Trajectory& b);

}  // namespace xxzlr
