#pragma once

#include <cstdint>
#include <vector>

#include "xxzlr/model.hpp"
#include "xxzlr/mpo.hpp"
#include "xxzlr/mps.hpp"

namespace xxzlr {

inline constexpr double kMaxAcceptedTruncation = 1e-6;

struct DmrgConfig {
  std::vector<int> bond_dims{16, 32, 64, 128};  // cap per sweep; the last entry repeats
  double truncation_cut = 1e-6;                 // discarded Schmidt weight per split
  double energy_tol = 1e-9;                     // between consecutive sweeps
  int max_sweeps = 20;
  int min_sweeps = 2;
  std::uint64_t seed = 1;
  int initial_bond_dim = 16;
  // -pin_field * sum_i sz_i during the first pin_sweeps sweeps. It picks the
  // largest-magnetization member of a degenerate multiplet instead of a
  // superposition; later sweeps and the reported energy use the bare Hamiltonian.
  double pin_field = 4e-4;
  int pin_sweeps = 6;
  double local_tol = 1e-11;
  int local_max_iter = 40;
  int local_krylov = 20;
  bool compute_variance = false;

  /// Throws InvalidParams when the settings cannot honor the 1e-6 bound.
  void validate() const;
  int bond_cap(int sweep) const;

  bool operator==(const DmrgConfig&) const = default;
};

struct DmrgReport {
  double energy = 0.0;  // <H> without the pinning term
  std::vector<double> energies_per_sweep;
  std::vector<double> truncation_per_sweep;
  double max_truncation_error = 0.0;  // over the last sweep
  bool converged = false;  // |dE| < energy_tol between the last two sweeps
  int sweeps = 0;
  std::vector<double> entropy_profile;  // bonds 1..N-1
  std::vector<int> bond_dims;
  double variance = -1.0;  // filled when compute_variance is set

  /// Converged and within the 1e-6 truncation bound.
  bool accepted() const { return converged && max_truncation_error < kMaxAcceptedTruncation; }
};

struct DmrgResult {
  MatrixProductState state;
  DmrgReport report;
};

/// Two-site DMRG from a seeded random MPS. A run that exhausts max_sweeps
/// returns with report.converged = false; use require_converged to turn that
/// into NotConverged.
DmrgResult dmrg_ground_state(const MatrixProductOperator& mpo, const DmrgConfig& cfg);

/// Same, starting from a given state.
DmrgResult dmrg_ground_state(const MatrixProductOperator& mpo, const DmrgConfig& cfg, MatrixProductState initial);

void require_converged(const DmrgReport& report);

}  // namespace xxzlr
