#pragma once

// Sector-resolved exact diagonalization: the small-N reference every other
// backend is checked against.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "xxzlr/lanczos.hpp"
#include "xxzlr/model.hpp"

namespace xxzlr {

struct SectorState {
  ModelParams params;
  int n_up = 0;
  double energy = 0.0;
  Eigen::VectorXd amplitudes;  // over SectorBasis(params.n_sites, n_up)
};

enum class SolverPath { automatic, dense, lanczos };

struct EdOptions {
  SolverPath path = SolverPath::automatic;
  std::uint64_t seed = 12345;
  LanczosOptions lanczos{1e-10, 500, 100};
  double degeneracy_tol = 1e-9;
};

inline constexpr std::size_t kMaxDenseSectorDim = 4096;
inline constexpr std::size_t kMaxLanczosSectorDim = 200000;

/// Lowest eigenpair of one magnetization block. The automatic path uses the
/// dense solver up to kMaxDenseSectorDim and Lanczos above.
SectorState sector_ground_state(const ModelParams& p, int n_up, const EdOptions& opts = {});

struct Correlators {
  std::vector<double> sigma_z;  // <sz_i>
  Eigen::MatrixXd zz;           // <sz_i sz_j>
  Eigen::MatrixXd pm;           // <S+_i S-_j>
};

struct GroundStateReport {
  double energy = 0.0;
  int sector = 0;                       // reported sector
  std::vector<int> degenerate_sectors;  // all sectors within degeneracy_tol
  std::vector<double> sector_energies;  // index n_up
  SectorState state;
  Correlators observables;
};

/// Scans every sector. Among degenerate sectors the largest n_up is reported,
/// which is the branch selected by a positive sz pinning field in DMRG.
GroundStateReport global_ground_state(const ModelParams& p, const EdOptions& opts = {});

/// Squared Schmidt coefficients across the bond after `cut` sites, sorted
/// in decreasing order. Requires 1 <= cut <= N-1.
std::vector<double> schmidt_weights(const SectorState& state, int cut);

/// Von Neumann entropy -sum p ln p of the left block of `cut` sites.
double cut_entanglement_entropy(const SectorState& state, int cut);

/// Same entropy from the eigenvalues of the reduced density matrix; kept as
/// an independent route for testing.
double cut_entropy_from_density_matrix(const SectorState& state, int cut);

Correlators correlators(const SectorState& state);

/// Expands a sector state into the full 2^N amplitude vector.
Eigen::VectorXd embed_full(const SectorState& state);

}  // namespace xxzlr
