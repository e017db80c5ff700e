#pragma once

// Spin-1/2 chain with nearest-neighbor XXZ coupling and a uniform
// all-to-all XX coupling:
//
//   H = -1/4 sum_{bonds} [ sz sz + alpha (sx sx + sy sy) ]
//       + J/(4N) sum_{i<j} (sx_i sx_j + sy_i sy_j)
//
// Basis convention: site 0 is the least-significant bit of a basis index,
// bit value 1 is spin up, sz|up> = +|up>.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace xxzlr {

enum class Boundary { open, periodic };

struct ModelParams {
  double alpha = 0.0;
  double j_lr = 0.0;
  int n_sites = 2;
  Boundary boundary = Boundary::open;

  /// Throws InvalidParams unless n_sites >= 2 and the couplings are finite.
  void validate() const;

  /// Amplitude of a single flip-flop across a nearest-neighbor bond.
  double bond_flip_amplitude() const { return -0.5 * alpha; }
  /// Amplitude of a single flip-flop between any pair (i != j).
  double long_range_flip_amplitude() const { return j_lr / (2.0 * n_sites); }

  bool operator==(const ModelParams&) const = default;
};

using BasisState = std::uint32_t;

/// Basis of a fixed total-magnetization block: all bitmasks on n_sites bits
/// with exactly n_up set bits, in increasing order.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_up);

  int n_sites() const { return n_sites_; }
  int n_up() const { return n_up_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<BasisState>& states() const { return states_; }
  BasisState state(std::size_t i) const { return states_[i]; }

  /// Position of `s` in the block. `s` must have popcount n_up.
  std::size_t index_of(BasisState s) const;
  bool contains(BasisState s) const;

 private:
  int n_sites_;
  int n_up_;
  std::vector<BasisState> states_;
};

/// Sectors n_up = 0..n_sites; together they partition all 2^n bitmasks.
std::vector<SectorBasis> magnetization_sectors(int n_sites);

inline constexpr int kMaxDenseSites = 14;
inline constexpr int kMaxBasisSites = 30;

/// Full 2^N matrix. Throws SizeExceeded above kMaxDenseSites.
Eigen::MatrixXd build_dense_hamiltonian(const ModelParams& p);

/// Dense block of H restricted to one magnetization sector.
Eigen::MatrixXd build_sector_block(const ModelParams& p, const SectorBasis& sector);

/// Matrix-free product H v within a sector.
Eigen::VectorXd apply_hamiltonian(const ModelParams& p, const SectorBasis& sector,
                                  const Eigen::VectorXd& v);

/// Diagonal (sz sz) energy of a single basis state.
double diagonal_energy(const ModelParams& p, BasisState s);

}  // namespace xxzlr
