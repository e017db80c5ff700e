#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xxzlr {

/// Open-boundary matrix product state for spin-1/2. tensors[i][s] is the
/// (left bond x right bond) matrix for physical index s (0 = down, 1 = up).
struct MatrixProductState {
  std::vector<std::array<Eigen::MatrixXd, 2>> tensors;
  std::optional<int> center;

  int n_sites() const { return static_cast<int>(tensors.size()); }
  /// n_sites + 1 entries; the first and last are 1.
  std::vector<int> bond_dims() const;
  int max_bond_dim() const;
};

/// Random tensors, right-canonicalized and normalized with center 0.
MatrixProductState random_mps(int n_sites, int bond_dim, std::uint64_t seed);

/// Product state; spins[i] is 1 for up and 0 for down.
MatrixProductState product_mps(std::span<const int> spins);

/// Brings the state to mixed canonical form around `site` and normalizes.
void canonicalize(MatrixProductState& mps, int site);

/// Shifts an existing center by QR steps. Requires mps.center.
void move_center(MatrixProductState& mps, int site);

double overlap(const MatrixProductState& a, const MatrixProductState& b);
double norm(const MatrixProductState& mps);

/// Largest deviation from the left/right isometry conditions around the
/// center. Zero for an exactly canonical state.
double canonical_error(const MatrixProductState& mps);

/// Schmidt coefficients (not squared) at `bond`, the cut after `bond`
/// sites. Requires the center at site bond-1 or bond. Throws InvalidBond.
Eigen::VectorXd bond_singular_values(const MatrixProductState& mps, int bond);

/// -sum lambda^2 ln lambda^2 at `bond`; same precondition.
double mps_entropy(const MatrixProductState& mps, int bond);

/// Entropy at every bond 1..N-1 (works on a copy).
std::vector<double> entropy_profile(MatrixProductState mps);

/// Full state vector, site 0 least significant. Small N only.
Eigen::VectorXd to_dense(const MatrixProductState& mps);

using LocalOp = Eigen::Matrix2d;  // (out, in) in the {down, up} basis

namespace ops {
LocalOp identity();
LocalOp sigma_z();
LocalOp s_plus();
LocalOp s_minus();
}  // namespace ops

/// <op_site> on a normalized state.
double local_expectation(const MatrixProductState& mps, int site, const LocalOp& op);

/// <a_i b_j> for i < j, or <(a b)_i> when i == j.
double two_point(const MatrixProductState& mps, int i, const LocalOp& a, int j, const LocalOp& b);

/// <a_i b_j> for fixed i and every j in [i, N).
std::vector<double> correlation_row(const MatrixProductState& mps, int i, const LocalOp& a, const LocalOp& b);

struct PairValue {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

struct MpsObservables {
  std::vector<double> sigma_z;
  std::vector<PairValue> zz;  // <sz_i sz_j>
  std::vector<PairValue> pm;  // <S+_i S-_j>
};

MpsObservables mps_observables(const MatrixProductState& mps, std::span<const std::pair<int, int>> pairs);

// Checkpoint layout (little-endian):
//   char[8]  "XXZLRMPS"
//   u32      format version (1)
//   u32      n_sites
//   u64      seed
//   i32      canonical center (-1 if none)
//   u32[n+1] bond dimensions
//   per site, per physical index s = 0, 1: row-major f64 payload of the
//   (left x right) matrix.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const MatrixProductState& mps, std::uint64_t seed);
MatrixProductState load_checkpoint(const std::filesystem::path& path, std::uint64_t* seed = nullptr);

}  // namespace xxzlr
