#include "xxzlr/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "xxzlr/errors.hpp"

namespace xxzlr {

namespace {

inline int spin_sign(BasisState s, int site) { return ((s >> site) & 1u) ? 1 : -1; }

// Bonds of the nearest-neighbor term as (i, i+1) pairs; the periodic wrap
// bond is added only for N >= 3 so that N = 2 does not double-count.
std::vector<std::pair<int, int>> bonds(const ModelParams& p) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i + 1 < p.n_sites; ++i) out.emplace_back(i, i + 1);
  if (p.boundary == Boundary::periodic && p.n_sites >= 3) out.emplace_back(p.n_sites - 1, 0);
  return out;
}

// Calls emit(target, amplitude) for every off-diagonal matrix element
// <target|H|s>. Both terms only exchange an up and a down spin.
template <class Emit>
void for_each_flip(const ModelParams& p, BasisState s, Emit&& emit) {
  const double nn = p.bond_flip_amplitude();
  for (auto [i, j] : bonds(p)) {
    if (((s >> i) ^ (s >> j)) & 1u) emit(s ^ ((1u << i) | (1u << j)), nn);
  }
  if (p.j_lr == 0.0) return;
  const double lr = p.long_range_flip_amplitude();
  for (int i = 0; i < p.n_sites; ++i) {
    for (int j = i + 1; j < p.n_sites; ++j) {
      if (((s >> i) ^ (s >> j)) & 1u) emit(s ^ ((1u << i) | (1u << j)), lr);
    }
  }
}

}  // namespace

void ModelParams::validate() const {
  if (n_sites < 2) throw InvalidParams("n_sites must be >= 2, got " + std::to_string(n_sites));
  if (!std::isfinite(alpha) || !std::isfinite(j_lr)) throw InvalidParams("couplings must be finite");
}

SectorBasis::SectorBasis(int n_sites, int n_up) : n_sites_(n_sites), n_up_(n_up) {
  if (n_sites < 1) throw InvalidParams("sector: n_sites out of range");
  if (n_sites > kMaxBasisSites) throw SizeExceeded("sector: n_sites exceeds the 30-bit basis limit");
  if (n_up < 0 || n_up > n_sites) throw InvalidParams("sector: n_up out of range");
  if (n_up == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack enumerates same-popcount masks in increasing order.
  BasisState s = (BasisState{1} << n_up) - 1;
  const BasisState limit = BasisState{1} << n_sites;
  while (s < limit) {
    states_.push_back(s);
    const BasisState c = s & (~s + 1);
    const BasisState r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

std::size_t SectorBasis::index_of(BasisState s) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) throw InvalidParams("state not in sector");
  return static_cast<std::size_t>(it - states_.begin());
}

bool SectorBasis::contains(BasisState s) const {
  return std::binary_search(states_.begin(), states_.end(), s);
}

std::vector<SectorBasis> magnetization_sectors(int n_sites) {
  std::vector<SectorBasis> out;
  out.reserve(static_cast<std::size_t>(n_sites) + 1);
  for (int k = 0; k <= n_sites; ++k) out.emplace_back(n_sites, k);
  return out;
}

double diagonal_energy(const ModelParams& p, BasisState s) {
  double e = 0.0;
  for (auto [i, j] : bonds(p)) e += -0.25 * spin_sign(s, i) * spin_sign(s, j);
  return e;
}

Eigen::MatrixXd build_dense_hamiltonian(const ModelParams& p) {
  p.validate();
  if (p.n_sites > kMaxDenseSites) {
    throw SizeExceeded("dense Hamiltonian limited to " + std::to_string(kMaxDenseSites) + " sites");
  }
  const Eigen::Index dim = Eigen::Index{1} << p.n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto s = static_cast<BasisState>(col);
    h(col, col) = diagonal_energy(p, s);
    for_each_flip(p, s, [&](BasisState t, double amp) { h(static_cast<Eigen::Index>(t), col) += amp; });
  }
  return h;
}

Eigen::MatrixXd build_sector_block(const ModelParams& p, const SectorBasis& sector) {
  p.validate();
  if (sector.n_sites() != p.n_sites) throw DimensionMismatch("sector built for a different chain length");
  const auto dim = static_cast<Eigen::Index>(sector.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const BasisState s = sector.state(static_cast<std::size_t>(col));
    h(col, col) = diagonal_energy(p, s);
    for_each_flip(p, s, [&](BasisState t, double amp) {
      h(static_cast<Eigen::Index>(sector.index_of(t)), col) += amp;
    });
  }
  return h;
}

Eigen::VectorXd apply_hamiltonian(const ModelParams& p, const SectorBasis& sector,
                                  const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != sector.size()) {
    throw DimensionMismatch("vector length " + std::to_string(v.size()) + " != sector dimension " +
                            std::to_string(sector.size()));
  }
  if (sector.n_sites() != p.n_sites) throw DimensionMismatch("sector built for a different chain length");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index col = 0; col < v.size(); ++col) {
    const BasisState s = sector.state(static_cast<std::size_t>(col));
    out(col) = diagonal_energy(p, s) * v(col);
  }
  for (Eigen::Index col = 0; col < v.size(); ++col) {
    const double x = v(col);
    if (x == 0.0) continue;
    const BasisState s = sector.state(static_cast<std::size_t>(col));
    for_each_flip(p, s, [&](BasisState t, double amp) {
      out(static_cast<Eigen::Index>(sector.index_of(t))) += amp * x;
    });
  }
  return out;
}

}  // namespace xxzlr
