#include "xxzlr/dmrg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "environment.hpp"
#include "xxzlr/errors.hpp"
#include "xxzlr/lanczos.hpp"

namespace xxzlr {

void DmrgConfig::validate() const {
  if (!(truncation_cut > 0.0) || truncation_cut > 1e-6)
    throw InvalidCut("truncation cut must lie in (0, 1e-6], got " + std::to_string(truncation_cut));
  if (bond_dims.empty()) throw InvalidParams("dmrg: empty bond dimension schedule");
  for (int d : bond_dims)
    if (d < 1) throw InvalidParams("dmrg: bond dimensions must be positive");
  if (max_sweeps < 1 || min_sweeps < 1 || min_sweeps > max_sweeps)
    throw InvalidParams("dmrg: need 1 <= min_sweeps <= max_sweeps");
  if (!(energy_tol > 0.0)) throw InvalidParams("dmrg: energy tolerance must be positive");
  if (initial_bond_dim < 1) throw InvalidParams("dmrg: initial bond dimension must be positive");
  if (!(local_tol > 0.0) || local_max_iter < 1 || local_krylov < 2)
    throw InvalidParams("dmrg: bad local eigensolver settings");
}

int DmrgConfig::bond_cap(int sweep) const {
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(sweep, 0)), bond_dims.size() - 1);
  return bond_dims[k];
}

namespace {

using detail::Env;

// Effective two-site Hamiltonian on theta laid out as a (2 Dl) x (2 Dr)
// matrix M(s1 * Dl + a, s2 * Dr + b), stored column-major in a vector.
class TwoSiteOperator {
 public:
  TwoSiteOperator(const Env& left, const Env& right, const std::vector<MpoEntry>& w1,
                  const std::vector<MpoEntry>& w2, int d_mid, Eigen::Index dl, Eigen::Index dr)
      : left_(left), right_(right), w1_(w1), w2_(w2), d_mid_(d_mid), dl_(dl), dr_(dr) {}

  void operator()(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    Eigen::Map<const Eigen::MatrixXd> m(x.data(), 2 * dl_, 2 * dr_);
    const auto nl = left_.size();
    // X[a][i1][i2] = L[a] * theta[i1][i2]
    std::vector<std::array<Eigen::MatrixXd, 4>> xs(nl);
    std::vector<char> have(nl * 4, 0);
    // Y[b][o1][i2]
    std::vector<std::array<Eigen::MatrixXd, 4>> ys(static_cast<std::size_t>(d_mid_));
    for (const auto& e : w1_) {
      const auto a = static_cast<std::size_t>(e.left);
      for (int i2 = 0; i2 < 2; ++i2) {
        const int slot = e.in * 2 + i2;
        auto& xa = xs[a][static_cast<std::size_t>(slot)];
        if (!have[a * 4 + static_cast<std::size_t>(slot)]) {
          xa.noalias() = left_[a] * m.block(e.in * dl_, i2 * dr_, dl_, dr_);
          have[a * 4 + static_cast<std::size_t>(slot)] = 1;
        }
        auto& yb = ys[static_cast<std::size_t>(e.right)][static_cast<std::size_t>(e.out * 2 + i2)];
        if (yb.size() == 0) yb = Eigen::MatrixXd::Zero(dl_, dr_);
        yb += e.value * xa;
      }
    }
    // Z[c][o1][o2]
    std::vector<std::array<Eigen::MatrixXd, 4>> zs(right_.size());
    for (const auto& e : w2_) {
      for (int o1 = 0; o1 < 2; ++o1) {
        const auto& yb = ys[static_cast<std::size_t>(e.left)][static_cast<std::size_t>(o1 * 2 + e.in)];
        if (yb.size() == 0) continue;
        auto& zc = zs[static_cast<std::size_t>(e.right)][static_cast<std::size_t>(o1 * 2 + e.out)];
        if (zc.size() == 0) zc = Eigen::MatrixXd::Zero(dl_, dr_);
        zc += e.value * yb;
      }
    }
    y.setZero(x.size());
    Eigen::Map<Eigen::MatrixXd> out(y.data(), 2 * dl_, 2 * dr_);
    for (std::size_t c = 0; c < zs.size(); ++c) {
      for (int o1 = 0; o1 < 2; ++o1) {
        for (int o2 = 0; o2 < 2; ++o2) {
          const auto& zc = zs[c][static_cast<std::size_t>(o1 * 2 + o2)];
          if (zc.size() == 0) continue;
          out.block(o1 * dl_, o2 * dr_, dl_, dr_).noalias() += zc * right_[c].transpose();
        }
      }
    }
  }

 private:
  const Env& left_;
  const Env& right_;
  const std::vector<MpoEntry>& w1_;
  const std::vector<MpoEntry>& w2_;
  int d_mid_;
  Eigen::Index dl_;
  Eigen::Index dr_;
};

struct Split {
  Eigen::MatrixXd u;   // (2 Dl) x k
  Eigen::VectorXd s;   // k, renormalized
  Eigen::MatrixXd vt;  // k x (2 Dr)
  double discarded = 0.0;
};

// Keeps the fewest states whose discarded weight stays within `cut`, but no
// fewer than `floor` (the current bond dimension) unless those extra states
// carry no weight, and never more than `cap`.
Split truncated_svd(const Eigen::MatrixXd& m, double cut, int cap, int floor) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double total = sv.squaredNorm();
  const auto full = static_cast<int>(sv.size());
  // Smallest k whose discarded weight stays within the cut, bounded by the cap.
  int k = full;
  double tail = 0.0;
  while (k > 1) {
    const double w = sv(k - 1) * sv(k - 1) / total;
    if (tail + w > cut) break;
    tail += w;
    --k;
  }
  while (k < std::min(floor, full) && sv(k) > 1e-14 * sv(0)) {
    tail -= sv(k) * sv(k) / total;
    ++k;
  }
  double discarded = std::max(tail, 0.0);
  if (k > cap) {
    for (int j = cap; j < k; ++j) discarded += sv(j) * sv(j) / total;
    k = cap;
  }
  Split out;
  out.u = svd.matrixU().leftCols(k);
  out.s = sv.head(k) / sv.head(k).norm();
  out.vt = svd.matrixV().leftCols(k).transpose();
  out.discarded = discarded;
  return out;
}

}  // namespace

DmrgResult dmrg_ground_state(const MatrixProductOperator& mpo, const DmrgConfig& cfg) {
  cfg.validate();
  return dmrg_ground_state(mpo, cfg, random_mps(mpo.n_sites, cfg.initial_bond_dim, cfg.seed));
}

DmrgResult dmrg_ground_state(const MatrixProductOperator& mpo, const DmrgConfig& cfg, MatrixProductState psi) {
  cfg.validate();
  const int n = mpo.n_sites;
  if (n < 2) throw InvalidParams("dmrg needs at least two sites");
  if (psi.n_sites() != n) throw DimensionMismatch("dmrg: initial state length differs from the MPO");

  // Uniform field: it commutes with H, so it only splits magnetization sectors.
  MatrixProductOperator pinned = mpo;
  if (cfg.pin_field != 0.0)
    for (int site = 0; site < n; ++site) pinned = with_site_term(pinned, site, ops::sigma_z(), -cfg.pin_field);
  const bool pin_used = cfg.pin_field != 0.0 && cfg.pin_sweeps > 0;
  const MatrixProductOperator* h = pin_used ? &pinned : &mpo;
  const auto& dims = mpo.bond_dims;

  canonicalize(psi, 0);
  std::vector<Env> lenv(static_cast<std::size_t>(n) + 1);
  std::vector<Env> renv(static_cast<std::size_t>(n) + 1);
  lenv[0] = detail::trivial_env();
  renv[static_cast<std::size_t>(n)] = detail::trivial_env();
  auto rebuild_right = [&] {
    for (int i = n - 1; i >= 2; --i) {
      const auto ui = static_cast<std::size_t>(i);
      renv[ui] = detail::grow_right(renv[ui + 1], psi.tensors[ui], psi.tensors[ui], h->sites[ui], dims[ui]);
    }
  };
  rebuild_right();

  LanczosOptions lopts;
  lopts.tolerance = cfg.local_tol;
  lopts.max_iterations = cfg.local_max_iter;
  lopts.krylov_dim = cfg.local_krylov;

  DmrgReport report;
  double last_energy = 0.0;

  auto optimize = [&](int i, int cap, bool to_right, double& energy, double& worst) {
    const auto ui = static_cast<std::size_t>(i);
    auto& a = psi.tensors[ui];
    auto& b = psi.tensors[ui + 1];
    const Eigen::Index dl = a[0].rows();
    const Eigen::Index dr = b[0].cols();
    Eigen::MatrixXd theta(2 * dl, 2 * dr);
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        theta.block(s1 * dl, s2 * dr, dl, dr).noalias() =
            a[static_cast<std::size_t>(s1)] * b[static_cast<std::size_t>(s2)];
    const TwoSiteOperator op(lenv[ui], renv[ui + 2], h->sites[ui], h->sites[ui + 1], dims[ui + 1], dl, dr);
    Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(theta.data(), theta.size());
    if (!(start.norm() > 0.0)) start = random_start_vector(start.size(), cfg.seed + ui);
    const EigenPair ep = lanczos_lowest([&op](const Eigen::VectorXd& x, Eigen::VectorXd& y) { op(x, y); }, start, lopts);
    energy = ep.value;
    const Eigen::Map<const Eigen::MatrixXd> m(ep.vector.data(), 2 * dl, 2 * dr);
    Split sp = truncated_svd(m, cfg.truncation_cut, cap, static_cast<int>(a[0].cols()));
    worst = std::max(worst, sp.discarded);
    if (to_right) {
      const Eigen::MatrixXd svt = sp.s.asDiagonal() * sp.vt;
      for (int s = 0; s < 2; ++s) {
        a[static_cast<std::size_t>(s)] = sp.u.middleRows(s * dl, dl);
        b[static_cast<std::size_t>(s)] = svt.middleCols(s * dr, dr);
      }
      lenv[ui + 1] = detail::grow_left(lenv[ui], a, a, h->sites[ui], dims[ui + 1]);
      psi.center = i + 1;
    } else {
      const Eigen::MatrixXd us = sp.u * sp.s.asDiagonal();
      for (int s = 0; s < 2; ++s) {
        a[static_cast<std::size_t>(s)] = us.middleRows(s * dl, dl);
        b[static_cast<std::size_t>(s)] = sp.vt.middleCols(s * dr, dr);
      }
      renv[ui + 1] = detail::grow_right(renv[ui + 2], b, b, h->sites[ui + 1], dims[ui + 1]);
      psi.center = i;
    }
  };

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    if (sweep == cfg.pin_sweeps && h != &mpo) {
      h = &mpo;
      rebuild_right();
    }
    const int cap = cfg.bond_cap(sweep);
    double energy = 0.0;
    double worst = 0.0;
    for (int i = 0; i <= n - 2; ++i) optimize(i, cap, true, energy, worst);
    for (int i = n - 2; i >= 0; --i) optimize(i, cap, false, energy, worst);
    // Variational energy of the truncated state under the bare Hamiltonian.
    energy = expectation(psi, mpo);
    report.energies_per_sweep.push_back(energy);
    report.truncation_per_sweep.push_back(worst);
    report.sweeps = sweep + 1;
    report.max_truncation_error = worst;
    // The pinning term must be off for the last two sweeps compared.
    const bool free = sweep > (pin_used ? cfg.pin_sweeps : 0);
    const bool settled = free && std::abs(energy - last_energy) < cfg.energy_tol;
    last_energy = energy;
    if (report.sweeps >= cfg.min_sweeps && settled) {
      report.converged = true;
      break;
    }
  }

  report.energy = expectation(psi, mpo);
  report.entropy_profile = entropy_profile(psi);
  report.bond_dims = psi.bond_dims();
  if (cfg.compute_variance) report.variance = energy_variance(psi, mpo);
  return DmrgResult{std::move(psi), std::move(report)};
}

void require_converged(const DmrgReport& report) {
  if (!report.converged)
    throw NotConverged("dmrg did not converge within " + std::to_string(report.sweeps) + " sweeps", report.sweeps);
}

}  // namespace xxzlr
