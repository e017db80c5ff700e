#include "xxzlr/exactdiag.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "xxzlr/errors.hpp"

namespace xxzlr {

namespace {

double von_neumann(const std::vector<double>& weights) {
  double s = 0.0;
  for (double p : weights) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(0.0, s);
}

// Amplitude matrix M(left, right) with left = low `cut` bits.
Eigen::MatrixXd bipartition(const SectorState& state, int cut) {
  const int n = state.params.n_sites;
  if (cut < 1 || cut > n - 1) {
    throw InvalidCut("cut " + std::to_string(cut) + " outside [1, " + std::to_string(n - 1) + "]");
  }
  const SectorBasis basis(n, state.n_up);
  const Eigen::Index rows = Eigen::Index{1} << cut;
  const Eigen::Index cols = Eigen::Index{1} << (n - cut);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  const BasisState mask = (BasisState{1} << cut) - 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisState s = basis.state(i);
    m(static_cast<Eigen::Index>(s & mask), static_cast<Eigen::Index>(s >> cut)) =
        state.amplitudes(static_cast<Eigen::Index>(i));
  }
  return m;
}

}  // namespace

SectorState sector_ground_state(const ModelParams& p, int n_up, const EdOptions& opts) {
  p.validate();
  const SectorBasis basis(p.n_sites, n_up);
  SolverPath path = opts.path;
  if (path == SolverPath::automatic) {
    path = basis.size() <= kMaxDenseSectorDim ? SolverPath::dense : SolverPath::lanczos;
  }
  if (path == SolverPath::dense && basis.size() > kMaxDenseSectorDim) {
    throw SizeExceeded("sector dimension " + std::to_string(basis.size()) + " too large for dense path");
  }
  if (path == SolverPath::lanczos && basis.size() > kMaxLanczosSectorDim) {
    throw SizeExceeded("sector dimension " + std::to_string(basis.size()) + " too large for Lanczos");
  }

  SectorState out;
  out.params = p;
  out.n_up = n_up;
  if (path == SolverPath::dense) {
    const Eigen::MatrixXd h = build_sector_block(p, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    out.energy = es.eigenvalues()(0);
    out.amplitudes = es.eigenvectors().col(0);
  } else {
    const MatVec apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
      y = apply_hamiltonian(p, basis, x);
    };
    const std::uint64_t seed = opts.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(n_up + 1));
    const EigenPair ep = lanczos_lowest(apply, random_start_vector(static_cast<Eigen::Index>(basis.size()), seed),
                                        opts.lanczos);
    if (!ep.converged) {
      throw NoConvergence("Lanczos residual " + std::to_string(ep.residual) + " above tolerance",
                          ep.iterations);
    }
    out.energy = ep.value;
    out.amplitudes = ep.vector;
  }
  // Fix the overall sign so that the largest-magnitude amplitude is positive.
  Eigen::Index imax = 0;
  out.amplitudes.cwiseAbs().maxCoeff(&imax);
  if (out.amplitudes(imax) < 0) out.amplitudes = -out.amplitudes;
  return out;
}

GroundStateReport global_ground_state(const ModelParams& p, const EdOptions& opts) {
  p.validate();
  std::vector<SectorState> states;
  GroundStateReport report;
  for (int k = 0; k <= p.n_sites; ++k) {
    states.push_back(sector_ground_state(p, k, opts));
    report.sector_energies.push_back(states.back().energy);
  }
  report.energy = *std::min_element(report.sector_energies.begin(), report.sector_energies.end());
  for (int k = 0; k <= p.n_sites; ++k) {
    if (report.sector_energies[static_cast<std::size_t>(k)] - report.energy <= opts.degeneracy_tol) {
      report.degenerate_sectors.push_back(k);
    }
  }
  report.sector = report.degenerate_sectors.back();
  report.state = std::move(states[static_cast<std::size_t>(report.sector)]);
  report.observables = correlators(report.state);
  return report;
}

std::vector<double> schmidt_weights(const SectorState& state, int cut) {
  const Eigen::MatrixXd m = bipartition(state, cut);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  std::vector<double> w;
  for (Eigen::Index i = 0; i < sv.size(); ++i) w.push_back(sv(i) * sv(i));
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

double cut_entanglement_entropy(const SectorState& state, int cut) {
  return von_neumann(schmidt_weights(state, cut));
}

double cut_entropy_from_density_matrix(const SectorState& state, int cut) {
  const Eigen::MatrixXd m = bipartition(state, cut);
  const Eigen::MatrixXd rho = m * m.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> w(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return von_neumann(w);
}

Correlators correlators(const SectorState& state) {
  const int n = state.params.n_sites;
  const SectorBasis basis(n, state.n_up);
  Correlators c;
  c.sigma_z.assign(static_cast<std::size_t>(n), 0.0);
  c.zz = Eigen::MatrixXd::Zero(n, n);
  c.pm = Eigen::MatrixXd::Zero(n, n);
  const auto& v = state.amplitudes;
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const BasisState s = basis.state(idx);
    const double amp = v(static_cast<Eigen::Index>(idx));
    const double w = amp * amp;
    for (int i = 0; i < n; ++i) {
      const double zi = ((s >> i) & 1u) ? 1.0 : -1.0;
      c.sigma_z[static_cast<std::size_t>(i)] += w * zi;
      if (zi > 0) c.pm(i, i) += w;
      for (int j = 0; j < n; ++j) {
        const double zj = ((s >> j) & 1u) ? 1.0 : -1.0;
        c.zz(i, j) += w * zi * zj;
      }
    }
    // S+_i S-_j |s> is nonzero when j is up and i is down.
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1u) continue;
      for (int j = 0; j < n; ++j) {
        if (!((s >> j) & 1u)) continue;
        const BasisState t = s ^ ((1u << i) | (1u << j));
        c.pm(i, j) += v(static_cast<Eigen::Index>(basis.index_of(t))) * amp;
      }
    }
  }
  return c;
}

Eigen::VectorXd embed_full(const SectorState& state) {
  const int n = state.params.n_sites;
  const SectorBasis basis(n, state.n_up);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    full(static_cast<Eigen::Index>(basis.state(i))) = state.amplitudes(static_cast<Eigen::Index>(i));
  }
  return full;
}

}  // namespace xxzlr
