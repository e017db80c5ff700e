#include "xxzlr/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "xxzlr/errors.hpp"

namespace xxzlr {

namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Site operators on 2^n spins, site i at bit i, bit 1 = up.
Mat sigma_z(int n, int site) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = Mat::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) m(s, s) = ((s >> site) & 1) ? 1.0 : -1.0;
  return m;
}

Mat sigma_minus(int n, int site) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = Mat::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s)
    if ((s >> site) & 1) m(s ^ (Eigen::Index{1} << site), s) = 1.0;
  return m;
}

Mat xxz_hamiltonian(const CavityParams& cp) {
  const int n = cp.n_sites;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int i = 0; i + 1 < n; ++i) {
    const Mat zi = sigma_z(n, i), zj = sigma_z(n, i + 1);
    const Mat mi = sigma_minus(n, i), mj = sigma_minus(n, i + 1);
    // sx sx + sy sy = 2 (s+ s- + s- s+)
    const Mat flip = 2.0 * (mi.adjoint() * mj + mi * mj.adjoint());
    h += -0.25 * (zi * zj + (cp.j_xx / cp.j_z) * flip);
  }
  return h;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat identity(Eigen::Index d) { return Mat::Identity(d, d); }

std::vector<int> initial_spins(const CavityParams& cp, const SimulationOptions& opts) {
  if (opts.initial_up.empty()) {
    std::vector<int> s(static_cast<std::size_t>(cp.n_sites));
    for (int i = 0; i < cp.n_sites; ++i) s[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1 : 0;
    return s;
  }
  if (static_cast<int>(opts.initial_up.size()) != cp.n_sites)
    throw InvalidParams("initial_up must have one entry per site");
  return opts.initial_up;
}

Eigen::Index spin_index(const std::vector<int>& up) {
  Eigen::Index s = 0;
  for (std::size_t i = 0; i < up.size(); ++i)
    if (up[i]) s |= Eigen::Index{1} << i;
  return s;
}

struct Lindblad {
  Mat h;                    // Hamiltonian
  Mat k;                    // h - (i/2) sum L+ L
  std::vector<Mat> jumps;   // L
  std::vector<Mat> jumps_dag;

  void finalize() {
    k = h;
    for (const auto& l : jumps) {
      jumps_dag.push_back(l.adjoint());
      k -= cd(0.0, 0.5) * (l.adjoint() * l);
    }
  }

  Mat rhs(const Mat& rho) const {
    const Mat kr = k * rho;
    Mat out = cd(0.0, -1.0) * (kr - kr.adjoint());
    for (std::size_t j = 0; j < jumps.size(); ++j) out.noalias() += jumps[j] * rho * jumps_dag[j];
    return out;
  }
};

struct Observable {
  std::string name;
  Mat op;
};

// Samples the observables and the state diagnostics into `tr`.
void record_sample(Trajectory& tr, const Mat& rho, const std::vector<Observable>& obs, double time) {
  tr.times.push_back(time);
  for (std::size_t k = 0; k < obs.size(); ++k) tr.columns[k].push_back((obs[k].op * rho).trace().real());
  tr.max_trace_error = std::max(tr.max_trace_error, std::abs(rho.trace() - 1.0));
  tr.max_hermiticity_error = std::max(tr.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  tr.min_eigenvalue = std::min(tr.min_eigenvalue, es.eigenvalues().minCoeff());
}

Trajectory empty_trajectory(const std::vector<Observable>& obs, double dt, int n_sites, std::string integrator) {
  Trajectory tr;
  tr.n_sites = n_sites;
  tr.dt_used = dt;
  tr.integrator = std::move(integrator);
  for (const auto& o : obs) tr.names.push_back(o.name);
  tr.columns.assign(obs.size(), {});
  tr.min_eigenvalue = kInf;
  return tr;
}

Trajectory integrate_once(const Lindblad& lb, const Mat& rho0, const std::vector<Observable>& obs,
                          const SimulationOptions& opts, double dt, int n_sites) {
  Trajectory tr = empty_trajectory(obs, dt, n_sites, "rk4");
  const auto steps_per_out = static_cast<long>(std::llround(opts.dt_out / dt));
  const auto n_out = static_cast<long>(std::llround(opts.t_end / opts.dt_out));

  Mat rho = rho0;
  record_sample(tr, rho, obs, 0.0);
  for (long out = 1; out <= n_out; ++out) {
    for (long s = 0; s < steps_per_out; ++s) {
      const Mat k1 = lb.rhs(rho);
      const Mat k2 = lb.rhs(rho + (0.5 * dt) * k1);
      const Mat k3 = lb.rhs(rho + (0.5 * dt) * k2);
      const Mat k4 = lb.rhs(rho + dt * k3);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    record_sample(tr, rho, obs, static_cast<double>(out) * opts.dt_out);
    if (tr.max_trace_error > kTraceDriftLimit) break;
  }
  return tr;
}

// Exact one-sample map exp(L dt_out) on the column-stacked density matrix,
// using vec(A X B) = (B^T kron A) vec(X).
Trajectory propagate_exact(const Lindblad& lb, const Mat& rho0, const std::vector<Observable>& obs,
                           const SimulationOptions& opts, int n_sites) {
  const Eigen::Index d = rho0.rows();
  const Mat id = identity(d);
  Mat gen = cd(0.0, -1.0) * (kron(id, lb.k) - kron(lb.k.conjugate(), id));
  for (std::size_t j = 0; j < lb.jumps.size(); ++j) gen += kron(lb.jumps[j].conjugate(), lb.jumps[j]);
  const Mat step = (gen * opts.dt_out).exp();

  Trajectory tr = empty_trajectory(obs, opts.dt_out, n_sites, "propagator");
  const auto n_out = static_cast<long>(std::llround(opts.t_end / opts.dt_out));
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  record_sample(tr, rho0, obs, 0.0);
  for (long out = 1; out <= n_out; ++out) {
    v = step * v;
    record_sample(tr, Eigen::Map<const Mat>(v.data(), d, d), obs, static_cast<double>(out) * opts.dt_out);
  }
  return tr;
}

// Step that divides dt_out and keeps |lambda dt| small for the stiffest mode.
double choose_dt(const Lindblad& lb, const SimulationOptions& opts) {
  double dt = opts.dt;
  if (dt <= 0.0) {
    Eigen::ComplexEigenSolver<Mat> es(lb.k, false);
    const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
    dt = radius > 0.0 ? 0.5 / radius : opts.dt_out;
  }
  const double per_out = std::ceil(opts.dt_out / dt - 1e-9);
  return opts.dt_out / std::max(1.0, per_out);
}

void check_options(const SimulationOptions& opts) {
  if (!(opts.t_end > 0.0) || !(opts.dt_out > 0.0) || opts.dt < 0.0)
    throw InvalidParams("simulation: t_end and dt_out must be positive");
  const double n_out = opts.t_end / opts.dt_out;
  if (std::abs(n_out - std::round(n_out)) > 1e-9 * std::max(1.0, n_out))
    throw InvalidParams("simulation: t_end must be a multiple of dt_out");
}

Trajectory integrate(const Lindblad& lb, const Mat& rho0, const std::vector<Observable>& obs,
                     const SimulationOptions& opts, int n_sites) {
  if (opts.dt == 0.0 && rho0.rows() <= kMaxPropagatorDim) return propagate_exact(lb, rho0, obs, opts, n_sites);
  double dt = choose_dt(lb, opts);
  Trajectory tr = integrate_once(lb, rho0, obs, opts, dt, n_sites);
  if (tr.max_trace_error > kTraceDriftLimit) {
    dt *= 0.5;
    tr = integrate_once(lb, rho0, obs, opts, dt, n_sites);
    if (tr.max_trace_error > kTraceDriftLimit)
      throw TraceDrift("trace drifted by " + std::to_string(tr.max_trace_error) + " after halving dt",
                       tr.max_trace_error);
  }
  return tr;
}

}  // namespace

void CavityParams::validate() const {
  if (j_z == 0.0) throw InvalidParams("cavity: j_z must be nonzero");
  if (!(kappa >= 0.0)) throw InvalidParams("cavity: kappa must be non-negative");
  if (!std::isfinite(g) || !std::isfinite(delta_c) || !std::isfinite(j_xx) || !std::isfinite(j_z))
    throw InvalidParams("cavity: parameters must be finite");
  if (n_sites < 1) throw InvalidParams("cavity: n_sites must be positive");
}

EffectiveParams effective_params(const CavityParams& cp) {
  cp.validate();
  const double denom = 4.0 * cp.delta_c * cp.delta_c + cp.kappa * cp.kappa;
  if (denom == 0.0) throw InvalidParams("cavity: delta_c and kappa cannot both vanish");
  if (cp.delta_c == 0.0) throw InvalidParams("cavity: delta_c must be nonzero for the J/N mapping");
  EffectiveParams e;
  e.alpha = cp.j_xx / cp.j_z;
  e.j_over_n = 4.0 * cp.g * cp.g / (cp.delta_c * cp.j_z);
  e.coherent_prefactor = 4.0 * cp.g * cp.g * cp.delta_c / denom / cp.j_z;
  e.gamma_collective = 2.0 * cp.g * cp.g * cp.kappa / denom / cp.j_z;
  e.unitarity_ratio = cp.kappa > 0.0 ? cp.delta_c / (0.5 * cp.kappa) : kInf;
  e.bad_cavity_ratio = cp.g != 0.0 ? cp.kappa / std::abs(cp.g) : kInf;
  return e;
}

Trajectory simulate_full(const CavityParams& cp, const SimulationOptions& opts) {
  cp.validate();
  check_options(opts);
  if (cp.n_sites > kMaxFullSites) throw SizeExceeded("simulate_full limited to 4 sites");
  if (opts.n_max < 1 || opts.n_max > kMaxPhotonCutoff) throw SizeExceeded("photon cutoff must lie in 1..8");
  const int n = cp.n_sites;
  const Eigen::Index ds = Eigen::Index{1} << n;
  const Eigen::Index df = opts.n_max + 1;
  // Photon number is the more significant index: full = photon * ds + spin.
  Mat a = Mat::Zero(df, df);
  for (Eigen::Index m = 1; m < df; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  const Mat num = a.adjoint() * a;
  const double g = cp.g / cp.j_z;
  const double dc = cp.delta_c / cp.j_z;
  const double kappa = cp.kappa / cp.j_z;

  Mat s_minus = Mat::Zero(ds, ds);
  for (int i = 0; i < n; ++i) s_minus += sigma_minus(n, i);
  Lindblad lb;
  lb.h = -dc * kron(num, identity(ds)) + kron(identity(df), xxz_hamiltonian(cp)) +
         g * (kron(a.adjoint(), s_minus) + kron(a, s_minus.adjoint()));
  if (kappa > 0.0) lb.jumps.push_back(std::sqrt(kappa) * kron(a, identity(ds)));
  lb.finalize();

  std::vector<Observable> obs;
  Mat excitations = kron(num, identity(ds));
  for (int i = 0; i < n; ++i) {
    const Mat z = sigma_z(n, i);
    obs.push_back({"sz_" + std::to_string(i), kron(identity(df), z)});
    excitations += kron(identity(df), 0.5 * (z + identity(ds)));
  }
  obs.push_back({"n_photon", kron(num, identity(ds))});
  obs.push_back({"excitations", excitations});
  obs.push_back({"energy", lb.h});

  const Eigen::Index start = spin_index(initial_spins(cp, opts));  // photon vacuum
  Mat rho0 = Mat::Zero(ds * df, ds * df);
  rho0(start, start) = 1.0;
  return integrate(lb, rho0, obs, opts, n);
}

Trajectory simulate_effective(const CavityParams& cp, const SimulationOptions& opts, bool include_dissipator) {
  const EffectiveParams e = effective_params(cp);
  check_options(opts);
  if (cp.n_sites > kMaxEffectiveSites) throw SizeExceeded("simulate_effective limited to 6 sites");
  const int n = cp.n_sites;
  const Eigen::Index ds = Eigen::Index{1} << n;

  Mat s_minus = Mat::Zero(ds, ds);
  for (int i = 0; i < n; ++i) s_minus += sigma_minus(n, i);
  Mat pairs = s_minus.adjoint() * s_minus;  // sum over all i, j
  for (int i = 0; i < n; ++i) {
    const Mat m = sigma_minus(n, i);
    pairs -= m.adjoint() * m;  // drop i = j
  }
  Lindblad lb;
  lb.h = e.coherent_prefactor * pairs + xxz_hamiltonian(cp);
  if (include_dissipator && e.gamma_collective > 0.0) lb.jumps.push_back(std::sqrt(2.0 * e.gamma_collective) * s_minus);
  lb.finalize();

  std::vector<Observable> obs;
  for (int i = 0; i < n; ++i) obs.push_back({"sz_" + std::to_string(i), sigma_z(n, i)});
  obs.push_back({"energy", lb.h});

  const Eigen::Index start = spin_index(initial_spins(cp, opts));
  Mat rho0 = Mat::Zero(ds, ds);
  rho0(start, start) = 1.0;
  return integrate(lb, rho0, obs, opts, n);
}

const std::vector<double>& Trajectory::column(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return columns[k];
  throw InvalidParams("trajectory has no column " + name);
}

bool Trajectory::has(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

TrajectoryDeviation compare_trajectories(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size()) throw GridMismatch("trajectories have different lengths");
  for (std::size_t t = 0; t < a.times.size(); ++t)
    if (std::abs(a.times[t] - b.times[t]) > 1e-12 * std::max(1.0, std::abs(a.times[t])))
      throw GridMismatch("trajectories use different time grids");
  TrajectoryDeviation dev;
  for (std::size_t k = 0; k < a.names.size(); ++k) {
    if (!b.has(a.names[k])) continue;
    const auto& x = a.columns[k];
    const auto& y = b.column(a.names[k]);
    double worst = 0.0, when = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      const double d = std::abs(x[t] - y[t]);
      if (d > worst) {
        worst = d;
        when = a.times[t];
      }
    }
    dev.names.push_back(a.names[k]);
    dev.max_abs_deviation.push_back(worst);
    dev.at_time.push_back(when);
    if (a.names[k].rfind("sz_", 0) == 0) dev.max_sz_deviation = std::max(dev.max_sz_deviation, worst);
  }
  return dev;
}

}  // namespace xxzlr
