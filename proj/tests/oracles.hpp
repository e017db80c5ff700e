#pragma once

// Independent reference constructions used only by the tests. They build
// operators from explicit Kronecker products of Pauli matrices, sharing no
// code with the library.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::MatrixXd pauli(char which) {
  Eigen::MatrixXd m(2, 2);
  // Basis order {down, up}; sz|up> = +|up>.
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'z': m << -1, 0, 0, 1; break;
    default: m.setIdentity();
  }
  return m;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Operator `op` on `site` of an n-site chain; site 0 is the least significant
// factor, so it sits rightmost in the Kronecker product.
inline Eigen::MatrixXd site_op(const Eigen::MatrixXd& op, int site, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int s = n - 1; s >= 0; --s) out = kron(out, s == site ? op : pauli('1'));
  return out;
}

// sx sx + sy sy on (i, j) = 2 (s+ s- + s- s+); real, built from sx and the
// real matrix i*sy.
inline Eigen::MatrixXd xx_plus_yy(int i, int j, int n) {
  Eigen::MatrixXd isy(2, 2);
  isy << 0, -1, 1, 0;  // i * sy in {down, up}
  return site_op(pauli('x'), i, n) * site_op(pauli('x'), j, n) - site_op(isy, i, n) * site_op(isy, j, n);
}

inline Eigen::MatrixXd hamiltonian(double alpha, double j, int n, bool periodic = false) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const int bonds = periodic && n >= 3 ? n : n - 1;
  for (int b = 0; b < bonds; ++b) {
    const int c = (b + 1) % n;
    h -= 0.25 * (site_op(pauli('z'), b, n) * site_op(pauli('z'), c, n) + alpha * xx_plus_yy(b, c, n));
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) h += (j / (4.0 * n)) * xx_plus_yy(a, b, n);
  return h;
}

inline double ground_energy(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// von Neumann entropy of the low `cut` sites of a full state vector.
inline double entropy(const Eigen::VectorXd& psi, int cut, int n) {
  const Eigen::Index dl = Eigen::Index{1} << cut;
  const Eigen::Index dr = Eigen::Index{1} << (n - cut);
  Eigen::MatrixXd m(dl, dr);
  for (Eigen::Index r = 0; r < dr; ++r)
    for (Eigen::Index l = 0; l < dl; ++l) m(l, r) = psi(r * dl + l);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double s = 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double p = svd.singularValues()(k) * svd.singularValues()(k) / psi.squaredNorm();
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

// Hand-rolled generator for property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
};

}  // namespace oracle
