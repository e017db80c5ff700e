#include "xxzlr/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "xxzlr/errors.hpp"

namespace xxzlr {

Eigen::VectorXd random_start_vector(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

EigenPair lanczos_lowest(const MatVec& apply, const Eigen::VectorXd& start,
                         const LanczosOptions& opts) {
  const Eigen::Index dim = start.size();
  if (dim == 0) throw DimensionMismatch("lanczos: empty start vector");
  double start_norm = start.norm();
  if (!(start_norm > 0.0)) throw InvalidParams("lanczos: start vector is zero");

  EigenPair best;
  best.vector = start / start_norm;

  Eigen::VectorXd w(dim);
  if (dim == 1) {
    apply(best.vector, w);
    best.value = w(0) / best.vector(0);
    best.iterations = 1;
    best.converged = true;
    return best;
  }

  const int kmax = static_cast<int>(std::min<Eigen::Index>(std::max(2, opts.krylov_dim), dim));
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(static_cast<std::size_t>(kmax));
  int total = 0;

  while (true) {
    basis.clear();
    basis.push_back(best.vector);
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd ritz_coeffs;
    bool invariant = false;

    for (int j = 0; j < kmax; ++j) {
      apply(basis[static_cast<std::size_t>(j)], w);
      ++total;
      const double a = basis[static_cast<std::size_t>(j)].dot(w);
      alpha.push_back(a);
      // Full reorthogonalization, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) w -= q.dot(w) * q;
      }
      const double b = w.norm();

      const auto m = static_cast<Eigen::Index>(alpha.size());
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
      for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      ritz_coeffs = tri.eigenvectors().col(0);
      const double estimate = std::abs(b * ritz_coeffs(m - 1));

      invariant = b <= 1e-14 * std::max(1.0, std::abs(a));
      if (invariant || estimate < 0.1 * opts.tolerance || j + 1 == kmax ||
          total >= opts.max_iterations || m == dim) {
        break;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }

    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i < ritz_coeffs.size(); ++i) ritz += ritz_coeffs(i) * basis[static_cast<std::size_t>(i)];
    ritz.normalize();
    apply(ritz, w);
    ++total;
    const double rq = ritz.dot(w);
    const double residual = (w - rq * ritz).norm();

    best.value = rq;
    best.vector = ritz;
    best.residual = residual;
    best.iterations = total;
    best.converged = residual <= opts.tolerance;
    if (best.converged || invariant || total >= opts.max_iterations) return best;
  }
}

}  // namespace xxzlr
