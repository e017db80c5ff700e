#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace xxzlr {

/// y <- A x for a real symmetric operator A.
using MatVec = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct LanczosOptions {
  double tolerance = 1e-10;   // on the true residual ||A v - theta v||
  int max_iterations = 500;   // total matrix-vector products
  int krylov_dim = 100;       // vectors kept before a thick restart
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
/// `start` need not be normalized but must be nonzero.
EigenPair lanczos_lowest(const MatVec& apply, const Eigen::VectorXd& start,
                         const LanczosOptions& opts = {});

/// Normally distributed start vector, deterministic for a given seed.
Eigen::VectorXd random_start_vector(Eigen::Index dim, std::uint64_t seed);

}  // namespace xxzlr
