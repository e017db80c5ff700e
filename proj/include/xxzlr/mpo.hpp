#pragma once

#include <vector>

#include <Eigen/Dense>

#include "xxzlr/model.hpp"
#include "xxzlr/mps.hpp"

namespace xxzlr {

/// One nonzero element W[left, right](out, in) of a site tensor.
struct MpoEntry {
  int left = 0;
  int right = 0;
  int out = 0;
  int in = 0;
  double value = 0.0;
};

/// Sparse MPO. Internal bonds use channel 0 for "nothing placed yet" and
/// `done_channel` for "term complete"; the outer bonds have dimension 1,
/// index 0 on the left meaning "nothing placed" and index 0 on the right
/// meaning "complete".
struct MatrixProductOperator {
  int n_sites = 0;
  std::vector<int> bond_dims;  // n_sites + 1
  std::vector<std::vector<MpoEntry>> sites;
  int done_channel = 0;

  int max_bond_dim() const;
};

/// Exact MPO of the chain Hamiltonian (open boundary). The all-to-all term
/// runs through two forwarding channels that carry S+ or S- to every later
/// site, so the bond dimension is 7 (5 when J = 0) for any N.
MatrixProductOperator build_mpo(const ModelParams& p);

/// Copy of `mpo` with an extra one-site term coeff * op on `site`.
MatrixProductOperator with_site_term(const MatrixProductOperator& mpo, int site, const LocalOp& op, double coeff);

/// Operator product a * b as an MPO of bond dimension D_a * D_b.
MatrixProductOperator mpo_product(const MatrixProductOperator& a, const MatrixProductOperator& b);

/// Full 2^N matrix of the MPO (site 0 least significant). Small N only.
Eigen::MatrixXd mpo_to_dense(const MatrixProductOperator& mpo);

/// <psi|W|psi> / <psi|psi>.
double expectation(const MatrixProductState& mps, const MatrixProductOperator& mpo);

/// <H^2> - <H>^2.
double energy_variance(const MatrixProductState& mps, const MatrixProductOperator& mpo);

}  // namespace xxzlr
