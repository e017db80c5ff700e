#include "xxzlr/mpo.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "environment.hpp"
#include "xxzlr/errors.hpp"

namespace xxzlr {

namespace {

void add_op(std::vector<MpoEntry>& site, int left, int right, const LocalOp& op, double coeff) {
  if (coeff == 0.0) return;
  for (int o = 0; o < 2; ++o)
    for (int i = 0; i < 2; ++i)
      if (op(o, i) != 0.0) site.push_back({left, right, o, i, coeff * op(o, i)});
}

// Internal channel layout.
struct Channels {
  int ready = 0;
  int z = 1;
  int plus = 2;   // S+ placed on the previous site
  int minus = 3;  // S- placed on the previous site
  int far_plus = -1;
  int far_minus = -1;
  int done = 4;
  int dim = 5;
};

}  // namespace

int MatrixProductOperator::max_bond_dim() const {
  return bond_dims.empty() ? 0 : *std::max_element(bond_dims.begin(), bond_dims.end());
}

MatrixProductOperator build_mpo(const ModelParams& p) {
  p.validate();
  if (p.boundary != Boundary::open) throw InvalidParams("build_mpo supports open boundaries only");
  const int n = p.n_sites;
  Channels ch;
  const bool long_range = p.j_lr != 0.0;
  if (long_range) {
    ch.far_plus = 4;
    ch.far_minus = 5;
    ch.done = 6;
    ch.dim = 7;
  }
  const double nn = p.bond_flip_amplitude();
  const double lr = p.long_range_flip_amplitude();
  const LocalOp id = ops::identity();
  const LocalOp z = ops::sigma_z();
  const LocalOp sp = ops::s_plus();
  const LocalOp sm = ops::s_minus();

  MatrixProductOperator mpo;
  mpo.n_sites = n;
  mpo.done_channel = ch.done;
  mpo.bond_dims.assign(static_cast<std::size_t>(n) + 1, ch.dim);
  mpo.bond_dims.front() = 1;
  mpo.bond_dims.back() = 1;
  mpo.sites.resize(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    const bool first = i == 0;
    const bool last = i == n - 1;
    // The outer bonds keep a single channel: "ready" on the left and "done"
    // on the right, both stored at index 0.
    auto right_of = [&](int c) { return last ? (c == ch.done ? 0 : -1) : c; };
    auto left_ok = [&](int c) { return !first || c == ch.ready; };
    std::vector<MpoEntry> site;
    auto put = [&](int l, int r, const LocalOp& op, double coeff) {
      if (!left_ok(l)) return;
      const int rr = right_of(r);
      if (rr < 0) return;
      add_op(site, first ? 0 : l, rr, op, coeff);
    };
    put(ch.ready, ch.ready, id, 1.0);
    put(ch.ready, ch.z, z, 1.0);
    put(ch.ready, ch.plus, sp, 1.0);
    put(ch.ready, ch.minus, sm, 1.0);
    put(ch.z, ch.done, z, -0.25);
    put(ch.plus, ch.done, sm, nn);
    put(ch.minus, ch.done, sp, nn);
    if (long_range) {
      put(ch.ready, ch.far_plus, sp, 1.0);
      put(ch.ready, ch.far_minus, sm, 1.0);
      put(ch.far_plus, ch.far_plus, id, 1.0);
      put(ch.far_minus, ch.far_minus, id, 1.0);
      put(ch.far_plus, ch.done, sm, lr);
      put(ch.far_minus, ch.done, sp, lr);
    }
    put(ch.done, ch.done, id, 1.0);
    mpo.sites[static_cast<std::size_t>(i)] = std::move(site);
  }
  return mpo;
}

MatrixProductOperator with_site_term(const MatrixProductOperator& mpo, int site, const LocalOp& op, double coeff) {
  if (site < 0 || site >= mpo.n_sites) throw InvalidParams("with_site_term: site out of range");
  MatrixProductOperator out = mpo;
  const int left = 0;
  const int right = site == mpo.n_sites - 1 ? 0 : mpo.done_channel;
  add_op(out.sites[static_cast<std::size_t>(site)], left, right, op, coeff);
  return out;
}

MatrixProductOperator mpo_product(const MatrixProductOperator& a, const MatrixProductOperator& b) {
  if (a.n_sites != b.n_sites) throw DimensionMismatch("mpo_product: different lengths");
  MatrixProductOperator out;
  out.n_sites = a.n_sites;
  for (std::size_t i = 0; i < a.bond_dims.size(); ++i) out.bond_dims.push_back(a.bond_dims[i] * b.bond_dims[i]);
  out.done_channel = a.done_channel * b.max_bond_dim() + b.done_channel;
  out.sites.resize(static_cast<std::size_t>(a.n_sites));
  for (int i = 0; i < a.n_sites; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const int dbl = b.bond_dims[ui];
    const int dbr = b.bond_dims[ui + 1];
    std::map<std::tuple<int, int, int, int>, double> acc;
    for (const auto& ea : a.sites[ui]) {
      for (const auto& eb : b.sites[ui]) {
        if (ea.in != eb.out) continue;
        acc[{ea.left * dbl + eb.left, ea.right * dbr + eb.right, ea.out, eb.in}] += ea.value * eb.value;
      }
    }
    for (const auto& [key, v] : acc) {
      if (v == 0.0) continue;
      auto [l, r, o, in] = key;
      out.sites[ui].push_back({l, r, o, in, v});
    }
  }
  return out;
}

Eigen::MatrixXd mpo_to_dense(const MatrixProductOperator& mpo) {
  if (mpo.n_sites > 12) throw SizeExceeded("mpo_to_dense limited to 12 sites");
  std::vector<Eigen::MatrixXd> blocks{Eigen::MatrixXd::Ones(1, 1)};
  for (int i = 0; i < mpo.n_sites; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Eigen::Index d = Eigen::Index{1} << i;
    std::vector<Eigen::MatrixXd> next(static_cast<std::size_t>(mpo.bond_dims[ui + 1]),
                                      Eigen::MatrixXd::Zero(2 * d, 2 * d));
    for (const auto& e : mpo.sites[ui]) {
      next[static_cast<std::size_t>(e.right)].block(e.out * d, e.in * d, d, d) +=
          e.value * blocks[static_cast<std::size_t>(e.left)];
    }
    blocks = std::move(next);
  }
  return blocks[0];
}

double expectation(const MatrixProductState& mps, const MatrixProductOperator& mpo) {
  if (mps.n_sites() != mpo.n_sites) throw DimensionMismatch("expectation: MPS and MPO lengths differ");
  detail::Env env = detail::trivial_env();
  for (int i = 0; i < mps.n_sites(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    env = detail::grow_left(env, mps.tensors[ui], mps.tensors[ui], mpo.sites[ui], mpo.bond_dims[ui + 1]);
  }
  return env[0](0, 0) / overlap(mps, mps);
}

double energy_variance(const MatrixProductState& mps, const MatrixProductOperator& mpo) {
  const double e = expectation(mps, mpo);
  const double e2 = expectation(mps, mpo_product(mpo, mpo));
  return e2 - e * e;
}

}  // namespace xxzlr
