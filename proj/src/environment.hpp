#pragma once

// Block environments shared by expectation values and the DMRG sweep.
// An environment holds one (bra bond x ket bond) matrix per MPO channel.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "xxzlr/mpo.hpp"

namespace xxzlr::detail {

using Env = std::vector<Eigen::MatrixXd>;
using SiteTensor = std::array<Eigen::MatrixXd, 2>;

inline Env trivial_env() { return Env{Eigen::MatrixXd::Ones(1, 1)}; }

inline Env grow_left(const Env& left, const SiteTensor& bra, const SiteTensor& ket,
                     const std::vector<MpoEntry>& w, int d_right) {
  const Eigen::Index dr_bra = bra[0].cols();
  const Eigen::Index dr_ket = ket[0].cols();
  const Eigen::Index dl_bra = bra[0].rows();
  std::vector<std::array<Eigen::MatrixXd, 2>> t(left.size());
  std::vector<std::array<Eigen::MatrixXd, 2>> u(static_cast<std::size_t>(d_right));
  for (const auto& e : w) {
    auto& te = t[static_cast<std::size_t>(e.left)][static_cast<std::size_t>(e.in)];
    if (te.size() == 0) te.noalias() = left[static_cast<std::size_t>(e.left)] * ket[static_cast<std::size_t>(e.in)];
    auto& ue = u[static_cast<std::size_t>(e.right)][static_cast<std::size_t>(e.out)];
    if (ue.size() == 0) ue = Eigen::MatrixXd::Zero(dl_bra, dr_ket);
    ue += e.value * te;
  }
  Env out(static_cast<std::size_t>(d_right));
  for (int b = 0; b < d_right; ++b) {
    auto& o = out[static_cast<std::size_t>(b)];
    o = Eigen::MatrixXd::Zero(dr_bra, dr_ket);
    for (int s = 0; s < 2; ++s) {
      const auto& ue = u[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
      if (ue.size() != 0) o.noalias() += bra[static_cast<std::size_t>(s)].transpose() * ue;
    }
  }
  return out;
}

inline Env grow_right(const Env& right, const SiteTensor& bra, const SiteTensor& ket,
                      const std::vector<MpoEntry>& w, int d_left) {
  const Eigen::Index dl_bra = bra[0].rows();
  const Eigen::Index dl_ket = ket[0].rows();
  const Eigen::Index dr_bra = bra[0].cols();
  std::vector<std::array<Eigen::MatrixXd, 2>> t(right.size());
  std::vector<std::array<Eigen::MatrixXd, 2>> u(static_cast<std::size_t>(d_left));
  for (const auto& e : w) {
    auto& te = t[static_cast<std::size_t>(e.right)][static_cast<std::size_t>(e.in)];
    if (te.size() == 0) te.noalias() = right[static_cast<std::size_t>(e.right)] * ket[static_cast<std::size_t>(e.in)].transpose();
    auto& ue = u[static_cast<std::size_t>(e.left)][static_cast<std::size_t>(e.out)];
    if (ue.size() == 0) ue = Eigen::MatrixXd::Zero(dr_bra, dl_ket);
    ue += e.value * te;
  }
  Env out(static_cast<std::size_t>(d_left));
  for (int a = 0; a < d_left; ++a) {
    auto& o = out[static_cast<std::size_t>(a)];
    o = Eigen::MatrixXd::Zero(dl_bra, dl_ket);
    for (int s = 0; s < 2; ++s) {
      const auto& ue = u[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)];
      if (ue.size() != 0) o.noalias() += bra[static_cast<std::size_t>(s)] * ue;
    }
  }
  return out;
}

}  // namespace xxzlr::detail
