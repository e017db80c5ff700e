#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "xxzlr/errors.hpp"
#include "xxzlr/model.hpp"

using namespace xxzlr;

namespace {

int popcount(std::uint32_t s) { return __builtin_popcount(s); }

}  // namespace

TEST(DenseHamiltonian, IsingLimitTwoSites) {
  const Eigen::MatrixXd h = build_dense_hamiltonian({0.0, 0.0, 2, Boundary::open});
  // index = up0 + 2 up1
  EXPECT_DOUBLE_EQ(h(0, 0), -0.25);
  EXPECT_DOUBLE_EQ(h(3, 3), -0.25);
  EXPECT_DOUBLE_EQ(h(1, 1), 0.25);
  EXPECT_DOUBLE_EQ(h(2, 2), 0.25);
  EXPECT_EQ((h - Eigen::MatrixXd(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(DenseHamiltonian, IsotropicTwoSiteBlock) {
  const ModelParams p{1.0, 0.0, 2, Boundary::open};
  const SectorBasis sector(2, 1);
  const Eigen::MatrixXd b = build_sector_block(p, sector);
  Eigen::Matrix2d want;
  want << 0.25, -0.5, -0.5, 0.25;
  EXPECT_LT((b - want).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  EXPECT_NEAR(es.eigenvalues()(0), -0.25, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), 0.75, 1e-14);
}

TEST(DenseHamiltonian, TwoSiteFlipElement) {
  for (double alpha : {-1.0, 0.3, 1.7}) {
    for (double j : {-2.0, 0.0, 0.9}) {
      const Eigen::MatrixXd h = build_dense_hamiltonian({alpha, j, 2, Boundary::open});
      EXPECT_NEAR(h(1, 2), -alpha / 2 + j / 4, 1e-15);
    }
  }
}

TEST(DenseHamiltonian, TwoSiteClosedFormSpectrum) {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 25; ++trial) {
    const double alpha = gen.uniform(-2, 3), j = gen.uniform(-2, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_dense_hamiltonian({alpha, j, 2, Boundary::open}));
    const double d = alpha / 2 - j / 4;
    std::vector<double> want{-0.25, -0.25, 0.25 + d, 0.25 - d};
    std::sort(want.begin(), want.end());
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(es.eigenvalues()(k), want[static_cast<std::size_t>(k)], 1e-13);
  }
}

TEST(DenseHamiltonian, MatchesPauliKroneckerOracle) {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(2, 7);
    const double alpha = gen.uniform(-2, 3), j = gen.uniform(-2, 3);
    const bool periodic = trial % 3 == 0;
    const ModelParams p{alpha, j, n, periodic ? Boundary::periodic : Boundary::open};
    const Eigen::MatrixXd diff = build_dense_hamiltonian(p) - oracle::hamiltonian(alpha, j, n, periodic);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12) << "n=" << n << " alpha=" << alpha << " j=" << j;
  }
}

TEST(DenseHamiltonian, SymmetricAndMagnetizationConserving) {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = gen.integer(2, 9);
    const Eigen::MatrixXd h = build_dense_hamiltonian({gen.uniform(-2, 3), gen.uniform(-2, 3), n, Boundary::open});
    EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c)
        if (popcount(static_cast<std::uint32_t>(r)) != popcount(static_cast<std::uint32_t>(c))) {
          ASSERT_EQ(h(r, c), 0.0);
        }
  }
}

TEST(DenseHamiltonian, GlobalSpinFlipSymmetry) {
  oracle::Gen gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = gen.integer(2, 8);
    const Eigen::MatrixXd h = build_dense_hamiltonian({gen.uniform(-2, 3), gen.uniform(-2, 3), n, Boundary::open});
    const Eigen::Index mask = (Eigen::Index{1} << n) - 1;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c) worst = std::max(worst, std::abs(h(r ^ mask, c ^ mask) - h(r, c)));
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(DenseHamiltonian, Guards) {
  EXPECT_THROW(build_dense_hamiltonian({1.0, 0.0, 1, Boundary::open}), InvalidParams);
  EXPECT_THROW(build_dense_hamiltonian({1.0, 0.0, 15, Boundary::open}), SizeExceeded);
  EXPECT_THROW(build_dense_hamiltonian({NAN, 0.0, 4, Boundary::open}), InvalidParams);
}

TEST(Sectors, Sizes) {
  auto sizes = [](int n) {
    std::vector<std::size_t> out;
    for (const auto& s : magnetization_sectors(n)) out.push_back(s.size());
    return out;
  };
  EXPECT_EQ(sizes(2), (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(sizes(4), (std::vector<std::size_t>{1, 4, 6, 4, 1}));
  EXPECT_EQ(SectorBasis(10, 5).size(), 252u);
}

TEST(Sectors, OrderedInverseAndPartition) {
  for (int n = 1; n <= 12; ++n) {
    std::size_t total = 0;
    for (const auto& s : magnetization_sectors(n)) {
      total += s.size();
      const auto& st = s.states();
      for (std::size_t i = 0; i < st.size(); ++i) {
        ASSERT_EQ(popcount(st[i]), s.n_up());
        ASSERT_EQ(s.index_of(st[i]), i);
        if (i > 0) ASSERT_LT(st[i - 1], st[i]);
      }
    }
    EXPECT_EQ(total, std::size_t{1} << n);
  }
}

TEST(MatVec, PolarizedStateIsEigenvector) {
  for (int n : {2, 5, 9, 16}) {
    const ModelParams p{1.3, 0.7, n, Boundary::open};
    const SectorBasis top(n, n);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(1);
    EXPECT_NEAR(apply_hamiltonian(p, top, v)(0), -(n - 1) / 4.0, 1e-14);
  }
}

TEST(MatVec, MatchesDenseBlock) {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = trial == 0 ? 8 : gen.integer(2, 10);
    const ModelParams p{trial == 0 ? 1.3 : gen.uniform(-2, 3), trial == 0 ? 0.7 : gen.uniform(-2, 3), n,
                        trial % 4 == 1 ? Boundary::periodic : Boundary::open};
    const Eigen::MatrixXd h = build_dense_hamiltonian(p);
    for (const auto& sector : magnetization_sectors(n)) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(sector.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gen.uniform(-1, 1);
      const Eigen::VectorXd got = apply_hamiltonian(p, sector, v);
      // Embed, multiply densely, project back.
      Eigen::VectorXd full = Eigen::VectorXd::Zero(h.rows());
      for (std::size_t i = 0; i < sector.size(); ++i) full(sector.states()[i]) = v(static_cast<Eigen::Index>(i));
      const Eigen::VectorXd hv = h * full;
      double leak = 0.0;
      for (Eigen::Index s = 0; s < hv.size(); ++s)
        if (!sector.contains(static_cast<BasisState>(s))) leak = std::max(leak, std::abs(hv(s)));
      EXPECT_EQ(leak, 0.0);
      for (std::size_t i = 0; i < sector.size(); ++i)
        ASSERT_NEAR(got(static_cast<Eigen::Index>(i)), hv(sector.states()[i]), 1e-12);
    }
  }
}

TEST(MatVec, RejectsWrongLength) {
  const ModelParams p{1.0, 0.0, 4, Boundary::open};
  EXPECT_THROW(apply_hamiltonian(p, SectorBasis(4, 2), Eigen::VectorXd::Zero(5)), DimensionMismatch);
}
