#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "xxzlr/errors.hpp"
#include "xxzlr/exactdiag.hpp"

using namespace xxzlr;

namespace {

EdOptions dense_opts() {
  EdOptions o;
  o.path = SolverPath::dense;
  return o;
}

EdOptions lanczos_opts() {
  EdOptions o;
  o.path = SolverPath::lanczos;
  return o;
}

double residual(const SectorState& s) {
  const SectorBasis basis(s.params.n_sites, s.n_up);
  return (apply_hamiltonian(s.params, basis, s.amplitudes) - s.energy * s.amplitudes).norm();
}

}  // namespace

TEST(SectorGroundState, PolarizedSector) {
  const auto s = sector_ground_state({0.5, 0.0, 8, Boundary::open}, 8);
  EXPECT_NEAR(s.energy, -1.75, 1e-13);
}

TEST(SectorGroundState, TwoSiteBlock) {
  const auto s = sector_ground_state({2.0, 0.0, 2, Boundary::open}, 1);
  EXPECT_NEAR(s.energy, -0.75, 1e-13);
}

TEST(SectorGroundState, LanczosMatchesDense) {
  const ModelParams p{1.5, 0.5, 10, Boundary::open};
  const auto d = sector_ground_state(p, 5, dense_opts());
  const auto l = sector_ground_state(p, 5, lanczos_opts());
  EXPECT_NEAR(l.energy, d.energy, 1e-9);
  EXPECT_GE(l.energy, d.energy - 1e-9);
  EXPECT_LE(residual(l), 1e-8);
  EXPECT_LE(residual(d), 1e-8);
  EXPECT_NEAR(l.amplitudes.norm(), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(l.amplitudes.dot(d.amplitudes)), 1.0, 1e-8);
}

TEST(SectorGroundState, VariationalBoundProperty) {
  oracle::Gen gen(17);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = gen.integer(4, 10);
    const ModelParams p{gen.uniform(-1, 2.5), gen.uniform(-2, 2), n, Boundary::open};
    const int n_up = gen.integer(0, n);
    const auto d = sector_ground_state(p, n_up, dense_opts());
    const auto l = sector_ground_state(p, n_up, lanczos_opts());
    EXPECT_GE(l.energy, d.energy - 1e-9);
    EXPECT_NEAR(l.energy, d.energy, 1e-8);
    EXPECT_LE(residual(l), 1e-8);
  }
}

TEST(SectorGroundState, BadSector) {
  EXPECT_THROW(sector_ground_state({1.0, 0.0, 4, Boundary::open}, 5), InvalidParams);
}

TEST(GlobalGroundState, FerromagneticDoublet) {
  const auto r = global_ground_state({0.5, 0.0, 6, Boundary::open});
  EXPECT_NEAR(r.energy, -1.25, 1e-12);
  EXPECT_EQ(r.degenerate_sectors, (std::vector<int>{0, 6}));
  EXPECT_EQ(r.sector, 6);
}

TEST(GlobalGroundState, HalfFillingInXyRegime) {
  const auto r = global_ground_state({1.5, 0.0, 6, Boundary::open});
  EXPECT_EQ(r.sector, 3);
  EXPECT_EQ(r.degenerate_sectors, (std::vector<int>{3}));
}

TEST(GlobalGroundState, MatchesFullSpectrumMinimum) {
  oracle::Gen gen(29);
  std::vector<ModelParams> cases{{1.5, -1.0, 6, Boundary::open}};
  for (int i = 0; i < 10; ++i) cases.push_back({gen.uniform(-1, 2.5), gen.uniform(-2, 2), gen.integer(2, 9), Boundary::open});
  for (const auto& p : cases) {
    const auto r = global_ground_state(p);
    EXPECT_NEAR(r.energy, oracle::ground_energy(oracle::hamiltonian(p.alpha, p.j_lr, p.n_sites)), 1e-10);
    EXPECT_DOUBLE_EQ(r.energy, *std::min_element(r.sector_energies.begin(), r.sector_energies.end()));
  }
}

TEST(GlobalGroundState, EnergyNonIncreasingInAlpha) {
  for (double j : {0.0, 0.5, 1.0}) {
    for (int n : {6, 8}) {
      double prev = 1e300;
      for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
        const double e = global_ground_state({alpha, j, n, Boundary::open}).energy;
        EXPECT_LE(e, prev + 1e-12) << "alpha=" << alpha << " j=" << j << " n=" << n;
        prev = e;
      }
    }
  }
}

TEST(GlobalGroundState, InvariantUnderSiteReversal) {
  // Relabeling i -> N-1-i permutes the basis; the spectrum must not change.
  oracle::Gen gen(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = gen.integer(3, 8);
    const double alpha = gen.uniform(-1, 2.5), j = gen.uniform(-2, 2);
    const Eigen::MatrixXd h = oracle::hamiltonian(alpha, j, n);
    const Eigen::Index dim = h.rows();
    Eigen::VectorXi perm(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
      Eigen::Index r = 0;
      for (int b = 0; b < n; ++b)
        if (s >> b & 1) r |= Eigen::Index{1} << (n - 1 - b);
      perm(s) = static_cast<int>(r);
    }
    Eigen::PermutationMatrix<Eigen::Dynamic> pm(perm);
    const Eigen::MatrixXd permuted = pm * h * pm.transpose();
    EXPECT_NEAR(oracle::ground_energy(permuted), global_ground_state({alpha, j, n, Boundary::open}).energy, 1e-10);
  }
}

TEST(Entropy, ProductStateIsZero) {
  const auto s = sector_ground_state({0.5, 0.3, 8, Boundary::open}, 8);
  for (int cut = 1; cut < 8; ++cut) EXPECT_NEAR(cut_entanglement_entropy(s, cut), 0.0, 1e-14);
}

TEST(Entropy, TwoSiteGroundStateIsLn2) {
  const auto s = sector_ground_state({2.0, 0.0, 2, Boundary::open}, 1);
  EXPECT_NEAR(cut_entanglement_entropy(s, 1), std::numbers::ln2, 1e-12);
}

TEST(Entropy, SchmidtMatchesDensityMatrixAndOracle) {
  oracle::Gen gen(37);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = gen.integer(4, 10);
    const ModelParams p{gen.uniform(-1, 2.5), gen.uniform(-2, 2), n, Boundary::open};
    const auto s = sector_ground_state(p, gen.integer(1, n - 1));
    const Eigen::VectorXd full = embed_full(s);
    for (int cut = 1; cut < n; ++cut) {
      const double a = cut_entanglement_entropy(s, cut);
      EXPECT_NEAR(a, cut_entropy_from_density_matrix(s, cut), 1e-10);
      EXPECT_NEAR(a, oracle::entropy(full, cut, n), 1e-10);
      EXPECT_GE(a, -1e-14);
    }
    const auto w = schmidt_weights(s, n / 2);
    double sum = 0.0;
    for (double x : w) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_TRUE(std::is_sorted(w.rbegin(), w.rend()));
  }
}

TEST(Entropy, BadCut) {
  const auto s = sector_ground_state({1.0, 0.0, 4, Boundary::open}, 2);
  EXPECT_THROW(cut_entanglement_entropy(s, 0), InvalidCut);
  EXPECT_THROW(cut_entanglement_entropy(s, 4), InvalidCut);
}

TEST(Correlators, PolarizedState) {
  const auto c = correlators(sector_ground_state({0.7, 0.2, 6, Boundary::open}, 6));
  for (double z : c.sigma_z) EXPECT_NEAR(z, 1.0, 1e-14);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) EXPECT_NEAR(c.pm(i, j), 0.0, 1e-14);
}

TEST(Correlators, TwoSiteGroundState) {
  // The flip amplitude -alpha/2 is negative, so the lowest Sz=0 vector is the
  // symmetric combination and the in-plane correlator is positive.
  const auto s = sector_ground_state({2.0, 0.0, 2, Boundary::open}, 1);
  EXPECT_NEAR(std::abs(s.amplitudes(0) - s.amplitudes(1)), 0.0, 1e-12);
  const auto c = correlators(s);
  EXPECT_NEAR(c.pm(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(c.pm(1, 0), 0.5, 1e-12);
  EXPECT_NEAR(c.zz(0, 1), -1.0, 1e-12);
}

TEST(Correlators, MatchKroneckerOracle) {
  oracle::Gen gen(41);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = gen.integer(3, 7);
    const auto s = sector_ground_state({gen.uniform(0, 2), gen.uniform(-1, 1), n, Boundary::open}, gen.integer(0, n));
    const Eigen::VectorXd v = embed_full(s);
    const auto c = correlators(s);
    Eigen::MatrixXd sp(2, 2);
    sp << 0, 0, 1, 0;  // |up><down| in {down, up}
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(c.sigma_z[static_cast<std::size_t>(i)], v.dot(oracle::site_op(oracle::pauli('z'), i, n) * v), 1e-12);
      for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXd op = i == j ? Eigen::MatrixXd(oracle::site_op(sp * sp.transpose(), i, n))
                                          : Eigen::MatrixXd(oracle::site_op(sp, i, n) * oracle::site_op(sp.transpose(), j, n));
        EXPECT_NEAR(c.pm(i, j), v.dot(op * v), 1e-12);
        EXPECT_NEAR(c.zz(i, j), v.dot(oracle::site_op(oracle::pauli('z'), i, n) * oracle::site_op(oracle::pauli('z'), j, n) * v), 1e-12);
      }
    }
  }
}

TEST(Correlators, LongRangeSignSetsPlateauSign) {
  // The all-to-all term enters with a plus sign, so J > 0 frustrates the
  // in-plane order favored by the chain and J < 0 reinforces it.
  const auto bulk_mean = [](double j) {
    const auto r = global_ground_state({1.5, j, 10, Boundary::open});
    double sum = 0.0;
    int count = 0;
    for (int i = 2; i <= 7; ++i)
      for (int k = i + 3; k <= 7; ++k) {
        sum += r.observables.pm(i, k);
        ++count;
      }
    return sum / count;
  };
  EXPECT_LT(bulk_mean(1.0), 0.0);
  EXPECT_GT(bulk_mean(-1.0), 0.0);
}
