#include "xxzlr/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <string>

#include "xxzlr/errors.hpp"

namespace xxzlr {

namespace ops {
LocalOp identity() { return LocalOp::Identity(); }
LocalOp sigma_z() {
  LocalOp m;
  m << -1.0, 0.0, 0.0, 1.0;
  return m;
}
LocalOp s_plus() {
  LocalOp m = LocalOp::Zero();
  m(1, 0) = 1.0;
  return m;
}
LocalOp s_minus() {
  LocalOp m = LocalOp::Zero();
  m(0, 1) = 1.0;
  return m;
}
}  // namespace ops

namespace {

Eigen::MatrixXd thin_q(const Eigen::HouseholderQR<Eigen::MatrixXd>& qr, Eigen::Index cols) {
  return qr.householderQ() * Eigen::MatrixXd::Identity(qr.rows(), cols);
}

// Left-orthonormalize site i and push the remainder into site i+1.
void shift_right(MatrixProductState& mps, int i) {
  auto& a = mps.tensors[static_cast<std::size_t>(i)];
  const Eigen::Index dl = a[0].rows();
  const Eigen::Index dr = a[0].cols();
  Eigen::MatrixXd m(2 * dl, dr);
  m.topRows(dl) = a[0];
  m.bottomRows(dl) = a[1];
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::Index k = std::min(2 * dl, dr);
  const Eigen::MatrixXd q = thin_q(qr, k);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  a[0] = q.topRows(dl);
  a[1] = q.bottomRows(dl);
  auto& next = mps.tensors[static_cast<std::size_t>(i + 1)];
  next[0] = r * next[0];
  next[1] = r * next[1];
}

// Right-orthonormalize site i and push the remainder into site i-1.
void shift_left(MatrixProductState& mps, int i) {
  auto& b = mps.tensors[static_cast<std::size_t>(i)];
  const Eigen::Index dl = b[0].rows();
  const Eigen::Index dr = b[0].cols();
  Eigen::MatrixXd mt(2 * dr, dl);  // transpose of [B0 B1]
  mt.topRows(dr) = b[0].transpose();
  mt.bottomRows(dr) = b[1].transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(mt);
  const Eigen::Index k = std::min(2 * dr, dl);
  const Eigen::MatrixXd q = thin_q(qr, k);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  b[0] = q.topRows(dr).transpose();
  b[1] = q.bottomRows(dr).transpose();
  auto& prev = mps.tensors[static_cast<std::size_t>(i - 1)];
  prev[0] = prev[0] * r.transpose();
  prev[1] = prev[1] * r.transpose();
}

void normalize_center(MatrixProductState& mps) {
  auto& c = mps.tensors[static_cast<std::size_t>(*mps.center)];
  const double n = std::sqrt(c[0].squaredNorm() + c[1].squaredNorm());
  if (!(n > 0.0)) throw InvalidParams("cannot normalize a zero MPS");
  c[0] /= n;
  c[1] /= n;
}

double frob_dot(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) { return x.cwiseProduct(y).sum(); }

void require_site(const MatrixProductState& mps, int site) {
  if (site < 0 || site >= mps.n_sites()) throw InvalidParams("site index out of range");
}

}  // namespace

std::vector<int> MatrixProductState::bond_dims() const {
  std::vector<int> out;
  if (tensors.empty()) return out;
  out.push_back(static_cast<int>(tensors.front()[0].rows()));
  for (const auto& t : tensors) out.push_back(static_cast<int>(t[0].cols()));
  return out;
}

int MatrixProductState::max_bond_dim() const {
  const auto d = bond_dims();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

MatrixProductState random_mps(int n_sites, int bond_dim, std::uint64_t seed) {
  if (n_sites < 1) throw InvalidParams("random_mps: n_sites must be positive");
  if (bond_dim < 1) throw InvalidParams("random_mps: bond_dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::Index> dims(static_cast<std::size_t>(n_sites) + 1);
  for (int b = 0; b <= n_sites; ++b) {
    const int span = std::min(b, n_sites - b);
    const Eigen::Index cap = span >= 30 ? bond_dim : std::min<Eigen::Index>(bond_dim, Eigen::Index{1} << span);
    dims[static_cast<std::size_t>(b)] = std::max<Eigen::Index>(1, cap);
  }
  MatrixProductState mps;
  mps.tensors.resize(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) {
    for (int s = 0; s < 2; ++s) {
      Eigen::MatrixXd m(dims[static_cast<std::size_t>(i)], dims[static_cast<std::size_t>(i) + 1]);
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = normal(rng);
      mps.tensors[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = std::move(m);
    }
  }
  canonicalize(mps, 0);
  return mps;
}

MatrixProductState product_mps(std::span<const int> spins) {
  MatrixProductState mps;
  for (int s : spins) {
    std::array<Eigen::MatrixXd, 2> t{Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1)};
    t[s ? 1 : 0](0, 0) = 1.0;
    mps.tensors.push_back(std::move(t));
  }
  mps.center = 0;
  return mps;
}

void canonicalize(MatrixProductState& mps, int site) {
  require_site(mps, site);
  for (int i = 0; i < site; ++i) shift_right(mps, i);
  for (int i = mps.n_sites() - 1; i > site; --i) shift_left(mps, i);
  mps.center = site;
  normalize_center(mps);
}

void move_center(MatrixProductState& mps, int site) {
  require_site(mps, site);
  if (!mps.center) {
    canonicalize(mps, site);
    return;
  }
  while (*mps.center < site) {
    shift_right(mps, *mps.center);
    ++*mps.center;
  }
  while (*mps.center > site) {
    shift_left(mps, *mps.center);
    --*mps.center;
  }
}

double overlap(const MatrixProductState& a, const MatrixProductState& b) {
  if (a.n_sites() != b.n_sites()) throw DimensionMismatch("overlap: different lengths");
  Eigen::MatrixXd e = Eigen::MatrixXd::Ones(1, 1);
  for (int i = 0; i < a.n_sites(); ++i) {
    const auto& ta = a.tensors[static_cast<std::size_t>(i)];
    const auto& tb = b.tensors[static_cast<std::size_t>(i)];
    e = ta[0].transpose() * e * tb[0] + ta[1].transpose() * e * tb[1];
  }
  return e(0, 0);
}

double norm(const MatrixProductState& mps) { return std::sqrt(std::max(0.0, overlap(mps, mps))); }

double canonical_error(const MatrixProductState& mps) {
  if (!mps.center) return 0.0;
  double err = 0.0;
  for (int i = 0; i < mps.n_sites(); ++i) {
    const auto& t = mps.tensors[static_cast<std::size_t>(i)];
    if (i < *mps.center) {
      const Eigen::MatrixXd g = t[0].transpose() * t[0] + t[1].transpose() * t[1];
      err = std::max(err, (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
    } else if (i > *mps.center) {
      const Eigen::MatrixXd g = t[0] * t[0].transpose() + t[1] * t[1].transpose();
      err = std::max(err, (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

Eigen::VectorXd bond_singular_values(const MatrixProductState& mps, int bond) {
  if (bond < 1 || bond > mps.n_sites() - 1) {
    throw InvalidBond("bond " + std::to_string(bond) + " outside [1, " + std::to_string(mps.n_sites() - 1) + "]");
  }
  if (!mps.center || (*mps.center != bond - 1 && *mps.center != bond)) {
    throw InvalidBond("canonical center must sit next to bond " + std::to_string(bond));
  }
  const auto& c = mps.tensors[static_cast<std::size_t>(*mps.center)];
  Eigen::MatrixXd m;
  if (*mps.center == bond - 1) {
    m.resize(2 * c[0].rows(), c[0].cols());
    m.topRows(c[0].rows()) = c[0];
    m.bottomRows(c[0].rows()) = c[1];
  } else {
    m.resize(c[0].rows(), 2 * c[0].cols());
    m.leftCols(c[0].cols()) = c[0];
    m.rightCols(c[0].cols()) = c[1];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

double mps_entropy(const MatrixProductState& mps, int bond) {
  const Eigen::VectorXd sv = bond_singular_values(mps, bond);
  const double total = sv.squaredNorm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double p = sv(i) * sv(i) / total;
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(0.0, s);
}

std::vector<double> entropy_profile(MatrixProductState mps) {
  std::vector<double> out;
  if (mps.n_sites() < 2) return out;
  canonicalize(mps, 0);
  for (int bond = 1; bond < mps.n_sites(); ++bond) {
    out.push_back(mps_entropy(mps, bond));
    move_center(mps, bond);
  }
  return out;
}

Eigen::VectorXd to_dense(const MatrixProductState& mps) {
  const int n = mps.n_sites();
  if (n > 24) throw SizeExceeded("to_dense limited to 24 sites");
  // rows[c] is the 1 x D partial product for configuration c of the sites so far.
  std::vector<Eigen::RowVectorXd> rows{Eigen::RowVectorXd::Ones(1)};
  for (int i = 0; i < n; ++i) {
    std::vector<Eigen::RowVectorXd> next(rows.size() * 2);
    for (int s = 0; s < 2; ++s) {
      for (std::size_t c = 0; c < rows.size(); ++c) {
        next[c + (static_cast<std::size_t>(s) << i)] = rows[c] * mps.tensors[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
      }
    }
    rows = std::move(next);
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) v(static_cast<Eigen::Index>(c)) = rows[c](0);
  return v;
}

double local_expectation(const MatrixProductState& mps, int site, const LocalOp& op) {
  MatrixProductState work = mps;
  move_center(work, site);
  const auto& a = work.tensors[static_cast<std::size_t>(site)];
  double v = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      if (op(s, t) != 0.0) v += op(s, t) * frob_dot(a[static_cast<std::size_t>(s)], a[static_cast<std::size_t>(t)]);
  return v;
}

namespace {

// Row of <a_i b_j>, j >= i, for a state whose center is at i.
std::vector<double> row_at_center(const MatrixProductState& mps, int i, const LocalOp& a, const LocalOp& b) {
  std::vector<double> out;
  const auto& c = mps.tensors[static_cast<std::size_t>(i)];
  const LocalOp ab = a * b;
  double diag = 0.0;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(c[0].cols(), c[0].cols());
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      const auto us = static_cast<std::size_t>(s);
      const auto ut = static_cast<std::size_t>(t);
      if (ab(s, t) != 0.0) diag += ab(s, t) * frob_dot(c[us], c[ut]);
      if (a(s, t) != 0.0) e.noalias() += a(s, t) * c[us].transpose() * c[ut];
    }
  }
  out.push_back(diag);
  for (int j = i + 1; j < mps.n_sites(); ++j) {
    const auto& t = mps.tensors[static_cast<std::size_t>(j)];
    double v = 0.0;
    for (int s = 0; s < 2; ++s)
      for (int u = 0; u < 2; ++u)
        if (b(s, u) != 0.0) v += b(s, u) * frob_dot(t[static_cast<std::size_t>(s)], e * t[static_cast<std::size_t>(u)]);
    out.push_back(v);
    if (j + 1 < mps.n_sites()) e = t[0].transpose() * e * t[0] + t[1].transpose() * e * t[1];
  }
  return out;
}

}  // namespace

std::vector<double> correlation_row(const MatrixProductState& mps, int i, const LocalOp& a, const LocalOp& b) {
  require_site(mps, i);
  MatrixProductState work = mps;
  move_center(work, i);
  return row_at_center(work, i, a, b);
}

double two_point(const MatrixProductState& mps, int i, const LocalOp& a, int j, const LocalOp& b) {
  if (j < i) return two_point(mps, j, b, i, a);
  const auto row = correlation_row(mps, i, a, b);
  return row[static_cast<std::size_t>(j - i)];
}

MpsObservables mps_observables(const MatrixProductState& mps, std::span<const std::pair<int, int>> pairs) {
  const int n = mps.n_sites();
  MatrixProductState work = mps;
  if (!work.center) canonicalize(work, 0);
  move_center(work, 0);

  // Pairs normalized to i <= j and grouped by i.
  std::map<int, int> reach;
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidParams("observable pair out of range");
    const int lo = std::min(i, j);
    reach[lo] = std::max(reach[lo], std::max(i, j));
  }
  std::map<int, std::vector<double>> zz_rows;
  std::map<int, std::vector<double>> pm_rows;

  MpsObservables out;
  for (int i = 0; i < n; ++i) {
    move_center(work, i);
    const auto& c = work.tensors[static_cast<std::size_t>(i)];
    out.sigma_z.push_back(c[1].squaredNorm() - c[0].squaredNorm());
    if (reach.count(i)) {
      zz_rows[i] = row_at_center(work, i, ops::sigma_z(), ops::sigma_z());
      pm_rows[i] = row_at_center(work, i, ops::s_plus(), ops::s_minus());
    }
  }
  for (auto [i, j] : pairs) {
    const int lo = std::min(i, j);
    const auto d = static_cast<std::size_t>(std::max(i, j) - lo);
    out.zz.push_back({i, j, zz_rows[lo][d]});
    // Real amplitudes make <S+_i S-_j> symmetric under i <-> j.
    out.pm.push_back({i, j, pm_rows[lo][d]});
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const MatrixProductState& mps, std::uint64_t seed) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open checkpoint for writing: " + path.string());
  const char magic[8] = {'X', 'X', 'Z', 'L', 'R', 'M', 'P', 'S'};
  f.write(magic, 8);
  auto put = [&](const auto& v) { f.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
  put(kCheckpointVersion);
  put(static_cast<std::uint32_t>(mps.n_sites()));
  put(seed);
  put(static_cast<std::int32_t>(mps.center.value_or(-1)));
  for (int d : mps.bond_dims()) put(static_cast<std::uint32_t>(d));
  for (const auto& t : mps.tensors) {
    for (const auto& m : t) {
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
      f.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
    }
  }
  if (!f) throw IoError("failed writing checkpoint: " + path.string());
}

MatrixProductState load_checkpoint(const std::filesystem::path& path, std::uint64_t* seed) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint: " + path.string());
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, "XXZLRMPS", 8) != 0) throw IoError("not an MPS checkpoint: " + path.string());
  auto get = [&](auto& v) {
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!f) throw IoError("truncated checkpoint: " + path.string());
  };
  std::uint32_t version = 0, n = 0;
  std::uint64_t s = 0;
  std::int32_t center = -1;
  get(version);
  if (version != kCheckpointVersion) throw IoError("unsupported checkpoint version " + std::to_string(version));
  get(n);
  get(s);
  get(center);
  std::vector<std::uint32_t> dims(n + 1);
  for (auto& d : dims) get(d);
  MatrixProductState mps;
  mps.tensors.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (auto& m : mps.tensors[i]) {
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(dims[i], dims[i + 1]);
      f.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
      if (!f) throw IoError("truncated checkpoint payload: " + path.string());
      m = rm;
    }
  }
  if (center >= 0) mps.center = center;
  if (seed) *seed = s;
  return mps;
}

}  // namespace xxzlr
