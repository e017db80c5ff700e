#include "xxzlr/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <thread>

#include "xxzlr/dmrg.hpp"
#include "xxzlr/errors.hpp"
#include "xxzlr/mpo.hpp"
#include "xxzlr/mps.hpp"

namespace xxzlr {

namespace fs = std::filesystem;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t point_seed(std::uint64_t run_seed, std::size_t ia, std::size_t ij) {
  return splitmix64(splitmix64(run_seed ^ (static_cast<std::uint64_t>(ia) << 32)) ^ static_cast<std::uint64_t>(ij));
}

std::string point_file_name(std::size_t ia, std::size_t ij) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "point_a%03zu_j%03zu", ia, ij);
  return buf;
}

SweepRecord compute_point(double alpha, double j, const std::vector<int>& sizes, const DmrgConfig& base,
                          std::uint64_t seed) {
  SweepRecord rec;
  rec.alpha = alpha;
  rec.j = j;
  rec.seed = seed;
  EntropyScalingSeries series;
  series.alpha = alpha;
  series.j_lr = j;
  std::optional<MatrixProductState> best;
  int best_n = 0;
  for (int n : sizes) {
    SizeResult s;
    s.n = n;
    s.seed = splitmix64(seed + static_cast<std::uint64_t>(n));
    try {
      DmrgConfig cfg = base;
      cfg.seed = s.seed;
      auto res = dmrg_ground_state(build_mpo(ModelParams{alpha, j, n, Boundary::open}), cfg);
      s.energy = res.report.energy;
      s.s_half = res.report.entropy_profile[static_cast<std::size_t>(n / 2 - 1)];
      s.max_truncation_error = res.report.max_truncation_error;
      s.sweeps = res.report.sweeps;
      s.converged = res.report.converged;
      s.status = res.report.accepted() ? "ok" : (s.converged ? "truncation_exceeded" : "not_converged");
      if (res.report.accepted()) {
        series.points.push_back({n, s.s_half});
        rec.fit_sizes.push_back(n);
        best = std::move(res.state);
        best_n = n;
      }
    } catch (const std::exception& e) {
      s.status = "error";
      s.error = e.what();
      s.energy = s.s_half = s.max_truncation_error = std::nan("");
    }
    rec.sizes.push_back(s);
  }

  if (best) {
    rec.order_n = best_n;
    std::vector<double> sz(static_cast<std::size_t>(best_n));
    for (int i = 0; i < best_n; ++i) sz[static_cast<std::size_t>(i)] = local_expectation(*best, i, ops::sigma_z());
    const MatrixProductState& psi = *best;
    rec.order = order_parameters(sz, [&psi](int a, int b) { return two_point(psi, a, ops::s_plus(), b, ops::s_minus()); });
  } else {
    rec.order.sigma_z_mean = rec.order.xy_plateau = std::nan("");
  }

  if (static_cast<int>(series.points.size()) >= kMinFitPoints) {
    rec.fit = fit_central_charge(series);
    rec.has_fit = true;
    rec.label = std::string(to_string(classify_phase(rec.fit.c, rec.order.sigma_z_mean)));
  } else {
    rec.label = "NA";
  }
  const bool all_ok = rec.fit_sizes.size() == sizes.size();
  rec.status = rec.has_fit ? (all_ok ? "ok" : "partial") : "failed";
  return rec;
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<SweepRecord> load_existing(const fs::path& path, const std::string& hash) {
  if (!fs::exists(path)) return std::nullopt;
  try {
    SweepRecord r = record_from_json(nlohmann::json::parse(read_text(path)));
    if (r.config_hash != hash || r.schema != kSchemaVersion) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable or partial: recompute
  }
}

}  // namespace

SweepSummary run_sweep(const RunConfig& cfg, const SweepLog& log) {
  cfg.validate();
  const auto& grid = cfg.grid;
  const std::string config_text = physics_config(cfg);
  const std::string hash = hex64(fnv1a64(config_text));
  const fs::path out = cfg.output_dir;
  const fs::path points = out / "points";
  std::error_code ec;
  fs::create_directories(points, ec);
  if (ec) throw IoError("cannot create " + points.string() + ": " + ec.message());

  const std::size_t na = grid.alpha_values.size();
  const std::size_t nj = grid.j_values.size();
  const std::size_t total = na * nj;
  if (log) log("sweep grid: " + std::to_string(na) + " x " + std::to_string(nj) + " = " + std::to_string(total) +
               " points, sizes " + std::to_string(grid.sizes.size()) + ", config " + hash);

  SweepSummary summary;
  summary.records.resize(total);
  std::vector<char> done(total, 0);
  for (std::size_t k = 0; k < total; ++k) {
    const auto ia = k / nj, ij = k % nj;
    if (auto r = load_existing(points / (point_file_name(ia, ij) + ".json"), hash)) {
      summary.records[k] = std::move(*r);
      done[k] = 1;
      ++summary.skipped;
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex writer;  // serializes file output and logging
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      if (done[k]) continue;
      const auto ia = k / nj, ij = k % nj;
      const std::string started = utc_now();
      SweepRecord rec = compute_point(grid.alpha_values[ia], grid.j_values[ij], grid.sizes, cfg.dmrg,
                                      point_seed(cfg.seed, ia, ij));
      rec.config_hash = hash;
      rec.config = config_text;
      std::lock_guard<std::mutex> lock(writer);
      try {
        const std::string name = point_file_name(ia, ij);
        nlohmann::ordered_json meta;
        meta["started"] = started;
        meta["finished"] = utc_now();
        write_text(points / (name + ".meta.json"), meta.dump(2) + "\n");
        write_text(points / (name + ".json"), to_json(rec).dump(2) + "\n");
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
      if (log) log("point alpha=" + format_double(rec.alpha) + " j=" + format_double(rec.j) + " -> " + rec.label + " (" + rec.status + ")");
      summary.records[k] = std::move(rec);
      ++summary.computed;
    }
  };
  const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(total)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Aggregates are rebuilt from the stored point files so a resumed run and
  // a fresh run produce the same bytes.
  for (std::size_t k = 0; k < total; ++k) {
    const auto path = points / (point_file_name(k / nj, k % nj) + ".json");
    summary.records[k] = record_from_json(nlohmann::json::parse(read_text(path)));
  }
  emit_records(summary.records, out, cfg.format);
  return summary;
}

}  // namespace xxzlr
