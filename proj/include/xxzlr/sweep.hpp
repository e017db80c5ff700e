#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xxzlr/config.hpp"
#include "xxzlr/records.hpp"

namespace xxzlr {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of grid point (ia, ij); independent of worker count and order.
std::uint64_t point_seed(std::uint64_t run_seed, std::size_t ia, std::size_t ij);

/// DMRG over every size, entropy fit over the converged sizes, order
/// parameters from the largest converged state, classification. Per-size
/// failures are recorded, not thrown.
SweepRecord compute_point(double alpha, double j, const std::vector<int>& sizes, const DmrgConfig& base,
                          std::uint64_t seed);

struct SweepSummary {
  std::vector<SweepRecord> records;  // grid order, alpha outer
  std::size_t computed = 0;
  std::size_t skipped = 0;  // resumed from existing point files
};

using SweepLog = std::function<void(const std::string&)>;

/// Runs the grid with cfg.workers threads. Each finished point is written to
/// <out>/points/<name>.json (plus a .meta.json with wall-clock times), then
/// sweep.csv / sweep.json are written in grid order. Existing point files
/// with a matching config hash are reused.
SweepSummary run_sweep(const RunConfig& cfg, const SweepLog& log = {});

std::string point_file_name(std::size_t ia, std::size_t ij);

}  // namespace xxzlr
