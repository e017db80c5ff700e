#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xxzlr/analysis.hpp"

namespace xxzlr {

inline constexpr const char* kSchemaVersion = "xxzlr.sweep/1";

/// One chain length at one grid point.
struct SizeResult {
  int n = 0;
  std::uint64_t seed = 0;
  double energy = 0.0;
  double s_half = 0.0;
  double max_truncation_error = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::string status;  // ok | not_converged | truncation_exceeded | error
  std::string error;

  bool operator==(const SizeResult&) const = default;
};

/// One (alpha, J) grid point of a phase-diagram sweep.
struct SweepRecord {
  std::string schema = kSchemaVersion;
  std::string config_hash;
  std::string config;  // canonical physics config text
  double alpha = 0.0;
  double j = 0.0;
  std::uint64_t seed = 0;
  std::vector<SizeResult> sizes;
  std::vector<int> fit_sizes;  // accepted sizes entering the fit
  bool has_fit = false;
  CentralChargeFit fit;
  int order_n = 0;  // size used for the order parameters
  OrderParameters order;
  std::string label;   // FM | TLL | XY_SSB | Boundary | NA
  std::string status;  // ok | partial | failed

  /// Largest size entry, or nullptr when there are none.
  const SizeResult* largest() const;
};

/// Rounds to 12 significant digits; the stored value is what gets serialized.
double round12(double v);

nlohmann::ordered_json to_json(const SweepRecord& r);
SweepRecord record_from_json(const nlohmann::json& j);

std::string csv_header();
std::string csv_row(const SweepRecord& r);

/// Text of the aggregate files; exposed for tests.
std::string records_csv(const std::vector<SweepRecord>& records);
std::string records_json(const std::vector<SweepRecord>& records);

/// Writes sweep.csv and/or sweep.json into `dir` ("csv", "json" or "both").
void emit_records(const std::vector<SweepRecord>& records, const std::filesystem::path& dir, const std::string& format);

/// Whole-file helpers that raise IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace xxzlr
