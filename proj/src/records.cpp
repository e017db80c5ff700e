#include "xxzlr/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "xxzlr/errors.hpp"

namespace xxzlr {

using nlohmann::json;
using nlohmann::ordered_json;

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

const SizeResult* SweepRecord::largest() const { return sizes.empty() ? nullptr : &sizes.back(); }

namespace {

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;  // JSON has no NaN
  return round12(v);
}

double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ordered_json to_json(const SweepRecord& r) {
  ordered_json j;
  j["schema"] = r.schema;
  j["config_hash"] = r.config_hash;
  j["alpha"] = number(r.alpha);
  j["j"] = number(r.j);
  j["seed"] = r.seed;
  j["status"] = r.status;
  j["label"] = r.label;
  ordered_json sizes = ordered_json::array();
  for (const auto& s : r.sizes) {
    ordered_json e;
    e["n"] = s.n;
    e["seed"] = s.seed;
    e["energy"] = number(s.energy);
    e["s_half"] = number(s.s_half);
    e["max_truncation_error"] = number(s.max_truncation_error);
    e["sweeps"] = s.sweeps;
    e["converged"] = s.converged;
    e["status"] = s.status;
    e["error"] = s.error;
    sizes.push_back(e);
  }
  j["sizes"] = sizes;
  j["fit_sizes"] = r.fit_sizes;
  if (r.has_fit) {
    ordered_json f;
    f["c"] = number(r.fit.c);
    f["offset"] = number(r.fit.offset);
    f["residual"] = number(r.fit.residual);
    f["ci_halfwidth"] = number(r.fit.ci_halfwidth);
    f["n_points"] = r.fit.n_points;
    j["fit"] = f;
  } else {
    j["fit"] = nullptr;
  }
  ordered_json o;
  o["n"] = r.order_n;
  o["sigma_z_mean"] = number(r.order.sigma_z_mean);
  o["xy_plateau"] = number(r.order.xy_plateau);
  j["order"] = o;
  // The config is nested as key/value pairs in canonical order.
  ordered_json cfg = ordered_json::object();
  std::istringstream in(r.config);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    cfg[line.substr(0, eq)] = line.substr(eq + 3);
  }
  j["config"] = cfg;
  return j;
}

SweepRecord record_from_json(const json& j) {
  try {
    SweepRecord r;
    r.schema = j.at("schema").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.alpha = read_number(j.at("alpha"));
    r.j = read_number(j.at("j"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.status = j.at("status").get<std::string>();
    r.label = j.at("label").get<std::string>();
    for (const auto& e : j.at("sizes")) {
      SizeResult s;
      s.n = e.at("n").get<int>();
      s.seed = e.at("seed").get<std::uint64_t>();
      s.energy = read_number(e.at("energy"));
      s.s_half = read_number(e.at("s_half"));
      s.max_truncation_error = read_number(e.at("max_truncation_error"));
      s.sweeps = e.at("sweeps").get<int>();
      s.converged = e.at("converged").get<bool>();
      s.status = e.at("status").get<std::string>();
      s.error = e.at("error").get<std::string>();
      r.sizes.push_back(s);
    }
    r.fit_sizes = j.at("fit_sizes").get<std::vector<int>>();
    const auto& f = j.at("fit");
    r.has_fit = !f.is_null();
    if (r.has_fit) {
      r.fit.c = read_number(f.at("c"));
      r.fit.offset = read_number(f.at("offset"));
      r.fit.residual = read_number(f.at("residual"));
      r.fit.ci_halfwidth = read_number(f.at("ci_halfwidth"));
      r.fit.n_points = f.at("n_points").get<int>();
    }
    const auto& o = j.at("order");
    r.order_n = o.at("n").get<int>();
    r.order.sigma_z_mean = read_number(o.at("sigma_z_mean"));
    r.order.xy_plateau = read_number(o.at("xy_plateau"));
    std::string cfg;
    for (const auto& [k, v] : j.at("config").items()) cfg += k + " = " + v.get<std::string>() + "\n";
    r.config = cfg;
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed sweep record: ") + e.what());
  }
}

std::string csv_header() { return "alpha,j,n,energy,s_half,c,c_residual,sigma_z_mean,xy_plateau,label,status,seed"; }

std::string csv_row(const SweepRecord& r) {
  const SizeResult* big = r.largest();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string row;
  row += csv_number(r.alpha) + "," + csv_number(r.j) + ",";
  row += (big ? std::to_string(big->n) : std::string("0")) + ",";
  row += csv_number(big ? big->energy : nan) + "," + csv_number(big ? big->s_half : nan) + ",";
  row += csv_number(r.has_fit ? r.fit.c : nan) + "," + csv_number(r.has_fit ? r.fit.residual : nan) + ",";
  row += csv_number(r.order.sigma_z_mean) + "," + csv_number(r.order.xy_plateau) + ",";
  row += r.label + "," + r.status + "," + std::to_string(r.seed);
  return row;
}

std::string records_csv(const std::vector<SweepRecord>& records) {
  std::string out = csv_header() + "\n";
  for (const auto& r : records) out += csv_row(r) + "\n";
  return out;
}

std::string records_json(const std::vector<SweepRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  // Write then rename so an interrupted run never leaves a truncated file.
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << text;
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path.string() + ": " + ec.message());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit_records(const std::vector<SweepRecord>& records, const std::filesystem::path& dir, const std::string& format) {
  if (format != "csv" && format != "json" && format != "both") throw InvalidParams("unknown record format " + format);
  if (format != "json") write_text(dir / "sweep.csv", records_csv(records));
  if (format != "csv") write_text(dir / "sweep.json", records_json(records));
}

}  // namespace xxzlr
