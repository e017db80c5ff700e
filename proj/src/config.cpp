#include "xxzlr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xxzlr/errors.hpp"

namespace xxzlr {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void SweepGrid::validate() const {
  if (alpha_values.empty() || j_values.empty() || sizes.empty())
    throw InvalidParams("sweep grid axes must be non-empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 8 || sizes[i] % 2 != 0) throw InvalidParams("sweep sizes must be even and >= 8");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw InvalidParams("sweep sizes must be strictly increasing");
  }
}

namespace {

std::vector<double> range_values(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("range needs step > 0 and stop >= start");
  const double count = std::floor((stop - start) / step + 1e-9);
  if (count > 1e6) throw std::invalid_argument("range too long");
  std::vector<double> out;
  for (int k = 0; k <= static_cast<int>(count); ++k) {
    // Round away accumulated binary noise so 0.1-style steps stay exact in text.
    const double v = start + k * step;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out.push_back(std::strtod(buf, nullptr));
  }
  return out;
}

}  // namespace

SweepGrid default_sweep_grid() {
  SweepGrid g;
  g.alpha_values = range_values(0.0, 2.5, 0.25);
  g.j_values = range_values(-1.0, 2.0, 0.25);
  g.sizes = {16, 24, 32, 48, 64};
  return g;
}

void RunConfig::validate() const {
  if (workers < 1) throw InvalidParams("workers must be >= 1");
  if (format != "csv" && format != "json" && format != "both") throw InvalidParams("format must be csv, json or both");
  if (cavity_model != "full" && cavity_model != "effective") throw InvalidParams("cavity model must be full or effective");
  model.validate();
  dmrg.validate();
  grid.validate();
  cavity.validate();
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return v;
}

long long to_integer(const std::string& s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const long long v = to_integer(s);
  if (v < INT32_MIN || v > INT32_MAX) throw std::invalid_argument("integer out of range: " + s);
  return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw std::invalid_argument("expected an unsigned integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list entry");
    out.push_back(item);
  }
  return out;
}

// "a, b, c" or a single range "start:stop:step".
std::vector<double> to_double_list(const std::string& s) {
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:step");
    return range_values(to_double(parts[0]), to_double(parts[1]), to_double(parts[2]));
  }
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

std::vector<int> to_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(to_int(item));
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

std::string int_list(const std::vector<int>& v) {
  return join(v, [](int x) { return std::to_string(x); });
}
std::string double_list(const std::vector<double>& v) { return join(v, format_double); }

std::string path_name(SolverPath p) {
  switch (p) {
    case SolverPath::dense: return "dense";
    case SolverPath::lanczos: return "lanczos";
    default: return "auto";
  }
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
  bool physics = true;  // part of the provenance text
};

#define XXZLR_DOUBLE(sec, key, field) \
  Key { sec, key, [](RunConfig& c, const std::string& v) { c.field = to_double(v); }, [](const RunConfig& c) { return format_double(c.field); } }
#define XXZLR_INT(sec, key, field) \
  Key { sec, key, [](RunConfig& c, const std::string& v) { c.field = to_int(v); }, [](const RunConfig& c) { return std::to_string(c.field); } }
#define XXZLR_BOOL(sec, key, field)                                                        \
  Key {                                                                                    \
    sec, key, [](RunConfig& c, const std::string& v) { c.field = to_bool(v); },            \
        [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }         \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back({"run", "output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                 [](const RunConfig& c) { return c.output_dir; }, false});
    k.push_back({"run", "seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    k.push_back({"run", "workers", [](RunConfig& c, const std::string& v) { c.workers = to_int(v); },
                 [](const RunConfig& c) { return std::to_string(c.workers); }, false});
    k.push_back({"run", "format", [](RunConfig& c, const std::string& v) { c.format = v; },
                 [](const RunConfig& c) { return c.format; }, false});

    k.push_back(XXZLR_DOUBLE("model", "alpha", model.alpha));
    k.push_back(XXZLR_DOUBLE("model", "j", model.j_lr));
    k.push_back(XXZLR_INT("model", "n", model.n_sites));
    k.push_back({"model", "boundary",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "open") c.model.boundary = Boundary::open;
                   else if (v == "periodic") c.model.boundary = Boundary::periodic;
                   else throw std::invalid_argument("boundary must be open or periodic");
                 },
                 [](const RunConfig& c) { return std::string(c.model.boundary == Boundary::open ? "open" : "periodic"); }});

    k.push_back({"ed", "solver",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "auto") c.ed_path = SolverPath::automatic;
                   else if (v == "dense") c.ed_path = SolverPath::dense;
                   else if (v == "lanczos") c.ed_path = SolverPath::lanczos;
                   else throw std::invalid_argument("solver must be auto, dense or lanczos");
                 },
                 [](const RunConfig& c) { return path_name(c.ed_path); }});
    k.push_back(XXZLR_DOUBLE("ed", "tolerance", ed_tolerance));
    k.push_back(XXZLR_INT("ed", "max_iterations", ed_max_iterations));

    k.push_back({"spinwave", "sizes", [](RunConfig& c, const std::string& v) { c.spinwave_sizes = to_int_list(v); },
                 [](const RunConfig& c) { return int_list(c.spinwave_sizes); }});

    k.push_back({"dmrg", "bond_dims", [](RunConfig& c, const std::string& v) { c.dmrg.bond_dims = to_int_list(v); },
                 [](const RunConfig& c) { return int_list(c.dmrg.bond_dims); }});
    k.push_back(XXZLR_DOUBLE("dmrg", "truncation_cut", dmrg.truncation_cut));
    k.push_back(XXZLR_DOUBLE("dmrg", "energy_tol", dmrg.energy_tol));
    k.push_back(XXZLR_INT("dmrg", "max_sweeps", dmrg.max_sweeps));
    k.push_back(XXZLR_INT("dmrg", "min_sweeps", dmrg.min_sweeps));
    k.push_back(XXZLR_INT("dmrg", "initial_bond_dim", dmrg.initial_bond_dim));
    k.push_back(XXZLR_DOUBLE("dmrg", "pin_field", dmrg.pin_field));
    k.push_back(XXZLR_INT("dmrg", "pin_sweeps", dmrg.pin_sweeps));
    k.push_back(XXZLR_DOUBLE("dmrg", "local_tol", dmrg.local_tol));
    k.push_back(XXZLR_INT("dmrg", "local_max_iter", dmrg.local_max_iter));
    k.push_back(XXZLR_INT("dmrg", "local_krylov", dmrg.local_krylov));
    k.push_back(XXZLR_BOOL("dmrg", "compute_variance", dmrg.compute_variance));
    k.push_back({"dmrg", "checkpoint", [](RunConfig& c, const std::string& v) { c.checkpoint = v; },
                 [](const RunConfig& c) { return c.checkpoint; }, false});

    k.push_back({"sweep", "alpha", [](RunConfig& c, const std::string& v) { c.grid.alpha_values = to_double_list(v); },
                 [](const RunConfig& c) { return double_list(c.grid.alpha_values); }});
    k.push_back({"sweep", "j", [](RunConfig& c, const std::string& v) { c.grid.j_values = to_double_list(v); },
                 [](const RunConfig& c) { return double_list(c.grid.j_values); }});
    k.push_back({"sweep", "sizes", [](RunConfig& c, const std::string& v) { c.grid.sizes = to_int_list(v); },
                 [](const RunConfig& c) { return int_list(c.grid.sizes); }});

    k.push_back(XXZLR_DOUBLE("cavity", "g", cavity.g));
    k.push_back(XXZLR_DOUBLE("cavity", "delta_c", cavity.delta_c));
    k.push_back(XXZLR_DOUBLE("cavity", "kappa", cavity.kappa));
    k.push_back(XXZLR_DOUBLE("cavity", "j_xx", cavity.j_xx));
    k.push_back(XXZLR_DOUBLE("cavity", "j_z", cavity.j_z));
    k.push_back(XXZLR_INT("cavity", "n", cavity.n_sites));
    k.push_back(XXZLR_INT("cavity", "n_max", simulation.n_max));
    k.push_back(XXZLR_DOUBLE("cavity", "t_end", simulation.t_end));
    k.push_back(XXZLR_DOUBLE("cavity", "dt", simulation.dt));
    k.push_back(XXZLR_DOUBLE("cavity", "dt_out", simulation.dt_out));
    k.push_back({"cavity", "initial_up",
                 [](RunConfig& c, const std::string& v) { c.simulation.initial_up = to_int_list(v); },
                 [](const RunConfig& c) { return int_list(c.simulation.initial_up); }});
    k.push_back(XXZLR_BOOL("cavity", "include_dissipator", include_dissipator));
    k.push_back({"cavity", "model", [](RunConfig& c, const std::string& v) { c.cavity_model = v; },
                 [](const RunConfig& c) { return c.cavity_model; }});
    return k;
  }();
  return table;
}

#undef XXZLR_DOUBLE
#undef XXZLR_INT
#undef XXZLR_BOOL

std::string emit_sections(const RunConfig& cfg, bool physics_only) {
  std::string out;
  std::string current;
  for (const auto& k : keys()) {
    if (physics_only && !k.physics) continue;
    if (current != k.section) {
      if (!current.empty()) out += "\n";
      current = k.section;
      out += "[" + current + "]\n";
    }
    out += std::string(k.name) + " = " + k.get(cfg) + "\n";
  }
  return out;
}

ParseError parse_error(const std::string& msg, int line, const std::string& key) {
  return ParseError("line " + std::to_string(line) + ": " + msg, line, key);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw parse_error("unterminated section header", line_no, line);
      section = trim(line.substr(1, line.size() - 2));
      const bool known = std::any_of(keys().begin(), keys().end(), [&](const Key& k) { return section == k.section; });
      if (!known) throw parse_error("unknown section [" + section + "]", line_no, section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw parse_error("expected key = value", line_no, line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw parse_error("key outside any section", line_no, key);
    const auto it = std::find_if(keys().begin(), keys().end(),
                                 [&](const Key& k) { return section == k.section && key == k.name; });
    if (it == keys().end()) throw parse_error("unknown key '" + key + "' in [" + section + "]", line_no, key);
    if (!seen.insert(section + "." + key).second) throw parse_error("duplicate key '" + key + "'", line_no, key);
    try {
      it->set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw parse_error("bad value for '" + key + "': " + e.what(), line_no, key);
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("invalid configuration: ") + e.what(), 0, "");
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const RunConfig& cfg) { return emit_sections(cfg, false); }

std::string physics_config(const RunConfig& cfg) {
  // Only the sections a sweep depends on.
  std::string out;
  for (const auto& k : keys()) {
    const std::string sec = k.section;
    if (!k.physics || (sec != "run" && sec != "dmrg" && sec != "sweep")) continue;
    out += sec + "." + k.name + " = " + k.get(cfg) + "\n";
  }
  return out;
}

}  // namespace xxzlr
