#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "xxzlr/config.hpp"
#include "xxzlr/errors.hpp"
#include "xxzlr/records.hpp"
#include "xxzlr/sweep.hpp"

namespace fs = std::filesystem;
using namespace xxzlr;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("xxzlr_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(XXZLR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_line(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

SweepRecord sample_record() {
  SweepRecord r;
  r.config_hash = "0123456789abcdef";
  r.config = "run.seed = 1\n";
  r.alpha = 1.5;
  r.j = -0.25;
  r.seed = 42;
  r.sizes.push_back({16, 7, -6.123456789012345, 0.733333333333, 1e-9, 5, true, "ok", ""});
  r.sizes.push_back({32, 8, -12.5, NAN, 2e-5, 20, false, "not_converged", ""});
  r.fit_sizes = {16};
  r.has_fit = true;
  r.fit = {1.0123456789012345, 0.2, 0.001, NAN, 1};
  r.order_n = 16;
  r.order = {0.01, 0.25};
  r.label = "TLL";
  r.status = "partial";
  return r;
}

const char* kTinySweep =
    "[run]\nseed = 7\n"
    "[sweep]\nalpha = 0.5, 1.5\nj = 0\nsizes = 8, 12\n";

}  // namespace

TEST(Config, EmptyTextGivesDocumentedDefaults) {
  const RunConfig c = parse_config_text("# nothing\n");
  EXPECT_EQ(c, RunConfig{});
  EXPECT_EQ(c.dmrg.truncation_cut, 1e-6);
  EXPECT_EQ(c.dmrg.energy_tol, 1e-9);
  EXPECT_EQ(c.grid.sizes, (std::vector<int>{16, 24, 32, 48, 64}));
  EXPECT_EQ(c.format, "both");
}

TEST(Config, EmitParseRoundTrip) {
  EXPECT_EQ(parse_config_text(emit_config(RunConfig{})), RunConfig{});
  oracle::Gen gen(67);
  for (int t = 0; t < 30; ++t) {
    RunConfig c;
    c.seed = gen.rng();
    c.workers = gen.integer(1, 8);
    c.model = {gen.uniform(-2, 3), gen.uniform(-2, 3), gen.integer(2, 14), t % 2 ? Boundary::open : Boundary::periodic};
    c.dmrg.truncation_cut = std::pow(10.0, gen.uniform(-12, -6));
    c.dmrg.pin_field = gen.uniform(0, 1e-3);
    c.grid.alpha_values = {gen.uniform(0, 1), gen.uniform(1, 2)};
    c.grid.j_values = {gen.uniform(-1, 1) / 3.0};
    c.cavity.g = gen.uniform(0.1, 50);
    c.simulation.initial_up = {1, 1};
    c.include_dissipator = t % 3 == 0;
    const std::string text = emit_config(c);
    const RunConfig back = parse_config_text(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(emit_config(back), text);
  }
}

TEST(Config, UnknownKeyNamesTheKey) {
  try {
    parse_config_text("[model]\nalpha = 1\nalpa = 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.key(), "alpa");
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("alpa"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, StrictErrors) {
  EXPECT_EQ(parse_line("[nope]\n"), 1);
  EXPECT_EQ(parse_line("alpha = 1\n"), 1);
  EXPECT_EQ(parse_line("[model]\nalpha = 1\nalpha = 2\n"), 3);
  EXPECT_EQ(parse_line("[model]\n\nalpha = one\n"), 3);
  EXPECT_EQ(parse_line("[model]\nalpha\n"), 2);
  EXPECT_EQ(parse_line("[dmrg]\ncompute_variance = maybe\n"), 2);
  EXPECT_THROW(parse_config_text("[dmrg]\ntruncation_cut = 1e-5\n"), ParseError);
  EXPECT_THROW(parse_config_text("[sweep]\nsizes = 16, 12\n"), ParseError);
  EXPECT_THROW(parse_config(fs::temp_directory_path() / "xxzlr_no_such_file.ini"), IoError);
}

TEST(Config, GridCardinality) {
  EXPECT_EQ(default_sweep_grid().cardinality(), 11u * 13u);
  const RunConfig c = parse_config_text("[sweep]\nalpha = 0:2.5:0.25\nj = -1:2:0.25\nsizes = 16, 24, 32, 48, 64\n");
  EXPECT_EQ(c.grid.cardinality(), 143u);
  EXPECT_EQ(c.grid, default_sweep_grid());
  EXPECT_DOUBLE_EQ(c.grid.alpha_values.back(), 2.5);
}

TEST(Config, PhysicsHashIgnoresExecutionSettings) {
  RunConfig a;
  RunConfig b = a;
  b.workers = 4;
  b.output_dir = "elsewhere";
  b.format = "csv";
  b.model.alpha = 0.1;  // model block does not feed a sweep
  EXPECT_EQ(physics_config(a), physics_config(b));
  b.seed = 99;
  EXPECT_NE(physics_config(a), physics_config(b));
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(Config, ShortestRoundTripDoubles) {
  oracle::Gen gen(71);
  for (int t = 0; t < 200; ++t) {
    const double v = gen.uniform(-1e3, 1e3) * std::pow(10.0, gen.integer(-12, 12));
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.25), "0.25");
}

TEST(Records, EmptyListIsHeaderOnly) {
  EXPECT_EQ(records_csv({}), csv_header() + "\n");
  EXPECT_EQ(csv_header(), "alpha,j,n,energy,s_half,c,c_residual,sigma_z_mean,xy_plateau,label,status,seed");
}

TEST(Records, CsvRowRoundTrip) {
  const std::string text = records_csv({sample_record()});
  std::istringstream in(text);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_FALSE(std::getline(in, extra) && !extra.empty());
  std::vector<std::string> cells;
  std::stringstream rs(row);
  for (std::string cell; std::getline(rs, cell, ',');) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 12u);
  EXPECT_EQ(std::stod(cells[0]), 1.5);
  EXPECT_EQ(std::stod(cells[1]), -0.25);
  EXPECT_EQ(cells[2], "32");
  EXPECT_EQ(std::stod(cells[3]), -12.5);
  EXPECT_EQ(std::stod(cells[5]), round12(1.0123456789012345));
  EXPECT_EQ(cells[9], "TLL");
  EXPECT_EQ(cells[10], "partial");
  EXPECT_EQ(cells[11], "42");
}

TEST(Records, JsonReingestIsBitwiseStable) {
  const std::string first = to_json(sample_record()).dump(2);
  const SweepRecord back = record_from_json(nlohmann::json::parse(first));
  EXPECT_EQ(to_json(back).dump(2), first);
  EXPECT_EQ(back.sizes[0].energy, round12(-6.123456789012345));
  EXPECT_TRUE(std::isnan(back.sizes[1].s_half));
  EXPECT_TRUE(std::isnan(back.fit.ci_halfwidth));
  EXPECT_EQ(back.schema, kSchemaVersion);
  const auto j = nlohmann::json::parse(first);
  EXPECT_TRUE(j.at("sizes")[1].at("s_half").is_null());
}

TEST(Records, Round12) {
  EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(round12(0.0), 0.0);
  EXPECT_EQ(round12(-2.5e-9), -2.5e-9);
}

TEST(Records, EmitWritesRequestedFormats) {
  const fs::path dir = fresh_dir("emit");
  emit_records({sample_record()}, dir, "csv");
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
  EXPECT_FALSE(fs::exists(dir / "sweep.json"));
  emit_records({sample_record()}, dir, "both");
  EXPECT_TRUE(fs::exists(dir / "sweep.json"));
  EXPECT_THROW(write_text(dir / "sweep.csv" / "y.txt", "x"), IoError);
}

TEST(Sweep, SeedsAreStable) {
  EXPECT_EQ(point_seed(1, 2, 3), point_seed(1, 2, 3));
  EXPECT_NE(point_seed(1, 2, 3), point_seed(1, 3, 2));
  EXPECT_NE(point_seed(1, 2, 3), point_seed(2, 2, 3));
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Sweep, FerromagneticPoint) {
  const SweepRecord r = compute_point(0.5, 0.5, {16, 32}, DmrgConfig{}, 11);
  EXPECT_EQ(r.status, "ok");
  EXPECT_EQ(r.label, "FM");
  ASSERT_TRUE(r.has_fit);
  EXPECT_LE(std::abs(r.fit.c), 0.01);
  for (const auto& s : r.sizes) EXPECT_LE(s.s_half, 1e-6);
}

TEST(Sweep, RerunIsIdempotentAndParallelMatchesSerial) {
  const fs::path a = fresh_dir("serial"), b = fresh_dir("parallel");
  RunConfig cfg = parse_config_text(kTinySweep);
  cfg.output_dir = a.string();
  const SweepSummary first = run_sweep(cfg);
  EXPECT_EQ(first.computed, 2u);
  ASSERT_EQ(first.records.size(), 2u);
  EXPECT_EQ(first.records[0].label, "FM");
  EXPECT_EQ(first.records[1].label, "TLL");
  const std::string csv = slurp(a / "sweep.csv"), json = slurp(a / "sweep.json");

  const SweepSummary again = run_sweep(cfg);
  EXPECT_EQ(again.computed, 0u);
  EXPECT_EQ(again.skipped, 2u);
  EXPECT_EQ(slurp(a / "sweep.csv"), csv);
  EXPECT_EQ(slurp(a / "sweep.json"), json);

  cfg.output_dir = b.string();
  cfg.workers = 2;
  run_sweep(cfg);
  EXPECT_EQ(slurp(b / "sweep.csv"), csv);
  EXPECT_EQ(slurp(b / "sweep.json"), json);
  for (const auto& e : fs::directory_iterator(a / "points")) {
    const std::string name = e.path().filename().string();
    if (name.find(".meta.") != std::string::npos) continue;
    EXPECT_EQ(slurp(e.path()), slurp(b / "points" / name)) << name;
  }
}

TEST(Binary, ExitCodes) {
  const fs::path dir = fresh_dir("binary");
  std::ofstream(dir / "bad.ini") << "[model]\nalpa = 1\n";
  std::ofstream(dir / "ok.ini") << "[model]\nalpha = 1.5\nj = 0.5\nn = 8\n";
  std::ofstream(dir / "series.csv") << "L,S\n16,0.5\n32,0.6155245300933242\n64,0.7310490601866484\n";
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run_cli("ed --config " + (dir / "bad.ini").string() + out), 1);
  EXPECT_EQ(run_cli("ed --config " + (dir / "missing.ini").string() + out), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  EXPECT_EQ(run_cli("ed --config " + (dir / "ok.ini").string() + out), 0);
  EXPECT_TRUE(fs::exists(dir / "ed.json"));
  EXPECT_EQ(run_cli("fit-c " + (dir / "series.csv").string() + out), 0);
  const auto fit = nlohmann::json::parse(slurp(dir / "fit.json"));
  EXPECT_NEAR(fit.at("c").get<double>(), 1.0, 1e-9);
  EXPECT_EQ(run_cli("cavity map" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "cavity_map.json"));
  EXPECT_EQ(run_cli("spinwave --config " + (dir / "ok.ini").string() + out), 0);
  const auto sw = nlohmann::json::parse(slurp(dir / "spinwave.json"));
  EXPECT_EQ(sw.at("label"), "NA");
  EXPECT_EQ(run_cli("fit-c " + (dir / "nothing.csv").string() + out), 2);
}
