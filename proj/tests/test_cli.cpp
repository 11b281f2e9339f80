#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "bergman/cli.hpp"

using namespace bergman;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bergman_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct LabRun {
  int exit_code = -1;
  std::string output;
};

LabRun run_lab(const std::string& args) {
  const std::string cmd = std::string(BERGMAN_LAB_PATH) + " " + args + " 2>&1";
  LabRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path write_config(const fs::path& dir, const std::string& name, const json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string config_file(const std::string& name) { return std::string(BERGMAN_CONFIG_DIR) + "/" + name; }

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

/// A minimal config for each experiment.
json minimal_config(const std::string& e) {
  json j{{"experiment", e}};
  if (experiment_needs_domain(e)) j["domain"] = "bidisk";
  if (e == "ray" || e == "dichotomy") j["parameters"] = {{"m_max", 16}};
  return j;
}

}  // namespace

TEST(RunExperiment, DichotomyBidisk) {
  const auto cfg = load_config(config_file("dichotomy_bidisk.json"));
  const auto r = run_experiment(cfg);
  EXPECT_EQ(*r.verdict, Verdict::bounded_away_from_zero);
  EXPECT_EQ(*r.prediction, Prediction::non_compact);
  EXPECT_TRUE(*r.agreement);
  EXPECT_EQ(exit_code_for(r), kExitOk);
}

TEST(RunExperiment, Lemma6EndsNearHalfPi) {
  const auto r = run_experiment(load_config(config_file("lemma6_zbar.json")));
  const Series* g = r.find_series("gram");
  ASSERT_NE(g, nullptr);
  EXPECT_NEAR(g->points.back().value, 1.570796, 1e-5);
  EXPECT_EQ(g->points.size(), 8u);
  EXPECT_TRUE(r.passed);
}

TEST(RunExperiment, EveryListedExperimentRuns) {
  for (const auto& e : experiment_names()) {
    const auto r = run_experiment(parse_config(minimal_config(e)));
    EXPECT_EQ(r.experiment, e);
    EXPECT_FALSE(r.series.empty()) << e;
    EXPECT_TRUE(r.config.contains("parameters")) << e;
  }
}

TEST(RunExperiment, SeriesLengthsFollowConfig) {
  json j = minimal_config("ray");
  j["parameters"]["m_max"] = 40;
  auto r = run_experiment(parse_config(j));
  EXPECT_EQ(r.find_series("ray_value")->points.size(), 41u);

  j = minimal_config("paper_g");
  j["parameters"] = {{"alphas", {0.1, 0.2, 0.3, 0.4, 0.5}}};
  r = run_experiment(parse_config(j));
  for (const auto& s : r.series) EXPECT_EQ(s.points.size(), 5u) << s.name;

  j = minimal_config("lemma4");
  j["parameters"] = {{"radii", {1.2, 1.1, 1.05}}};
  r = run_experiment(parse_config(j));
  for (const auto& s : r.series) EXPECT_EQ(s.points.size(), 3u) << s.name;

  j = minimal_config("lemma1");
  j["parameters"] = {{"instances", 7}};
  r = run_experiment(parse_config(j));
  EXPECT_EQ(r.find_series("residual")->points.size(), 7u);
}

TEST(RunExperiment, EmbeddedConfigReproducesBitIdentically) {
  for (const char* name : {"dichotomy_intersection.json", "paper_g_bidisk.json", "lemma3_intersection.json",
                           "lemma5_inverse_linear.json", "eqn3_bidisk_g_w.json"}) {
    const auto a = run_experiment(load_config(config_file(name)));
    const auto b = run_experiment(parse_config(a.config));
    ASSERT_EQ(a.series.size(), b.series.size()) << name;
    for (std::size_t k = 0; k < a.series.size(); ++k) {
      ASSERT_EQ(a.series[k].points.size(), b.series[k].points.size());
      for (std::size_t i = 0; i < a.series[k].points.size(); ++i) {
        EXPECT_EQ(a.series[k].points[i].index, b.series[k].points[i].index);
        EXPECT_EQ(a.series[k].points[i].value, b.series[k].points[i].value);
        EXPECT_EQ(a.series[k].points[i].error_bound, b.series[k].points[i].error_bound);
      }
    }
    EXPECT_EQ(a.config, b.config) << name;
  }
}

TEST(RunExperiment, Overrides) {
  Overrides ov;
  ov.truncation = 12;
  ov.m_max = 32;
  auto r = run_experiment(parse_config(minimal_config("dichotomy")), ov);
  EXPECT_EQ(r.config["parameters"]["truncations"], json({4, 8, 12}));
  EXPECT_EQ(r.config["parameters"]["m_max"], 32);
  EXPECT_EQ(r.spectra.size(), 3u);
  EXPECT_EQ(r.spectra.back().truncation, 12);

  Overrides tol;
  tol.tol = 1e-12;
  r = run_experiment(parse_config(minimal_config("lemma6")), tol);
  EXPECT_EQ(r.config["parameters"]["tol"], 1e-12);
  EXPECT_FALSE(r.passed);

  Overrides bad;
  bad.m_max = 10;
  EXPECT_THROW(run_experiment(parse_config(minimal_config("lemma4")), bad), Error);
}

TEST(RunExperiment, RejectsUnknownParametersAndSymbols) {
  json j = minimal_config("ray");
  j["parameters"]["bogus"] = 1;
  EXPECT_THROW(run_experiment(parse_config(j)), Error);
  j = minimal_config("lemma4");
  j["symbols"] = {{"g", "w"}};
  EXPECT_THROW(run_experiment(parse_config(j)), Error);
  j = minimal_config("lemma4");
  j["symbols"] = {{"psi", "zbar*w"}};
  EXPECT_THROW(run_experiment(parse_config(j)), Error);
}

TEST(RunExperiment, JobsDoNotChangeResults) {
  const auto cfg = load_config(config_file("dichotomy_ball.json"));
  set_max_jobs(1);
  const auto a = run_experiment(cfg);
  set_max_jobs(0);
  const auto b = run_experiment(cfg);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t k = 0; k < a.series.size(); ++k)
    for (std::size_t i = 0; i < a.series[k].points.size(); ++i)
      EXPECT_EQ(a.series[k].points[i].value, b.series[k].points[i].value);
}

TEST(Report, JsonAndCsvLayout) {
  const auto r = run_experiment(parse_config(minimal_config("ray")));
  const fs::path dir = scratch("layout");
  const auto written = write_report(r, dir, OutputFormat::both);
  EXPECT_EQ(written.size(), 1 + r.series.size());
  const json j = json::parse(std::ifstream(dir / "report.json"));
  for (const char* key : {"experiment", "passed", "verdict", "theorem_prediction", "agreement", "series", "spectra",
                          "scalars", "tolerances", "provenance", "runtimes_s", "notes", "config"})
    EXPECT_TRUE(j.contains(key)) << key;
  const auto lines = read_lines(dir / "ray_value.csv");
  ASSERT_EQ(lines.size(), 18u);
  EXPECT_EQ(lines[0], "index,value,error_bound");
  EXPECT_EQ(lines[1].rfind("0,", 0), 0u);
  EXPECT_NEAR(std::stod(lines[1].substr(2)), 0.5, 1e-14);
}

TEST(Binary, ExitCodes) {
  const fs::path dir = scratch("exit");
  LabRun r = run_lab("run " + config_file("dichotomy_bidisk.json") + " --out " + (dir / "a").string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  const json rep = json::parse(std::ifstream(dir / "a" / "report.json"));
  EXPECT_EQ(rep["verdict"], "bounded_away_from_zero");
  EXPECT_EQ(rep["agreement"], true);

  r = run_lab("run " + write_config(dir, "missing.json", {{"experiment", "ray"}}).string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("domain"), std::string::npos);

  r = run_lab("run " + (dir / "does_not_exist.json").string());
  EXPECT_EQ(r.exit_code, 1);

  std::ofstream(dir / "broken.json") << "{\"experiment\": ";
  r = run_lab("run " + (dir / "broken.json").string());
  EXPECT_EQ(r.exit_code, 1);

  json fail_cfg = minimal_config("lemma4");
  fail_cfg["parameters"] = {{"radii", {1.1}}};
  r = run_lab("run " + write_config(dir, "fail.json", fail_cfg).string() + " --out " + (dir / "b").string());
  EXPECT_EQ(r.exit_code, 2) << r.output;

  json inconclusive{{"experiment", "ray"}, {"domain", "ball"}, {"parameters", {{"m_max", 8}}}};
  r = run_lab("run " + write_config(dir, "inc.json", inconclusive).string() + " --out " + (dir / "c").string());
  EXPECT_EQ(r.exit_code, 3) << r.output;

  json compute{{"experiment", "paper_g"}, {"domain", "ball"}};
  r = run_lab("run " + write_config(dir, "nodisk.json", compute).string() + " --out " + (dir / "d").string());
  EXPECT_EQ(r.exit_code, 4) << r.output;
  EXPECT_NE(r.output.find("NoBoundaryDisk"), std::string::npos);

  r = run_lab("run " + config_file("ray_intersection.json") + " --format xml");
  EXPECT_EQ(r.exit_code, 1);
  r = run_lab("frobnicate");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Binary, FlagsOverrideConfig) {
  const fs::path dir = scratch("flags");
  LabRun r = run_lab("--jobs 2 run " + config_file("spectra_bidisk.json") + " --truncation 9 --format json --out " +
                  dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_FALSE(fs::exists(dir / "lambda_max.csv"));
  const json rep = json::parse(std::ifstream(dir / "report.json"));
  EXPECT_EQ(rep["config"]["parameters"]["truncations"], json({3, 6, 9}));

  const fs::path csv_dir = scratch("csv");
  r = run_lab("run " + config_file("ray_intersection.json") + " --m-max 24 --format csv --out " + csv_dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_FALSE(fs::exists(csv_dir / "report.json"));
  EXPECT_EQ(read_lines(csv_dir / "ray_value.csv").size(), 26u);

  const fs::path tol_dir = scratch("tol");
  r = run_lab("run " + config_file("lemma5_inverse_linear.json") + " --tol 1e-5 --out " + tol_dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  const json rep5 = json::parse(std::ifstream(tol_dir / "report.json"));
  EXPECT_LT(rep5["scalars"]["certified_bound"].get<double>(), 1e-5);
}

TEST(Binary, ListCatalog) {
  const LabRun r = run_lab("list");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("paper-intersection"), std::string::npos);
  EXPECT_NE(r.output.find("1.207107"), std::string::npos);
  EXPECT_NE(r.output.find("lemma4"), std::string::npos);
  for (const auto& e : experiment_names()) EXPECT_NE(r.output.find(e), std::string::npos) << e;
  for (const auto& [name, spec] : domain_presets()) {
    (void)spec;
    EXPECT_NE(r.output.find(name), std::string::npos);
  }
}

TEST(Binary, ListedNamesAreAccepted) {
  const fs::path dir = scratch("roundtrip");
  for (const auto& e : experiment_names()) {
    const LabRun r = run_lab("run " + write_config(dir, e + ".json", minimal_config(e)).string() + " --out " +
                          (dir / e).string());
    EXPECT_NE(r.exit_code, 1) << e << ": " << r.output;
  }
  for (const auto& [name, spec] : domain_presets()) {
    (void)spec;
    json j{{"experiment", "lemma3"}, {"domain", name}};
    const LabRun r = run_lab("run " + write_config(dir, name + ".json", j).string() + " --out " + (dir / name).string());
    EXPECT_EQ(r.exit_code, 0) << name << ": " << r.output;
  }
  for (const auto& s : symbol_shortcuts()) {
    json j{{"experiment", "lemma1"}, {"domain", "bidisk"}, {"symbols", {{"phi", s}}}};
    const LabRun r = run_lab("run " + write_config(dir, "sym.json", j).string() + " --out " + (dir / "sym").string());
    EXPECT_EQ(r.exit_code, 0) << s << ": " << r.output;
  }
}
