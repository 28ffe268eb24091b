#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "catch_amalgamated.hpp"
#include "hk/harness.hpp"
#include "hk/serialize.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

hk::ExperimentConfig config(const std::string& command) {
  hk::ExperimentConfig c;
  c.command = command;
  return c;
}

hk::Json artifact(const hk::ExperimentConfig& c) {
  const auto r = hk::run_command(c);
  REQUIRE(r.exit_code == 0);
  return hk::Json::parse(r.output);
}

struct Run {
  int exit_code = -1;
  std::string out;
};

Run run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + HK_BINARY + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("means artifact", "[harness]") {
  auto c = config("means");
  const auto doc = artifact(c);
  CHECK(doc.at("config").at("command") == "means");
  CHECK(doc.at("provenance").at("seed") == hk::kFallbackSeed);
  CHECK(doc.at("provenance").contains("version"));
  const auto& r = doc.at("results").at("report");
  CHECK_THAT(r.at("h_w").get<double>(), WithinRel(12.5, 1e-14));
  CHECK_THAT(r.at("m_w").get<double>(), WithinRel(12.8, 1e-14));
  CHECK_THAT(r.at("gap_closed_form").get<double>(), WithinRel(0.3, 1e-14));

  c.a = {3, 4, 6};
  c.w = {0.2, 0.2, 0.6};
  const auto three = artifact(c).at("results").at("report");
  CHECK_THAT(three.at("h_w").get<double>(), WithinRel(60.0 / 13, 1e-14));
  CHECK_THAT(three.at("m_w").get<double>(), WithinRel(5.0, 1e-14));

  c.w.clear();
  c.uniform_weights = true;
  CHECK_THAT(artifact(c).at("results").at("report").at("m_w").get<double>(), WithinRel(13.0 / 3, 1e-14));
}

TEST_CASE("geometry artifact", "[harness]") {
  auto c = config("geometry");
  c.a = {3, 4, 6};
  c.w = {0.2, 0.2, 0.6};
  const auto r = artifact(c).at("results");
  const auto x = r.at("x_bar").get<std::vector<double>>();
  REQUIRE(x.size() == 3);
  CHECK_THAT(x[0], WithinRel(4.0 / 13, 1e-14));
  CHECK_THAT(x[1], WithinRel(3.0 / 13, 1e-14));
  CHECK_THAT(x[2], WithinRel(20.0 / 13, 1e-14));
  CHECK(r.at("max_residual").get<double>() <= 1e-10);
  for (const auto& [name, ok] : r.at("checks").items()) CHECK(ok.get<bool>());

  c.variant = "corollary";
  c.a = {3, 6};
  c.w = {0.6, 0.4};
  const auto cor = artifact(c).at("results");
  CHECK_THAT(cor.at("x_bar").back().get<double>(), WithinRel(3.75, 1e-14));
  CHECK_THAT(cor.at("h_star").get<double>(), WithinRel(7.5, 1e-14));

  c.variant = "thm3";
  c.a = {14, 10};
  c.w = {0.7, 0.3};
  const auto two = artifact(c).at("results");
  CHECK_THAT(two.at("parabolas").at("x_h").get<double>(), WithinRel(0.625, 1e-14));
}

TEST_CASE("recon artifact", "[harness]") {
  auto c = config("recon");
  c.signal = "step";
  c.levels = 3;
  const auto levels = artifact(c).at("results").at("overshoot_by_level");
  REQUIRE(levels.size() == 3);
  for (const auto& level : levels) {
    CHECK_THAT(level.at("overshoot").at("linear").get<double>(), WithinRel(0.0625, 1e-12));
    CHECK(level.at("overshoot").at("pph").get<double>() == 0.0);
  }

  c.signal = "sin";
  c.levels = 6;
  c.op = "pph";
  const auto table = artifact(c).at("results").at("convergence").at("pph");
  REQUIRE(table.size() == 6);
  CHECK(table.back().at("slope").get<double>() > 3.85);
}

TEST_CASE("custom samples file", "[harness]") {
  const auto path = std::filesystem::temp_directory_path() / "hk_custom_samples.csv";
  {
    std::ofstream f(path);
    f << "# x,f\n0,0\n0.1,0\n0.2,0\n0.3,1\n0.4,1\n0.5,1\n";
  }
  auto c = config("recon");
  c.signal = "custom";
  c.samples_path = path.string();
  const auto r = artifact(c).at("results");
  CHECK(r.at("overshoot").at("pph").get<double>() == 0.0);
  CHECK(r.at("overshoot").at("linear").get<double>() > 0.06);
  CHECK(r.at("predictions").at("linear").at(0).is_null());

  {
    std::ofstream f(path);
    f << "0,0\n0.1\n";
  }
  const auto bad = hk::run_command(c);
  CHECK(bad.exit_code == 2);
  CHECK_THAT(bad.diagnostics, ContainsSubstring("line 2"));
  std::filesystem::remove(path);

  c.samples_path = "/nonexistent/samples.csv";
  CHECK(hk::run_command(c).exit_code == 2);
}

TEST_CASE("exit code contract", "[harness]") {
  auto c = config("means");
  c.a = {1, 2, 3};
  c.w = {0.5, 0.5};
  CHECK(hk::run_command(c).exit_code == 2);
  c.w = {0.5, 0.5, -1};
  CHECK(hk::run_command(c).exit_code == 2);
  c.a = {1, 0, 3};
  c.w = {1, 1, 1};
  CHECK(hk::run_command(c).exit_code == 2);

  auto f = config("figure");
  f.a = {1, 2, 3, 4};
  f.w = {1, 1, 1, 1};
  CHECK(hk::run_command(f).exit_code == 2);
  f.markers_only = true;
  CHECK(hk::run_command(f).exit_code == 0);

  CHECK(hk::run_command(config("bogus")).exit_code == 2);
  auto v = config("verify");
  v.format = "xml";
  CHECK(hk::run_command(v).exit_code == 2);
}

TEST_CASE("verify is deterministic for a fixed seed", "[harness]") {
  auto c = config("verify");
  c.seed = 42;
  c.cases = 200;
  const auto first = hk::run_command(c);
  const auto second = hk::run_command(c);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
  const auto doc = hk::Json::parse(first.output);
  CHECK(doc.at("provenance").at("seed") == 42);
  CHECK(doc.at("results").at("passed") == true);
  CHECK(doc.at("results").at("properties").size() >= 10);

  c.seed = 43;
  CHECK(hk::run_command(c).output != first.output);
}

TEST_CASE("csv artifacts", "[harness]") {
  auto c = config("means");
  c.format = "csv";
  const auto out = hk::run_command(c).output;
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# hk means");
  std::getline(lines, line);
  CHECK_THAT(line, ContainsSubstring("# config: "));
  std::getline(lines, line);
  CHECK_THAT(line, ContainsSubstring("seed=20240607"));
  std::getline(lines, line);
  CHECK(line == "# section: means");

  const std::string table = hk::write_csv({"a", "b"}, {{"t", {"x", "y"}, {{0.1, 2.0}, {1e-300, -3.5}}}});
  CHECK(table == "# a\n# b\n# section: t\nx,y\n0.1,2\n1e-300,-3.5\n");
}

TEST_CASE("shortest round-trip numbers", "[harness]") {
  CHECK(hk::format_number(0.1) == "0.1");
  CHECK(hk::format_number(12.5) == "12.5");
  CHECK(hk::format_number(1.0 / 3) == "0.3333333333333333");
  for (double x : {1.0 / 3, 2.0 / 7, 1e-310, 6.02e23, -0.0}) {
    CHECK(std::strtod(hk::format_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("json round trips", "[harness]") {
  const hk::MeanGapReport r{1.5, 2.5, 1.0, 1.0000000000000002, 3.0, 4};
  hk::Json j = r;
  CHECK(hk::Json::parse(j.dump()).get<hk::MeanGapReport>() == r);

  hk::FigureData fig;
  fig.n = 2;
  fig.surfaces.push_back({"V1", {"x1", "x2"}, {{0.0, 0.1}, {1.0, 1.0 / 3}}});
  fig.points.emplace_back("x_bar", std::vector<double>{0.625, 12.5});
  fig.scalars.emplace_back("H_w", 12.5);
  hk::Json jf = fig;
  CHECK(hk::Json::parse(jf.dump()).get<hk::FigureData>() == fig);

  const hk::ConvergenceRow row{32, 0.05, 1e-9, 3.99};
  hk::Json jr = row;
  const auto back = hk::Json::parse(jr.dump()).get<hk::ConvergenceRow>();
  CHECK(back.intervals == 32);
  CHECK(back.slope == row.slope);
  const hk::ConvergenceRow first{16, 0.1, 1e-8, std::nullopt};
  hk::Json jn = first;
  CHECK_FALSE(hk::Json::parse(jn.dump()).get<hk::ConvergenceRow>().slope);
}

TEST_CASE("command line binary", "[harness]") {
  const auto seeded = run_binary("means", "HK_DEFAULT_SEED=77");
  CHECK(seeded.exit_code == 0);
  CHECK(hk::Json::parse(seeded.out).at("provenance").at("seed") == 77);
  const auto explicit_seed = run_binary("means --seed 5", "HK_DEFAULT_SEED=77");
  CHECK(hk::Json::parse(explicit_seed.out).at("provenance").at("seed") == 5);
  const auto garbage = run_binary("means", "HK_DEFAULT_SEED=abc");
  CHECK(hk::Json::parse(garbage.out).at("provenance").at("seed") == hk::kFallbackSeed);

  CHECK(run_binary("means --a 1,x").exit_code == 2);
  CHECK(run_binary("means --a 1,2 --w 1").exit_code == 2);
  CHECK(run_binary("means --format yaml").exit_code == 2);
  CHECK(run_binary("nonsense").exit_code == 2);
  CHECK(run_binary("").exit_code == 2);
  CHECK(run_binary("--help").exit_code == 0);
  CHECK(run_binary("geometry --a 3,4,6 --w 0.2,0.2,0.6 --variant thm4").exit_code == 0);

  const auto path = std::filesystem::temp_directory_path() / "hk_means_out.json";
  CHECK(run_binary("means --out " + path.string()).exit_code == 0);
  std::ifstream f(path);
  std::stringstream content;
  content << f.rdbuf();
  CHECK(content.str() == run_binary("means").out);
  std::filesystem::remove(path);
  CHECK(run_binary("means --out /nonexistent/dir/x.json").exit_code == 2);
}
