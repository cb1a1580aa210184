#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvemates/cli.hpp"

using namespace curvemates;
using Json = nlohmann::json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("curve_mates_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::out_of_range(name);
}

const std::vector<std::string> kFig2 = {"--group", "r3", "--kappa", "3*cos(s)", "--tau", "3*sin(s)",
                                        "--domain", "-1.5:1.5", "--step", "1e-3"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST(Cli, SynthesizeFig2RowsAndHeader) {
  const CliRun r = run(with({"synthesize"}, kFig2));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3002u);
  const std::vector<std::string> header{"s",  "x",  "y",  "z",  "t1",    "t2",  "t3", "n1",    "n2",   "n3",
                                        "b1", "b2", "b3", "kappa", "tau", "H",  "sigma", "omega"};
  EXPECT_EQ(rows[0], header);
  EXPECT_EQ(rows[1][0], "-1.5");
  EXPECT_NEAR(std::stod(rows.back()[0]), 1.5, 1e-12);
  EXPECT_NEAR(std::stod(rows[1][column(header, "sigma")]), 3.0, 1e-12);
  EXPECT_EQ(r.out.find("nan"), std::string::npos);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, SynthesizeS3QuaternionNorms) {
  const CliRun r = run({"synthesize", "--group", "s3", "--kappa", "1", "--tau", "1", "--domain", "0:6.283185"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows[0][1], "qw");
  const std::size_t sig = column(rows[0], "sigma");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double n2 = 0.0;
    for (int k = 1; k <= 4; ++k) n2 += std::pow(std::stod(rows[i][static_cast<std::size_t>(k)]), 2);
    ASSERT_NEAR(std::sqrt(n2), 1.0, 1e-12);
    ASSERT_EQ(rows[i][sig], "");
  }
}

TEST(Cli, SynthesizeSo3Columns) {
  const CliRun r = run({"synthesize", "--group", "so3", "--kappa", "1", "--tau", "2", "--domain", "0:1", "--step", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0][1], "r11");
  EXPECT_EQ(rows[0][9], "r33");
  EXPECT_EQ(rows.size(), 102u);
}

TEST(Cli, FrenetViolationExit2) {
  const CliRun r = run({"synthesize", "--kappa", "-1", "--tau", "0", "--domain", "0:1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Frenet condition violated"), std::string::npos);
}

TEST(Cli, ConfigErrorsExit2) {
  EXPECT_EQ(run({"synthesize", "--kappa", "1", "--tau", "0", "--domain", "1:0"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--kappa", "1", "--tau", "0", "--domain", "0:1", "--step", "0.2"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--kappa", "1", "--tau", "0", "--domain", "0:1", "--step", "0"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--kappa", "1", "--tau", "0", "--domain", "zero:1"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--kappa", "2*)s", "--tau", "0", "--domain", "0:1"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--group", "se3", "--kappa", "1", "--tau", "0", "--domain", "0:1"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--tau", "0", "--domain", "0:1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--bogus-flag"}).code, 2);
  EXPECT_EQ(run({"--kappa", "1", "--tau", "0", "--domain", "0:1"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--config", temp_path("missing.json").string()}).code, 2);
}

TEST(Cli, DomainErrorExit3RemovesFile) {
  const auto path = temp_path("domain.csv");
  std::ofstream(path) << "stale";
  const CliRun r = run({"synthesize", "--kappa", "1+sqrt(s)", "--tau", "0", "--domain=-1:1", "--out", path.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("sqrt"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(Cli, ConjugateOfPlanarExit4) {
  const CliRun r = run({"mate", "--kind", "conjugate", "--kappa", "1", "--tau", "0", "--domain", "0:1"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("zero crossings"), std::string::npos);
  const CliRun s3 = run({"mate", "--kind", "conjugate", "--group", "s3", "--kappa", "2", "--tau", "1", "--domain", "0:1",
                      "--mode", "geometric"});
  EXPECT_EQ(s3.code, 4);
}

TEST(Cli, ConjugateFig1Analytic) {
  const CliRun r = run({"mate", "--kind", "conjugate", "--mode", "analytic", "--kappa", "s-1", "--tau", "s^2+s-2",
                     "--domain", "1.05:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  const std::size_t k = column(rows[0], "kappa"), t = column(rows[0], "tau");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s = std::stod(rows[i][0]);
    ASSERT_NEAR(std::stod(rows[i][k]), std::abs(s * s + s - 2), 1e-12);
    ASSERT_NEAR(std::stod(rows[i][t]), s - 1, 1e-12);
  }
}

TEST(Cli, NaturalFig4BothSummary) {
  const auto path = temp_path("fig4_mate.csv");
  const CliRun r = run({"mate", "--kind", "natural", "--mode", "both", "--kappa", "3", "--tau", "2*s", "--domain", "-3:3",
                     "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema_version"], "1");
  EXPECT_LE(j["max_abs_kappa_diff"].get<double>(), 1e-4);
  EXPECT_GT(j["samples_compared"].get<int>(), 5000);
  const auto rows = parse_csv(slurp(path));
  EXPECT_EQ(rows[0][column(rows[0], "kappa_est") - 1], "omega");
  const std::size_t k = column(rows[0], "kappa");
  for (std::size_t i = 1; i < rows.size(); i += 97) {
    const double s = std::stod(rows[i][0]);
    EXPECT_NEAR(std::stod(rows[i][k]), std::sqrt(9 + 4 * s * s), 1e-12);
  }
  std::filesystem::remove(path);
  EXPECT_EQ(run({"mate", "--mode", "both", "--kappa", "3", "--tau", "2*s", "--domain", "-3:3"}).code, 2);
  EXPECT_EQ(run({"mate", "--mode", "sideways", "--kappa", "3", "--tau", "2*s", "--domain", "-3:3"}).code, 2);
}

TEST(Cli, ClassifyFigures) {
  const CliRun f2 = run(with({"classify"}, kFig2));
  ASSERT_EQ(f2.code, 0) << f2.err;
  const Json j2 = Json::parse(f2.out);
  EXPECT_TRUE(j2["verdicts"]["slant_helix"]["pass"].get<bool>());
  EXPECT_LE(j2["verdicts"]["slant_helix"]["residual"].get<double>(), 1e-9);
  EXPECT_EQ(j2["segments"].size(), 2u);

  const CliRun f3 = run({"classify", "--kappa", "2*(1+7*sin(2*s)^2)^(-1/2)", "--tau",
                      "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)", "--domain", "0:3.141592653589793"});
  ASSERT_EQ(f3.code, 0) << f3.err;
  const Json j3 = Json::parse(f3.out);
  EXPECT_TRUE(j3["spherical"]["pass"].get<bool>());
  EXPECT_NEAR(j3["spherical"]["radius"].get<double>(), 1.41421356, 1e-6);

  const CliRun f5 = run({"classify", "--kappa", "3*cos(s)", "--tau", "sqrt(2)", "--domain", "-1.5:1.5"});
  const Json j5 = Json::parse(f5.out);
  EXPECT_TRUE(j5["verdicts"]["anti_salkowski"]["pass"].get<bool>());
  EXPECT_TRUE(j5["verdicts"]["slant_helix"]["residual"].is_null());

  const std::vector<std::string> order{"general_helix", "slant_helix", "rectifying",    "spherical",
                                       "salkowski",     "anti_salkowski", "circular_helix"};
  std::vector<std::string> keys;
  const auto ordered = nlohmann::ordered_json::parse(f2.out);
  for (const auto& [k, v] : ordered["verdicts"].items()) keys.push_back(k);
  EXPECT_EQ(ordered.begin().key(), "schema_version");
  EXPECT_EQ(keys, order);
}

TEST(Cli, VerifyFigures) {
  const CliRun f4 = run({"verify", "--kappa", "3", "--tau", "2*s", "--domain", "-3:3", "--theorems", "thm4_1"});
  ASSERT_EQ(f4.code, 0) << f4.err;
  const Json j4 = Json::parse(f4.out);
  EXPECT_EQ(j4["reports"][0]["status"], "pass");
  EXPECT_NEAR(j4["reports"][0]["details"]["radius"].get<double>(), 1.0 / 3.0, 1e-9);

  const CliRun f3 = run({"verify", "--kappa", "2*(1+7*sin(2*s)^2)^(-1/2)", "--tau",
                      "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)", "--domain", "0:3.141592653589793", "--theorems",
                      "thm5_2"});
  ASSERT_EQ(f3.code, 0) << f3.err;
  const Json j3 = Json::parse(f3.out);
  EXPECT_NEAR(j3["reports"][0]["details"]["a"].get<double>(), 4 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(j3["reports"][0]["details"]["c"].get<double>(), 2.0, 1e-12);

  const CliRun f5 = run({"verify", "--kappa", "3*cos(s)", "--tau", "sqrt(2)", "--domain", "-1.5:1.5", "--theorems",
                      "thm6_2", "--path", "estimated"});
  ASSERT_EQ(f5.code, 0) << f5.err;
  EXPECT_NEAR(Json::parse(f5.out)["reports"][0]["details"]["radius"].get<double>(), 1.0 / std::sqrt(2.0), 1e-3);
}

TEST(Cli, VerifyAllOnFig2) {
  const CliRun r = run(with({"verify", "--theorems", "all"}, kFig2));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["reports"].size(), 13u);
  EXPECT_TRUE(j["all_ok"].get<bool>());
}

TEST(Cli, VerifyFailureExit1AndTrace) {
  const auto trace = temp_path("trace.csv");
  const CliRun r = run({"verify", "--kappa", "3", "--tau", "2*s", "--domain", "-3:3", "--theorems", "thm4_1",
                     "--tol-verify-analytic", "1e-20", "--trace", trace.string()});
  EXPECT_EQ(r.code, 1);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["reports"][0]["status"], "fail");
  EXPECT_EQ(j["reports"][0]["tolerance"].get<double>(), 1e-20);
  const auto rows = parse_csv(slurp(trace));
  EXPECT_EQ(rows[0], (std::vector<std::string>{"theorem", "s", "residual"}));
  EXPECT_GT(rows.size(), 1000u);
  std::filesystem::remove(trace);
}

TEST(Cli, UnknownTheoremExit2) {
  EXPECT_EQ(run(with({"verify", "--theorems", "thm4_1,thm9_9"}, kFig2)).code, 2);
  EXPECT_EQ(run(with({"verify", "--path", "sideways"}, kFig2)).code, 2);
}

TEST(Cli, ConfigFileAndOverrides) {
  const auto cfg = temp_path("config.json");
  std::ofstream(cfg) << R"({"group": "r3", "kappa": "3", "tau": "2*s", "domain": [-3, 3], "step": 0.002,
                           "theorems": ["thm4_1"], "tolerances": {"verify_analytic": 1e-20}})";
  const CliRun from_file = run({"verify", "--config", cfg.string()});
  EXPECT_EQ(from_file.code, 1);
  EXPECT_EQ(Json::parse(from_file.out)["step"].get<double>(), 0.002);
  const CliRun overridden = run({"verify", "--config", cfg.string(), "--tol-verify-analytic", "1e-8", "--step", "0.01"});
  EXPECT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(Json::parse(overridden.out)["step"].get<double>(), 0.01);

  std::ofstream(cfg) << R"({"kappa": "1", "colour": "red"})";
  EXPECT_EQ(run({"synthesize", "--config", cfg.string()}).code, 2);
  std::ofstream(cfg) << "{ not json";
  EXPECT_EQ(run({"synthesize", "--config", cfg.string()}).code, 2);
  std::filesystem::remove(cfg);
}

TEST(Cli, InitialFrameAndPosition) {
  const CliRun r = run({"synthesize", "--kappa", "1", "--tau", "0", "--domain", "0:1", "--step", "0.01",
                     "--initial-frame", "0,1,0,-1,0,0,0,0,1", "--initial-position", "1,2,3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[1][1], "1");
  EXPECT_EQ(rows[1][2], "2");
  EXPECT_EQ(rows[1][5], "1");
  EXPECT_EQ(run({"synthesize", "--kappa", "1", "--tau", "0", "--domain", "0:1", "--initial-position", "1,2"}).code, 2);
  EXPECT_EQ(run({"synthesize", "--kappa", "1", "--tau", "0", "--domain", "0:1", "--initial-frame", "1,1,1"}).code, 2);
}

TEST(Cli, Deterministic) {
  const auto a = run(with({"synthesize"}, kFig2));
  const auto b = run(with({"synthesize"}, kFig2));
  EXPECT_EQ(a.out, b.out);
  const auto c = run(with({"verify", "--theorems", "all", "--path", "estimated"}, kFig2));
  const auto d = run(with({"verify", "--theorems", "all", "--path", "estimated"}, kFig2));
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, ShowTolerancesAndHelp) {
  const CliRun t = run({"--show-tolerances"});
  EXPECT_EQ(t.code, 0);
  const Json j = Json::parse(t.out);
  EXPECT_EQ(j["tolerances"]["constancy"].get<double>(), 1e-6);
  EXPECT_EQ(j["tolerances"]["bertrand"].get<double>(), 1e-4);
  EXPECT_EQ(j["tolerances"].size(), 10u);
  const CliRun h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("synthesize"), std::string::npos);
}

TEST(Cli, SeventeenDigitRoundTrip) {
  const CliRun r = run({"synthesize", "--kappa", "1/3", "--tau", "0", "--domain", "0:1", "--step", "0.1"});
  const auto rows = parse_csv(r.out);
  const std::size_t k = column(rows[0], "kappa");
  EXPECT_EQ(rows[1][k], "0.33333333333333331");
  EXPECT_EQ(std::stod(rows[1][k]), 1.0 / 3.0);
}
