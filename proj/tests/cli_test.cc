// Copyright 2026 The pabound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pabound/cli.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace pabound::cli {
namespace {

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::vector<double>> rows;  // nan cells stay nan
};

Csv ParseCsv(const std::string& text, std::string* header = nullptr) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      row.push_back(cell == "nan" ? std::nan("") : std::stod(cell));
    }
    csv.rows.push_back(row);
  }
  return csv;
}

enum Col { kN, kEps, kQ, kEta, kZeta, kSLow, kELow, kHLow, kSUp, kGauss,
           kThetaE, kThetaH };

std::string Capture(void (*fn)(const SweepSpec&, std::ostream&),
                const SweepSpec& spec) {
  std::ostringstream out;
  fn(spec, out);
  return out.str();
}

double BinaryEntropy(double q) {
  return -q * std::log(q) - (1 - q) * std::log(1 - q);
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int Tool(const std::string& args) {
  const std::string cmd = std::string(PABOUND_TOOL_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("pabound_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(CliParseTest, Enums) {
  EXPECT_EQ(ParseMode("sweep-n"), Mode::kSweepN);
  EXPECT_EQ(ParseMode("sweep-eps"), Mode::kSweepEps);
  EXPECT_EQ(ParseUnits("nats"), Units::kNats);
  EXPECT_EQ(ParseLevel("full"), Level::kFull);
  EXPECT_THROW(ParseMode("sweep"), UsageError);
  EXPECT_THROW(ParseUnits("bytes"), UsageError);
  EXPECT_THROW(ParseLevel("slow"), UsageError);
}

TEST(CliParseTest, Grids) {
  const std::vector<double> g = LogGrid(1e-15, 1e-1, 15);
  ASSERT_EQ(g.size(), 15u);
  EXPECT_EQ(g.front(), 1e-15);
  EXPECT_EQ(g.back(), 1e-1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(std::log10(g[i]), -15.0 + static_cast<double>(i), 1e-12);
  }
  const std::vector<int> ns = LogIntGrid(1, 10, 30);
  EXPECT_EQ(ns.front(), 1);
  EXPECT_EQ(ns.back(), 10);
  for (std::size_t i = 1; i < ns.size(); ++i) EXPECT_GT(ns[i], ns[i - 1]);
  EXPECT_THROW(LogGrid(0.0, 1.0, 3), UsageError);
  EXPECT_THROW(LogIntGrid(0, 10, 3), UsageError);
}

TEST(CliParseTest, ConfigJson) {
  const nlohmann::json j = {
      {"mode", "sweep-eps"},
      {"q", 0.2},
      {"eps", {{"from", 1e-6}, {"to", 1e-2}, {"count", 5}}},
      {"n", 500},
      {"units", "nats"},
      {"clamp", true}};
  const SweepSpec s = SpecFromJson(j);
  EXPECT_EQ(s.mode, Mode::kSweepEps);
  EXPECT_EQ(s.q, 0.2);
  EXPECT_EQ(s.eps.size(), 5u);
  EXPECT_EQ(s.n, std::vector<int>{500});
  EXPECT_EQ(s.units, Units::kNats);
  EXPECT_TRUE(s.clamp);
  EXPECT_EQ(SpecFromJson({{"n", {10, 20}}}).n, (std::vector<int>{10, 20}));
  EXPECT_THROW(SpecFromJson({{"bogus", 1}}), UsageError);
  EXPECT_THROW(SpecFromJson({{"q", "high"}}), UsageError);
  EXPECT_THROW(SpecFromJson(nlohmann::json::array()), UsageError);
}

TEST(CliParseTest, ValidateRejects) {
  SweepSpec s;
  s.eps = {};
  EXPECT_THROW(s.Validate(), UsageError);
  s = SweepSpec{};
  s.eps = {1.0};
  EXPECT_THROW(s.Validate(), UsageError);
  s = SweepSpec{};
  s.n = {0};
  EXPECT_THROW(s.Validate(), UsageError);
  s = SweepSpec{};
  s.eta_frac = 1.5;
  EXPECT_THROW(s.Validate(), UsageError);
}

TEST(CliSweepTest, HeaderAndDeterminism) {
  SweepSpec s;
  s.n = LogIntGrid(100, 100000, 12);
  const std::string a = Capture(RunSweepN, s);
  const std::string b = Capture(RunSweepN, s);
  EXPECT_EQ(a, b);
  std::string header;
  const Csv csv = ParseCsv(a, &header);
  EXPECT_EQ(header,
            "n,eps,q,eta,zeta,ell_s_low,ell_e_low,ell_h_low,ell_s_up,gauss,"
            "theta_star_e,theta_star_h");
  EXPECT_EQ(csv.rows.size(), 12u);
  for (const auto& r : csv.rows) EXPECT_EQ(r.size(), 12u);
}

TEST(CliSweepTest, BitsAreNatsOverLog2) {
  SweepSpec s;
  s.n = {1000, 5000};
  const Csv bits = ParseCsv(Capture(RunSweepN, s));
  s.units = Units::kNats;
  const Csv nats = ParseCsv(Capture(RunSweepN, s));
  for (std::size_t i = 0; i < 2; ++i) {
    for (int c : {kSLow, kELow, kHLow, kSUp, kGauss}) {
      EXPECT_NEAR(bits.rows[i][c], nats.rows[i][c] / std::log(2.0),
                  1e-9 * std::abs(bits.rows[i][c]));
    }
    EXPECT_EQ(bits.rows[i][kThetaE], nats.rows[i][kThetaE]);
  }
}

TEST(CliSweepTest, FairCoinGapConstantInN) {
  SweepSpec s;
  s.q = 0.5;
  s.eps = {1e-6};
  s.units = Units::kNats;
  s.n = {100, 1000, 10000, 100000};
  const Csv csv = ParseCsv(Capture(RunSweepN, s));
  ASSERT_EQ(csv.rows.size(), 4u);
  const double eta = 0.5e-6;
  const double zeta = 0.5e-6;
  for (const auto& r : csv.rows) {
    // -ln zeta - ln(4 eta^2) + 1, printed to 12 significant digits.
    EXPECT_NEAR(r[kSUp] - r[kHLow],
                -std::log(zeta) - std::log(4 * eta * eta) + 1,
                1e-11 * r[kSUp]);
    EXPECT_NEAR(r[kGauss], r[kN] * std::log(2.0), 1e-11 * r[kGauss]);
  }
}

TEST(CliSweepTest, HalfEpsGivesEntropyRate) {
  SweepSpec s;
  s.eps = {0.5};
  s.units = Units::kNats;
  s.n = {10, 1000, 100000};
  for (const auto& r : ParseCsv(Capture(RunSweepN, s)).rows) {
    EXPECT_NEAR(r[kGauss], r[kN] * BinaryEntropy(0.11), 1e-11 * r[kGauss]);
  }
}

TEST(CliSweepTest, SkippedRowsAndNanCells) {
  SweepSpec s;
  s.mode = Mode::kSweepEps;
  s.n = {100};
  s.eps = {0.01, 0.6};
  s.zeta_frac = 1.0;
  const Csv csv = ParseCsv(Capture(RunSweepEps, s));
  ASSERT_EQ(csv.rows.size(), 1u);
  ASSERT_EQ(csv.comments.size(), 1u);
  EXPECT_EQ(csv.comments[0].rfind("# skipped", 0), 0u);

  s.eps = {0.01};
  s.eta_frac = 1.0;
  const Csv nan_row = ParseCsv(Capture(RunSweepEps, s));
  ASSERT_EQ(nan_row.rows.size(), 1u);
  EXPECT_TRUE(std::isnan(nan_row.rows[0][kSLow]));
  EXPECT_TRUE(std::isnan(nan_row.rows[0][kHLow]));
  EXPECT_FALSE(std::isnan(nan_row.rows[0][kELow]));
  EXPECT_FALSE(std::isnan(nan_row.rows[0][kSUp]));
}

TEST(CliSweepTest, ClampZeroesNegativeLengths) {
  SweepSpec s;
  s.n = {5};
  s.eps = {1e-10};
  const Csv raw = ParseCsv(Capture(RunBound, s));
  ASSERT_LT(raw.rows[0][kSLow], 0.0);
  s.clamp = true;
  const Csv clamped = ParseCsv(Capture(RunBound, s));
  EXPECT_EQ(clamped.rows[0][kSLow], 0.0);
  EXPECT_EQ(clamped.rows[0][kSUp], raw.rows[0][kSUp]);
}

TEST(CliSweepTest, EpsSweepAtThousand) {
  SweepSpec s;
  s.mode = Mode::kSweepEps;
  s.n = {1000};
  s.eps = LogGrid(1e-15, 1e-1, 29);
  s.units = Units::kNats;
  const Csv csv = ParseCsv(Capture(RunSweepEps, s));
  ASSERT_EQ(csv.rows.size(), 29u);
  double gap_first = 0.0;
  double gap_last = 0.0;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& r = csv.rows[i];
    EXPECT_GE(r[kHLow], r[kSLow] - 1e-9 * std::abs(r[kSLow]));
    EXPECT_GE(r[kHLow], r[kELow] - 1e-9 * std::abs(r[kELow]));
    EXPECT_LE(r[kHLow], r[kSUp]);
    const double gap = r[kSLow] - r[kELow];
    if (i == 0) gap_first = gap;
    gap_last = gap;
  }
  // Loosening eps helps the spectral bound more than the exponential one.
  EXPECT_GT(gap_last, gap_first);
}

TEST(CliVerifyTest, QuickPassesAndTamperFails) {
  VerifyConfig config;
  std::ostringstream out;
  EXPECT_EQ(RunVerify(config, out), kExitOk);
  const nlohmann::json j = nlohmann::json::parse(out.str());
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["level"], "quick");
  std::vector<std::string> lemmas;
  for (const auto& r : j["reports"]) lemmas.push_back(r["lemma"]);
  for (const char* name : {"leftover_hash", "exponential", "monotonicity",
                           "spectral_direct", "spectral_converse"}) {
    EXPECT_NE(std::find(lemmas.begin(), lemmas.end(), name), lemmas.end())
        << name;
  }
  config.options.h2_scale = 10.0;
  std::ostringstream bad;
  EXPECT_EQ(RunVerify(config, bad), kExitVerificationFailed);
}

TEST(CliToolTest, ExitCodesAndFiles) {
  const auto a = TempPath("a.csv");
  const auto b = TempPath("b.csv");
  const auto cfg = TempPath("cfg.json");
  EXPECT_EQ(Tool("sweep-n --n-from 100 --n-to 10000 --n-count 7 --out " +
                 a.string()),
            0);
  EXPECT_EQ(Tool("sweep-n --n-from 100 --n-to 10000 --n-count 7 --out " +
                 b.string()),
            0);
  const std::string first = ReadFile(a);
  EXPECT_EQ(first, ReadFile(b));
  EXPECT_EQ(ParseCsv(first).rows.size(), 7u);

  // Flags override the config file.
  std::ofstream(cfg) << R"({"q": 0.25, "n": 300, "eps": 1e-3, "units": "nats"})";
  EXPECT_EQ(Tool("bound --config " + cfg.string() + " --n 400 --out " +
                 a.string()),
            0);
  const Csv row = ParseCsv(ReadFile(a));
  ASSERT_EQ(row.rows.size(), 1u);
  EXPECT_EQ(row.rows[0][kN], 400);
  EXPECT_EQ(row.rows[0][kQ], 0.25);
  EXPECT_EQ(row.rows[0][kEps], 1e-3);

  EXPECT_EQ(Tool("bound --q 1.5 > /dev/null 2>&1"), 2);
  EXPECT_EQ(Tool("bound --units bytes > /dev/null 2>&1"), 2);
  EXPECT_EQ(Tool("frobnicate > /dev/null 2>&1"), 2);
  EXPECT_EQ(Tool("--help > /dev/null 2>&1"), 0);
  EXPECT_EQ(Tool("verify --level quick > /dev/null"), 0);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  std::filesystem::remove(cfg);
}

}  // namespace
}  // namespace pabound::cli
