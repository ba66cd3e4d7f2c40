#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "secnoma/experiments.hpp"

using namespace secnoma;
using namespace secnoma::experiments;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

// Column `name` of a parsed table as numbers.
std::vector<double> column(const Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  EXPECT_NE(it, t.columns.end()) << name;
  const auto idx = static_cast<std::size_t>(it - t.columns.begin());
  std::vector<double> out;
  for (const auto& row : t.rows) out.push_back(std::stod(row[idx]));
  return out;
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  const ExperimentConfig c = parse_config("");
  EXPECT_EQ(c.n_trials, 100000u);
  EXPECT_EQ(c.master_seed, 42u);
  EXPECT_EQ(c.quadrature_order, 20);
  EXPECT_EQ(c.geometry.r_p, 5.0);
  EXPECT_EQ(c.geometry.r_l, 10.0);
  EXPECT_EQ(c.geometry.r_e, 100.0);
  EXPECT_EQ(c.geometry.alpha, 4.0);
  EXPECT_EQ(c.geometry.lambda_e, 1e-3);
  EXPECT_EQ(c.pair.n_l, 2);
  EXPECT_EQ(c.pair.m, 2);
  EXPECT_EQ(c.pair.n, 1);
  EXPECT_EQ(c.pair.a_m_sq, 0.4);
  EXPECT_EQ(c.pair.a_n_sq, 0.6);
  EXPECT_EQ(c.pair.r_m, 0.1);
  EXPECT_EQ(c.pair.r_n, 0.1);
  EXPECT_NEAR(linear_to_db(c.pair.p_bs), 60.0, 1e-12);
  EXPECT_NEAR(linear_to_db(c.pair.p_c), 20.0, 1e-12);
}

TEST(Config, ExplicitDefaultsMatch) {
  const auto a = parse_config("alpha = 4\nr_p = 5\nr_l = 10\nr_e = 100\n");
  EXPECT_EQ(canonical_config(a), canonical_config(parse_config("")));
  EXPECT_EQ(config_hash(a), config_hash(parse_config("# comment only\n\n")));
}

TEST(Config, PowersAreInDecibels) {
  const auto c = parse_config("p_bs_db = 30\np_c_db = 0\n");
  EXPECT_NEAR(c.pair.p_bs, 1e3, 1e-9);
  EXPECT_NEAR(c.pair.p_c, 1.0, 1e-15);
  EXPECT_NEAR(db_to_linear(linear_to_db(123.0)), 123.0, 1e-12);
}

TEST(Config, OnePowerCoefficientDerivesTheOther) {
  EXPECT_NEAR(parse_config("a_m_sq = 0.3").pair.a_n_sq, 0.7, 1e-15);
  EXPECT_NEAR(parse_config("a_n_sq = 0.8").pair.a_m_sq, 0.2, 1e-15);
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    parse_config("r_p = 5\n\nbogus = 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW(parse_config("r_p 5"), ConfigError);
  EXPECT_THROW(parse_config("r_p = five"), ConfigError);
  EXPECT_THROW(parse_config("r_p ="), ConfigError);
  EXPECT_THROW(parse_config("trials = -3"), ConfigError);
  EXPECT_THROW(parse_config("mode = sideways"), ConfigError);
  EXPECT_THROW(parse_config("sweep_values = "), ConfigError);
}

TEST(Config, InvariantViolationsAreNamed) {
  try {
    parse_config("a_m_sq = 0.7\na_n_sq = 0.3\n");
    FAIL() << "expected invalid_argument";
  } catch (const ConfigError&) {
    FAIL() << "validation must not be reported as a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("a_n"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("r_p = 20"), std::invalid_argument);
  EXPECT_THROW(parse_config("sweep_parameter = nonsense\nsweep_values = 1"), std::invalid_argument);
  EXPECT_THROW(parse_config("quadrature_n = 0"), std::invalid_argument);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "secnoma_test_config.cfg";
  {
    std::ofstream out(path);
    out << "seed = 9\n";
  }
  EXPECT_EQ(load_config(path).master_seed, 9u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(Config, EveryKeyIsDocumentedAndParses) {
  const auto keys = config_keys();
  EXPECT_GE(keys.size(), 30u);
  for (const auto& [key, help] : keys) {
    EXPECT_FALSE(help.empty()) << key;
  }
  for (const auto& name : sweepable_parameters()) {
    ExperimentConfig c;
    const double v = name == "beta" ? 0.5 : name == "a_m_sq" ? 0.3 : name == "r_e" ? 200.0 : 6.0;
    EXPECT_NO_THROW(set_parameter(c, name, v)) << name;
  }
}

TEST(Config, HashIgnoresWorkersAndOutput) {
  const auto a = parse_config("workers = 1\noutput = a.csv");
  const auto b = parse_config("workers = 7\noutput = b.csv");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(parse_config("seed = 43")));
}

TEST(Csv, FormatAndDeterminism) {
  const auto config = parse_config("trials = 2000\nfig4_p_c_db = 10, 40\nfig4_beta = 0.7\n");
  const auto a = cmd_fig4(config);
  const std::string csv = to_csv(a.table, config);
  const auto lines = lines_of(csv);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].rfind("# secnoma fig4 config_hash=", 0), 0u);
  EXPECT_NE(lines[0].find("seed=42"), std::string::npos);
  EXPECT_NE(lines[0].find("N=20"), std::string::npos);
  EXPECT_EQ(lines[1], "p_c_db,beta,sop_n_analytic,sop_n_mc,mc_stderr");
  EXPECT_EQ(split(lines[2]).size(), 5u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');

  auto other = config;
  other.workers = 3;
  EXPECT_EQ(to_csv(cmd_fig4(other).table, other), csv);
}

TEST(Csv, NumbersHaveSixSignificantDigits) {
  EXPECT_EQ(format_number(0.0625669123), "0.0625669");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(1e-7), "1e-07");
}

TEST(Commands, ValidateDefaultsPassWithSmallBudget) {
  const auto config = parse_config("trials = 20000\nseed = 7\n");
  const auto r = cmd_validate(config);
  EXPECT_EQ(r.exit_code, 0) << to_csv(r.table, config);
  EXPECT_EQ(r.table.rows.size(), 12u);
  for (const auto& row : r.table.rows) EXPECT_EQ(row.back(), "pass") << row.front();
}

TEST(Commands, CorruptedFormulaFailsValidation) {
  const auto config = parse_config("trials = 20000\ncorrupt_formula = true\n");
  EXPECT_EQ(cmd_validate(config).exit_code, 1);
}

TEST(Commands, ValidateWithoutEavesdroppers) {
  const auto config = parse_config("trials = 20000\nlambda_e = 0\n");
  const auto r = cmd_validate(config);
  EXPECT_EQ(r.exit_code, 0) << to_csv(r.table, config);
  const auto q = config.constants();
  const PairConfig& p = config.pair;
  const double closed = analytic::cdf_ordered_user_gain_snr(std::exp2(2.0 * p.r_m) - 1.0, p.m, p.n_l, q,
                                                            p.p_bs, p.a_m_sq);
  ASSERT_EQ(r.table.rows[0][0], "pr_strong_secrecy_outage");
  EXPECT_NEAR(std::stod(r.table.rows[0][2]), closed, 1e-6);
}

TEST(Commands, Fig2Trends) {
  const auto config = parse_config("trials = 20000\nfig2_r_p = 1, 3, 5\n");
  const auto t = cmd_fig2(config).table;
  ASSERT_EQ(t.rows.size(), 6u);
  const auto lambda = column(t, "lambda_e");
  const auto mc = column(t, "sop_mc");
  const auto an = column(t, "sop_analytic");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i % 3) {
      EXPECT_LE(mc[i], mc[i - 1]);
      EXPECT_LE(an[i], an[i - 1]);
    }
    if (i >= 3) {
      EXPECT_GE(mc[i - 3], mc[i]);
      EXPECT_GT(lambda[i - 3], lambda[i]);
    }
  }
}

TEST(Commands, SweepOverDecibels) {
  auto config = parse_config(
      "trials = 5000\nsweep_parameter = p_c\nsweep_values = 10, 20\nsweep_db = true\n"
      "sweep_scenario = case2_relay\n");
  const auto t = cmd_sweep(config).table;
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][2], "case2_relay");
  EXPECT_THROW(cmd_sweep(parse_config("")), ConfigError);
}

TEST(Commands, PreconditionsSurface) {
  EXPECT_THROW(cmd_fig2(parse_config("r_n = 0.3\ntrials = 10")), analytic::PreconditionError);
}
