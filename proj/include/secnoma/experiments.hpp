#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "secnoma/analytic.hpp"
#include "secnoma/geometry.hpp"
#include "secnoma/simulator.hpp"

namespace secnoma::experiments {

/// Malformed configuration text. `line()` is 0 for errors not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct SweepSpec {
  std::string parameter;  // a sweepable field, see sweepable_parameters()
  std::vector<double> values;
  bool in_db = false;  // values are 10 log10 of the linear field value
  sim::Scenario scenario = sim::Scenario::kCase1;
};

struct ExperimentConfig {
  NetworkGeometry geometry;
  PairConfig pair;
  SamplingMode mode;
  std::uint64_t n_trials = 100000;
  std::uint64_t master_seed = 42;
  int quadrature_order = analytic::kDefaultQuadratureOrder;
  double abs_tol = math::kDefaultAbsTol;
  unsigned workers = 0;
  SweepSpec sweep;
  std::string output_path;

  std::vector<double> fig2_r_p{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  std::vector<double> fig2_lambda_e{1e-3, 1e-4};
  std::vector<double> fig3_p_bs_db{20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70};
  std::vector<double> fig4_p_c_db{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70};
  std::vector<double> fig4_beta{0.4, 0.7, 1.0};

  /// Harness self-test: shifts every analytic value in cmd_validate by +0.1.
  bool corrupt_formula = false;

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
  analytic::QuadratureConstants constants() const;
};

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// Key = value lines, '#' starts a comment. Omitted keys keep the defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every accepted config key with a one-line description.
std::vector<std::pair<std::string, std::string>> config_keys();
std::vector<std::string> sweepable_parameters();

/// Canonical key = value dump; `workers` and the output path are excluded so
/// the hash only depends on what determines the numbers.
std::string canonical_config(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

/// Sets a sweepable field (linear units) and re-validates.
void set_parameter(ExperimentConfig& config, const std::string& name, double value);

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// "# ..." provenance line, column header, rows; ',' separated, LF endings.
void write_csv(std::ostream& out, const Table& table, const ExperimentConfig& config);
std::string to_csv(const Table& table, const ExperimentConfig& config);
/// Fixed-width rendering for terminals.
void write_pretty(std::ostream& out, const Table& table);

/// Probabilities and parameters are printed with 6 significant digits.
std::string format_number(double value);

struct CommandResult {
  Table table;
  int exit_code = 0;  // 0 pass, 1 validation failure
};

/// Analytic-vs-Monte-Carlo rows; exit code 1 if any row fails.
CommandResult cmd_validate(const ExperimentConfig& config);
CommandResult cmd_fig2(const ExperimentConfig& config);
CommandResult cmd_fig3(const ExperimentConfig& config);
CommandResult cmd_fig4(const ExperimentConfig& config);
CommandResult cmd_sweep(const ExperimentConfig& config);

}  // namespace secnoma::experiments
