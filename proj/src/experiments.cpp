#include "secnoma/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace secnoma::experiments {

namespace {

using analytic::CoopStrategy;
using sim::Scenario;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, int line) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + std::string(text) + "'", line);
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, int line) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("expected a nonnegative integer, got '" + std::string(text) + "'", line);
  }
  return v;
}

int parse_int(std::string_view text, int line) {
  const std::uint64_t v = parse_unsigned(text, line);
  if (v > 1'000'000) throw ConfigError("integer out of range", line);
  return static_cast<int>(v);
}

bool parse_bool(std::string_view text, int line) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("expected true or false, got '" + std::string(text) + "'", line);
}

std::vector<double> parse_list(std::string_view text, int line) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(parse_double(item, line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError("expected a comma-separated list of numbers", line);
  return out;
}

SamplingModeKind parse_mode(std::string_view text, int line) {
  text = trim(text);
  if (text == "analytic") return SamplingModeKind::kAnalyticMatched;
  if (text == "annulus") return SamplingModeKind::kPaperGeometry;
  throw ConfigError("mode must be 'annulus' or 'analytic'", line);
}

const std::map<std::string, Scenario, std::less<>>& scenario_names() {
  static const std::map<std::string, Scenario, std::less<>> names{
      {"case1", Scenario::kCase1},           {"case2_relay", Scenario::kCase2Relay},
      {"case2_fjr", Scenario::kCase2Fjr},    {"noncoop", Scenario::kNonCoopNoma},
      {"coop_noeves", Scenario::kCoopNoEves}};
  return names;
}

std::string scenario_name(Scenario s) {
  for (const auto& [name, value] : scenario_names()) {
    if (value == s) return name;
  }
  return "unknown";
}

struct KeyInfo {
  std::string help;
  std::function<void(ExperimentConfig&, std::string_view, int)> set;
};

struct ParseState {
  bool a_m_set = false;
  bool a_n_set = false;
};

const std::map<std::string, KeyInfo, std::less<>>& key_table() {
  using C = ExperimentConfig;
  using V = std::string_view;
  static const std::map<std::string, KeyInfo, std::less<>> table{
      {"r_p", {"eavesdropper-free radius [m]",
               [](C& c, V v, int l) { c.geometry.r_p = parse_double(v, l); }}},
      {"r_l", {"user-zone radius [m]", [](C& c, V v, int l) { c.geometry.r_l = parse_double(v, l); }}},
      {"r_e", {"eavesdropper-zone radius [m]",
               [](C& c, V v, int l) { c.geometry.r_e = parse_double(v, l); }}},
      {"alpha", {"path-loss exponent", [](C& c, V v, int l) { c.geometry.alpha = parse_double(v, l); }}},
      {"lambda_e", {"eavesdropper density [1/m^2]",
                    [](C& c, V v, int l) { c.geometry.lambda_e = parse_double(v, l); }}},
      {"n_l", {"number of users", [](C& c, V v, int l) { c.pair.n_l = parse_int(v, l); }}},
      {"m", {"strong-user order (ascending)", [](C& c, V v, int l) { c.pair.m = parse_int(v, l); }}},
      {"n", {"weak-user order (ascending)", [](C& c, V v, int l) { c.pair.n = parse_int(v, l); }}},
      {"a_m_sq", {"strong-user power share a_m^2", [](C& c, V v, int l) { c.pair.a_m_sq = parse_double(v, l); }}},
      {"a_n_sq", {"weak-user power share a_n^2", [](C& c, V v, int l) { c.pair.a_n_sq = parse_double(v, l); }}},
      {"p_bs_db", {"BS transmit power [dB]",
                   [](C& c, V v, int l) { c.pair.p_bs = db_to_linear(parse_double(v, l)); }}},
      {"p_c_db", {"cooperation power [dB]",
                  [](C& c, V v, int l) { c.pair.p_c = db_to_linear(parse_double(v, l)); }}},
      {"r_m", {"strong-user target rate [bit/s/Hz]", [](C& c, V v, int l) { c.pair.r_m = parse_double(v, l); }}},
      {"r_n", {"weak-user target rate [bit/s/Hz]", [](C& c, V v, int l) { c.pair.r_n = parse_double(v, l); }}},
      {"beta", {"relaying share of P_C under FJR", [](C& c, V v, int l) { c.pair.beta = parse_double(v, l); }}},
      {"lambda_mn", {"inter-user fading rate", [](C& c, V v, int l) { c.pair.lambda_mn = parse_double(v, l); }}},
      {"mode", {"sampling mode: analytic | annulus",
                [](C& c, V v, int l) { c.mode.kind = parse_mode(v, l); }}},
      {"r_max", {"eavesdropper truncation radius [m], 0 = 10 r_e",
                 [](C& c, V v, int l) { c.mode.r_max = parse_double(v, l); }}},
      {"lambda_ref", {"coupling intensity for eavesdropper thinning, 0 = lambda_e",
                      [](C& c, V v, int l) { c.mode.lambda_ref = parse_double(v, l); }}},
      {"trials", {"Monte Carlo trials per point", [](C& c, V v, int l) { c.n_trials = parse_unsigned(v, l); }}},
      {"seed", {"master seed", [](C& c, V v, int l) { c.master_seed = parse_unsigned(v, l); }}},
      {"quadrature_n", {"Gauss-Chebyshev order N",
                        [](C& c, V v, int l) { c.quadrature_order = parse_int(v, l); }}},
      {"abs_tol", {"absolute tolerance of the numeric integrals",
                   [](C& c, V v, int l) { c.abs_tol = parse_double(v, l); }}},
      {"workers", {"worker threads, 0 = all cores",
                   [](C& c, V v, int l) { c.workers = static_cast<unsigned>(parse_int(v, l)); }}},
      {"output", {"CSV output path", [](C& c, V v, int) { c.output_path = std::string(trim(v)); }}},
      {"sweep_parameter", {"field swept by the sweep command",
                           [](C& c, V v, int) { c.sweep.parameter = std::string(trim(v)); }}},
      {"sweep_values", {"comma-separated sweep values",
                        [](C& c, V v, int l) { c.sweep.values = parse_list(v, l); }}},
      {"sweep_db", {"sweep values are in dB", [](C& c, V v, int l) { c.sweep.in_db = parse_bool(v, l); }}},
      {"sweep_scenario", {"case1 | case2_relay | case2_fjr | noncoop | coop_noeves",
                          [](C& c, V v, int l) {
                            const auto it = scenario_names().find(trim(v));
                            if (it == scenario_names().end()) throw ConfigError("unknown scenario", l);
                            c.sweep.scenario = it->second;
                          }}},
      {"fig2_r_p", {"fig2 r_p grid [m]", [](C& c, V v, int l) { c.fig2_r_p = parse_list(v, l); }}},
      {"fig2_lambda_e", {"fig2 lambda_e values", [](C& c, V v, int l) { c.fig2_lambda_e = parse_list(v, l); }}},
      {"fig3_p_bs_db", {"fig3 P_BS grid [dB]", [](C& c, V v, int l) { c.fig3_p_bs_db = parse_list(v, l); }}},
      {"fig4_p_c_db", {"fig4 P_C grid [dB]", [](C& c, V v, int l) { c.fig4_p_c_db = parse_list(v, l); }}},
      {"fig4_beta", {"fig4 beta values (1 = relay)", [](C& c, V v, int l) { c.fig4_beta = parse_list(v, l); }}},
      {"corrupt_formula", {"test hook: perturb analytic values in validate",
                           [](C& c, V v, int l) { c.corrupt_formula = parse_bool(v, l); }}},
  };
  return table;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list_text(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += full_precision(values[i]);
  }
  return s;
}

sim::TrialSpec trial_spec(const ExperimentConfig& c, Scenario scenario) {
  sim::TrialSpec spec;
  spec.config = c.pair;
  spec.geometry = c.geometry;
  spec.mode = c.mode;
  spec.scenario = scenario;
  if (scenario == Scenario::kCoopNoEves) spec.geometry.lambda_e = 0.0;
  return spec;
}

// Analytic CDFs extended to the whole real line, for KS comparisons.
struct KsCheck {
  std::string name;
  sim::Quantity quantity;
  std::function<double(double)> cdf;
};

}  // namespace

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

void ExperimentConfig::validate() const {
  geometry.validate();
  pair.validate();
  mode.validate(geometry);
  require(n_trials >= 1, "config: trials must be at least 1");
  require(quadrature_order >= 1, "config: quadrature_n must be at least 1");
  require(abs_tol > 0.0, "config: abs_tol must be positive");
  require(!fig2_r_p.empty() && !fig2_lambda_e.empty() && !fig3_p_bs_db.empty() &&
              !fig4_p_c_db.empty() && !fig4_beta.empty(),
          "config: figure grids must be nonempty");
  for (double r : fig2_r_p) require(r > 0.0 && r < geometry.r_l, "config: fig2_r_p values must lie in (0, r_l)");
  for (double l : fig2_lambda_e) require(l >= 0.0, "config: fig2_lambda_e values must be >= 0");
  for (double b : fig4_beta) require(b > 0.0 && b <= 1.0, "config: fig4_beta values must lie in (0, 1]");
  if (!sweep.parameter.empty()) {
    const auto names = sweepable_parameters();
    require(std::find(names.begin(), names.end(), sweep.parameter) != names.end(),
            "config: sweep_parameter '" + sweep.parameter + "' is not a sweepable field");
    require(!sweep.values.empty(), "config: sweep_values must be nonempty");
  }
}

analytic::QuadratureConstants ExperimentConfig::constants() const {
  return analytic::QuadratureConstants::build(quadrature_order, geometry.r_l, geometry.alpha);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  ParseState state;
  int line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = key_table().find(key);
    if (it == key_table().end()) throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + std::string(key) + "'", line_no);
    it->second.set(config, value, line_no);
    if (key == "a_m_sq") state.a_m_set = true;
    if (key == "a_n_sq") state.a_n_set = true;
  }
  if (state.a_m_set && !state.a_n_set) config.pair.a_n_sq = 1.0 - config.pair.a_m_sq;
  if (state.a_n_set && !state.a_m_set) config.pair.a_m_sq = 1.0 - config.pair.a_n_sq;
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<std::pair<std::string, std::string>> config_keys() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, info] : key_table()) out.emplace_back(key, info.help);
  return out;
}

std::vector<std::string> sweepable_parameters() {
  return {"r_p", "r_l", "r_e", "alpha", "lambda_e", "a_m_sq", "p_bs", "p_c",
          "r_m", "r_n", "beta", "lambda_mn"};
}

void set_parameter(ExperimentConfig& c, const std::string& name, double v) {
  if (name == "r_p") c.geometry.r_p = v;
  else if (name == "r_l") c.geometry.r_l = v;
  else if (name == "r_e") c.geometry.r_e = v;
  else if (name == "alpha") c.geometry.alpha = v;
  else if (name == "lambda_e") c.geometry.lambda_e = v;
  else if (name == "a_m_sq") {
    c.pair.a_m_sq = v;
    c.pair.a_n_sq = 1.0 - v;
  } else if (name == "p_bs") c.pair.p_bs = v;
  else if (name == "p_c") c.pair.p_c = v;
  else if (name == "r_m") c.pair.r_m = v;
  else if (name == "r_n") c.pair.r_n = v;
  else if (name == "beta") c.pair.beta = v;
  else if (name == "lambda_mn") c.pair.lambda_mn = v;
  else throw std::invalid_argument("unknown sweep parameter '" + name + "'");
  c.validate();
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream s;
  auto kv = [&](const char* k, const std::string& v) { s << k << " = " << v << '\n'; };
  auto num = [&](const char* k, double v) { kv(k, full_precision(v)); };
  num("r_p", c.geometry.r_p);
  num("r_l", c.geometry.r_l);
  num("r_e", c.geometry.r_e);
  num("alpha", c.geometry.alpha);
  num("lambda_e", c.geometry.lambda_e);
  num("n_l", c.pair.n_l);
  num("m", c.pair.m);
  num("n", c.pair.n);
  num("a_m_sq", c.pair.a_m_sq);
  num("a_n_sq", c.pair.a_n_sq);
  num("p_bs", c.pair.p_bs);
  num("p_c", c.pair.p_c);
  num("r_m", c.pair.r_m);
  num("r_n", c.pair.r_n);
  num("beta", c.pair.beta);
  num("lambda_mn", c.pair.lambda_mn);
  kv("mode", c.mode.kind == SamplingModeKind::kAnalyticMatched ? "analytic" : "annulus");
  num("r_max", c.mode.r_max);
  num("lambda_ref", c.mode.lambda_ref);
  kv("trials", std::to_string(c.n_trials));
  kv("seed", std::to_string(c.master_seed));
  num("quadrature_n", c.quadrature_order);
  num("abs_tol", c.abs_tol);
  kv("sweep_parameter", c.sweep.parameter);
  kv("sweep_values", list_text(c.sweep.values));
  kv("sweep_db", c.sweep.in_db ? "true" : "false");
  kv("sweep_scenario", scenario_name(c.sweep.scenario));
  kv("fig2_r_p", list_text(c.fig2_r_p));
  kv("fig2_lambda_e", list_text(c.fig2_lambda_e));
  kv("fig3_p_bs_db", list_text(c.fig3_p_bs_db));
  kv("fig4_p_c_db", list_text(c.fig4_p_c_db));
  kv("fig4_beta", list_text(c.fig4_beta));
  kv("corrupt_formula", c.corrupt_formula ? "true" : "false");
  return s.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) { return fnv1a(canonical_config(config)); }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, const ExperimentConfig& config) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  out << "# secnoma " << table.command << " config_hash=" << hash << " seed=" << config.master_seed
      << " trials=" << config.n_trials << " N=" << config.quadrature_order
      << " abs_tol=" << format_number(config.abs_tol) << " mc_tolerance=max(0.02;3se) ks_tolerance=max(0.01;1.63/sqrt(n))"
      << " mode=" << (config.mode.kind == SamplingModeKind::kAnalyticMatched ? "analytic" : "annulus")
      << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::string to_csv(const Table& table, const ExperimentConfig& config) {
  std::ostringstream s;
  write_csv(s, table, config);
  return s.str();
}

void write_pretty(std::ostream& out, const Table& table) {
  std::vector<std::size_t> width(table.columns.size(), 0);
  for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = table.columns[i].size();
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
    }
    out << '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
}

// ---- commands -----------------------------------------------------------------

CommandResult cmd_validate(const ExperimentConfig& config) {
  config.validate();
  const auto q = config.constants();
  const PairConfig& p = config.pair;
  const NetworkGeometry& g = config.geometry;
  const double shift = config.corrupt_formula ? 0.1 : 0.0;
  const auto n = static_cast<double>(config.n_trials);

  CommandResult result;
  result.table.command = "validate";
  result.table.columns = {"check", "kind", "analytic", "monte_carlo", "stderr", "distance",
                          "tolerance", "pass"};
  auto& rows = result.table.rows;

  // Two-sided closeness, or a one-sided bound for lower-bound formulas.
  auto prob_row = [&](const std::string& name, const analytic::SopEstimate& a, std::uint64_t count) {
    const double mc = static_cast<double>(count) / n;
    const double se = std::sqrt(mc * (1.0 - mc) / n);
    const double value = a.value + shift;
    const double diff = std::abs(value - mc);
    bool pass;
    double tol;
    if (a.kind == analytic::SopKind::kAnalyticLowerBound) {
      tol = 3.0 * se;
      pass = value <= mc + tol;
    } else {
      tol = std::max(0.02, 3.0 * se);
      pass = diff <= tol;
    }
    if (!pass) result.exit_code = 1;
    rows.push_back({name, std::string(analytic::to_string(a.kind)), format_number(value),
                    format_number(mc), format_number(se), format_number(diff), format_number(tol),
                    pass ? "pass" : "FAIL"});
  };
  auto exact = [](double v) {
    analytic::SopEstimate e;
    e.value = v;
    return e;
  };

  const bool case1_ok = p.r_n <= p.r_m;
  const bool case2_ok = p.a_m_sq <= 1.0 / std::exp2(2.0 * p.r_n);
  const sim::TrialSpec case1 = trial_spec(config, Scenario::kCase1);
  const std::uint64_t seed = config.master_seed;

  {
    const double a = analytic::pr_strong_secrecy_outage(p, g, q, config.abs_tol);
    const auto count = sim::count_trials(config.n_trials, config.workers, [&](std::uint64_t t) {
      return !sim::case1_events(case1, seed, t).e2;
    });
    prob_row("pr_strong_secrecy_outage", exact(a), count);
  }
  {
    const double a = analytic::pr_weak_combined_outage(p, g, q, config.abs_tol);
    const auto count = sim::count_trials(config.n_trials, config.workers, [&](std::uint64_t t) {
      const auto x = sim::sample_trial_quantities(case1, seed, t);
      return 0.5 * std::log2(1.0 + x.weak_sinr + x.coop_snr) < p.r_n;
    });
    prob_row("pr_weak_combined_outage", exact(a), count);
  }
  if (case1_ok) {
    const auto a = analytic::sop_case1(p, g, q, config.abs_tol);
    const auto mc = sim::estimate_sop(case1, config.n_trials, seed, config.workers);
    prob_row("sop_case1", a, mc.outage_count);
  }
  if (case2_ok) {
    for (const auto& [name, scenario, strategy] :
         {std::tuple{"sop_weak_high_snr_relay", Scenario::kCase2Relay, CoopStrategy::kRelay},
          std::tuple{"sop_weak_high_snr_fjr", Scenario::kCase2Fjr,
                     CoopStrategy::kFriendlyJammerRelay}}) {
      if (scenario == Scenario::kCase2Fjr && p.beta == 0.0) continue;
      const auto a = analytic::sop_weak_high_snr(p, g, q, strategy, config.abs_tol);
      const auto mc = sim::estimate_sop(trial_spec(config, scenario), config.n_trials, seed,
                                        config.workers);
      prob_row(name, a, mc.outage_count);
    }
  }

  const auto s = analytic::DerivedScalars::build(g, p);
  const bool no_phase2_eves = g.lambda_e == 0.0 || p.p_c == 0.0;
  std::vector<KsCheck> checks{
      {"cdf_ordered_user_gain_snr", sim::Quantity::kStrongUserSnr,
       [&](double y) {
         return analytic::cdf_ordered_user_gain_snr(std::max(y, 0.0), p.m, p.n_l, q, p.p_bs,
                                                    p.a_m_sq);
       }},
      {"cdf_weak_user_phase1_sinr", sim::Quantity::kWeakUserSinr,
       [&](double x) { return analytic::cdf_weak_user_phase1_sinr(std::max(x, 0.0), q, p); }},
      {"cdf_eve_snr_phase1", sim::Quantity::kEveSnrPhase1,
       [&](double x) { return analytic::cdf_eve_snr_phase1_total(x, s, p.p_bs, p.a_m_sq); }},
      {"cdf_coop_link_snr", sim::Quantity::kCoopLinkSnr,
       [&](double y) { return analytic::cdf_coop_link_snr(std::max(y, 0.0), q, p); }},
      {"cdf_eve_coop_relay", sim::Quantity::kEveCoopRelaySnr,
       [&](double x) {
         if (x <= 0.0) return (x == 0.0 && no_phase2_eves) ? 1.0 : 0.0;
         return analytic::cdf_eve_coop_relay(x, s, p.p_c);
       }},
  };
  if (p.beta > 0.0) {
    checks.push_back({"cdf_eve_coop_fjr", sim::Quantity::kEveCoopFjrSinr, [&](double x) {
                        if (x <= 0.0) return (x == 0.0 && no_phase2_eves) ? 1.0 : 0.0;
                        return analytic::cdf_eve_coop_fjr(x, p.beta, s, p.p_c);
                      }});
  }
  checks.push_back({"cdf_weak_coop_fjr", sim::Quantity::kWeakCoopFjrSinr, [&](double x) {
                      return analytic::cdf_weak_coop_fjr(std::max(x, 0.0), p.beta, q, p);
                    }});

  // 1.63 / sqrt(n) is the 1% critical value of the one-sample KS statistic.
  const double ks_tolerance = std::max(0.01, 1.63 / std::sqrt(n));
  for (const KsCheck& check : checks) {
    const sim::EmpiricalCdf ecdf(
        sim::sample_quantity(case1, check.quantity, config.n_trials, seed, config.workers));
    const double d = ecdf.ks_distance([&](double x) { return std::min(1.0, check.cdf(x) + shift); });
    const bool pass = d <= ks_tolerance;
    if (!pass) result.exit_code = 1;
    rows.push_back({check.name, "ks", "", "", "", format_number(d), format_number(ks_tolerance),
                    pass ? "pass" : "FAIL"});
  }
  return result;
}

CommandResult cmd_fig2(const ExperimentConfig& config) {
  config.validate();
  if (config.pair.r_n > config.pair.r_m) {
    throw analytic::PreconditionError("fig2: requires R_n <= R_m");
  }
  CommandResult result;
  result.table.command = "fig2";
  result.table.columns = {"r_p", "lambda_e", "sop_analytic", "sop_mc", "mc_stderr"};
  ExperimentConfig point = config;
  // One reference intensity for every lambda_e keeps the eavesdroppers nested.
  point.mode.lambda_ref = std::max(
      config.mode.lambda_ref, *std::max_element(config.fig2_lambda_e.begin(), config.fig2_lambda_e.end()));
  const auto q = config.constants();
  for (double lambda : config.fig2_lambda_e) {
    for (double r_p : config.fig2_r_p) {
      point.geometry.lambda_e = lambda;
      point.geometry.r_p = r_p;
      point.validate();
      const auto a = analytic::sop_case1(point.pair, point.geometry, q, point.abs_tol);
      const auto mc = sim::estimate_sop(trial_spec(point, Scenario::kCase1), point.n_trials,
                                        point.master_seed, point.workers);
      result.table.rows.push_back({format_number(r_p), format_number(lambda), format_number(a.value),
                                   format_number(mc.estimate), format_number(mc.stderr_)});
    }
  }
  return result;
}

CommandResult cmd_fig3(const ExperimentConfig& config) {
  config.validate();
  if (config.pair.r_n > config.pair.r_m) {
    throw analytic::PreconditionError("fig3: requires R_n <= R_m");
  }
  CommandResult result;
  result.table.command = "fig3";
  result.table.columns = {"p_bs_db", "sop_sec_coop", "sop_coop_noeves", "sop_sec_noncoop"};
  ExperimentConfig point = config;
  for (double db : config.fig3_p_bs_db) {
    point.pair.p_bs = db_to_linear(db);
    point.validate();
    std::vector<std::string> row{format_number(db)};
    for (Scenario s : {Scenario::kCase1, Scenario::kCoopNoEves, Scenario::kNonCoopNoma}) {
      const auto mc = sim::estimate_sop(trial_spec(point, s), point.n_trials, point.master_seed,
                                        point.workers);
      row.push_back(format_number(mc.estimate));
    }
    result.table.rows.push_back(std::move(row));
  }
  return result;
}

CommandResult cmd_fig4(const ExperimentConfig& config) {
  config.validate();
  CommandResult result;
  result.table.command = "fig4";
  result.table.columns = {"p_c_db", "beta", "sop_n_analytic", "sop_n_mc", "mc_stderr"};
  ExperimentConfig point = config;
  const auto q = config.constants();
  for (double beta : config.fig4_beta) {
    const bool relay = beta >= 1.0;
    for (double db : config.fig4_p_c_db) {
      point.pair.p_c = db_to_linear(db);
      point.pair.beta = beta;
      point.validate();
      const auto a = analytic::sop_weak_high_snr(
          point.pair, point.geometry, q,
          relay ? CoopStrategy::kRelay : CoopStrategy::kFriendlyJammerRelay, point.abs_tol);
      const auto mc = sim::estimate_sop(
          trial_spec(point, relay ? Scenario::kCase2Relay : Scenario::kCase2Fjr), point.n_trials,
          point.master_seed, point.workers);
      result.table.rows.push_back({format_number(db), format_number(beta), format_number(a.value),
                                   format_number(mc.estimate), format_number(mc.stderr_)});
    }
  }
  return result;
}

CommandResult cmd_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.sweep.parameter.empty()) {
    throw ConfigError("sweep: set sweep_parameter and sweep_values", 0);
  }
  CommandResult result;
  result.table.command = "sweep";
  result.table.columns = {"parameter", "value", "scenario", "sop_analytic", "sop_mc", "mc_stderr"};
  const Scenario scenario = config.sweep.scenario;
  for (double v : config.sweep.values) {
    ExperimentConfig point = config;
    set_parameter(point, config.sweep.parameter, config.sweep.in_db ? db_to_linear(v) : v);
    const auto q = point.constants();
    const sim::TrialSpec spec = trial_spec(point, scenario);
    spec.validate();
    std::string analytic_text;
    switch (scenario) {
      case Scenario::kCase1:
        analytic_text = format_number(analytic::sop_case1(point.pair, point.geometry, q, point.abs_tol).value);
        break;
      case Scenario::kCoopNoEves:
        analytic_text = format_number(analytic::sop_case1(spec.config, spec.geometry, q, point.abs_tol).value);
        break;
      case Scenario::kCase2Relay:
      case Scenario::kCase2Fjr:
        analytic_text = format_number(
            analytic::sop_weak_high_snr(point.pair, point.geometry, q,
                                        scenario == Scenario::kCase2Relay
                                            ? CoopStrategy::kRelay
                                            : CoopStrategy::kFriendlyJammerRelay,
                                        point.abs_tol)
                .value);
        break;
      case Scenario::kNonCoopNoma: break;
    }
    const auto mc = sim::estimate_sop(spec, point.n_trials, point.master_seed, point.workers);
    result.table.rows.push_back({config.sweep.parameter, format_number(v), scenario_name(scenario),
                                 analytic_text, format_number(mc.estimate),
                                 format_number(mc.stderr_)});
  }
  return result;
}

}  // namespace secnoma::experiments
