#include "sparsereg/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsereg/experiments.hpp"
#include "sparsereg/numerics.hpp"
#include "sparsereg/risk.hpp"
#include "sparsereg/selection.hpp"
#include "sparsereg/solvers.hpp"

#ifndef SPARSEREG_VERSION
#define SPARSEREG_VERSION "dev"
#endif

namespace sparsereg::cli {
namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<ParamSpec> kDataParams = {
    {"input", "", "CSV with a header row; feature columns then y last. Empty: synthetic data"},
    {"n", "100", "synthetic rows"},
    {"p", "1000", "synthetic features"},
    {"k", "4", "synthetic nonzero coefficients"},
    {"rho", "0", "synthetic pairwise feature correlation"},
    {"coef", "1", "value of each nonzero coefficient"},
    {"noise", "1", "noise standard deviation"},
    {"max_steps", "0", "stop after this many path steps (0: no limit)"},
    {"epsilon", "0", "stop once the residual 2-norm falls below this (0: off)"},
};

std::vector<ParamSpec> with_data(std::vector<ParamSpec> extra) {
  std::vector<ParamSpec> out = kDataParams;
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

using Params = std::map<std::string, std::string>;

double get_double(const Params& p, const std::string& key) {
  const std::string& s = p.at(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("--" + key + ": expected a number, got '" + s + "'");
  }
}

long get_int(const Params& p, const std::string& key) {
  const double v = get_double(p, key);
  if (v != std::floor(v)) throw std::invalid_argument("--" + key + ": expected an integer");
  return static_cast<long>(v);
}

bool get_bool(const Params& p, const std::string& key) {
  const std::string& s = p.at(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("--" + key + ": expected true or false");
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stol(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument(path.string() + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().size() < 2) {
    throw std::invalid_argument(path.string() + ": need at least one feature column and y");
  }
  const auto n = static_cast<Index>(rows.size());
  const auto p = static_cast<Index>(rows.front().size()) - 1;
  Dataset d{Matrix(n, p), Vector(n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) d.X(i, j) = rows[i][j];
    d.y[i] = rows[i][p];
  }
  return d;
}

Dataset load_data(const RunConfig& c) {
  const Params& p = c.parameters;
  if (!p.at("input").empty()) return load_csv(p.at("input"));
  const SyntheticSpec spec =
      make_synthetic_spec(get_int(p, "n"), get_int(p, "p"), get_int(p, "k"), get_double(p, "rho"),
                          get_double(p, "coef"), get_double(p, "noise"), c.seed);
  return gen_synthetic(spec).train;
}

StopRule stop_rule(const Params& p) {
  StopRule rule;
  if (const long m = get_int(p, "max_steps"); m > 0) rule.max_steps = static_cast<int>(m);
  if (const double e = get_double(p, "epsilon"); e > 0.0) rule.residual_below = e;
  return rule;
}

report::Table coefficient_table(const LassoPath& path) {
  report::Table t{{"step", "index", "value"}, {}};
  for (std::size_t s = 0; s < path.steps.size(); ++s) {
    const auto& coef = path.steps[s].coefficients;
    for (const Index j : coef.support()) {
      t.add({static_cast<long long>(s), static_cast<long long>(j), coef[j]});
    }
  }
  return t;
}

struct Run {
  const RunConfig& config;
  std::ostream& out;
  std::vector<std::string> outputs;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  void table(const report::Table& t, const std::string& stem) {
    outputs.push_back(report::write_table(t, config.output_dir, stem, config.format)
                          .filename()
                          .string());
  }
  void plot(const std::vector<CurvePoint>& points, const std::string& stem,
            const std::string& title) {
    // plot data is always CSV
    const auto path = config.output_dir / (stem + ".csv");
    report::write_text(path, report::to_csv(report::curve_table(points)));
    outputs.push_back(path.filename().string());
    if (get_bool(config.parameters, "svg")) {
      const auto svg = config.output_dir / (stem + ".svg");
      report::write_text(svg, report::render_svg(points, title));
      outputs.push_back(svg.filename().string());
    }
  }
};

int run_risk_curve(Run& run) {
  const Params& p = run.config.parameters;
  const double gamma1 = get_double(p, "gamma1");
  const double gamma0 = get_bool(p, "heuristic") ? heuristic_gamma0(gamma1) : get_double(p, "gamma0");
  const std::vector<double> betas = parse_grid(p.at("betas"));
  const RiskCurve curve = risk_curve(
      ThresholdPair(gamma0, gamma1), Eigen::Map<const Eigen::ArrayXd>(betas.data(), static_cast<Index>(betas.size())));
  run.table(report::risk_curve_table(curve), "risk_curve");
  run.plot(report::plot_data(curve), "risk_curve_plot", "risk curve");
  run.summary["gamma0"] = gamma0;
  run.summary["gamma1"] = gamma1;
  return kOk;
}

int run_envelope(Run& run) {
  const Params& p = run.config.parameters;
  const std::string& dir = p.at("direction");
  EnvelopeDirection direction;
  if (dir == "l0_over_l1") direction = EnvelopeDirection::l0_over_l1;
  else if (dir == "l1_over_l0") direction = EnvelopeDirection::l1_over_l0;
  else throw std::invalid_argument("--direction must be l0_over_l1 or l1_over_l0");
  std::vector<Calibration> modes;
  const std::string& cal = p.at("calibration");
  if (cal == "zero" || cal == "both") modes.push_back(Calibration::equal_risk_at_zero);
  if (cal == "optimized" || cal == "both") modes.push_back(Calibration::infimum_optimized);
  if (modes.empty()) throw std::invalid_argument("--calibration must be zero, optimized or both");

  const std::vector<double> grid = parse_grid(p.at("grid"));
  std::vector<EnvelopePoint> points;
  int failures = 0;
  for (const Calibration mode : modes) {
    for (auto& point : envelope(direction, grid, mode)) {
      failures += point.failure.has_value();
      points.push_back(std::move(point));
    }
  }
  run.table(report::envelope_table(points), "envelope");
  run.plot(report::plot_data(points), "envelope_plot", "sup risk ratio, " + dir);
  double worst = 0.0;
  for (const auto& pt : points) {
    if (std::isfinite(pt.sup_ratio)) worst = std::max(worst, pt.sup_ratio);
  }
  run.summary["max_sup_ratio"] = worst;
  run.summary["failed_points"] = failures;
  if (failures > 0) {
    run.out << failures << " envelope point(s) failed to calibrate\n";
    return kNumerical;
  }
  return kOk;
}

int run_c1(Run& run) {
  const C1Constant c = c1_constant();
  report::Table t{{"c1", "argmin_gamma0", "abs_c1"}, {}};
  t.add({c.c1, c.argmin_gamma0, std::abs(c.c1)});
  run.table(t, "c1");
  run.summary["c1"] = c.c1;
  run.summary["argmin_gamma0"] = c.argmin_gamma0;
  run.out << "c1 = " << report::format_number(c.c1) << " at gamma0 = "
          << report::format_number(c.argmin_gamma0) << "\n";
  return kOk;
}

int run_path(Run& run, PathKind kind) {
  const Dataset d = load_data(run.config);
  const StopRule stop = stop_rule(run.config.parameters);
  const LassoPath path = kind == PathKind::lars_lasso ? lars_lasso_path(d.y, d.X, stop)
                                                      : forward_stepwise(d.y, d.X, stop);
  run.table(report::path_table(path), "path");
  run.table(coefficient_table(path), "path_coefficients");
  run.summary["steps"] = path.steps.size();
  run.summary["termination"] = to_string(path.termination);
  run.summary["design_id"] = path.design_id;
  return kOk;
}

int run_ric_select(Run& run) {
  const Params& p = run.config.parameters;
  const Dataset d = load_data(run.config);
  const LassoPath path = lars_lasso_path(d.y, d.X, stop_rule(p));
  const SelectionResult sel = select_on_path(path, d.y, d.X, get_double(p, "sigma2"));
  report::Table t{{"support_size", "rss", "penalty", "criterion", "selected", "support"}, {}};
  for (const auto& m : sel.candidates) {
    std::string support;
    for (std::size_t i = 0; i < m.support.size(); ++i) {
      support += (i ? " " : "") + std::to_string(m.support[i]);
    }
    t.add({static_cast<long long>(m.support.size()), m.rss, m.penalty, m.criterion,
           static_cast<long long>(m.support == sel.best.support), support});
  }
  run.table(t, "selection");
  run.summary["selected_support_size"] = sel.best.support.size();
  run.summary["criterion"] = sel.best.criterion;
  run.summary["warnings"] = sel.warnings;
  return kOk;
}

int run_simulate(Run& run) {
  const Params& p = run.config.parameters;
  const std::string& name = p.at("figure");
  Figure figure;
  if (name == "fig3") figure = Figure::fig3_shrinkage;
  else if (name == "fig4") figure = Figure::fig4_independent;
  else if (name == "fig5") figure = Figure::fig5_correlated;
  else throw std::invalid_argument("--figure must be fig3, fig4 or fig5");
  const FigureResult r =
      run_figure_experiment(figure, static_cast<int>(get_int(p, "trials")), run.config.seed);
  run.table(report::trials_table(r.trials), "trials");
  run.plot(r.curves, "curves", to_string(figure));
  run.summary["figure"] = to_string(figure);
  return kOk;
}

int run_npbench(Run& run) {
  const Params& p = run.config.parameters;
  std::vector<Index> sizes;
  for (const long s : parse_list(p.at("sizes"))) sizes.push_back(s);
  const std::string& mode_name = p.at("mode");
  CoverMode mode;
  if (mode_name == "all") mode = CoverMode::all_triples;
  else if (mode_name == "random") mode = CoverMode::random_p;
  else throw std::invalid_argument("--mode must be all or random");
  const auto rows = run_np_bench(sizes, mode, get_double(p, "epsilon"), run.config.seed,
                                 static_cast<int>(get_int(p, "replicates")));

  std::vector<TrialResult> trials;
  report::Table t{{"n", "p", "seed", "method", "support_size", "terminal_sse", "reached"}, {}};
  for (const auto& row : rows) {
    trials.push_back(row.result);
    t.add({static_cast<long long>(row.n), static_cast<long long>(row.p),
           std::to_string(row.result.seed), to_string(row.result.method),
           static_cast<long long>(row.result.support_size), row.result.terminal_sse,
           static_cast<long long>(row.reached)});
    run.out << "n=" << row.n << " " << to_string(row.result.method) << " "
            << row.result.support_size << " subsets (SSE "
            << report::format_number(row.result.terminal_sse) << ")\n";
  }
  run.table(report::trials_table(trials), "trials");
  run.table(t, "npbench");
  return kOk;
}

int run_mc_check(Run& run) {
  const auto rows = mc_check_grid(get_int(run.config.parameters, "draws"), run.config.seed);
  report::Table t{{"estimator", "beta", "gamma", "mc_mean", "std_error", "closed_form", "z"}, {}};
  double worst = 0.0;
  for (const auto& r : rows) {
    t.add({std::string(r.rule == ThresholdRule::hard ? "hard" : "soft"), r.beta, r.gamma,
           r.mc.mean, r.mc.std_error, r.closed_form, r.z_score});
    worst = std::max(worst, r.z_score);
  }
  run.table(t, "mc_check");
  run.summary["max_z"] = worst;
  run.summary["pass"] = worst < 4.0;
  run.out << "max |MC - closed form| / SE = " << report::format_number(worst)
          << (worst < 4.0 ? " (< 4, pass)\n" : " (>= 4, FAIL)\n");
  return worst < 4.0 ? kOk : kCheckFailed;
}

}  // namespace

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> kCommands = {
      {"risk-curve",
       "Hard and soft threshold risk over a beta grid",
       {{"gamma0", "3", "hard-threshold cutoff"},
        {"gamma1", "2", "soft-threshold cutoff"},
        {"heuristic", "false", "set gamma0 = gamma1 + 4 log(gamma1) / gamma1"},
        {"betas", "0:10:0.05", "beta grid start:stop:step or comma-separated list"},
        {"svg", "false", "also render an SVG chart"}}},
      {"envelope",
       "Worst-case risk ratio over beta along a cutoff grid",
       {{"direction", "l0_over_l1", "l0_over_l1 or l1_over_l0"},
        {"grid", "0.05:6:0.05", "free cutoff grid start:stop:step or comma-separated list"},
        {"calibration", "zero", "zero, optimized or both"},
        {"svg", "false", "also render an SVG chart"}}},
      {"c1", "Minimum of the C1 constant objective 2^2.5 e^(g^2/4)/(g^6+g^4) - g", {}},
      {"lars", "LARS-lasso path", with_data({})},
      {"stepwise", "Forward stepwise path", with_data({})},
      {"ric-select", "Modified-RIC selection along the LARS path",
       with_data({{"sigma2", "1", "noise variance in the penalty"}})},
      {"simulate",
       "Seeded simulation trials (fig3 shrinkage, fig4 independent, fig5 correlated)",
       {{"figure", "fig4", "fig3, fig4 or fig5"},
        {"trials", "20", "number of trials"},
        {"svg", "false", "also render an SVG chart"}}},
      {"npbench",
       "Exact-cover-by-3-sets benchmark, stepwise vs lasso",
       {{"sizes", "9,12,15", "comma-separated n values (multiples of 3)"},
        {"mode", "all", "all (every 3-subset) or random (p = 10 n)"},
        {"epsilon", "0.25", "residual 2-norm target"},
        {"replicates", "1", "instances per size"}}},
      {"mc-check",
       "Monte Carlo check of the closed-form risks",
       {{"draws", "200000", "draws per grid point"}}},
  };
  return kCommands;
}

std::vector<double> parse_grid(const std::string& text) {
  const bool range = text.find(':') != std::string::npos;
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, range ? ':' : ',')) {
    std::size_t used = 0;
    try {
      parts.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) {
      throw std::invalid_argument("grid '" + text + "': expected start:stop:step or a comma-separated list");
    }
  }
  if (!range) {
    if (parts.empty()) throw std::invalid_argument("grid: empty list");
    return parts;
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw std::invalid_argument("grid '" + text + "': expected start:stop:step with step > 0");
  }
  const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = parts[0] + i * parts[2];
  return grid;
}

RunConfig resolve(RunConfig config) {
  const CommandSpec* spec = nullptr;
  for (const auto& c : commands()) {
    if (c.name == config.command) spec = &c;
  }
  if (!spec) throw std::invalid_argument("unknown command '" + config.command + "'");
  for (const auto& [key, value] : config.parameters) {
    bool known = false;
    for (const auto& ps : spec->params) known = known || ps.name == key;
    if (!known) throw std::invalid_argument(config.command + ": unknown parameter '" + key + "'");
  }
  for (const auto& ps : spec->params) config.parameters.try_emplace(ps.name, ps.default_value);
  return config;
}

int dispatch(const RunConfig& requested, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  RunConfig config;
  try {
    config = resolve(requested);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  Run run{config, out, {}, {}};
  int status = kOk;
  try {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());
    const std::string& c = config.command;
    if (c == "risk-curve") status = run_risk_curve(run);
    else if (c == "envelope") status = run_envelope(run);
    else if (c == "c1") status = run_c1(run);
    else if (c == "lars") status = run_path(run, PathKind::lars_lasso);
    else if (c == "stepwise") status = run_path(run, PathKind::forward_stepwise);
    else if (c == "ric-select") status = run_ric_select(run);
    else if (c == "simulate") status = run_simulate(run);
    else if (c == "npbench") status = run_npbench(run);
    else if (c == "mc-check") status = run_mc_check(run);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const RankDeficientError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  nlohmann::ordered_json manifest;
  manifest["command"] = config.command;
  manifest["parameters"] = config.parameters;
  manifest["seed"] = config.seed;
  manifest["output_dir"] = config.output_dir.string();
  manifest["format"] = config.format == report::Format::csv ? "csv" : "json";
  manifest["version"] = SPARSEREG_VERSION;
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  manifest["outputs"] = run.outputs;
  manifest["summary"] = run.summary;
  manifest["exit_status"] = status;
  try {
    report::write_text(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  }
  return status;
}

ParseOutcome parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                std::ostream& err) {
  CLI::App app{"Sparse regression with l0 and l1 penalties: risk envelopes, paths, benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string output_dir = ".";
  std::string format = "csv";
  app.add_option("--seed", config.seed, "master seed")->capture_default_str();
  app.add_option("--output-dir", output_dir, "directory for results and manifest.json")
      ->envname("SPARSEREG_OUTPUT_DIR")
      ->capture_default_str();
  app.add_option("--format", format, "table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& spec : commands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    for (const auto& ps : spec.params) {
      std::string& slot = values[spec.name][ps.name];
      slot = ps.default_value;
      // keys use underscores internally, dashes on the command line
      std::string flag = ps.name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      sub->add_option("--" + flag, slot, ps.help)->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kOk : kUsage};
  }
  for (const CLI::App* sub : app.get_subcommands()) config.command = sub->get_name();
  config.parameters = values[config.command];
  config.output_dir = output_dir;
  config.format = format == "json" ? report::Format::json : report::Format::csv;
  return {config, kOk};
}

}  // namespace sparsereg::cli
