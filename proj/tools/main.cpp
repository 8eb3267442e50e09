#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "acceptance.hpp"
#include "degldp/error.hpp"
#include "degldp/graph_combinatorics.hpp"
#include "degldp/measure.hpp"
#include "degldp/sampler.hpp"
#include "degldp/sparse_penalty.hpp"
#include "degldp/statistic.hpp"
#include "degldp/tilted_family.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

// A flag combination CLI11 cannot express; reported like a parse error.
class UsageError : public std::runtime_error {
 public:
  UsageError(const CLI::App* app, const std::string& what)
      : std::runtime_error(what), app_(app) {}
  const CLI::App* app() const { return app_; }

 private:
  const CLI::App* app_;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json number_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

// Statistic selection shared by solve-j, partition and simulate.
struct StatisticFlags {
  std::string kind = "zero";
  std::optional<double> gamma;
  std::optional<double> e_gamma;
  std::optional<double> c;
  std::optional<double> lambda;
  int k = 2;
  std::vector<double> table;
};

void add_statistic_flags(CLI::App* app, StatisticFlags& s) {
  app->add_option("--statistic", s.kind, "Degree statistic f")
      ->check(CLI::IsMember({"zero", "linear", "kstar", "gwd", "alt-kstar",
                             "penalty", "custom"}))
      ->capture_default_str();
  app->add_option("--gamma", s.gamma, "Coefficient gamma");
  app->add_option("--e-gamma", s.e_gamma, "e^gamma (penalty only)")
      ->check(CLI::PositiveNumber);
  app->add_option("--c", s.c, "Slope of the linear statistic");
  app->add_option("--k", s.k, "Star size for kstar")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  app->add_option("--lambda", s.lambda,
                  "Decay for gwd (lambda > 0) or alt-kstar (0 < lambda < 1)")
      ->check(CLI::PositiveNumber);
  app->add_option("--table", s.table,
                  "Custom values f(0),f(1),... with f(0) = 0")
      ->delimiter(',');
}

degldp::DegreeStatistic build_statistic(const CLI::App* app,
                                        const StatisticFlags& s) {
  auto need = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError(app, "--statistic " + s.kind + " needs " + flag);
    return *v;
  };
  auto gamma = [&] {
    if (s.gamma && s.e_gamma) {
      throw UsageError(app, "give --gamma or --e-gamma, not both");
    }
    if (s.e_gamma) {
      if (s.kind != "penalty") {
        throw UsageError(app, "--e-gamma applies to the penalty statistic");
      }
      return std::log(*s.e_gamma);
    }
    return need(s.gamma, "--gamma");
  };
  if (s.kind == "zero") return degldp::zero_statistic();
  if (s.kind == "linear") return degldp::linear_statistic(need(s.c, "--c"));
  if (s.kind == "kstar") return degldp::kstar_statistic(s.k, gamma());
  if (s.kind == "gwd") {
    return degldp::gwd_statistic(need(s.lambda, "--lambda"), gamma());
  }
  if (s.kind == "alt-kstar") {
    const double lambda = need(s.lambda, "--lambda");
    if (!(lambda < 1.0)) {
      throw UsageError(app, "alt-kstar needs 0 < --lambda < 1");
    }
    return degldp::alt_kstar_statistic(lambda, gamma());
  }
  if (s.kind == "penalty") return degldp::penalty_statistic(gamma());
  if (s.table.empty() || s.table.front() != 0.0) {
    throw UsageError(app, "--statistic custom needs --table starting with 0");
  }
  return degldp::custom_statistic(s.table);
}

// Penalty model from --beta and exactly one of --gamma / --e-gamma.
struct PenaltyFlags {
  double beta = 1.0;
  std::optional<double> gamma;
  std::optional<double> e_gamma;
};

void add_penalty_flags(CLI::App* app, PenaltyFlags& p, bool beta_required) {
  auto* beta = app->add_option("--beta", p.beta, "Mean degree beta")
                   ->check(CLI::PositiveNumber);
  if (beta_required) beta->required();
  app->add_option("--gamma", p.gamma, "Penalty coefficient gamma");
  app->add_option("--e-gamma", p.e_gamma, "e^gamma")
      ->check(CLI::PositiveNumber);
}

degldp::PenaltyModel build_penalty(const CLI::App* app, const PenaltyFlags& p) {
  if (p.gamma.has_value() == p.e_gamma.has_value()) {
    throw UsageError(app, "give exactly one of --gamma and --e-gamma");
  }
  return p.e_gamma ? degldp::PenaltyModel::from_e_gamma(p.beta, *p.e_gamma)
                   : degldp::PenaltyModel{p.beta, *p.gamma};
}

json roots_json(const std::vector<double>& xs) { return json(xs); }

// Reads `key = value` lines ('#' starts a comment) and rewrites them as
// flags of the selected subcommand, placed before the user's own flags so
// the command line wins.
std::vector<std::string> apply_config(CLI::App& app,
                                      std::vector<std::string> args) {
  auto it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return a == "--config" || a.starts_with("--config=");
  });
  if (it == args.end()) return args;
  std::string path;
  if (*it == "--config") {
    if (std::next(it) == args.end()) {
      throw UsageError(&app, "--config needs a file");
    }
    path = *std::next(it);
    args.erase(it, std::next(it, 2));
  } else {
    path = it->substr(std::string("--config=").size());
    args.erase(it);
  }

  auto sub_it = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
    return !a.starts_with("-") && app.get_subcommand_no_throw(a) != nullptr;
  });
  if (sub_it == args.end()) {
    throw UsageError(&app, "--config needs a subcommand");
  }
  CLI::App* sub = app.get_subcommand(*sub_it);

  std::ifstream in(path);
  if (!in) throw UsageError(sub, "cannot read config file " + path);
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(sub, path + ":" + std::to_string(line_no) +
                                ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) {
      throw UsageError(sub, path + ": unknown key '" + key + "' for " +
                                sub->get_name());
    }
    const bool on_command_line =
        std::any_of(sub_it, args.end(), [&](const std::string& a) {
          return a == flag || a.starts_with(flag + "=");
        });
    if (on_command_line) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") injected.push_back(flag);
    } else {
      injected.push_back(flag + "=" + value);
    }
  }
  args.insert(std::next(sub_it), injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Large-deviation rates, variational problems and oracles for the degree "
      "distribution of sparse random graphs",
      "degldp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.add_option("--config", "File of key=value defaults for the subcommand")
      ->type_name("FILE");

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed")
        ->envname("DEGLDP_SEED")
        ->capture_default_str();
  };
  std::string format = "json";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };

  std::function<int()> action;

  // rate
  auto* rate = app.add_subcommand("rate", "Rate function I(mu) of a measure");
  double rate_beta = 1.0;
  std::string rate_file;
  std::optional<double> rate_poisson;
  std::vector<double> rate_weights;
  rate->add_option("--beta", rate_beta, "Mean degree beta")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* rate_src_file =
      rate->add_option("--measure", rate_file, "CSV measure with header i,weight")
          ->check(CLI::ExistingFile);
  auto* rate_src_poisson =
      rate->add_option("--poisson", rate_poisson, "Poisson(theta) measure")
          ->check(CLI::PositiveNumber);
  auto* rate_src_weights =
      rate->add_option("--weights", rate_weights, "Weights mu_0,mu_1,...")
          ->delimiter(',');
  rate_src_file->excludes(rate_src_poisson)->excludes(rate_src_weights);
  rate_src_poisson->excludes(rate_src_weights);
  add_format(rate);
  rate->callback([&] {
    action = [&]() -> int {
      degldp::SparseMeasure mu = degldp::SparseMeasure::point_mass(0);
      if (!rate_file.empty()) {
        std::ifstream in(rate_file);
        mu = degldp::read_csv(in);
      } else if (rate_poisson) {
        mu = degldp::poisson_measure(*rate_poisson);
      } else if (!rate_weights.empty()) {
        mu = degldp::SparseMeasure(rate_weights);
      } else {
        throw UsageError(rate, "give one of --measure, --poisson, --weights");
      }
      const double value = degldp::rate_I(mu, rate_beta);
      const double divergence = degldp::rate_I_divergence_form(mu, rate_beta);
      if (format == "csv") {
        std::cout.precision(17);
        std::cout << "beta,mean,rate,rate_divergence_form\n"
                  << rate_beta << ',' << degldp::mean(mu) << ',' << value
                  << ',' << divergence << '\n';
      } else {
        emit({{"beta", rate_beta},
              {"mean", degldp::mean(mu)},
              {"rate", number_or_null(value)},
              {"rate_divergence_form", number_or_null(divergence)}});
      }
      return 0;
    };
  });

  // solve-j
  auto* solve = app.add_subcommand(
      "solve-j", "Minimize I(mu) - mu(f) over the tilted family");
  StatisticFlags solve_stat;
  double solve_beta = 1.0;
  degldp::SolveOptions solve_opts;
  std::string solve_sigma;
  add_statistic_flags(solve, solve_stat);
  solve->add_option("--beta", solve_beta, "Mean degree beta")
      ->required()
      ->check(CLI::PositiveNumber);
  solve->add_option("--grid-points", solve_opts.grid_points,
                    "Scan grid size")
      ->check(CLI::Range(16, 10'000'000))
      ->capture_default_str();
  solve->add_option("--theta-max", solve_opts.theta_max_start,
                    "Initial scan bound (0 picks 4*beta+8)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--sigma", solve_sigma,
                    "Write the minimizing measure as CSV to this file");
  add_format(solve);
  solve->callback([&] {
    action = [&]() -> int {
      const degldp::DegreeStatistic f = build_statistic(solve, solve_stat);
      degldp::VariationalSolution sol;
      try {
        sol = degldp::solve_J(f, solve_beta, solve_opts);
      } catch (const degldp::DegenerateStatistic& e) {
        sol.statistic_label = f.label();
        sol.beta = solve_beta;
        sol.j_value = -std::numeric_limits<double>::infinity();
        sol.degenerate = true;
        std::cout << degldp::to_json(sol) << '\n';
        std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
        return kExitComputation;
      }
      if (format == "csv") {
        std::cout.precision(17);
        std::cout << "theta,value,residual\n";
        for (const auto& m : sol.minimizers) {
          std::cout << m.theta << ',' << m.value << ','
                    << m.stationarity_residual << '\n';
        }
      } else {
        std::cout << degldp::to_json(sol) << '\n';
      }
      if (!solve_sigma.empty() && !sol.minimizers.empty()) {
        auto out = open_output(solve_sigma);
        degldp::write_csv(out, degldp::tilt(sol.minimizers.front().theta, f)
                                   .measure);
      }
      return 0;
    };
  });

  // penalty-curve
  auto* curve = app.add_subcommand(
      "penalty-curve", "Objective H(theta) of the sparse-penalty model as CSV");
  PenaltyFlags curve_model;
  double curve_min = 0.0;
  double curve_max = 10.0;
  std::size_t curve_points = 2048;
  add_penalty_flags(curve, curve_model, true);
  curve->add_option("--theta-min", curve_min, "Left end of the curve")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  curve->add_option("--theta-max", curve_max, "Right end of the curve")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  curve->add_option("--points", curve_points, "Number of rows")
      ->check(CLI::Range(2, 10'000'000))
      ->capture_default_str();
  curve->callback([&] {
    action = [&]() -> int {
      if (!(curve_max > curve_min)) {
        throw UsageError(curve, "--theta-max must exceed --theta-min");
      }
      const auto model = build_penalty(curve, curve_model);
      degldp::write_curve_csv(
          std::cout,
          degldp::penalty_curve(model, curve_min, curve_max, curve_points));
      return 0;
    };
  });

  // penalty-phase
  auto* phase = app.add_subcommand(
      "penalty-phase",
      "Phase classification: one point as JSON, or a (beta, e^gamma) grid as "
      "CSV");
  degldp::PhaseScanRange range;
  std::optional<double> phase_beta;
  std::optional<double> phase_e_gamma;
  unsigned phase_threads = 0;
  phase->add_option("--beta", phase_beta, "Single point: beta")
      ->check(CLI::PositiveNumber);
  phase->add_option("--e-gamma", phase_e_gamma, "Single point: e^gamma")
      ->check(CLI::PositiveNumber);
  phase->add_option("--beta-min", range.beta_min)->check(CLI::PositiveNumber)
      ->capture_default_str();
  phase->add_option("--beta-max", range.beta_max)->check(CLI::PositiveNumber)
      ->capture_default_str();
  phase->add_option("--e-gamma-min", range.e_gamma_min)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  phase->add_option("--e-gamma-max", range.e_gamma_max)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  phase->add_option("--beta-steps", range.beta_steps)
      ->check(CLI::Range(1, 100'000))
      ->capture_default_str();
  phase->add_option("--e-gamma-steps", range.e_gamma_steps)
      ->check(CLI::Range(1, 100'000))
      ->capture_default_str();
  phase->add_option("--tie-tol", range.tie_tol,
                    "Relative tolerance for equal global minima")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  phase->add_option("--threads", phase_threads, "Worker threads (0 = all)");
  phase->callback([&] {
    action = [&]() -> int {
      if (phase_beta.has_value() != phase_e_gamma.has_value()) {
        throw UsageError(phase, "a single point needs --beta and --e-gamma");
      }
      if (phase_beta) {
        const auto model =
            degldp::PenaltyModel::from_e_gamma(*phase_beta, *phase_e_gamma);
        const auto c = degldp::classify_phase(model, range.tie_tol);
        json h_values = json::array();
        for (double r : c.roots) h_values.push_back(degldp::objective_H(r, model));
        emit({{"beta", model.beta},
              {"e_gamma", *phase_e_gamma},
              {"regime", std::string(degldp::to_string(c.regime))},
              {"roots", roots_json(c.roots)},
              {"H_at_roots", h_values},
              {"local_minima", roots_json(c.local_minima)},
              {"global_minima", roots_json(c.global_minima)},
              {"minima_gap", c.minima_gap},
              {"tangency", c.tangency}});
        return 0;
      }
      if (!(range.beta_max >= range.beta_min) ||
          !(range.e_gamma_max >= range.e_gamma_min)) {
        throw UsageError(phase, "grid maxima must not be below minima");
      }
      degldp::write_phase_csv(std::cout, degldp::phase_scan(range, phase_threads));
      return 0;
    };
  });

  // graphical
  auto* graphical = app.add_subcommand(
      "graphical",
      "Erdos-Gallai test of a degree sequence, or a graphical frequency "
      "vector for a target distribution");
  std::vector<long long> sequence;
  std::vector<double> target;
  int target_n = 0;
  auto* seq_opt = graphical->add_option("--sequence", sequence,
                                        "Degrees, any order")
                      ->delimiter(',');
  auto* target_opt =
      graphical->add_option("--target", target, "Target y_0,y_1,...,y_M")
          ->delimiter(',');
  auto* target_n_opt =
      graphical->add_option("--n", target_n, "Vertices for --target")
          ->check(CLI::PositiveNumber);
  seq_opt->excludes(target_opt);
  target_opt->needs(target_n_opt);
  graphical->callback([&] {
    action = [&]() -> int {
      if (!target.empty()) {
        const auto h = degldp::frequency_from_target(target, target_n);
        bool graphical_ok = degldp::erdos_gallai_check(degldp::to_sequence(h));
        emit({{"n", target_n},
              {"h_vector", std::vector<std::int64_t>(h.counts().begin(),
                                                     h.counts().end())},
              {"edges", h.edges()},
              {"graphical", graphical_ok}});
        return 0;
      }
      if (sequence.empty()) {
        throw UsageError(graphical, "give --sequence or --target with --n");
      }
      const auto n = static_cast<long long>(sequence.size());
      bool in_range = true;
      for (long long d : sequence) {
        if (d < 0) throw UsageError(graphical, "degrees must be non-negative");
        in_range = in_range && d <= n - 1;
      }
      bool ok = false;
      if (in_range) {
        std::vector<int> sorted(sequence.begin(), sequence.end());
        std::sort(sorted.rbegin(), sorted.rend());
        ok = degldp::erdos_gallai_check(degldp::DegreeSequence(sorted));
      }
      std::cout << (ok ? "graphical" : "not graphical") << '\n';
      return 0;
    };
  });

  // enumerate
  auto* enumerate = app.add_subcommand(
      "enumerate", "Exact degree-frequency distribution of G(n, beta/n)");
  int enum_n = 4;
  double enum_beta = 1.0;
  degldp::EnumerationOptions enum_opts;
  enumerate->add_option("--n", enum_n, "Vertices")
      ->required()
      ->check(CLI::Range(1, 64));
  enumerate->add_option("--beta", enum_beta, "Mean degree beta")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  enumerate->add_flag("--allow-n8", enum_opts.allow_n8,
                      "Permit n = 8 (2^28 graphs)");
  enumerate->add_option("--threads", enum_opts.threads, "Worker threads (0 = all)");
  enumerate->callback([&] {
    action = [&]() -> int {
      degldp::write_enumeration_csv(
          std::cout, degldp::enumerate_frequencies(enum_n, enum_beta, enum_opts));
      return 0;
    };
  });

  // partition
  auto* partition = app.add_subcommand(
      "partition", "log Z_n by exact enumeration and/or importance sampling");
  StatisticFlags part_stat;
  int part_n = 6;
  double part_beta = 1.0;
  std::string part_method = "auto";
  std::size_t part_samples = 1'000'000;
  add_statistic_flags(partition, part_stat);
  partition->add_option("--n", part_n, "Vertices")
      ->required()
      ->check(CLI::Range(2, 100'000));
  partition->add_option("--beta", part_beta, "Mean degree beta")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  partition->add_option("--method", part_method,
                        "exact, importance, both, or auto (both when n <= 7)")
      ->check(CLI::IsMember({"auto", "exact", "importance", "both"}))
      ->capture_default_str();
  partition->add_option("--samples", part_samples, "Importance samples")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1'000'000'000}))
      ->capture_default_str();
  add_seed(partition);
  add_format(partition);
  partition->callback([&] {
    action = [&]() -> int {
      const degldp::DegreeStatistic f = build_statistic(partition, part_stat);
      std::string method = part_method;
      if (method == "auto") {
        method = part_n <= degldp::kMaxEnumerationN ? "both" : "importance";
      }
      double exact = std::numeric_limits<double>::quiet_NaN();
      degldp::PartitionEstimate est{std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()};
      if (method != "importance") {
        exact = degldp::exact_log_partition(part_n, part_beta, f);
      }
      if (method != "exact") {
        est = degldp::estimate_log_partition(part_n, part_beta, f,
                                             part_samples, seed);
      }
      const double z = std::abs(est.estimate - exact) / est.std_error;
      if (format == "csv") {
        std::cout.precision(17);
        std::cout << "n,beta,statistic,exact,estimate,std_error\n"
                  << part_n << ',' << part_beta << ",\"" << f.label() << "\","
                  << exact << ',' << est.estimate << ',' << est.std_error
                  << '\n';
      } else {
        emit({{"n", part_n},
              {"beta", part_beta},
              {"statistic_label", f.label()},
              {"exact", number_or_null(exact)},
              {"estimate", number_or_null(est.estimate)},
              {"std_error", number_or_null(est.std_error)},
              {"z_score", number_or_null(z)}});
      }
      return 0;
    };
  });

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Metropolis edge-flip chains for the degree ERGM");
  StatisticFlags sim_stat;
  degldp::ChainConfig sim;
  int sim_sweeps = 1000;
  std::string sim_trace;
  add_statistic_flags(simulate, sim_stat);
  simulate->add_option("--n", sim.n, "Vertices")
      ->check(CLI::Range(2, 1'000'000))
      ->capture_default_str();
  simulate->add_option("--beta", sim.beta, "Mean degree beta")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--sweeps", sim_sweeps,
                       "Sweeps after burn-in; one sample every --thin sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--burn-in", sim.burn_in, "Burn-in sweeps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--thin", sim.thin, "Sweeps between samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--chains", sim.chains, "Independent chains")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--trace", sim_trace,
                       "Write the first chain's trace as CSV to this file");
  add_seed(simulate);
  simulate->callback([&] {
    action = [&]() -> int {
      if (sim_sweeps < sim.thin) {
        throw UsageError(simulate, "--sweeps must be at least --thin");
      }
      sim.statistic = build_statistic(simulate, sim_stat);
      sim.samples = sim_sweeps / sim.thin;
      sim.seed = seed;
      sim.record_trace = !sim_trace.empty();
      std::vector<degldp::SparseMeasure> predictions;
      if (!sim.statistic.superlinear()) {
        for (const auto& m : degldp::solve_J(sim.statistic, sim.beta).minimizers) {
          predictions.push_back(degldp::tilt(m.theta, sim.statistic).measure);
        }
      }
      const degldp::SampleSummary summary = degldp::mcmc_run(sim, predictions);
      std::cout << degldp::to_json(summary) << '\n';
      if (!sim_trace.empty()) {
        auto out = open_output(sim_trace);
        degldp::write_trace_csv(out, summary.trace);
      }
      return 0;
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  degldp::acceptance::Options verify_opts;
  bool verify_quick = false;
  std::vector<int> verify_only;
  verify->add_flag("--quick", verify_quick,
                   "Stated sizes only; skip the enlarged property draws");
  verify->add_option("--only", verify_only, "Criterion numbers to run")
      ->delimiter(',')
      ->check(CLI::Range(1, 13));
  verify->add_option("--seed", verify_opts.seed, "RNG seed")
      ->envname("DEGLDP_SEED")
      ->capture_default_str();
  verify->callback([&] {
    action = [&]() -> int {
      verify_opts.quick = verify_quick;
      return degldp::acceptance::run_all(verify_opts, std::cout, verify_only)
                 ? 0
                 : kExitComputation;
    };
  });

  auto usage_failure = [&](const CLI::App* where, const std::string& what) {
    std::cerr << "error: " << what << "\n\n"
              << (where ? where->help() : app.help());
    return kExitUsage;
  };

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const CLI::App* where = nullptr;
    for (const CLI::App* sub : app.get_subcommands()) where = sub;
    return usage_failure(where, e.what());
  } catch (const UsageError& e) {
    return usage_failure(e.app(), e.what());
  }

  try {
    return action();
  } catch (const UsageError& e) {
    return usage_failure(e.app(), e.what());
  } catch (const degldp::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}
