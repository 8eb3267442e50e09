#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "degldp/error.hpp"
#include "degldp/graph_combinatorics.hpp"
#include "degldp/measure.hpp"
#include "degldp/rng.hpp"
#include "degldp/sampler.hpp"
#include "degldp/sparse_penalty.hpp"
#include "degldp/statistic.hpp"
#include "degldp/tilted_family.hpp"

namespace degldp::acceptance {
namespace {

std::string num(double x, int precision = 3) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

CriterionResult verdict(bool passed, std::string detail) {
  CriterionResult r;
  r.passed = passed;
  r.detail = std::move(detail);
  return r;
}

// Independent brute force over all 2^C(n,2) labelled graphs.
struct BruteForce {
  std::set<std::vector<int>> realizable;  // non-increasing degree sequences
  std::map<std::vector<std::int64_t>, std::uint64_t> counts;
  std::map<std::vector<std::int64_t>, double> probability;
};

BruteForce brute_force(int n, double beta) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const double p = beta / n;
  const auto total = static_cast<int>(pairs.size());
  BruteForce out;
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
    std::fill(deg.begin(), deg.end(), 0);
    int edges = 0;
    for (int k = 0; k < total; ++k) {
      if ((mask >> k) & 1U) {
        ++deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(k)].first)];
        ++deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(k)].second)];
        ++edges;
      }
    }
    std::vector<std::int64_t> h(static_cast<std::size_t>(n), 0);
    for (int d : deg) ++h[static_cast<std::size_t>(d)];
    std::vector<int> sorted = deg;
    std::sort(sorted.rbegin(), sorted.rend());
    out.realizable.insert(std::move(sorted));
    ++out.counts[h];
    out.probability[h] +=
        std::pow(p, edges) * std::pow(1.0 - p, total - edges);
  }
  return out;
}

void non_increasing_sequences(int n, int cap, std::vector<int>& prefix,
                              std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == n) {
    out.push_back(prefix);
    return;
  }
  for (int d = cap; d >= 0; --d) {
    prefix.push_back(d);
    non_increasing_sequences(n, d, prefix, out);
    prefix.pop_back();
  }
}

double total_variation(const std::vector<double>& a,
                       const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform());
}

CriterionResult rate_function_zero(const Options&) {
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0, 6.5}) {
    worst = std::max(worst, std::abs(rate_I(poisson_measure(beta), beta)));
  }
  return verdict(worst <= 1e-8, "max |I(p_beta)| = " + num(worst));
}

CriterionResult poisson_section(const Options&) {
  double worst = 0.0;
  for (double theta : {0.2, 0.9, 1.7, 3.0, 5.5}) {
    for (double beta : {0.5, 1.0, 2.5, 6.5}) {
      const double closed = 0.5 * (beta - theta + theta * std::log(theta) -
                                   theta * std::log(beta));
      worst = std::max(
          worst, std::abs(rate_I(poisson_measure(theta), beta) - closed));
    }
  }
  return verdict(worst <= 1e-8, "20 points, max error " + num(worst));
}

CriterionResult stationarity(const Options&) {
  struct Case {
    DegreeStatistic f;
    std::vector<double> betas;
  };
  const std::vector<double> betas{0.5, 1.0, 2.0};
  std::vector<Case> cases{
      {zero_statistic(), betas},
      {kstar_statistic(2, -0.5), betas},
      {kstar_statistic(2, -1.0), betas},
      {kstar_statistic(2, -2.0), betas},
      {alt_kstar_statistic(0.5, -1.0), betas},
      {alt_kstar_statistic(0.5, 1.0), betas},
      {penalty_statistic(std::log(0.5)), {1.2}},
      {penalty_statistic(std::log(0.04)), {6.5}},
      {penalty_statistic(std::log(0.05)), {5.89}},
  };
  for (double lambda : {0.5, 1.0}) {
    for (double gamma : {-2.0, 2.0}) {
      cases.push_back({gwd_statistic(lambda, gamma), betas});
    }
  }
  double worst = 0.0;
  std::size_t checked = 0;
  std::string failure;
  for (const Case& c : cases) {
    for (double beta : c.betas) {
      const VariationalSolution sol = solve_J(c.f, beta);
      if (sol.minimizers.empty()) failure = c.f.label() + " has no minimizer";
      for (const auto* list : {&sol.minimizers, &sol.local_minima}) {
        for (const Minimizer& m : *list) {
          const double r = std::abs(stationarity_residual(m.theta, c.f, beta));
          worst = std::max(worst, r);
          ++checked;
        }
      }
    }
  }
  const bool ok = failure.empty() && worst <= 1e-6;
  return verdict(ok, failure.empty()
                         ? std::to_string(checked) +
                               " minimizers, max residual " + num(worst)
                         : failure);
}

CriterionResult closed_form_vs_series(const Options&) {
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double theta = 0.6 * i - 0.35;
    for (int j = 0; j < 20; ++j) {
      const double gamma = -5.0 + 6.5 * j / 19.0;
      const DegreeStatistic f = penalty_statistic(gamma);
      worst = std::max(worst, std::abs(penalty_normalizer(theta, gamma) -
                                       log_normalizer(theta, f)));
      worst = std::max(worst, std::abs(penalty_mean(theta, gamma) -
                                       tilted_mean(theta, f)));
    }
  }
  return verdict(worst <= 1e-10, "400 points, max error " + num(worst));
}

CriterionResult figure_regimes(const Options&) {
  const auto fig1 = classify_phase(PenaltyModel::from_e_gamma(1.2, 0.5));
  const auto fig2_model = PenaltyModel::from_e_gamma(6.5, 0.04);
  const auto fig2 = classify_phase(fig2_model);
  const auto fig3_model = PenaltyModel::from_e_gamma(5.89, 0.05);
  const auto fig3 = classify_phase(fig3_model);
  const bool ok1 = fig1.regime == Regime::kUniqueMin;
  const bool ok2 = fig2.regime == Regime::kThreeRootsUniqueGlobal;
  double gap = std::numeric_limits<double>::infinity();
  if (fig3.local_minima.size() == 2) {
    gap = std::abs(objective_H(fig3.local_minima[0], fig3_model) -
                   objective_H(fig3.local_minima[1], fig3_model));
  }
  const bool ok3 = gap <= 0.05;
  return verdict(ok1 && ok2 && ok3,
                 std::string(to_string(fig1.regime)) + ", " +
                     std::string(to_string(fig2.regime)) + ", " +
                     std::to_string(fig3.local_minima.size()) +
                     " local minima with |H gap| " + num(gap));
}

CriterionResult unique_fixed_point(const Options& opts) {
  const int draws = opts.quick ? 10'000 : 100'000;
  Rng rng(opts.seed, 6);
  int bad = 0;
  std::string example;
  for (int k = 0; k < draws; ++k) {
    double a = 0.0;
    double b = 0.0;
    if (k % 2 == 0) {
      a = log_uniform(rng, 0.01, 60.0);
      b = log_uniform(rng, 1.0 + 1e-9, 50.0);
    } else {
      a = 0.01 + 3.98 * rng.uniform();
      b = log_uniform(rng, 1e-5, 50.0);
    }
    const auto fp = find_fixed_points(PenaltyModel::from_e_gamma(a, b));
    if (fp.roots.size() != 1) {
      if (bad++ == 0) example = " (first at a=" + num(a, 17) + ", b=" + num(b, 17) + ")";
    }
  }
  return verdict(bad == 0, std::to_string(draws) + " draws, " +
                               std::to_string(bad) + " without a unique root" +
                               example);
}

CriterionResult counting_bounds(const Options&) {
  double worst_mckay = -std::numeric_limits<double>::infinity();
  double worst_nbar = -std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (int n : {4, 5, 6}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      const BruteForce bf = brute_force(n, beta);
      for (const auto& [key, count] : bf.counts) {
        const DegreeFrequency h(n, key);
        worst_mckay = std::max(
            worst_mckay, std::log(static_cast<double>(count)) - log_mckay_upper(h));
        worst_nbar = std::max(worst_nbar, std::log(bf.probability.at(key)) -
                                              log_nbar(h, beta));
        ++checked;
      }
    }
  }
  const bool ok = worst_mckay <= 1e-9 && worst_nbar <= 1e-9;
  return verdict(ok, std::to_string(checked) +
                         " frequencies, max log(count/bound) " +
                         num(worst_mckay) + ", max log(P/Nbar) " +
                         num(worst_nbar));
}

CriterionResult erdos_gallai(const Options&) {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  for (int n = 1; n <= 6; ++n) {
    const BruteForce bf = brute_force(n, 0.5);
    std::vector<std::vector<int>> candidates;
    std::vector<int> prefix;
    non_increasing_sequences(n, n - 1, prefix, candidates);
    for (const auto& seq : candidates) {
      const bool criterion = erdos_gallai_check(DegreeSequence(seq));
      if (criterion != (bf.realizable.count(seq) > 0)) ++mismatches;
      ++checked;
    }
  }
  return verdict(mismatches == 0, std::to_string(checked) + " sequences, " +
                                      std::to_string(mismatches) +
                                      " mismatches");
}

CriterionResult partition_oracle(const Options& opts) {
  const std::vector<DegreeStatistic> stats{penalty_statistic(std::log(0.5)),
                                           kstar_statistic(2, -1.0),
                                           gwd_statistic(1.0, 2.0)};
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 0;
  for (const DegreeStatistic& f : stats) {
    const double exact = exact_log_partition(6, 1.0, f);
    const PartitionEstimate est =
        estimate_log_partition(6, 1.0, f, 1'000'000, mix_seed(opts.seed, 9 + stream++));
    const double z = std::abs(est.estimate - exact) / est.std_error;
    ok = ok && z <= 3.0;
    if (!detail.empty()) detail += ", ";
    detail += f.label() + " " + num(z) + " SE";
  }
  return verdict(ok, detail);
}

CriterionResult degeneracy_trend(const Options&) {
  const DegreeStatistic up = kstar_statistic(2, 1.0);
  const DegreeStatistic down = kstar_statistic(2, -1.0);
  const double limit = -solve_J(down, 1.0).j_value;
  std::vector<double> up_values;
  std::vector<double> diffs;
  for (int n = 4; n <= 7; ++n) {
    up_values.push_back(exact_log_partition(n, 1.0, up) / n);
    diffs.push_back(exact_log_partition(n, 1.0, down) / n - limit);
  }
  bool increasing = true;
  bool same_sign = true;
  bool shrinking = true;
  for (std::size_t k = 1; k < up_values.size(); ++k) {
    increasing = increasing && up_values[k] > up_values[k - 1];
    same_sign = same_sign && std::signbit(diffs[k]) == std::signbit(diffs[0]) &&
                diffs[k] != 0.0;
    shrinking = shrinking && std::abs(diffs[k]) < std::abs(diffs[k - 1]);
  }
  std::string detail = "gamma=+1:";
  for (double v : up_values) detail += " " + num(v, 4);
  detail += "; gamma=-1 minus limit " + num(limit, 6) + ":";
  for (double d : diffs) detail += " " + num(d, 4);
  return verdict(increasing && same_sign && shrinking, detail);
}

CriterionResult mcmc_correctness(const Options& opts) {
  const std::vector<DegreeStatistic> stats{
      zero_statistic(), penalty_statistic(std::log(0.5)),
      gwd_statistic(1.0, 2.0)};
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 0;
  for (const DegreeStatistic& f : stats) {
    const auto oracle = exact_graph_distribution(4, 1.0, f);
    const auto chain = chain_state_frequencies(
        4, 1.0, f, 10'000'000, mix_seed(opts.seed, 11 + stream++));
    const double tv = total_variation(oracle, chain);
    ok = ok && tv <= 0.02;
    if (!detail.empty()) detail += ", ";
    detail += f.label() + " TV " + num(tv);
  }
  return verdict(ok, detail);
}

// Distances use the conditional-law estimator of the expected empirical
// measure; the plain sample average is reported alongside. Its Monte Carlo
// error is comparable to the finite-n bias at n = 500, so its ordering is not
// stable across seeds. For the zero statistic the conditional law is exactly
// Binomial(n - 1, beta / n), so that row does not depend on the seed.
CriterionResult concentration_trend(const Options& opts) {
  const std::vector<int> sizes{100, 200, 500};
  auto config = [&](int n, double beta, const DegreeStatistic& f) {
    ChainConfig cfg;
    cfg.n = n;
    cfg.beta = beta;
    cfg.statistic = f;
    cfg.burn_in = 30;
    cfg.samples = 200;
    cfg.thin = 1;
    cfg.chains = 20;
    cfg.conditional_estimator = true;
    cfg.seed = mix_seed(opts.seed, 12 + static_cast<std::uint64_t>(n));
    return cfg;
  };

  std::vector<double> zero_d;
  std::vector<double> zero_plain;
  const std::vector<SparseMeasure> er_prediction{poisson_measure(1.0)};
  for (int n : sizes) {
    const SampleSummary s =
        mcmc_run(config(n, 1.0, zero_statistic()), er_prediction);
    zero_d.push_back(s.conditional_distance);
    zero_plain.push_back(s.distance_to_prediction);
  }

  std::vector<double> penalty_d;
  std::vector<double> penalty_plain;
  const DegreeStatistic penalty = penalty_statistic(std::log(0.5));
  const VariationalSolution solution = solve_J(penalty, 1.2);
  for (int n : sizes) {
    const ConcentrationReport r =
        concentration_check(config(n, 1.2, penalty), solution);
    penalty_d.push_back(r.conditional_distance);
    penalty_plain.push_back(r.distance);
  }

  auto decreasing = [](const std::vector<double>& d) {
    for (std::size_t k = 1; k < d.size(); ++k) {
      if (!(d[k] < d[k - 1])) return false;
    }
    return true;
  };
  auto list = [](const std::vector<double>& d) {
    std::string out;
    for (double x : d) out += " " + num(x);
    return out;
  };
  return verdict(decreasing(zero_d) && decreasing(penalty_d),
                 "n=100,200,500 zero:" + list(zero_d) + " penalty:" +
                     list(penalty_d) + " (plain average zero:" +
                     list(zero_plain) + " penalty:" + list(penalty_plain) +
                     ")");
}

CriterionResult target_construction(const Options& opts) {
  const int draws = opts.quick ? 1'000 : 10'000;
  Rng rng(opts.seed, 13);
  int bad = 0;
  std::string example;
  for (int k = 0; k < draws; ++k) {
    const auto len = static_cast<std::size_t>(3 + rng.below(8));
    const auto m = static_cast<int>(len) - 1;
    std::vector<double> y(len, 0.0);
    y[0] = 0.05 + 0.85 * rng.uniform();
    double rest = 0.0;
    for (std::size_t i = 1; i < len; ++i) {
      y[i] = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
      rest += y[i];
    }
    if (rest == 0.0) {
      y[len - 1] = 1.0;
      rest = 1.0;
    }
    for (std::size_t i = 1; i < len; ++i) y[i] *= (1.0 - y[0]) / rest;
    const int n = 20 * static_cast<int>(len) +
                  static_cast<int>(rng.below(2000));

    bool ok = true;
    try {
      const DegreeFrequency h = frequency_from_target(y, n);
      std::int64_t degree_sum = 0;
      for (int i = 0; i < n; ++i) {
        const double yi = static_cast<std::size_t>(i) < len ? y[static_cast<std::size_t>(i)] : 0.0;
        ok = ok && std::abs(static_cast<double>(h[static_cast<std::size_t>(i)]) / n - yi) <=
                       static_cast<double>(m) / n;
        degree_sum += i * h[static_cast<std::size_t>(i)];
      }
      ok = ok && degree_sum % 2 == 0 && erdos_gallai_check(to_sequence(h));
    } catch (const Error&) {
      ok = false;
    }
    if (!ok && bad++ == 0) example = " (first at n=" + std::to_string(n) + ")";
  }
  return verdict(bad == 0, std::to_string(draws) + " targets, " +
                               std::to_string(bad) + " failures" + example);
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "rate-function-zero", rate_function_zero},
      {2, "poisson-section", poisson_section},
      {3, "stationarity", stationarity},
      {4, "closed-form-vs-series", closed_form_vs_series},
      {5, "figure-regimes", figure_regimes},
      {6, "unique-fixed-point", unique_fixed_point},
      {7, "counting-bounds", counting_bounds},
      {8, "erdos-gallai", erdos_gallai},
      {9, "partition-oracle", partition_oracle},
      {10, "degeneracy-trend", degeneracy_trend},
      {11, "mcmc-correctness", mcmc_correctness},
      {12, "concentration-trend", concentration_trend},
      {13, "target-construction", target_construction},
  };
  return all;
}

std::string format(const CriterionResult& result) {
  std::ostringstream os;
  os << (result.passed ? "PASS " : "FAIL ") << (result.id < 10 ? "0" : "")
     << result.id << ' ' << result.name << ": " << result.detail << " ("
     << num(result.seconds, 3) << " s)";
  return os.str();
}

bool run_all(const Options& opts, std::ostream& out,
             const std::vector<int>& only) {
  bool all_passed = true;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = c.run(opts);
    } catch (const std::exception& e) {
      r = verdict(false, std::string("threw: ") + e.what());
    }
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
    all_passed = all_passed && r.passed;
    out << format(r) << std::endl;
  }
  return all_passed;
}

}  // namespace degldp::acceptance
