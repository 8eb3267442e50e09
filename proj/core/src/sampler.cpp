#include "degldp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>

#include "degldp/error.hpp"
#include "degldp/graph_combinatorics.hpp"
#include "degldp/summation.hpp"

namespace degldp {

namespace {

void check_model(int n, double beta) {
  if (n < 2) throw DomainError("graphs need n >= 2 vertices");
  if (!(beta > 0.0) || !(beta < static_cast<double>(n))) {
    throw DomainError("need 0 < beta < n");
  }
}

double nearest_distance(const SparseMeasure& mu,
                        std::span<const SparseMeasure> predictions) {
  if (predictions.empty()) return std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (const SparseMeasure& p : predictions) {
    best = std::min(best, metric_d(mu, p));
  }
  return best;
}

SparseMeasure measure_from_counts(std::vector<double> counts) {
  while (counts.size() > 1 && counts.back() == 0.0) counts.pop_back();
  return SparseMeasure::normalized(std::move(counts));
}

struct ChainResult {
  std::vector<double> degree_counts;  // summed h_i over retained samples
  std::vector<double> conditional_counts;
  double edge_sum = 0.0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::vector<double> sample_distances;
  std::vector<TracePoint> trace;
};

ChainResult run_chain(const ChainConfig& cfg, std::uint64_t stream,
                      std::span<const SparseMeasure> predictions) {
  MetropolisChain chain(cfg.n, cfg.beta, cfg.statistic, cfg.seed, stream);
  ChainResult out;
  out.degree_counts.assign(static_cast<std::size_t>(cfg.n), 0.0);
  if (cfg.conditional_estimator) {
    out.conditional_counts.assign(static_cast<std::size_t>(cfg.n), 0.0);
  }
  for (int s = 0; s < cfg.burn_in; ++s) chain.sweep();
  std::int64_t sweep = cfg.burn_in;
  std::vector<double> h(static_cast<std::size_t>(cfg.n));
  for (int s = 0; s < cfg.samples; ++s) {
    for (int t = 0; t < cfg.thin; ++t) chain.sweep();
    sweep += cfg.thin;
    const Graph& g = chain.graph();
    std::fill(h.begin(), h.end(), 0.0);
    for (int d : g.degrees()) h[static_cast<std::size_t>(d)] += 1.0;
    for (std::size_t i = 0; i < h.size(); ++i) out.degree_counts[i] += h[i];
    if (cfg.conditional_estimator &&
        !chain.add_conditional_degree_laws(out.conditional_counts)) {
      for (std::size_t i = 0; i < h.size(); ++i) {
        out.conditional_counts[i] += h[i];
      }
    }
    out.edge_sum += static_cast<double>(g.edge_count());
    double distance = std::numeric_limits<double>::quiet_NaN();
    if (!predictions.empty()) {
      distance = nearest_distance(empirical_degree_distribution(g),
                                  predictions);
      out.sample_distances.push_back(distance);
    }
    if (cfg.record_trace && stream == 0) {
      out.trace.push_back({sweep, g.edge_count(),
                           empirical_statistic(g, chain.f_table()), distance});
    }
  }
  out.proposals = chain.proposals();
  out.accepted = chain.accepted();
  return out;
}

}  // namespace

Graph::Graph(int n)
    : n_(n),
      adjacency_(n > 1 ? pair_count(n) : 0, 0),
      degrees_(static_cast<std::size_t>(std::max(n, 0)), 0) {
  if (n < 1) throw DomainError("graph needs n >= 1");
}

std::size_t Graph::slot(int u, int v) const {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) {
    throw DomainError("invalid vertex pair");
  }
  if (u > v) std::swap(u, v);
  return pair_index(n_, u, v);
}

bool Graph::has_edge(int u, int v) const { return adjacency_[slot(u, v)] != 0; }

void Graph::add_edge(int u, int v) {
  auto& cell = adjacency_[slot(u, v)];
  if (cell) return;
  cell = 1;
  ++degrees_[static_cast<std::size_t>(u)];
  ++degrees_[static_cast<std::size_t>(v)];
  ++edges_;
}

void Graph::remove_edge(int u, int v) {
  auto& cell = adjacency_[slot(u, v)];
  if (!cell) return;
  cell = 0;
  --degrees_[static_cast<std::size_t>(u)];
  --degrees_[static_cast<std::size_t>(v)];
  --edges_;
}

void Graph::toggle_edge(int u, int v) {
  if (has_edge(u, v)) {
    remove_edge(u, v);
  } else {
    add_edge(u, v);
  }
}

std::uint64_t Graph::edge_mask() const {
  if (adjacency_.size() > 64) throw DomainError("edge_mask needs <= 64 pairs");
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < adjacency_.size(); ++k) {
    if (adjacency_[k]) mask |= std::uint64_t{1} << k;
  }
  return mask;
}

Graph sample_er(int n, double beta, Rng& rng) {
  check_model(n, beta);
  const double p = beta / static_cast<double>(n);
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) g.add_edge(i, j);
    }
  }
  return g;
}

Graph sample_er(int n, double beta, std::uint64_t seed) {
  Rng rng(seed);
  return sample_er(n, beta, rng);
}

SparseMeasure empirical_degree_distribution(const Graph& g) {
  std::vector<double> counts(static_cast<std::size_t>(g.n()), 0.0);
  for (int d : g.degrees()) counts[static_cast<std::size_t>(d)] += 1.0;
  return measure_from_counts(std::move(counts));
}

double empirical_statistic(const Graph& g, std::span<const double> f_table) {
  CompensatedSum s;
  for (int d : g.degrees()) s += f_table[static_cast<std::size_t>(d)];
  return s.value() / static_cast<double>(g.n());
}

MetropolisChain::MetropolisChain(int n, double beta, const DegreeStatistic& f,
                                 std::uint64_t seed, std::uint64_t stream)
    : rng_(seed, stream), graph_(1) {
  check_model(n, beta);
  graph_ = sample_er(n, beta, rng_);
  f_table_ = f.table(static_cast<std::size_t>(n));
  const double p = beta / static_cast<double>(n);
  log_odds_ = std::log(p) - std::log1p(-p);
  odds_ = p / (1.0 - p);
  step_factor_.resize(f_table_.size() - 1);
  for (std::size_t d = 0; d + 1 < f_table_.size(); ++d) {
    step_factor_[d] = std::exp(f_table_[d + 1] - f_table_[d]);
  }
}

double MetropolisChain::log_toggle_ratio(int u, int v) const {
  const auto du = static_cast<std::size_t>(graph_.degrees()[u]);
  const auto dv = static_cast<std::size_t>(graph_.degrees()[v]);
  if (graph_.has_edge(u, v)) {
    return -(log_odds_ + f_table_[du] - f_table_[du - 1] + f_table_[dv] -
             f_table_[dv - 1]);
  }
  return log_odds_ + f_table_[du + 1] - f_table_[du] + f_table_[dv + 1] -
         f_table_[dv];
}

bool MetropolisChain::step() {
  const int n = graph_.n_;
  const auto [ru, rv] = rng_.below_pair(static_cast<std::uint32_t>(n),
                                        static_cast<std::uint32_t>(n - 1));
  auto u = static_cast<int>(ru);
  auto v = static_cast<int>(rv);
  if (v >= u) ++v;
  if (u > v) std::swap(u, v);
  ++proposals_;
  const std::size_t s = pair_index(n, u, v);
  const auto du = static_cast<std::size_t>(graph_.degrees_[static_cast<std::size_t>(u)]);
  const auto dv = static_cast<std::size_t>(graph_.degrees_[static_cast<std::size_t>(v)]);
  const bool present = graph_.adjacency_[s] != 0;
  // Product form of exp(log_toggle_ratio); the log form covers overflow.
  double ratio = present ? 1.0 / (odds_ * step_factor_[du - 1] *
                                  step_factor_[dv - 1])
                         : odds_ * step_factor_[du] * step_factor_[dv];
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    ratio = std::exp(log_toggle_ratio(u, v));
  }
  if (ratio < 1.0 && !(rng_.uniform() < ratio)) return false;
  const int delta = present ? -1 : 1;
  graph_.adjacency_[s] = present ? 0 : 1;
  graph_.degrees_[static_cast<std::size_t>(u)] += delta;
  graph_.degrees_[static_cast<std::size_t>(v)] += delta;
  graph_.edges_ += delta;
  ++accepted_;
  return true;
}

bool MetropolisChain::add_conditional_degree_laws(
    std::span<double> acc) const {
  // Given the edges not incident to v, the edge set S of v has weight
  // exp(f(|S|)) * prod_{w in S} odds * exp(f(d'_w + 1) - f(d'_w)), d'_w being
  // the degree of w without v. Grouping w by d'_w, the law of |S| is read off
  // prod_j (1 + r_j t)^{c_j}, truncated once the tail is negligible.
  const int n = graph_.n_;
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::int64_t> hist(un, 0);
  int max_degree = 0;
  for (int d : graph_.degrees_) {
    ++hist[static_cast<std::size_t>(d)];
    max_degree = std::max(max_degree, d);
  }
  std::vector<std::int64_t> c(un);
  std::vector<double> poly;
  std::vector<double> next;
  std::vector<double> law(un, 0.0);
  for (int v = 0; v < n; ++v) {
    const auto dv = static_cast<std::size_t>(graph_.degrees_[static_cast<std::size_t>(v)]);
    std::copy(hist.begin(), hist.end(), c.begin());
    --c[dv];
    for (int w = 0; w < n; ++w) {
      if (w == v) continue;
      const std::size_t s = w < v ? pair_index(n, w, v) : pair_index(n, v, w);
      if (graph_.adjacency_[s] != 0) {
        const auto dw = static_cast<std::size_t>(graph_.degrees_[static_cast<std::size_t>(w)]);
        --c[dw];
        ++c[dw - 1];
      }
    }

    auto k_max = static_cast<std::size_t>(std::min(n - 1, max_degree + 16));
    for (;;) {
      poly.assign(k_max + 1, 0.0);
      poly[0] = 1.0;
      std::size_t top = 0;  // highest non-zero coefficient so far
      for (std::size_t j = 0; j + 1 < un; ++j) {
        if (c[j] == 0) continue;
        const double r = odds_ * step_factor_[j];
        const auto cj = static_cast<std::size_t>(c[j]);
        const std::size_t len = std::min(k_max, cj);
        next.assign(k_max + 1, 0.0);
        double binom_term = 1.0;  // binom(cj, m) r^m
        for (std::size_t m = 0; m <= len; ++m) {
          if (m > 0) {
            binom_term *= r * static_cast<double>(cj - m + 1) /
                          static_cast<double>(m);
          }
          for (std::size_t k = 0; k <= top && k + m <= k_max; ++k) {
            next[k + m] += poly[k] * binom_term;
          }
        }
        top = std::min(k_max, top + len);
        poly.swap(next);
      }
      double f_max = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k <= k_max; ++k) f_max = std::max(f_max, f_table_[k]);
      double total = 0.0;
      for (std::size_t k = 0; k <= k_max; ++k) {
        law[k] = poly[k] * std::exp(f_table_[k] - f_max);
        total += law[k];
      }
      if (!(total > 0.0) || !std::isfinite(total)) return false;
      if (k_max + 1 == un || law[k_max] <= 1e-17 * total) {
        for (std::size_t k = 0; k <= k_max; ++k) law[k] /= total;
        break;
      }
      k_max = std::min(un - 1, 2 * k_max);
    }
    for (std::size_t k = 0; k <= k_max; ++k) acc[k] += law[k];
  }
  return true;
}

void MetropolisChain::sweep() {
  const std::size_t proposals = pair_count(graph_.n());
  for (std::size_t k = 0; k < proposals; ++k) step();
}

SampleSummary mcmc_run(const ChainConfig& cfg,
                       std::span<const SparseMeasure> predictions) {
  check_model(cfg.n, cfg.beta);
  if (cfg.samples < 1 || cfg.thin < 1 || cfg.burn_in < 0 || cfg.chains < 1) {
    throw DomainError("chain counts must be positive");
  }
  const auto chains = static_cast<std::size_t>(cfg.chains);
  std::vector<ChainResult> results(chains);
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(
      chains, std::max(1u, std::thread::hardware_concurrency())));
  auto work = [&](unsigned worker) {
    for (std::size_t c = worker; c < chains; c += threads) {
      results[c] = run_chain(cfg, c, predictions);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
  }

  std::vector<double> counts(static_cast<std::size_t>(cfg.n), 0.0);
  std::vector<double> conditional(counts.size(), 0.0);
  double edge_sum = 0.0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  SampleSummary summary;
  for (ChainResult& r : results) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      counts[i] += r.degree_counts[i];
    }
    for (std::size_t i = 0; i < r.conditional_counts.size(); ++i) {
      conditional[i] += r.conditional_counts[i];
    }
    edge_sum += r.edge_sum;
    proposals += r.proposals;
    accepted += r.accepted;
    summary.sample_distances.insert(summary.sample_distances.end(),
                                    r.sample_distances.begin(),
                                    r.sample_distances.end());
  }
  summary.trace = std::move(results[0].trace);
  const double retained =
      static_cast<double>(cfg.samples) * static_cast<double>(cfg.chains);
  summary.mean_empirical_measure = measure_from_counts(std::move(counts));
  summary.mean_edges = edge_sum / retained;
  summary.acceptance_rate =
      proposals == 0 ? 0.0
                     : static_cast<double>(accepted) /
                           static_cast<double>(proposals);
  summary.distance_to_prediction =
      nearest_distance(summary.mean_empirical_measure, predictions);
  if (cfg.conditional_estimator) {
    summary.conditional_measure = measure_from_counts(std::move(conditional));
    summary.conditional_distance =
        nearest_distance(*summary.conditional_measure, predictions);
  }
  return summary;
}

std::vector<double> chain_state_frequencies(int n, double beta,
                                            const DegreeStatistic& f,
                                            std::uint64_t proposals,
                                            std::uint64_t seed,
                                            std::uint64_t burn_in) {
  check_model(n, beta);
  if (pair_count(n) > 24) throw TooLarge("state histogram needs n <= 7");
  MetropolisChain chain(n, beta, f, seed);
  for (std::uint64_t k = 0; k < burn_in; ++k) chain.step();
  std::vector<double> freq(std::size_t{1} << pair_count(n), 0.0);
  std::uint64_t mask = chain.graph().edge_mask();
  for (std::uint64_t k = 0; k < proposals; ++k) {
    if (chain.step()) mask = chain.graph().edge_mask();
    freq[mask] += 1.0;
  }
  for (double& x : freq) x /= static_cast<double>(proposals);
  return freq;
}

PartitionEstimate estimate_log_partition(int n, double beta,
                                         const DegreeStatistic& f,
                                         std::size_t samples,
                                         std::uint64_t seed) {
  check_model(n, beta);
  if (samples < 2) throw DomainError("need at least two samples");
  const std::vector<double> f_table = f.table(static_cast<std::size_t>(n));
  const double p = beta / static_cast<double>(n);
  Rng rng(seed);
  std::vector<double> exponents(samples);
  std::vector<int> degrees(static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < samples; ++s) {
    std::fill(degrees.begin(), degrees.end(), 0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform() < p) {
          ++degrees[static_cast<std::size_t>(i)];
          ++degrees[static_cast<std::size_t>(j)];
        }
      }
    }
    CompensatedSum x;
    for (int d : degrees) x += f_table[static_cast<std::size_t>(d)];
    exponents[s] = x.value();
  }
  const double top = *std::max_element(exponents.begin(), exponents.end());
  CompensatedSum s1;
  for (double x : exponents) s1 += std::exp(x - top);
  const double count = static_cast<double>(samples);
  const double mean = s1.value() / count;
  CompensatedSum s2;
  for (double x : exponents) {
    const double dev = std::exp(x - top) - mean;
    s2 += dev * dev;
  }
  const double sd = std::sqrt(s2.value() / (count - 1.0));
  return {top + std::log(mean), sd / std::sqrt(count) / mean};
}

ConcentrationReport concentration_check(const ChainConfig& cfg,
                                        const VariationalSolution& solution) {
  if (solution.degenerate || solution.minimizers.empty()) {
    throw DomainError("concentration_check needs a non-degenerate solution");
  }
  std::vector<SparseMeasure> predictions;
  for (const Minimizer& m : solution.minimizers) {
    predictions.push_back(tilt(m.theta, cfg.statistic).measure);
  }
  ConcentrationReport report;
  report.summary = mcmc_run(cfg, predictions);
  report.distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const double d =
        metric_d(report.summary.mean_empirical_measure, predictions[k]);
    if (d < report.distance) {
      report.distance = d;
      report.closest_theta = solution.minimizers[k].theta;
    }
  }
  if (report.summary.conditional_measure) {
    report.conditional_distance = std::numeric_limits<double>::infinity();
    for (const SparseMeasure& p : predictions) {
      report.conditional_distance = std::min(
          report.conditional_distance,
          metric_d(*report.summary.conditional_measure, p));
    }
  }
  report.sample_distances = report.summary.sample_distances;
  return report;
}

std::string to_json(const SampleSummary& summary, int indent) {
  nlohmann::ordered_json out;
  out["mean_empirical_measure"] = std::vector<double>(
      summary.mean_empirical_measure.weights().begin(),
      summary.mean_empirical_measure.weights().end());
  if (std::isnan(summary.distance_to_prediction)) {
    out["distance_to_prediction"] = nullptr;
  } else {
    out["distance_to_prediction"] = summary.distance_to_prediction;
  }
  if (summary.conditional_measure) {
    const auto w = summary.conditional_measure->weights();
    out["conditional_measure"] = std::vector<double>(w.begin(), w.end());
    if (std::isnan(summary.conditional_distance)) {
      out["conditional_distance"] = nullptr;
    } else {
      out["conditional_distance"] = summary.conditional_distance;
    }
  }
  out["mean_edges"] = summary.mean_edges;
  out["acceptance_rate"] = summary.acceptance_rate;
  return out.dump(indent);
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
  const auto old_precision = out.precision(17);
  out << "sweep,edges,mu_f,distance\n";
  for (const TracePoint& t : trace) {
    out << t.sweep << ',' << t.edges << ',' << t.mu_f << ',';
    if (!std::isnan(t.distance)) out << t.distance;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace degldp
