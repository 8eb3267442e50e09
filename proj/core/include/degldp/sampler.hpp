#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degldp/measure.hpp"
#include "degldp/rng.hpp"
#include "degldp/statistic.hpp"
#include "degldp/tilted_family.hpp"

namespace degldp {

// Simple undirected graph on n labelled vertices with incrementally
// maintained degrees.
class Graph {
 public:
  explicit Graph(int n);

  int n() const { return n_; }
  std::int64_t edge_count() const { return edges_; }
  std::span<const int> degrees() const { return degrees_; }
  bool has_edge(int u, int v) const;
  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  void toggle_edge(int u, int v);

  // Edge set as a bitmask in lexicographic pair order; needs
  // binom(n, 2) <= 64.
  std::uint64_t edge_mask() const;

 private:
  friend class MetropolisChain;
  std::size_t slot(int u, int v) const;

  int n_;
  std::vector<std::uint8_t> adjacency_;  // upper triangle, pair_index order
  std::vector<int> degrees_;
  std::int64_t edges_ = 0;
};

// G(n, beta/n): every pair present independently. Throws unless 0 < beta < n.
Graph sample_er(int n, double beta, Rng& rng);
Graph sample_er(int n, double beta, std::uint64_t seed);

// mu^(n): mass h_i / n at degree i.
SparseMeasure empirical_degree_distribution(const Graph& g);

// (1/n) sum_v f(d_v).
double empirical_statistic(const Graph& g, std::span<const double> f_table);

struct ChainConfig {
  int n = 100;
  double beta = 1.0;
  DegreeStatistic statistic = zero_statistic();
  int burn_in = 1000;  // sweeps
  int samples = 100;
  int thin = 10;  // sweeps between retained samples
  std::uint64_t seed = 0;
  int chains = 1;
  bool record_trace = false;
  // Also average, per retained sample, each vertex's exact conditional degree
  // law given the edges not incident to it. Unbiased for the same expected
  // measure with far smaller Monte Carlo error.
  bool conditional_estimator = false;
};

struct TracePoint {
  std::int64_t sweep = 0;
  std::int64_t edges = 0;
  double mu_f = 0.0;
  double distance = 0.0;  // to the nearest prediction; NaN without one
};

struct SampleSummary {
  SparseMeasure mean_empirical_measure = SparseMeasure::point_mass(0);
  // Minimum over predictions of metric_d(mean measure, prediction); NaN when
  // no prediction was supplied.
  double distance_to_prediction = 0.0;
  double mean_edges = 0.0;
  double acceptance_rate = 0.0;
  // Set when ChainConfig::conditional_estimator is on; distance is NaN
  // otherwise or without a prediction.
  std::optional<SparseMeasure> conditional_measure;
  double conditional_distance = std::numeric_limits<double>::quiet_NaN();
  // Per retained sample, distance to the nearest prediction.
  std::vector<double> sample_distances;
  // Chain 0 only.
  std::vector<TracePoint> trace;
};

// Single-edge-flip Metropolis chain targeting Q_{n,f}: a uniform pair is
// proposed and toggled with probability min(1, ratio), where for an addition
// log ratio = log(beta/n) - log(1 - beta/n) + f(d_u+1) - f(d_u)
//             + f(d_v+1) - f(d_v)
// and the negation of the analogous quantity for a deletion.
class MetropolisChain {
 public:
  // Starts from a G(n, beta/n) draw. Throws unless 0 < beta < n, n >= 2.
  MetropolisChain(int n, double beta, const DegreeStatistic& f,
                  std::uint64_t seed, std::uint64_t stream = 0);

  bool step();
  // binom(n, 2) proposals.
  void sweep();

  const Graph& graph() const { return graph_; }
  std::span<const double> f_table() const { return f_table_; }
  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepted() const { return accepted_; }

  // Log of the ratio of unnormalized Q weights, toggled over current.
  double log_toggle_ratio(int u, int v) const;

  // Adds P(d_v = k | edges not incident to v) over all v to acc[k]; acc has
  // n entries. Returns false, leaving acc untouched, if the law overflows.
  bool add_conditional_degree_laws(std::span<double> acc) const;

 private:
  Rng rng_;
  Graph graph_;
  std::vector<double> f_table_;
  double log_odds_;
  double odds_;
  std::vector<double> step_factor_;  // exp(f(d + 1) - f(d))
  std::uint64_t proposals_ = 0;
  std::uint64_t accepted_ = 0;
};

// Runs cfg.chains independent chains with streams derived from cfg.seed and
// averages their retained empirical measures. Identical configs give
// bit-identical summaries.
SampleSummary mcmc_run(const ChainConfig& cfg,
                       std::span<const SparseMeasure> predictions = {});

// Empirical distribution of the chain state (edge bitmask) after each of
// `proposals` steps; needs binom(n, 2) <= 24.
std::vector<double> chain_state_frequencies(int n, double beta,
                                            const DegreeStatistic& f,
                                            std::uint64_t proposals,
                                            std::uint64_t seed,
                                            std::uint64_t burn_in = 10'000);

struct PartitionEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// log E_{P_n} exp(sum_v f(d_v)) by sampling G(n, beta/n). Standard error by
// the delta method on the untransformed mean.
PartitionEstimate estimate_log_partition(int n, double beta,
                                         const DegreeStatistic& f,
                                         std::size_t samples,
                                         std::uint64_t seed);

struct ConcentrationReport {
  double distance = 0.0;  // min over minimizers
  // Same, for the conditional estimator; NaN unless it was enabled.
  double conditional_distance = std::numeric_limits<double>::quiet_NaN();
  double closest_theta = 0.0;
  std::vector<double> sample_distances;
  SampleSummary summary;
};

// Samples Q_{n,f} and measures metric_d from the averaged empirical measure
// to the nearest sigma_{theta*,f} over the solution's minimizers.
ConcentrationReport concentration_check(const ChainConfig& cfg,
                                        const VariationalSolution& solution);

// JSON record of a summary (without per-sample distances and trace).
std::string to_json(const SampleSummary& summary, int indent = 2);

// CSV "sweep,edges,mu_f,distance".
void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

}  // namespace degldp
