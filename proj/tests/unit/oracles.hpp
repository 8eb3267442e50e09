#pragma once

// Test-only reference computations, kept independent of the library paths
// they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace degldp::testing {

// Every labelled graph on n vertices, as an explicit edge list walk.
struct BruteForceGraphs {
  // degree multiset (sorted descending) -> number of labelled graphs
  std::map<std::vector<int>, std::uint64_t> sequence_counts;
  // frequency vector -> number of labelled graphs
  std::map<std::vector<std::int64_t>, std::uint64_t> frequency_counts;
  // frequency vector -> G(n, p) probability
  std::map<std::vector<std::int64_t>, double> frequency_probability;
};

inline BruteForceGraphs brute_force_graphs(int n, double p) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  BruteForceGraphs out;
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  for (std::uint64_t g = 0; g < total; ++g) {
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    int edges = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if ((g >> k) & 1U) {
        ++degree[static_cast<std::size_t>(pairs[k].first)];
        ++degree[static_cast<std::size_t>(pairs[k].second)];
        ++edges;
      }
    }
    std::vector<std::int64_t> h(static_cast<std::size_t>(n), 0);
    for (int d : degree) ++h[static_cast<std::size_t>(d)];
    std::vector<int> sorted = degree;
    std::sort(sorted.rbegin(), sorted.rend());
    ++out.sequence_counts[sorted];
    ++out.frequency_counts[h];
    out.frequency_probability[h] +=
        std::pow(p, edges) *
        std::pow(1.0 - p, static_cast<double>(pairs.size()) - edges);
  }
  return out;
}

// All non-increasing sequences of length n with entries in [0, n - 1].
inline std::vector<std::vector<int>> all_sorted_sequences(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  auto recurse = [&](auto&& self, int max_value) -> void {
    if (static_cast<int>(current.size()) == n) {
      out.push_back(current);
      return;
    }
    for (int v = max_value; v >= 0; --v) {
      current.push_back(v);
      self(self, v);
      current.pop_back();
    }
  };
  recurse(recurse, n - 1);
  return out;
}

// Random probability vector on {0..support} with all entries positive.
inline std::vector<double> random_positive_weights(std::mt19937_64& rng,
                                                   std::size_t support) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> w(support + 1);
  double total = 0.0;
  for (double& x : w) {
    x = draw(rng) + 1e-3;
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

// Closed-form Poisson-family quantities.
inline double poisson_relative_entropy(double theta, double beta) {
  return beta - theta + theta * std::log(theta / beta);
}

}  // namespace degldp::testing
