#include "degldp/graph_combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "degldp/error.hpp"
#include "degldp/summation.hpp"

namespace degldp {

namespace {

double log_factorial(double k) { return std::lgamma(k + 1.0); }

void check_enumeration_size(int n, const EnumerationOptions& opts) {
  if (n < 1) throw DomainError("enumeration needs n >= 1");
  const int cap = opts.allow_n8 ? 8 : kMaxEnumerationN;
  if (n > cap) {
    throw TooLarge("exhaustive enumeration supports n <= " +
                   std::to_string(cap));
  }
}

void check_edge_probability(int n, double beta) {
  if (!(beta > 0.0) || !(beta < static_cast<double>(n))) {
    throw DomainError("need 0 < beta < n");
  }
}

std::vector<std::uint64_t> incidence_masks(int n) {
  std::vector<std::uint64_t> inc(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << pair_index(n, i, j);
      inc[static_cast<std::size_t>(i)] |= bit;
      inc[static_cast<std::size_t>(j)] |= bit;
    }
  }
  return inc;
}

// Packs a frequency vector (entries <= 8) into 4-bit fields.
std::uint64_t frequency_key(std::uint64_t mask,
                            const std::vector<std::uint64_t>& inc) {
  std::uint64_t key = 0;
  for (std::uint64_t vertex_mask : inc) {
    const int degree = std::popcount(mask & vertex_mask);
    key += std::uint64_t{1} << (4 * degree);
  }
  return key;
}

template <typename Work>
void run_chunks(std::uint64_t total, unsigned threads, Work&& work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunks = std::min<std::uint64_t>(threads, total);
  const std::uint64_t step = (total + chunks - 1) / chunks;
  std::vector<std::jthread> pool;
  for (std::uint64_t c = 1; c < chunks; ++c) {
    pool.emplace_back(work, c, c * step, std::min(total, (c + 1) * step));
  }
  work(std::uint64_t{0}, std::uint64_t{0}, std::min(total, step));
}

double log_er_weight(int n, double beta, std::int64_t edges) {
  const double p = beta / static_cast<double>(n);
  const auto pairs = static_cast<double>(pair_count(n));
  const auto e = static_cast<double>(edges);
  return e * std::log(p) + (pairs - e) * std::log1p(-p);
}

}  // namespace

DegreeFrequency::DegreeFrequency(int n, std::vector<std::int64_t> counts)
    : n_(n), counts_(std::move(counts)), edges_(0) {
  if (n_ < 1) throw DomainError("degree frequency needs n >= 1");
  if (counts_.size() != static_cast<std::size_t>(n_)) {
    throw DomainError("degree frequency must have n entries h_0..h_{n-1}");
  }
  std::int64_t vertices = 0;
  std::int64_t degree_sum = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) throw DomainError("degree counts must be >= 0");
    vertices += counts_[i];
    degree_sum += static_cast<std::int64_t>(i) * counts_[i];
  }
  if (vertices != n_) throw DomainError("degree counts must sum to n");
  if (degree_sum % 2 != 0) throw DomainError("degree sum must be even");
  edges_ = degree_sum / 2;
}

DegreeSequence::DegreeSequence(std::vector<int> degrees)
    : degrees_(std::move(degrees)) {
  const auto n = static_cast<int>(degrees_.size());
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    if (degrees_[i] < 0 || degrees_[i] > n - 1) {
      throw DomainError("degrees must lie in [0, n - 1]");
    }
    if (i > 0 && degrees_[i] > degrees_[i - 1]) {
      throw DomainError("degree sequence must be non-increasing");
    }
  }
}

DegreeSequence to_sequence(const DegreeFrequency& h) {
  std::vector<int> d;
  d.reserve(static_cast<std::size_t>(h.n()));
  const auto counts = h.counts();
  for (std::size_t i = counts.size(); i-- > 0;) {
    d.insert(d.end(), static_cast<std::size_t>(counts[i]),
             static_cast<int>(i));
  }
  return DegreeSequence(std::move(d));
}

DegreeFrequency to_frequency(const DegreeSequence& d) {
  const auto n = static_cast<int>(d.size());
  std::vector<std::int64_t> counts(d.size(), 0);
  for (int degree : d.degrees()) ++counts[static_cast<std::size_t>(degree)];
  return DegreeFrequency(n, std::move(counts));
}

SparseMeasure to_measure(const DegreeFrequency& h) {
  const auto counts = h.counts();
  std::size_t top = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) top = i;
  }
  std::vector<double> w(top + 1);
  for (std::size_t i = 0; i <= top; ++i) {
    w[i] = static_cast<double>(counts[i]) / static_cast<double>(h.n());
  }
  return SparseMeasure::normalized(std::move(w));
}

bool erdos_gallai_check(const DegreeSequence& d) {
  const auto deg = d.degrees();
  const std::size_t n = deg.size();
  std::int64_t total = 0;
  for (int x : deg) total += x;
  if (total % 2 != 0) return false;
  std::int64_t head = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    head += deg[k - 1];
    std::int64_t tail = 0;
    for (std::size_t i = k; i < n; ++i) {
      tail += std::min<std::int64_t>(deg[i], static_cast<std::int64_t>(k));
    }
    const auto kk = static_cast<std::int64_t>(k);
    if (head > kk * (kk - 1) + tail) return false;
  }
  return true;
}

DegreeFrequency frequency_from_target(std::span<const double> y, int n) {
  if (y.size() < 3) throw DomainError("target needs M >= 2 (pad with zeros)");
  CompensatedSum total;
  for (double v : y) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("target entries must be non-negative");
    }
    total += v;
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw DomainError("target must sum to 1");
  }
  if (!(y[0] > 0.0)) throw DomainError("target needs y_0 > 0");
  if (n < 1) throw NTooSmall("n must be positive");

  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  if (y[0] >= 1.0) {
    counts[0] = n;
    return DegreeFrequency(n, std::move(counts));
  }
  const std::size_t m = y.size() - 1;
  if (m > static_cast<std::size_t>(n - 1)) {
    throw NTooSmall("n must exceed the target's largest degree");
  }
  std::int64_t used = 0;
  std::int64_t degree_sum = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    counts[i] = static_cast<std::int64_t>(
        std::floor(static_cast<double>(n) * y[i]));
    used += counts[i];
    degree_sum += static_cast<std::int64_t>(i) * counts[i];
  }
  if (degree_sum % 2 != 0) {
    ++counts[1];
    ++used;
  }
  counts[0] = n - used;
  if (counts[0] <= 0) {
    throw NTooSmall("n too small for the target: h_0 would be <= 0");
  }
  return DegreeFrequency(n, std::move(counts));
}

double log_mckay_upper(const DegreeFrequency& h) {
  const auto e = static_cast<double>(h.edges());
  double value = log_factorial(2.0 * e) - log_factorial(e) - e * std::log(2.0) +
                 log_factorial(static_cast<double>(h.n()));
  const auto counts = h.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    const auto hi = static_cast<double>(counts[i]);
    value -= hi * log_factorial(static_cast<double>(i)) + log_factorial(hi);
  }
  return value;
}

double log_nbar(const DegreeFrequency& h, double beta) {
  check_edge_probability(h.n(), beta);
  return log_mckay_upper(h) + log_er_weight(h.n(), beta, h.edges());
}

FrequencyTable enumerate_frequencies(int n, double beta,
                                     const EnumerationOptions& opts) {
  check_enumeration_size(n, opts);
  check_edge_probability(n, beta);
  const auto inc = incidence_masks(n);
  const std::uint64_t total = std::uint64_t{1} << pair_count(n);

  unsigned threads = opts.threads == 0
                         ? std::max(1u, std::thread::hardware_concurrency())
                         : opts.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, total));
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> partial(
      threads);
  run_chunks(total, threads,
             [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
               auto& counts = partial[chunk];
               for (std::uint64_t mask = begin; mask < end; ++mask) {
                 ++counts[frequency_key(mask, inc)];
               }
             });

  std::unordered_map<std::uint64_t, std::uint64_t> merged;
  for (const auto& part : partial) {
    for (const auto& [key, count] : part) merged[key] += count;
  }
  FrequencyTable table;
  for (const auto& [key, count] : merged) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i] = static_cast<std::int64_t>((key >> (4 * i)) & 0xF);
    }
    const DegreeFrequency freq(n, h);
    const double probability =
        static_cast<double>(count) *
        std::exp(log_er_weight(n, beta, freq.edges()));
    table.emplace(std::move(h), FrequencyStats{count, probability});
  }
  return table;
}

double exact_log_partition(int n, double beta, const DegreeStatistic& f,
                           const EnumerationOptions& opts) {
  const FrequencyTable table = enumerate_frequencies(n, beta, opts);
  std::vector<double> f_values(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < f_values.size(); ++i) f_values[i] = f(i);

  std::vector<double> log_terms;
  log_terms.reserve(table.size());
  for (const auto& [h, stats] : table) {
    const DegreeFrequency freq(n, h);
    double exponent = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i] != 0) exponent += static_cast<double>(h[i]) * f_values[i];
    }
    log_terms.push_back(std::log(static_cast<double>(stats.count)) +
                        log_er_weight(n, beta, freq.edges()) + exponent);
  }
  const double top = *std::max_element(log_terms.begin(), log_terms.end());
  CompensatedSum sum;
  for (double t : log_terms) sum += std::exp(t - top);
  return top + std::log(sum.value());
}

std::vector<double> exact_graph_distribution(int n, double beta,
                                             const DegreeStatistic& f,
                                             const EnumerationOptions& opts) {
  check_enumeration_size(n, opts);
  check_edge_probability(n, beta);
  const auto inc = incidence_masks(n);
  const std::uint64_t total = std::uint64_t{1} << pair_count(n);
  std::vector<double> f_values(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < f_values.size(); ++i) f_values[i] = f(i);

  std::vector<double> log_weights(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double exponent = 0.0;
    for (std::uint64_t vertex_mask : inc) {
      exponent += f_values[static_cast<std::size_t>(
          std::popcount(mask & vertex_mask))];
    }
    log_weights[mask] =
        log_er_weight(n, beta, std::popcount(mask)) + exponent;
  }
  const double top =
      *std::max_element(log_weights.begin(), log_weights.end());
  CompensatedSum z;
  for (double& w : log_weights) {
    w = std::exp(w - top);
    z += w;
  }
  for (double& w : log_weights) w /= z.value();
  return log_weights;
}

void write_enumeration_csv(std::ostream& out, const FrequencyTable& table) {
  const auto old_precision = out.precision(17);
  out << "h_vector,count,probability\n";
  for (const auto& [h, stats] : table) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (i > 0) out << ';';
      out << h[i];
    }
    out << ',' << stats.count << ',' << stats.probability << '\n';
  }
  out.precision(old_precision);
}

}  // namespace degldp
