#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "degldp/measure.hpp"
#include "degldp/statistic.hpp"

namespace degldp {

// Degree frequency vector h = (h_0, ..., h_{n-1}) of a graph on n vertices.
class DegreeFrequency {
 public:
  // Throws DomainError unless counts.size() == n, sum h_i = n and
  // sum i h_i is even.
  DegreeFrequency(int n, std::vector<std::int64_t> counts);

  int n() const { return n_; }
  std::span<const std::int64_t> counts() const { return counts_; }
  std::int64_t operator[](std::size_t i) const {
    return i < counts_.size() ? counts_[i] : 0;
  }
  std::int64_t edges() const { return edges_; }

  friend auto operator<=>(const DegreeFrequency&,
                          const DegreeFrequency&) = default;

 private:
  int n_;
  std::vector<std::int64_t> counts_;
  std::int64_t edges_;
};

// Non-increasing degree sequence with entries in [0, n - 1].
class DegreeSequence {
 public:
  // Throws DomainError when unsorted or out of range.
  explicit DegreeSequence(std::vector<int> degrees);

  std::span<const int> degrees() const { return degrees_; }
  std::size_t size() const { return degrees_.size(); }

  friend bool operator==(const DegreeSequence&,
                         const DegreeSequence&) = default;

 private:
  std::vector<int> degrees_;
};

DegreeSequence to_sequence(const DegreeFrequency& h);
// Throws DomainError when the degree sum is odd.
DegreeFrequency to_frequency(const DegreeSequence& d);

// t_n(h): mass h_i / n at i.
SparseMeasure to_measure(const DegreeFrequency& h);

// Erdős–Gallai: even sum and, for every k,
//   sum_{i <= k} d_i <= k (k - 1) + sum_{i > k} min(d_i, k).
bool erdos_gallai_check(const DegreeSequence& d);

// Floor-and-parity realization of a target y_0..y_M (y_0 > 0, sum 1,
// M >= 2): h_i = floor(n y_i) for i >= 1, h_1 bumped by one when
// sum i h_i is odd, h_0 the remainder. Throws NTooSmall when h_0 <= 0 or
// M > n - 1.
DegreeFrequency frequency_from_target(std::span<const double> y, int n);

// log of (2E)! / (E! 2^E prod i!^{h_i}) * n! / prod h_i!, via log-gamma.
double log_mckay_upper(const DegreeFrequency& h);

// log of the McKay expression times (beta/n)^E (1 - beta/n)^{binom(n,2)-E}.
// Throws DomainError unless 0 < beta < n.
double log_nbar(const DegreeFrequency& h, double beta);

// Bit index of the pair (i, j), i < j, in lexicographic order.
inline std::size_t pair_index(int n, int i, int j) {
  return static_cast<std::size_t>(i * (2 * n - i - 1) / 2 + (j - i - 1));
}

inline std::size_t pair_count(int n) {
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

inline constexpr int kMaxEnumerationN = 7;

struct EnumerationOptions {
  // Permits n = 8 (2^28 graphs).
  bool allow_n8 = false;
  unsigned threads = 0;
};

struct FrequencyStats {
  std::uint64_t count = 0;
  double probability = 0.0;
};

using FrequencyTable = std::map<std::vector<std::int64_t>, FrequencyStats>;

// Exact count and G(n, beta/n) probability of every degree frequency vector,
// by iterating all 2^binom(n,2) edge subsets. Throws TooLarge beyond n = 7
// (or 8 when allowed).
FrequencyTable enumerate_frequencies(int n, double beta,
                                     const EnumerationOptions& opts = {});

// log Z_n(f) = log E_{P_n} exp(sum_v f(d_v)), exact over all graphs.
double exact_log_partition(int n, double beta, const DegreeStatistic& f,
                           const EnumerationOptions& opts = {});

// Q_{n,f}(G) for every edge bitmask G (index = mask).
std::vector<double> exact_graph_distribution(int n, double beta,
                                             const DegreeStatistic& f,
                                             const EnumerationOptions& opts =
                                                 {});

// CSV "h_vector,count,probability"; h_vector is semicolon-joined.
void write_enumeration_csv(std::ostream& out, const FrequencyTable& table);

}  // namespace degldp
