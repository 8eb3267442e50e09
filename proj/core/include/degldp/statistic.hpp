#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace degldp {

enum class Growth { kBounded, kLinear, kSuperlinear };

// Declared growth of a degree statistic. For kBounded, |f(i)| <= constant;
// for kLinear, |f(i)| <= constant * i, or only f(i) <= constant * i when
// one_sided is set.
struct GrowthClass {
  Growth kind = Growth::kBounded;
  double constant = 0.0;
  bool one_sided = false;
};

// f(i) <= offset + slope * i for every i. Series truncation relies on this.
struct UpperEnvelope {
  double slope = 0.0;
  double offset = 0.0;
};

// A degree function f : N0 -> R with f(0) = 0 and a declared growth class.
class DegreeStatistic {
 public:
  using Eval = std::function<double(std::size_t)>;

  // Throws DomainError if eval(0) != 0.
  DegreeStatistic(std::string label, Eval eval, GrowthClass growth,
                  UpperEnvelope envelope);

  double operator()(std::size_t i) const { return eval_(i); }

  const std::string& label() const { return label_; }
  const GrowthClass& growth() const { return growth_; }
  const UpperEnvelope& envelope() const { return envelope_; }
  bool superlinear() const { return growth_.kind == Growth::kSuperlinear; }

  // f(0..upto). Verifies the declared growth class and envelope on the
  // evaluated range; throws DomainError on violation.
  std::vector<double> table(std::size_t upto) const;

  // Checks one evaluated value against the growth class and envelope.
  bool within_growth(std::size_t i, double value) const;

 private:
  std::string label_;
  Eval eval_;
  GrowthClass growth_;
  UpperEnvelope envelope_;
};

DegreeStatistic zero_statistic();
// f(i) = c * i.
DegreeStatistic linear_statistic(double c);
// f(i) = gamma * binom(i, k), k >= 2. Superlinear for gamma > 0.
DegreeStatistic kstar_statistic(int k, double gamma);
// Geometrically weighted degree, gamma * exp(-lambda1 * i), shifted to
// gamma * (exp(-lambda1 * i) - 1) so that f(0) = 0. lambda1 > 0.
DegreeStatistic gwd_statistic(double lambda1, double gamma);
// Alternating k-star, gamma * lambda2^-2 [(1 - lambda2)^i - 1 + i lambda2],
// lambda2 in (0, 1).
DegreeStatistic alt_kstar_statistic(double lambda2, double gamma);
// Isolated-vertex penalty gamma * psi(i), psi(i) = 1 - [i == 0].
DegreeStatistic penalty_statistic(double gamma);
// f(i) = values[min(i, values.size() - 1)]; values[0] must be 0.
DegreeStatistic custom_statistic(std::vector<double> values,
                                 std::string label = "custom");

// binom(i, k) as a double; exact for the small arguments used here.
double binomial(std::size_t i, std::size_t k);

}  // namespace degldp
