#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace degldp {

// A finitely supported probability measure on the non-negative integers.
// Weights are indexed by the integer they sit on; weights.size() - 1 is the
// largest point of the support window (trailing zeros are allowed).
class SparseMeasure {
 public:
  // Throws DomainError unless every weight is finite, non-negative and the
  // total is 1 within 1e-12.
  explicit SparseMeasure(std::vector<double> weights);

  // Rescales non-negative masses to total 1. Throws on zero or invalid mass.
  static SparseMeasure normalized(std::vector<double> masses);
  static SparseMeasure point_mass(std::size_t at);

  std::size_t support_max() const { return weights_.size() - 1; }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const {
    return i < weights_.size() ? weights_[i] : 0.0;
  }

  friend bool operator==(const SparseMeasure&, const SparseMeasure&) = default;

 private:
  std::vector<double> weights_;
};

double mean(const SparseMeasure& mu);

// d(mu, nu) = sum_{i >= 1} i |mu_i - nu_i|. The i = 0 coordinate carries no
// weight; on probability measures the distance is still separating.
double metric_d(const SparseMeasure& mu, const SparseMeasure& nu);

// Relative entropy D(mu || nu); +infinity when mu is not absolutely
// continuous with respect to nu.
double kl_divergence(const SparseMeasure& mu, const SparseMeasure& nu);

// Poisson(beta) truncated at the smallest K whose analytic tail bound is
// below tail_tol, then renormalized.
SparseMeasure poisson_measure(double beta, double tail_tol = 1e-12);

// Large-deviation rate function of the empirical degree distribution of
// G(n, beta/n):
//   I(mu) = sum mu_i log(i! mu_i) - (mean/2) log(mean * beta) + (mean + beta)/2
// with 0 log 0 = 0 and I(delta_0) = beta/2. Returns +infinity only through the
// relative-entropy form, which cannot happen for finitely supported mu.
double rate_I(const SparseMeasure& mu, double beta);

// Same function through D(mu || p_beta) + (mean - beta)/2 + (mean/2) log beta
// - (mean/2) log mean, with p_beta the untruncated Poisson pmf.
double rate_I_divergence_form(const SparseMeasure& mu, double beta);

// nu restricted to [0, k] and renormalized. Throws DomainError on zero mass.
SparseMeasure truncate_renormalize(const SparseMeasure& nu, std::size_t k);

// CSV with header "i,weight", one row per support point, 17 significant
// digits.
void write_csv(std::ostream& out, const SparseMeasure& mu);
SparseMeasure read_csv(std::istream& in);

}  // namespace degldp
