#include "degldp/measure.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "degldp/error.hpp"
#include "degldp/summation.hpp"

namespace degldp {

namespace {

constexpr double kMassTolerance = 1e-12;

double x_log_x_over(double x, double y) {
  return x > 0.0 ? x * std::log(x / y) : 0.0;
}

}  // namespace

SparseMeasure::SparseMeasure(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw DomainError("measure needs at least one support point");
  }
  CompensatedSum total;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("measure weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total.value() - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "measure weights sum to " << total.value() << ", expected 1";
    throw DomainError(msg.str());
  }
}

SparseMeasure SparseMeasure::normalized(std::vector<double> masses) {
  CompensatedSum total;
  for (double w : masses) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("masses must be finite and non-negative");
    }
    total += w;
  }
  const double z = total.value();
  if (!(z > 0.0)) throw DomainError("cannot normalize zero mass");
  for (double& w : masses) w /= z;
  // Normalization is exact up to rounding; absorb the residue in the largest
  // coordinate so the constructor's 1e-12 contract holds for long vectors.
  CompensatedSum check;
  for (double w : masses) check += w;
  auto largest = std::max_element(masses.begin(), masses.end());
  *largest += 1.0 - check.value();
  return SparseMeasure(std::move(masses));
}

SparseMeasure SparseMeasure::point_mass(std::size_t at) {
  std::vector<double> w(at + 1, 0.0);
  w[at] = 1.0;
  return SparseMeasure(std::move(w));
}

double mean(const SparseMeasure& mu) {
  CompensatedSum s;
  const auto w = mu.weights();
  for (std::size_t i = 1; i < w.size(); ++i) s += static_cast<double>(i) * w[i];
  return s.value();
}

double metric_d(const SparseMeasure& mu, const SparseMeasure& nu) {
  const std::size_t top = std::max(mu.support_max(), nu.support_max());
  CompensatedSum s;
  for (std::size_t i = 1; i <= top; ++i) {
    s += static_cast<double>(i) * std::abs(mu[i] - nu[i]);
  }
  return s.value();
}

double kl_divergence(const SparseMeasure& mu, const SparseMeasure& nu) {
  CompensatedSum s;
  const auto w = mu.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (nu[i] == 0.0) return std::numeric_limits<double>::infinity();
    s += x_log_x_over(w[i], nu[i]);
  }
  return s.value();
}

SparseMeasure poisson_measure(double beta, double tail_tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("poisson_measure: beta must be positive");
  }
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw DomainError("poisson_measure: tail_tol must lie in (0, 1)");
  }
  const double log_beta = std::log(beta);
  auto log_pmf = [&](std::size_t i) {
    const double x = static_cast<double>(i);
    return -beta + x * log_beta - std::lgamma(x + 1.0);
  };
  // P(X > K) <= pmf(K + 1) / (1 - beta / (K + 2)) once K + 2 > beta.
  const double log_tol = std::log(tail_tol);
  std::vector<double> w;
  for (std::size_t k = 0;; ++k) {
    w.push_back(std::exp(log_pmf(k)));
    const double next = static_cast<double>(k + 2);
    if (next > beta) {
      const double log_tail = log_pmf(k + 1) - std::log1p(-beta / next);
      if (log_tail < log_tol) break;
    }
  }
  return SparseMeasure::normalized(std::move(w));
}

double rate_I(const SparseMeasure& mu, double beta) {
  if (!(beta > 0.0)) throw DomainError("rate_I: beta must be positive");
  const double m = mean(mu);
  CompensatedSum entropy_part;
  const auto w = mu.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    entropy_part +=
        w[i] * (std::lgamma(static_cast<double>(i) + 1.0) + std::log(w[i]));
  }
  if (m == 0.0) return entropy_part.value() + beta / 2.0;
  return entropy_part.value() - (m / 2.0) * std::log(m * beta) +
         (m + beta) / 2.0;
}

double rate_I_divergence_form(const SparseMeasure& mu, double beta) {
  if (!(beta > 0.0)) throw DomainError("rate_I: beta must be positive");
  const double m = mean(mu);
  const double log_beta = std::log(beta);
  CompensatedSum divergence;
  const auto w = mu.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const double x = static_cast<double>(i);
    const double log_poisson = -beta + x * log_beta - std::lgamma(x + 1.0);
    divergence += w[i] * (std::log(w[i]) - log_poisson);
  }
  const double m_log_m = m > 0.0 ? m * std::log(m) : 0.0;
  return divergence.value() + 0.5 * (m - beta) + (m / 2.0) * log_beta -
         m_log_m / 2.0;
}

SparseMeasure truncate_renormalize(const SparseMeasure& nu, std::size_t k) {
  const auto w = nu.weights();
  const std::size_t top = std::min(k, nu.support_max());
  std::vector<double> head(w.begin(), w.begin() + static_cast<long>(top) + 1);
  CompensatedSum mass;
  for (double x : head) mass += x;
  if (!(mass.value() > 0.0)) {
    throw DomainError("truncate_renormalize: no mass on [0, k]");
  }
  if (top == nu.support_max()) return nu;
  return SparseMeasure::normalized(std::move(head));
}

void write_csv(std::ostream& out, const SparseMeasure& mu) {
  const auto old_precision = out.precision(17);
  out << "i,weight\n";
  const auto w = mu.weights();
  for (std::size_t i = 0; i < w.size(); ++i) out << i << ',' << w[i] << '\n';
  out.precision(old_precision);
}

SparseMeasure read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,weight", 0) != 0) {
    throw DomainError("measure CSV must start with header i,weight");
  }
  std::vector<double> w;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DomainError("malformed measure CSV row: " + line);
    }
    std::size_t index = 0;
    double weight = 0.0;
    try {
      index = std::stoul(line.substr(0, comma));
      weight = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw DomainError("malformed measure CSV row: " + line);
    }
    if (index >= w.size()) w.resize(index + 1, 0.0);
    w[index] = weight;
  }
  return SparseMeasure(std::move(w));
}

}  // namespace degldp
