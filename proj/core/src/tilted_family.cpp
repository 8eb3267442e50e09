#include "degldp/tilted_family.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "degldp/error.hpp"
#include "degldp/summation.hpp"

namespace degldp {

namespace {

constexpr std::size_t kMaxSeriesTerms = 50'000'000;

struct SeriesSums {
  double log_normalizer = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> probabilities;  // filled only on request
};

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

void require_summable(const DegreeStatistic& f) {
  if (f.superlinear()) {
    throw DegenerateStatistic("C(theta, f) diverges for superlinear " +
                              f.label());
  }
}

SeriesSums sum_series(double theta, const DegreeStatistic& f, double tail_tol,
                      bool keep_probabilities) {
  require_summable(f);
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw DomainError("theta must be finite and non-negative");
  }
  if (!(tail_tol > 0.0)) throw DomainError("tail_tol must be positive");

  SeriesSums out;
  if (theta == 0.0) {
    if (keep_probabilities) out.probabilities = {1.0};
    return out;
  }

  const double log_theta = std::log(theta);
  const UpperEnvelope env = f.envelope();
  const double log_x = log_theta + env.slope;
  const double x = std::exp(log_x);
  const double log_tol = std::log(tail_tol);

  std::vector<double> log_terms;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0;; ++i) {
    const double fi = f(i);
    if (!f.within_growth(i, fi)) {
      std::ostringstream msg;
      msg << f.label() << " violates its declared growth class at i = " << i;
      throw DomainError(msg.str());
    }
    const double di = static_cast<double>(i);
    const double t =
        (i == 0 ? 0.0 : di * log_theta) - std::lgamma(di + 1.0) + fi;
    log_terms.push_back(t);
    running = log_add(running, t);
    // sum_{j > i} e^{offset} x^j / j! <= e^{offset} x^{i+1} / (i+1)!
    //                                    / (1 - x / (i + 2)).
    const double next = di + 2.0;
    if (next > x) {
      const double log_tail = env.offset + (di + 1.0) * log_x -
                              std::lgamma(di + 2.0) - std::log1p(-x / next);
      if (log_tail < log_tol + running) break;
    }
    if (i > kMaxSeriesTerms) {
      throw DomainError("series for C(theta, f) did not converge");
    }
  }

  const double top = *std::max_element(log_terms.begin(), log_terms.end());
  CompensatedSum s0;
  CompensatedSum s1;
  std::vector<double> w(log_terms.size());
  for (std::size_t i = 0; i < log_terms.size(); ++i) {
    w[i] = std::exp(log_terms[i] - top);
    s0 += w[i];
    s1 += static_cast<double>(i) * w[i];
  }
  const double z = s0.value();
  out.log_normalizer = top + std::log(z);
  out.mean = s1.value() / z;
  CompensatedSum s2;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double dev = static_cast<double>(i) - out.mean;
    s2 += dev * dev * w[i];
  }
  out.variance = s2.value() / z;
  if (keep_probabilities) out.probabilities = std::move(w);
  return out;
}

double objective_from(double theta, double log_norm, double m, double beta) {
  if (theta == 0.0 || m == 0.0) return beta / 2.0;
  return m * std::log(theta) - log_norm - (m / 2.0) * std::log(m * beta) +
         (m + beta) / 2.0;
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive");
  }
}

double golden_section(const std::function<double(double)>& h, double lo,
                      double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = h(c);
  double fd = h(d);
  for (int iter = 0; iter < 500 && hi - lo > tol; ++iter) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = h(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = h(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double log_normalizer(double theta, const DegreeStatistic& f,
                      double tail_tol) {
  return sum_series(theta, f, tail_tol, false).log_normalizer;
}

double tilted_mean(double theta, const DegreeStatistic& f, double tail_tol) {
  return sum_series(theta, f, tail_tol, false).mean;
}

double tilted_variance(double theta, const DegreeStatistic& f,
                       double tail_tol) {
  return sum_series(theta, f, tail_tol, false).variance;
}

TiltedMeasure tilt(double theta, const DegreeStatistic& f, double tail_tol) {
  SeriesSums sums = sum_series(theta, f, tail_tol, true);
  return TiltedMeasure{theta, f, sums.log_normalizer,
                       SparseMeasure::normalized(std::move(sums.probabilities)),
                       sums.mean};
}

double variational_objective(double theta, const DegreeStatistic& f,
                             double beta, double tail_tol) {
  require_beta(beta);
  const SeriesSums sums = sum_series(theta, f, tail_tol, false);
  return objective_from(theta, sums.log_normalizer, sums.mean, beta);
}

double stationarity_residual(double theta, const DegreeStatistic& f,
                             double beta, double tail_tol) {
  require_beta(beta);
  return std::abs(theta - std::sqrt(beta * tilted_mean(theta, f, tail_tol)));
}

VariationalSolution solve_J(const DegreeStatistic& f, double beta,
                            const SolveOptions& opts) {
  require_summable(f);
  require_beta(beta);
  if (opts.grid_points < 3) throw DomainError("solve_J needs >= 3 grid points");

  auto objective = [&](double theta) {
    return variational_objective(theta, f, beta, opts.tail_tol);
  };
  auto stationarity = [&](double theta) {
    return theta - std::sqrt(beta * tilted_mean(theta, f, opts.tail_tol));
  };

  const std::size_t n = opts.grid_points;
  double theta_max =
      opts.theta_max_start > 0.0 ? opts.theta_max_start : 4.0 * beta + 8.0;
  std::vector<double> grid(n);
  std::vector<double> values(n);
  bool confined = false;
  for (int doubling = 0; doubling <= opts.max_doublings; ++doubling) {
    for (std::size_t k = 0; k < n; ++k) {
      grid[k] = theta_max * static_cast<double>(k) / static_cast<double>(n - 1);
      values[k] = objective(grid[k]);
    }
    const double interior_min =
        *std::min_element(values.begin(), values.end() - 1);
    if (values[n - 1] - interior_min >= opts.confinement_margin &&
        values[n - 1] > values[n - 2]) {
      confined = true;
      break;
    }
    theta_max *= 2.0;
  }
  if (!confined) {
    throw NoConfinement("objective not confined for " + f.label());
  }

  std::vector<Minimizer> candidates;
  if (values[0] < values[1]) candidates.push_back({0.0, values[0], 0.0});
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!(values[k] <= values[k - 1] && values[k] < values[k + 1])) continue;
    const double lo = grid[k - 1];
    const double hi = grid[k + 1];
    double best = golden_section(objective, lo, hi, opts.golden_tol);
    double best_value = objective(best);

    // Polish on theta = sqrt(beta m(theta)); H' has the sign of this gap.
    double a = lo > 0.0 ? lo : hi * 1e-9;
    double b = hi;
    if (stationarity(a) < 0.0 && stationarity(b) > 0.0) {
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        (stationarity(mid) < 0.0 ? a : b) = mid;
      }
      const double root = 0.5 * (a + b);
      const double root_value = objective(root);
      if (root_value <= best_value + 1e-12 * (1.0 + std::abs(best_value))) {
        best = root;
        best_value = root_value;
      }
    }
    candidates.push_back(
        {best, best_value, std::abs(stationarity(best))});
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Minimizer& x, const Minimizer& y) {
              return x.theta < y.theta;
            });
  VariationalSolution solution;
  solution.statistic_label = f.label();
  solution.beta = beta;
  solution.theta_max = theta_max;
  for (const Minimizer& c : candidates) {
    if (!solution.local_minima.empty() &&
        c.theta - solution.local_minima.back().theta < opts.dedupe_tol) {
      if (c.value < solution.local_minima.back().value) {
        solution.local_minima.back() = c;
      }
      continue;
    }
    solution.local_minima.push_back(c);
  }
  if (solution.local_minima.empty()) {
    // Monotone on the grid: the minimum sits at a grid endpoint.
    const auto at = std::min_element(values.begin(), values.end());
    const double theta = grid[static_cast<std::size_t>(at - values.begin())];
    solution.local_minima.push_back(
        {theta, *at, theta == 0.0 ? 0.0 : std::abs(stationarity(theta))});
  }

  double j = std::numeric_limits<double>::infinity();
  for (const Minimizer& m : solution.local_minima) j = std::min(j, m.value);
  solution.j_value = j;
  const double tie = opts.tie_tol * (1.0 + std::abs(j));
  for (const Minimizer& m : solution.local_minima) {
    if (m.value <= j + tie) solution.minimizers.push_back(m);
  }
  return solution;
}

std::string to_json(const VariationalSolution& solution, int indent) {
  nlohmann::ordered_json out;
  out["statistic_label"] = solution.statistic_label;
  out["beta"] = solution.beta;
  out["j_value"] = solution.j_value;
  auto& list = out["minimizers"] = nlohmann::ordered_json::array();
  for (const Minimizer& m : solution.minimizers) {
    list.push_back({{"theta", m.theta},
                    {"value", m.value},
                    {"residual", m.stationarity_residual}});
  }
  out["degenerate"] = solution.degenerate;
  return out.dump(indent);
}

}  // namespace degldp
