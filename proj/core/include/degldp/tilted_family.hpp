#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "degldp/measure.hpp"
#include "degldp/statistic.hpp"

namespace degldp {

inline constexpr double kDefaultSeriesTailTol = 1e-15;

// sigma_{theta,f}(i) = theta^i e^{f(i)} / (i! e^{C(theta,f)}), realized by
// truncation where the analytic tail bound drops below tail_tol relative to
// the partial sum.
struct TiltedMeasure {
  double theta = 0.0;
  DegreeStatistic statistic;
  double log_normalizer = 0.0;  // C(theta, f)
  SparseMeasure measure;
  double mean_value = 0.0;  // m(theta)
};

// C(theta, f) = log sum_i theta^i e^{f(i)} / i!. Throws DegenerateStatistic
// for superlinear f.
double log_normalizer(double theta, const DegreeStatistic& f,
                      double tail_tol = kDefaultSeriesTailTol);

// m(theta), the mean of sigma_{theta,f}, summed directly from the series.
double tilted_mean(double theta, const DegreeStatistic& f,
                   double tail_tol = kDefaultSeriesTailTol);

// Variance of sigma_{theta,f}; m'(theta) = variance / theta.
double tilted_variance(double theta, const DegreeStatistic& f,
                       double tail_tol = kDefaultSeriesTailTol);

TiltedMeasure tilt(double theta, const DegreeStatistic& f,
                   double tail_tol = kDefaultSeriesTailTol);

// H(theta) = m log theta - C - (m/2) log(m beta) + (m + beta)/2, which equals
// I(sigma_{theta,f}) - sigma_{theta,f}(f). H(0) = beta/2.
double variational_objective(double theta, const DegreeStatistic& f,
                             double beta,
                             double tail_tol = kDefaultSeriesTailTol);

// |theta - sqrt(beta m(theta))|; zero exactly at stationary points of H.
double stationarity_residual(double theta, const DegreeStatistic& f,
                             double beta,
                             double tail_tol = kDefaultSeriesTailTol);

struct SolveOptions {
  std::size_t grid_points = 4096;
  // Initial scan bound; non-positive means 4 beta + 8.
  double theta_max_start = 0.0;
  double confinement_margin = 1.0;
  int max_doublings = 60;
  double golden_tol = 1e-10;
  double dedupe_tol = 1e-8;
  // Relative: a minimum is global when within tie_tol * (1 + |J|) of J.
  double tie_tol = 1e-9;
  double tail_tol = kDefaultSeriesTailTol;
};

struct Minimizer {
  double theta = 0.0;
  double value = 0.0;
  double stationarity_residual = 0.0;
};

struct VariationalSolution {
  std::string statistic_label;
  double beta = 0.0;
  // Global minimizers (the set A_f).
  std::vector<Minimizer> minimizers;
  // Every refined local minimum, ascending in theta.
  std::vector<Minimizer> local_minima;
  double j_value = 0.0;
  double theta_max = 0.0;
  bool degenerate = false;
};

// J(f) = inf_theta H(theta) by a dense scan on [0, theta_max] with adaptive
// theta_max, golden-section refinement of every discrete local minimum and a
// bisection polish on the stationarity relation.
//
// Throws DegenerateStatistic for superlinear f and NoConfinement if the scan
// bound cannot be expanded far enough.
VariationalSolution solve_J(const DegreeStatistic& f, double beta,
                            const SolveOptions& opts = {});

// JSON record {statistic_label, beta, j_value, minimizers:[{theta, value,
// residual}], degenerate}.
std::string to_json(const VariationalSolution& solution, int indent = 2);

}  // namespace degldp
