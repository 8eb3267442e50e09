#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace degldp {

// ERGM with edge parameter beta and isolated-vertex penalty gamma; the
// probability of G is proportional to
// (beta/n)^E (1 - beta/n)^(binom(n,2) - E) e^{-gamma h_0}.
struct PenaltyModel {
  double beta = 1.0;
  double gamma = 0.0;

  static PenaltyModel from_e_gamma(double beta, double e_gamma);
  double e_gamma() const;
};

// C(theta, gamma psi) = log(1 + e^gamma (e^theta - 1)).
double penalty_normalizer(double theta, double gamma);

// m(theta) = theta e^{gamma + theta} / (1 + e^gamma (e^theta - 1)).
double penalty_mean(double theta, double gamma);

// H_{gamma,beta}(theta) from the closed forms; H(0) = beta / 2.
double objective_H(double theta, const PenaltyModel& model);

// h_{a,b}(x) = a b e^x / (1 + b (e^x - 1)).
double fixed_point_map(double x, double a, double b);

struct FixedPoints {
  std::vector<double> roots;  // ascending
  // Set when one of the roots is a double root (h touches the diagonal).
  bool tangency = false;
  double double_root = 0.0;  // meaningful only when tangency is set
};

// Roots of theta = h_{beta, e^gamma}(theta) by sign scan plus bisection.
FixedPoints find_fixed_points(const PenaltyModel& model,
                              std::size_t grid_points = 64);

enum class Regime { kUniqueMin, kThreeRootsUniqueGlobal, kTwoGlobalMinima };

std::string_view to_string(Regime regime);

struct PhaseClassification {
  std::vector<double> roots;
  std::vector<double> local_minima;
  std::vector<double> global_minima;
  Regime regime = Regime::kUniqueMin;
  bool tangency = false;
  // With three roots, whether H at the middle root exceeds both outer roots.
  bool middle_is_local_max = false;
  // |H(theta_1) - H(theta_3)| when two local minima exist, else 0.
  double minima_gap = 0.0;
};

inline constexpr double kDefaultPhaseTieTol = 1e-6;

PhaseClassification classify_phase(const PenaltyModel& model,
                                   double tie_tol = kDefaultPhaseTieTol);

struct PhaseCell {
  double beta = 0.0;
  double e_gamma = 0.0;
  PhaseClassification phase;
};

struct PhaseScanRange {
  double beta_min = 0.5;
  double beta_max = 8.0;
  double e_gamma_min = 0.01;
  double e_gamma_max = 2.0;
  std::size_t beta_steps = 50;
  std::size_t e_gamma_steps = 50;
  double tie_tol = kDefaultPhaseTieTol;
};

// Row-major over beta, then e_gamma, with endpoints included. Cells are
// evaluated in parallel; the output order is fixed.
std::vector<PhaseCell> phase_scan(const PhaseScanRange& range,
                                  unsigned threads = 0);

// Header beta,e_gamma,regime,root1,root2,root3 (empty fields for absent
// roots).
void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);

struct CurvePoint {
  double theta = 0.0;
  double h = 0.0;
};

std::vector<CurvePoint> penalty_curve(const PenaltyModel& model,
                                      double theta_min, double theta_max,
                                      std::size_t points = 2048);

// Header theta,H.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

}  // namespace degldp
