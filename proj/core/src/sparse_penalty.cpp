#include "degldp/sparse_penalty.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "degldp/error.hpp"

namespace degldp {

namespace {

constexpr double kBisectionTol = 1e-12;

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive");
  }
}

double bisect_root(double lo, double hi, double g_lo, auto&& g) {
  for (int iter = 0; iter < 200 && hi - lo > kBisectionTol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Positive solutions of h'_{a,b}(x) = 1. With y = e^x and c = 1 - b this is
// b^2 y^2 + b c (2 - a) y + c^2 = 0, which has real roots only for b < 1 and
// a >= 4.
std::vector<double> critical_points(double a, double b) {
  std::vector<double> xs;
  if (!(b < 1.0) || a < 4.0) return xs;
  const double c = 1.0 - b;
  const double disc = std::sqrt(a * a - 4.0 * a);
  for (double sign : {-1.0, 1.0}) {
    const double y = c * ((a - 2.0) + sign * disc) / (2.0 * b);
    if (y > 1.0) xs.push_back(std::log(y));
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

PenaltyModel PenaltyModel::from_e_gamma(double beta, double e_gamma) {
  if (!(e_gamma > 0.0)) throw DomainError("e_gamma must be positive");
  return PenaltyModel{beta, std::log(e_gamma)};
}

double PenaltyModel::e_gamma() const { return std::exp(gamma); }

double penalty_normalizer(double theta, double gamma) {
  if (!(theta >= 0.0)) throw DomainError("theta must be non-negative");
  if (theta > 30.0) {
    const double b = std::exp(gamma);
    return theta + std::log(b + (1.0 - b) * std::exp(-theta));
  }
  return std::log1p(std::exp(gamma) * std::expm1(theta));
}

double penalty_mean(double theta, double gamma) {
  if (!(theta >= 0.0)) throw DomainError("theta must be non-negative");
  const double b = std::exp(gamma);
  return theta * b / (b + (1.0 - b) * std::exp(-theta));
}

double objective_H(double theta, const PenaltyModel& model) {
  require_beta(model.beta);
  if (theta == 0.0) return model.beta / 2.0;
  const double c = penalty_normalizer(theta, model.gamma);
  const double m = penalty_mean(theta, model.gamma);
  return m * std::log(theta) - c - (m / 2.0) * std::log(m * model.beta) +
         (m + model.beta) / 2.0;
}

double fixed_point_map(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("a and b must be positive");
  return a * b / (b + (1.0 - b) * std::exp(-x));
}

FixedPoints find_fixed_points(const PenaltyModel& model,
                              std::size_t grid_points) {
  require_beta(model.beta);
  const double a = model.beta;
  const double b = model.e_gamma();
  FixedPoints out;
  if (b == 1.0) {
    out.roots = {a};
    return out;
  }
  auto g = [a, b](double x) { return fixed_point_map(x, a, b) - x; };

  // h stays between a and ab, so every root lies below max(a, ab).
  const double x_max =
      std::max({4.0 * a, 50.0, 1.01 * std::max(a, a * b) + 1.0});
  const std::vector<double> crit = critical_points(a, b);

  // g is monotone between consecutive critical points, so the endpoints and
  // critical points alone bracket every sign change; the interior grid only
  // shortens the bisection brackets.
  std::vector<double> xs{0.0, x_max};
  xs.reserve(grid_points + 2 + crit.size());
  for (std::size_t k = 1; k < grid_points; ++k) {
    xs.push_back(x_max * static_cast<double>(k) /
                 static_cast<double>(grid_points));
  }
  xs.insert(xs.end(), crit.begin(), crit.end());
  std::sort(xs.begin(), xs.end());

  for (double xc : crit) {
    if (std::abs(g(xc)) < 1e-10 * std::max(1.0, xc)) {
      out.tangency = true;
      out.double_root = xc;
    }
  }

  double g_prev = g(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double g_cur = g(xs[k]);
    if (g_cur == 0.0) {
      out.roots.push_back(xs[k]);
    } else if (g_prev != 0.0 && (g_prev > 0.0) != (g_cur > 0.0)) {
      out.roots.push_back(bisect_root(xs[k - 1], xs[k], g_prev, g));
    }
    g_prev = g_cur;
  }

  if (out.tangency) {
    std::erase_if(out.roots, [&](double r) {
      return std::abs(r - out.double_root) < 1e-6;
    });
    out.roots.push_back(out.double_root);
    std::sort(out.roots.begin(), out.roots.end());
  }
  return out;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kUniqueMin:
      return "UniqueMin";
    case Regime::kThreeRootsUniqueGlobal:
      return "ThreeRootsUniqueGlobal";
    case Regime::kTwoGlobalMinima:
      return "TwoGlobalMinima";
  }
  return "Unknown";
}

PhaseClassification classify_phase(const PenaltyModel& model,
                                   double tie_tol) {
  const FixedPoints fp = find_fixed_points(model);
  PhaseClassification out;
  out.roots = fp.roots;
  out.tangency = fp.tangency;

  // H decreases while h(theta) > theta and increases after, so simple roots
  // alternate minimum, maximum, minimum; a double root is neither.
  if (fp.roots.size() == 3) {
    out.local_minima = {fp.roots[0], fp.roots[2]};
    const double h1 = objective_H(fp.roots[0], model);
    const double h2 = objective_H(fp.roots[1], model);
    const double h3 = objective_H(fp.roots[2], model);
    out.middle_is_local_max = h2 > std::max(h1, h3);
  } else {
    for (double r : fp.roots) {
      if (!(fp.tangency && r == fp.double_root)) out.local_minima.push_back(r);
    }
  }

  if (out.local_minima.size() == 2) {
    const double h1 = objective_H(out.local_minima[0], model);
    const double h3 = objective_H(out.local_minima[1], model);
    out.minima_gap = std::abs(h1 - h3);
    if (out.minima_gap <= tie_tol) {
      out.regime = Regime::kTwoGlobalMinima;
      out.global_minima = out.local_minima;
    } else {
      out.regime = Regime::kThreeRootsUniqueGlobal;
      out.global_minima = {h1 < h3 ? out.local_minima[0]
                                   : out.local_minima[1]};
    }
  } else {
    out.global_minima = out.local_minima;
    out.regime = fp.tangency && fp.roots.size() == 2
                     ? Regime::kThreeRootsUniqueGlobal
                     : Regime::kUniqueMin;
  }
  return out;
}

std::vector<PhaseCell> phase_scan(const PhaseScanRange& range,
                                  unsigned threads) {
  if (!(range.beta_min > 0.0) || range.beta_max < range.beta_min ||
      !(range.e_gamma_min > 0.0) || range.e_gamma_max < range.e_gamma_min ||
      range.beta_steps == 0 || range.e_gamma_steps == 0) {
    throw DomainError("phase_scan needs positive ranges and resolution");
  }
  auto axis = [](double lo, double hi, std::size_t steps, std::size_t k) {
    return steps == 1 ? lo
                      : lo + (hi - lo) * static_cast<double>(k) /
                                 static_cast<double>(steps - 1);
  };
  std::vector<PhaseCell> cells(range.beta_steps * range.e_gamma_steps);
  for (std::size_t i = 0; i < range.beta_steps; ++i) {
    for (std::size_t j = 0; j < range.e_gamma_steps; ++j) {
      PhaseCell& cell = cells[i * range.e_gamma_steps + j];
      cell.beta = axis(range.beta_min, range.beta_max, range.beta_steps, i);
      cell.e_gamma =
          axis(range.e_gamma_min, range.e_gamma_max, range.e_gamma_steps, j);
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, cells.size()));
  auto work = [&](unsigned worker) {
    for (std::size_t c = worker; c < cells.size(); c += threads) {
      cells[c].phase = classify_phase(
          PenaltyModel::from_e_gamma(cells[c].beta, cells[c].e_gamma),
          range.tie_tol);
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  return cells;
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
  const auto old_precision = out.precision(17);
  out << "beta,e_gamma,regime,root1,root2,root3\n";
  for (const PhaseCell& cell : cells) {
    out << cell.beta << ',' << cell.e_gamma << ','
        << to_string(cell.phase.regime);
    for (std::size_t r = 0; r < 3; ++r) {
      out << ',';
      if (r < cell.phase.roots.size()) out << cell.phase.roots[r];
    }
    out << '\n';
  }
  out.precision(old_precision);
}

std::vector<CurvePoint> penalty_curve(const PenaltyModel& model,
                                      double theta_min, double theta_max,
                                      std::size_t points) {
  if (!(theta_min >= 0.0) || !(theta_max > theta_min) || points < 2) {
    throw DomainError("penalty_curve needs 0 <= theta_min < theta_max");
  }
  std::vector<CurvePoint> curve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double theta =
        theta_min + (theta_max - theta_min) * static_cast<double>(k) /
                        static_cast<double>(points - 1);
    curve[k] = {theta, objective_H(theta, model)};
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  const auto old_precision = out.precision(17);
  out << "theta,H\n";
  for (const CurvePoint& p : curve) out << p.theta << ',' << p.h << '\n';
  out.precision(old_precision);
}

}  // namespace degldp
