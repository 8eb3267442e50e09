#include "degldp/statistic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "degldp/error.hpp"

namespace degldp {

namespace {

std::string format_label(const std::string& name,
                         std::initializer_list<std::pair<const char*, double>>
                             params,
                         const std::string& suffix = {}) {
  std::ostringstream out;
  out.precision(12);
  out << name << '(';
  bool first = true;
  for (const auto& [key, value] : params) {
    if (!first) out << ',';
    out << key << '=' << value;
    first = false;
  }
  out << ')' << suffix;
  return out.str();
}

}  // namespace

double binomial(std::size_t i, std::size_t k) {
  if (k > i) return 0.0;
  double c = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    c = c * static_cast<double>(i - j) / static_cast<double>(j + 1);
  }
  return c;
}

DegreeStatistic::DegreeStatistic(std::string label, Eval eval,
                                 GrowthClass growth, UpperEnvelope envelope)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      growth_(growth),
      envelope_(envelope) {
  if (!eval_) throw DomainError("statistic needs an evaluation function");
  if (eval_(0) != 0.0) {
    throw DomainError("degree statistic must satisfy f(0) = 0: " + label_);
  }
}

bool DegreeStatistic::within_growth(std::size_t i, double value) const {
  if (std::isnan(value)) return false;
  const double x = static_cast<double>(i);
  const double slack = 1e-9 * (1.0 + std::abs(value));
  if (!superlinear() &&
      value > envelope_.offset + envelope_.slope * x + slack) {
    return false;
  }
  switch (growth_.kind) {
    case Growth::kBounded:
      return std::abs(value) <= growth_.constant + slack;
    case Growth::kLinear: {
      const double bound = growth_.constant * x + slack;
      return growth_.one_sided ? value <= bound : std::abs(value) <= bound;
    }
    case Growth::kSuperlinear:
      return true;
  }
  return true;
}

std::vector<double> DegreeStatistic::table(std::size_t upto) const {
  std::vector<double> values(upto + 1);
  for (std::size_t i = 0; i <= upto; ++i) {
    values[i] = eval_(i);
    if (!within_growth(i, values[i])) {
      std::ostringstream msg;
      msg << label_ << " violates its declared growth class at i = " << i;
      throw DomainError(msg.str());
    }
  }
  return values;
}

DegreeStatistic zero_statistic() {
  return DegreeStatistic(
      "zero", [](std::size_t) { return 0.0; },
      GrowthClass{Growth::kBounded, 0.0, false}, UpperEnvelope{0.0, 0.0});
}

DegreeStatistic linear_statistic(double c) {
  if (!std::isfinite(c)) throw DomainError("linear: c must be finite");
  return DegreeStatistic(
      format_label("linear", {{"c", c}}),
      [c](std::size_t i) { return c * static_cast<double>(i); },
      GrowthClass{Growth::kLinear, std::abs(c), false},
      UpperEnvelope{std::max(c, 0.0), 0.0});
}

DegreeStatistic kstar_statistic(int k, double gamma) {
  if (k < 2) throw DomainError("kstar: k must be an integer >= 2");
  if (!std::isfinite(gamma)) throw DomainError("kstar: gamma must be finite");
  const auto kk = static_cast<std::size_t>(k);
  auto eval = [kk, gamma](std::size_t i) { return gamma * binomial(i, kk); };
  const std::string label =
      format_label("kstar", {{"k", static_cast<double>(k)}, {"gamma", gamma}});
  if (gamma > 0.0) {
    return DegreeStatistic(label, eval,
                           GrowthClass{Growth::kSuperlinear, 0.0, false},
                           UpperEnvelope{});
  }
  // gamma <= 0: f <= 0, so the one-sided linear bound holds with C = 0.
  return DegreeStatistic(label, eval, GrowthClass{Growth::kLinear, 0.0, true},
                         UpperEnvelope{0.0, 0.0});
}

DegreeStatistic gwd_statistic(double lambda1, double gamma) {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) {
    throw DomainError("gwd: lambda1 must be positive");
  }
  if (!std::isfinite(gamma)) throw DomainError("gwd: gamma must be finite");
  return DegreeStatistic(
      format_label("gwd", {{"lambda1", lambda1}, {"gamma", gamma}},
                   " shifted by -gamma so f(0)=0"),
      [lambda1, gamma](std::size_t i) {
        return gamma * std::expm1(-lambda1 * static_cast<double>(i));
      },
      GrowthClass{Growth::kBounded, std::abs(gamma), false},
      UpperEnvelope{0.0, std::max(-gamma, 0.0)});
}

DegreeStatistic alt_kstar_statistic(double lambda2, double gamma) {
  if (!(lambda2 > 0.0 && lambda2 < 1.0)) {
    throw DomainError("alt_kstar: lambda2 must lie in (0, 1)");
  }
  if (!std::isfinite(gamma)) {
    throw DomainError("alt_kstar: gamma must be finite");
  }
  const double scale = gamma / (lambda2 * lambda2);
  const double log_base = std::log1p(-lambda2);
  // The bracket lies in [0, i * lambda2], so f <= max(gamma, 0) i / lambda2.
  return DegreeStatistic(
      format_label("alt_kstar", {{"lambda2", lambda2}, {"gamma", gamma}}),
      [scale, log_base, lambda2](std::size_t i) {
        const double x = static_cast<double>(i);
        return scale * (std::expm1(x * log_base) + x * lambda2);
      },
      GrowthClass{Growth::kLinear, std::abs(gamma) * (1.0 + 1.0 / lambda2),
                  false},
      UpperEnvelope{std::max(gamma, 0.0) / lambda2, 0.0});
}

DegreeStatistic penalty_statistic(double gamma) {
  if (!std::isfinite(gamma)) {
    throw DomainError("penalty: gamma must be finite");
  }
  return DegreeStatistic(
      format_label("penalty", {{"gamma", gamma}}),
      [gamma](std::size_t i) { return i == 0 ? 0.0 : gamma; },
      GrowthClass{Growth::kBounded, std::abs(gamma), false},
      UpperEnvelope{0.0, std::max(gamma, 0.0)});
}

DegreeStatistic custom_statistic(std::vector<double> values,
                                 std::string label) {
  if (values.empty()) throw DomainError("custom statistic needs values");
  double bound = 0.0;
  double top = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("custom values must be finite");
    bound = std::max(bound, std::abs(v));
    top = std::max(top, v);
  }
  return DegreeStatistic(
      std::move(label),
      [values = std::move(values)](std::size_t i) {
        return values[std::min(i, values.size() - 1)];
      },
      GrowthClass{Growth::kBounded, bound, false}, UpperEnvelope{0.0, top});
}

}  // namespace degldp
