#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaxsat/oracle.hpp"

#include "json.hpp"

namespace qmaxsat {

struct ConvergencePoint {
  int r = 0;
  double pr_ax_one = 0.0;  // aux measured |1> at iteration r
  double pr_cmax = 0.0;    // state carries a maximum-density truth vector
};

struct TuningResult {
  double pr_max = 0.0;
  double omega = 0.0;
  int mu_required = 0;
};

struct IterationBound {
  long long exact = 0;          // smallest r with sin^2r((m-1)pi/2m) <= 10^-lambda
  double quadratic_bound = 0.0;  // lambda*(2m/pi)^2 approximation
};

struct FirstIterationBounds {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool within = false;
};

namespace detail {

// Density classes of a profile after the dummy shift, as sines of the
// per-iteration rotation angle. Sorted ascending by density, so the last
// class is the maximal one and (angles <= pi/2) carries the largest sine.
struct SineClasses {
  std::vector<double> sines;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  double sine_max = 0.0;
  std::uint64_t count_max = 0;
};

inline SineClasses sine_classes(const DensityProfile& profile, int mu) {
  if (mu < 0) throw std::invalid_argument("mu must be >= 0");
  if (profile.histogram.empty()) throw std::invalid_argument("empty profile");
  const int root_order = profile.m + mu;
  SineClasses sc;
  for (const auto& [d, count] : profile.histogram) {
    const double theta =
        std::numbers::pi * (d + mu) / (2.0 * root_order);
    sc.sines.push_back(std::sin(theta));
    sc.counts.push_back(count);
    sc.total += count;
  }
  sc.sine_max = sc.sines.back();
  sc.count_max = sc.counts.back();
  return sc;
}

// Kahan-compensated sum of count * (sine/sine_max)^(2r). Ratios whose
// power drops below 1e-300 are dropped and flagged; the maximal class
// contributes count_max exactly, so the sum never vanishes.
inline double relative_power_sum(const SineClasses& sc, long long r,
                                 bool* underflow) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < sc.sines.size(); ++i) {
    double term;
    if (r == 0) {
      term = static_cast<double>(sc.counts[i]);
    } else {
      const double w = sc.sines[i] / sc.sine_max;
      if (w <= 0.0) continue;
      const double logterm = 2.0 * static_cast<double>(r) * std::log(w);
      if (logterm < -690.0) {  // exp would be below ~1e-300
        if (underflow) *underflow = true;
        continue;
      }
      term = static_cast<double>(sc.counts[i]) * std::exp(logterm);
    }
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

inline double clamp_probability(double p) {
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

}  // namespace detail

// First-iteration probability of reading the auxiliary qubit as |1>:
// the mean of sin^2((d_k+mu)*pi / (2*(m+mu))) over all assignments.
inline double pr_aux_one_first(const DensityProfile& profile, int mu) {
  const auto sc = detail::sine_classes(profile, mu);
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < sc.sines.size(); ++i) {
    const double y = sc.counts[i] * sc.sines[i] * sc.sines[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return detail::clamp_probability(sum / static_cast<double>(sc.total));
}

// Probability of the r-th auxiliary measurement reading |1>, conditioned on
// the previous r-1 having read |1>: a ratio of sine power sums.
inline double pr_aux_one_at(const DensityProfile& profile, int mu, long long r,
                            bool* underflow = nullptr) {
  if (r < 1) throw std::invalid_argument("iteration index must be >= 1");
  const auto sc = detail::sine_classes(profile, mu);
  if (sc.sine_max <= 0.0) {
    throw std::domain_error("degenerate profile: every density is zero");
  }
  const double num = detail::relative_power_sum(sc, r, underflow);
  const double den = detail::relative_power_sum(sc, r - 1, underflow);
  return detail::clamp_probability(sc.sine_max * sc.sine_max * num / den);
}

// Probability that iteration r both post-selects |1> and leaves the state
// on a maximum-density truth vector. Counts every maximal assignment.
inline double pr_max_density_at(const DensityProfile& profile, int mu,
                                long long r, bool* underflow = nullptr) {
  if (r < 1) throw std::invalid_argument("iteration index must be >= 1");
  const auto sc = detail::sine_classes(profile, mu);
  if (sc.sine_max <= 0.0) {
    throw std::domain_error("degenerate profile: every density is zero");
  }
  const double den = detail::relative_power_sum(sc, r - 1, underflow);
  return detail::clamp_probability(sc.sine_max * sc.sine_max *
                                   static_cast<double>(sc.count_max) / den);
}

// Worst-case iteration count (d_max = m, d_nm = m-1) for a residual of
// 10^-lambda, plus the quadratic lambda*(2m/pi)^2 approximation it
// dominates.
inline IterationBound required_iterations(int m, double lambda) {
  if (m < 2) throw std::invalid_argument("root order must be >= 2");
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be > 0");
  const double log_cos = std::log(std::cos(std::numbers::pi / (2.0 * m)));
  const double exact = lambda * std::numbers::ln10 / (-2.0 * log_cos);
  IterationBound bound;
  bound.exact = static_cast<long long>(std::ceil(exact));
  const double q = 2.0 * m / std::numbers::pi;
  bound.quadratic_bound = lambda * q * q;
  return bound;
}

// Dummy qubits needed so the first-iteration aux probability reaches
// pr_max without knowing d_max, assuming the 7/8 mean density.
inline TuningResult required_dummy_qubits(int m, double pr_max) {
  if (!(pr_max > 0.0 && pr_max < 1.0)) {
    throw std::invalid_argument("pr_max must lie in (0, 1)");
  }
  TuningResult result;
  result.pr_max = pr_max;
  result.omega = 2.0 / std::numbers::pi * std::asin(std::sqrt(pr_max));
  if (result.omega <= 7.0 / 8.0) {
    result.mu_required = 0;
  } else {
    const double need = m * (result.omega - 7.0 / 8.0) / (1.0 - result.omega);
    result.mu_required = static_cast<int>(std::ceil(need));
  }
  return result;
}

// Universal first-iteration bounds for distinct-variable E3 formulas:
// 1 - pi^2/32 <= Pr <= sin(7*pi/16).
inline FirstIterationBounds first_iteration_bounds(
    const DensityProfile& profile) {
  FirstIterationBounds b;
  b.value = pr_aux_one_first(profile, 0);
  b.lower = 1.0 - std::numbers::pi * std::numbers::pi / 32.0;
  b.upper = std::sin(7.0 * std::numbers::pi / 16.0);
  b.within = b.value >= b.lower && b.value <= b.upper;
  return b;
}

inline std::vector<ConvergencePoint> convergence_curve(
    const DensityProfile& profile, int mu, int r_max) {
  if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
  std::vector<ConvergencePoint> curve;
  curve.reserve(r_max);
  for (int r = 1; r <= r_max; ++r) {
    curve.push_back({r, pr_aux_one_at(profile, mu, r),
                     pr_max_density_at(profile, mu, r)});
  }
  return curve;
}

// Shortest decimal form that round-trips.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string curve_csv(const std::vector<ConvergencePoint>& curve) {
  std::string out = "r,pr_ax_one,pr_cmax\n";
  for (const ConvergencePoint& p : curve) {
    out += std::to_string(p.r) + "," + format_double(p.pr_ax_one) + "," +
           format_double(p.pr_cmax) + "\n";
  }
  return out;
}

inline nlohmann::json bounds_json(const FirstIterationBounds& b) {
  return {{"value", b.value},
          {"lower", b.lower},
          {"upper", b.upper},
          {"within", b.within}};
}

inline nlohmann::json tuning_json(const TuningResult& t) {
  return {{"pr_max", t.pr_max},
          {"omega", t.omega},
          {"mu_required", t.mu_required}};
}

inline nlohmann::json iterations_json(const IterationBound& b) {
  return {{"exact", b.exact}, {"quadratic_bound", b.quadratic_bound}};
}

}  // namespace qmaxsat
