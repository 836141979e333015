#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaxsat/formula.hpp"

#include "json.hpp"

namespace qmaxsat {

// Enumeration over 2^n assignments is capped; callers may raise the cap
// explicitly when they mean it.
inline constexpr int kDefaultEnumCap = 24;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact 1-density of every assignment's truth vector, plus the histogram
// density -> number of assignments.
struct DensityProfile {
  int n = 0;
  int m = 0;
  std::vector<std::uint32_t> densities;
  std::map<std::uint32_t, std::uint64_t> histogram;

  std::uint64_t assignment_count() const { return densities.size(); }
};

struct MaxReport {
  std::uint32_t d_max = 0;
  std::vector<Assignment> argmax;
  // Next-largest density strictly below d_max; absent when the profile is
  // uniform (every assignment ties).
  std::optional<std::uint32_t> d_nm;
  bool satisfiable = false;
};

inline void check_enum_cap(int n, int enum_cap) {
  if (n > enum_cap) {
    throw CapExceeded("enumeration over 2^" + std::to_string(n) +
                      " assignments exceeds the cap of 2^" +
                      std::to_string(enum_cap));
  }
}

inline DensityProfile density_profile(const Formula& f,
                                      int enum_cap = kDefaultEnumCap) {
  check_enum_cap(f.num_vars(), enum_cap);
  const std::uint64_t count = f.assignment_count();
  const int m = f.num_clauses();

  // An E3 clause is violated by exactly one setting of its three
  // variables: x_v == negated for each literal.
  std::vector<std::uint32_t> masks(m), patterns(m);
  for (int j = 0; j < m; ++j) {
    std::uint32_t mask = 0, pattern = 0;
    for (const Literal& l : f.clauses()[j].literals()) {
      mask |= 1u << l.var;
      if (l.negated) pattern |= 1u << l.var;
    }
    masks[j] = mask;
    patterns[j] = pattern;
  }

  DensityProfile profile;
  profile.n = f.num_vars();
  profile.m = m;
  profile.densities.resize(count);
  std::vector<std::uint64_t> counts(m + 1, 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto a = static_cast<std::uint32_t>(k);
    int violated = 0;
    for (int j = 0; j < m; ++j) {
      violated += (a & masks[j]) == patterns[j];
    }
    const auto d = static_cast<std::uint32_t>(m - violated);
    profile.densities[k] = d;
    ++counts[d];
  }
  for (std::uint32_t d = 0; d <= static_cast<std::uint32_t>(m); ++d) {
    if (counts[d] > 0) profile.histogram.emplace(d, counts[d]);
  }
  return profile;
}

inline MaxReport max_report(const DensityProfile& profile) {
  if (profile.densities.empty()) throw std::invalid_argument("empty profile");
  MaxReport report;
  report.d_max = profile.histogram.rbegin()->first;
  if (profile.histogram.size() > 1) {
    report.d_nm = std::next(profile.histogram.rbegin())->first;
  }
  for (std::uint64_t k = 0; k < profile.assignment_count(); ++k) {
    if (profile.densities[k] == report.d_max) {
      report.argmax.push_back(static_cast<Assignment>(k));
    }
  }
  report.satisfiable = report.d_max == static_cast<std::uint32_t>(profile.m);
  return report;
}

inline MaxReport brute_force_max(const Formula& f,
                                 int enum_cap = kDefaultEnumCap) {
  return max_report(density_profile(f, enum_cap));
}

// CSV export, columns k,density.
inline std::string profile_csv(const DensityProfile& profile) {
  std::string out = "k,density\n";
  for (std::uint64_t k = 0; k < profile.assignment_count(); ++k) {
    out += std::to_string(k) + "," + std::to_string(profile.densities[k]) + "\n";
  }
  return out;
}

inline nlohmann::json histogram_json(const DensityProfile& profile) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [d, c] : profile.histogram) {
    hist[std::to_string(d)] = c;
  }
  return nlohmann::json{{"n", profile.n}, {"m", profile.m}, {"histogram", hist}};
}

}  // namespace qmaxsat
