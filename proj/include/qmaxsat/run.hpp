#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaxsat/formula.hpp"
#include "qmaxsat/oracle.hpp"
#include "qmaxsat/rng.hpp"
#include "qmaxsat/structured_state.hpp"

#include "json.hpp"

namespace qmaxsat {

enum class StopRule { kFixedR, kEpsilonGap };

struct RunConfig {
  int mu = 0;
  long long r = 1;              // fixed-r target
  double epsilon = 1e-2;        // epsilon-gap threshold
  StopRule stop_rule = StopRule::kFixedR;
  long long max_iterations = 0;  // epsilon-gap safety valve; 0 = 1e7
  int max_restarts = 100;
  std::uint64_t seed = 0;
  int enum_cap = kDefaultEnumCap;
  bool dump_amplitudes = false;
};

struct RunReport {
  std::uint64_t seed = 0;
  long long r_target = 0;  // fixed r, or the round the gap rule fired at
  long long iterations_completed = 0;
  int restarts = 0;
  std::vector<int> aux_outcomes;
  bool success = false;  // false only when max_restarts ran out
  TruthVector measured_truth_vector;
  Assignment measured_assignment = 0;
  std::uint32_t achieved_density = 0;
  bool satisfiable_verdict = false;
  double elapsed_seconds = 0.0;
  std::optional<std::string> amplitude_csv;
};

// The amplification loop: rotate, measure the auxiliary qubit, reset on
// |1>, restart from the prepared state on |0>. After the target number of
// straight successes, sample the clause register and then the assignment.
inline RunReport run_amplification(const Formula& f, const RunConfig& cfg) {
  if (cfg.stop_rule == StopRule::kFixedR && cfg.r < 1) {
    throw std::invalid_argument("fixed-r runs need r >= 1");
  }
  if (cfg.mu < 0) throw std::invalid_argument("mu must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  const long long iteration_cap =
      cfg.max_iterations > 0 ? cfg.max_iterations : 10'000'000;

  Rng rng(cfg.seed);
  RunReport report;
  report.seed = cfg.seed;
  report.r_target = cfg.stop_rule == StopRule::kFixedR ? cfg.r : 0;

  StructuredState prepared(f, cfg.mu, cfg.enum_cap);
  StructuredState state = prepared;
  long long successes = 0;
  bool gave_up = false;

  for (;;) {
    state.apply_partial_negation();
    const auto measured = state.measure_aux(rng);
    ++report.iterations_completed;
    report.aux_outcomes.push_back(measured.outcome);
    if (measured.outcome == 1) {
      ++successes;
      if (cfg.stop_rule == StopRule::kFixedR) {
        if (successes >= cfg.r) break;
      } else {
        const double gap =
            measured.prob_one * (1.0 - state.max_density_mass());
        if (gap <= cfg.epsilon) {
          report.r_target = successes;
          break;
        }
        if (successes >= iteration_cap) {
          gave_up = true;
          break;
        }
      }
    } else {
      ++report.restarts;
      if (report.restarts > cfg.max_restarts) {
        gave_up = true;
        break;
      }
      state = prepared;
      successes = 0;
    }
  }

  if (!gave_up) {
    report.success = true;
    if (cfg.dump_amplitudes) report.amplitude_csv = state.amplitude_csv();
    const auto sample = state.sample_solution(rng);
    report.measured_truth_vector = sample.truth_vector;
    report.measured_assignment = sample.assignment;
    report.achieved_density =
        static_cast<std::uint32_t>(sample.truth_vector.popcount());
    report.satisfiable_verdict =
        report.achieved_density == static_cast<std::uint32_t>(f.num_clauses());
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

// Flat JSON schema; measured fields are null on a failed run. The one
// field exempt from byte-stability under a fixed seed is elapsed_seconds.
inline nlohmann::json report_json(const RunReport& report) {
  nlohmann::json j{
      {"seed", report.seed},
      {"r_target", report.r_target},
      {"iterations_completed", report.iterations_completed},
      {"restarts", report.restarts},
      {"aux_outcomes", report.aux_outcomes},
      {"success", report.success},
      {"elapsed_seconds", report.elapsed_seconds},
  };
  if (report.success) {
    j["measured_truth_vector"] = report.measured_truth_vector.to_string();
    j["measured_assignment"] = report.measured_assignment;
    j["achieved_density"] = report.achieved_density;
    j["satisfiable_verdict"] = report.satisfiable_verdict;
  } else {
    j["measured_truth_vector"] = nullptr;
    j["measured_assignment"] = nullptr;
    j["achieved_density"] = nullptr;
    j["satisfiable_verdict"] = nullptr;
  }
  return j;
}

}  // namespace qmaxsat
