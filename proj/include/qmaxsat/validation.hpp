#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qmaxsat/dense_state.hpp"
#include "qmaxsat/formula.hpp"
#include "qmaxsat/structured_state.hpp"

namespace qmaxsat {

struct ForcedRun {
  StructuredState state;
  std::vector<double> aux_prob_one;
};

// Structured-engine run with every auxiliary measurement forced to |1>.
inline ForcedRun forced_successes(const Formula& f, int mu, int r_successes,
                                  int enum_cap = kDefaultEnumCap) {
  ForcedRun run{StructuredState(f, mu, enum_cap), {}};
  for (int i = 0; i < r_successes; ++i) {
    run.state.apply_partial_negation();
    run.aux_prob_one.push_back(run.state.measure_aux_forced(1).prob_one);
  }
  return run;
}

// Largest absolute deviation between the two engines across: the per-round
// aux probabilities, the assignment marginal, and the clause-register
// marginal, after r forced post-selections.
inline double engine_max_deviation(const Formula& f, int mu, int r_successes,
                                   int naive_cap = kDefaultNaiveCap,
                                   int enum_cap = kDefaultEnumCap) {
  const DenseRun dense = dense_run(f, mu, r_successes, naive_cap);
  const ForcedRun structured = forced_successes(f, mu, r_successes, enum_cap);

  double dev = 0.0;
  for (int i = 0; i < r_successes; ++i) {
    dev = std::max(dev, std::abs(dense.aux_prob_one[i] -
                                 structured.aux_prob_one[i]));
  }

  const auto assignment_marginal =
      dense.state.marginal(dense.layout.assignment_qubits());
  const auto& a = structured.state.aux_zero_amps();
  const auto& b = structured.state.aux_one_amps();
  for (std::uint64_t k = 0; k < a.size(); ++k) {
    const double structured_mass = std::norm(a[k]) + std::norm(b[k]);
    dev = std::max(dev, std::abs(assignment_marginal[k] - structured_mass));
  }

  const auto clause_marginal = dense.state.marginal(dense.layout.clause_qubits());
  std::vector<double> structured_clause(clause_marginal.size(), 0.0);
  for (std::uint64_t k = 0; k < a.size(); ++k) {
    const TruthVector tv = truth_vector(f, static_cast<Assignment>(k));
    std::uint64_t idx = 0;
    for (int j = 0; j < f.num_clauses(); ++j) {
      if (tv.bit(j)) idx |= std::uint64_t{1} << j;
    }
    structured_clause[idx] += std::norm(a[k]) + std::norm(b[k]);
  }
  for (std::uint64_t i = 0; i < clause_marginal.size(); ++i) {
    dev = std::max(dev, std::abs(clause_marginal[i] - structured_clause[i]));
  }

  // aux itself: reset after every round in both engines
  dev = std::max(dev, std::abs(dense.state.prob_one(dense.layout.aux_qubit()) -
                               structured.state.prob_aux_one()));
  return dev;
}

}  // namespace qmaxsat
