#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaxsat/formula.hpp"
#include "qmaxsat/gates.hpp"
#include "qmaxsat/oracle.hpp"
#include "qmaxsat/rng.hpp"

namespace qmaxsat {

inline constexpr int kDefaultNaiveCap = 24;

// Dense state vector over every qubit, for cross-checking the structured
// engine gate by gate. Basis index bit q holds qubit q's value.
class DenseState {
 public:
  explicit DenseState(int qubit_count, int cap = kDefaultNaiveCap)
      : qubits_(qubit_count) {
    if (qubit_count < 1) throw std::invalid_argument("need at least 1 qubit");
    if (qubit_count > cap) {
      throw CapExceeded("dense state over " + std::to_string(qubit_count) +
                        " qubits exceeds the cap of " + std::to_string(cap));
    }
    amps_.assign(std::uint64_t{1} << qubit_count, Complex(0.0, 0.0));
    amps_[0] = 1.0;
  }

  int qubit_count() const { return qubits_; }
  const std::vector<Complex>& amps() const { return amps_; }

  void set_basis(std::uint64_t index) {
    for (Complex& a : amps_) a = 0.0;
    amps_.at(index) = 1.0;
  }

  void apply_single(int qubit, const Mat2& u) {
    check_qubit(qubit);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const Complex a0 = amps_[i];
      const Complex a1 = amps_[i | bit];
      amps_[i] = u.a00 * a0 + u.a01 * a1;
      amps_[i | bit] = u.a10 * a0 + u.a11 * a1;
    }
  }

  void apply_hadamard(int qubit) {
    const double h = 1.0 / std::numbers::sqrt2;
    apply_single(qubit, Mat2{h, h, h, -h});
  }

  void apply_x(int qubit) { apply_single(qubit, Mat2::pauli_x()); }

  void apply_controlled(int control, int qubit, const Mat2& u) {
    check_qubit(control);
    check_qubit(qubit);
    if (control == qubit) throw std::invalid_argument("control hits target");
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t tbit = std::uint64_t{1} << qubit;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if ((i & cbit) == 0 || (i & tbit)) continue;
      const Complex a0 = amps_[i];
      const Complex a1 = amps_[i | tbit];
      amps_[i] = u.a00 * a0 + u.a01 * a1;
      amps_[i | tbit] = u.a10 * a0 + u.a11 * a1;
    }
  }

  // Three-control NOT with per-control polarity: control a fires on |0>
  // when invert[a] is set, on |1> otherwise. Self-inverse.
  void apply_generalized_toffoli(const std::array<int, 3>& controls,
                                 const std::array<bool, 3>& invert,
                                 int target) {
    check_qubit(target);
    std::uint64_t care = std::uint64_t{1} << target;
    std::uint64_t want = 0;
    for (int a = 0; a < 3; ++a) {
      check_qubit(controls[a]);
      const std::uint64_t bit = std::uint64_t{1} << controls[a];
      if (care & bit) throw std::invalid_argument("qubit index collision");
      care |= bit;
      if (!invert[a]) want |= bit;
    }
    const std::uint64_t tbit = std::uint64_t{1} << target;
    care &= ~tbit;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & tbit) continue;
      if ((i & care) != want) continue;
      std::swap(amps_[i], amps_[i | tbit]);
    }
  }

  double prob_one(int qubit) const {
    check_qubit(qubit);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) p += std::norm(amps_[i]);
    }
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
  }

  struct Measurement {
    int outcome = 0;
    double prob_one = 0.0;
  };

  Measurement measure(int qubit, Rng& rng) {
    const double p1 = prob_one(qubit);
    return collapse(qubit, rng.uniform() < p1 ? 1 : 0, p1);
  }

  Measurement measure_forced(int qubit, int outcome) {
    const double p1 = prob_one(qubit);
    const double p = outcome == 1 ? p1 : 1.0 - p1;
    if (p < 1e-15) {
      throw std::runtime_error("forced outcome has vanishing probability");
    }
    return collapse(qubit, outcome, p1);
  }

  double norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amps_) s += std::norm(a);
    return s;
  }

  // Distribution over the listed qubits; qubits[i] maps to bit i of the
  // marginal index.
  std::vector<double> marginal(const std::vector<int>& qubits) const {
    std::vector<double> dist(std::uint64_t{1} << qubits.size(), 0.0);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      std::uint64_t idx = 0;
      for (std::size_t b = 0; b < qubits.size(); ++b) {
        if ((i >> qubits[b]) & 1u) idx |= std::uint64_t{1} << b;
      }
      dist[idx] += std::norm(amps_[i]);
    }
    return dist;
  }

 private:
  void check_qubit(int q) const {
    if (q < 0 || q >= qubits_) throw std::invalid_argument("qubit out of range");
  }

  Measurement collapse(int qubit, int outcome, double p1) {
    const double keep = outcome == 1 ? p1 : 1.0 - p1;
    const double scale = keep > 0.0 ? 1.0 / std::sqrt(keep) : 0.0;
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      const bool is_one = (i & bit) != 0;
      if (is_one == (outcome == 1)) {
        amps_[i] *= scale;
      } else {
        amps_[i] = 0.0;
      }
    }
    return {outcome, p1};
  }

  int qubits_;
  std::vector<Complex> amps_;
};

// Qubit layout of the clause-evaluation circuit for a formula:
// [0, n) assignment, [n, n+m) clauses, [n+m, n+m+mu) dummies, last = aux.
struct CircuitLayout {
  int n = 0, m = 0, mu = 0;

  int qubit_count() const { return n + m + mu + 1; }
  int assignment_qubit(int i) const { return i; }
  int clause_qubit(int j) const { return n + j; }
  int dummy_qubit(int i) const { return n + m + i; }
  int aux_qubit() const { return n + m + mu; }

  std::vector<int> assignment_qubits() const {
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[i] = i;
    return q;
  }
  std::vector<int> clause_qubits() const {
    std::vector<int> q(m);
    for (int j = 0; j < m; ++j) q[j] = n + j;
    return q;
  }
};

// Clause j as a generalized Toffoli onto its clause qubit: the target,
// initialized |1>, flips exactly on the one all-literals-false setting.
inline void apply_clause_gate(DenseState& state, const CircuitLayout& layout,
                              const Clause& clause, int j) {
  std::array<int, 3> controls{};
  std::array<bool, 3> invert{};
  for (int a = 0; a < 3; ++a) {
    controls[a] = layout.assignment_qubit(clause.literals()[a].var);
    invert[a] = !clause.literals()[a].negated;
  }
  state.apply_generalized_toffoli(controls, invert, layout.clause_qubit(j));
}

struct DenseRun {
  CircuitLayout layout;
  DenseState state;
  std::vector<double> aux_prob_one;  // per post-selection, in order
};

// Full circuit: uniform assignment superposition, clause gates onto |1>
// targets, dummy wires pinned |1>, then r rounds of the controlled
// negation chain with the aux forced to |1> and reset.
inline DenseRun dense_run(const Formula& f, int mu, int r_successes,
                          int cap = kDefaultNaiveCap) {
  if (mu < 0) throw std::invalid_argument("mu must be >= 0");
  if (r_successes < 0) throw std::invalid_argument("negative round count");
  const CircuitLayout layout{f.num_vars(), f.num_clauses(), mu};
  DenseState state(layout.qubit_count(), cap);
  for (int j = 0; j < layout.m; ++j) state.apply_x(layout.clause_qubit(j));
  for (int i = 0; i < layout.mu; ++i) state.apply_x(layout.dummy_qubit(i));
  for (int i = 0; i < layout.n; ++i) state.apply_hadamard(i);
  for (int j = 0; j < layout.m; ++j) {
    apply_clause_gate(state, layout, f.clauses()[j], j);
  }

  const PartialNegation negation(layout.m + layout.mu);
  const Mat2 v = negation.gate();
  DenseRun run{layout, std::move(state), {}};
  for (int round = 0; round < r_successes; ++round) {
    for (int j = 0; j < layout.m; ++j) {
      run.state.apply_controlled(layout.clause_qubit(j), layout.aux_qubit(), v);
    }
    for (int i = 0; i < layout.mu; ++i) {
      run.state.apply_controlled(layout.dummy_qubit(i), layout.aux_qubit(), v);
    }
    const auto measured = run.state.measure_forced(layout.aux_qubit(), 1);
    run.aux_prob_one.push_back(measured.prob_one);
    run.state.apply_x(layout.aux_qubit());
  }
  return run;
}

}  // namespace qmaxsat
