#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmaxsat/formula.hpp"
#include "qmaxsat/gates.hpp"
#include "qmaxsat/oracle.hpp"
#include "qmaxsat/rng.hpp"

namespace qmaxsat {

// Exact simulation of the amplification loop that never materializes the
// clause register: each truth vector is a function of its assignment, so
// the full state is one amplitude pair per assignment,
//   sum_k  |A_k>|C_k> (a_k|0> + b_k|1>).
// Dummy qubits are not stored either; they shift every density by mu and
// widen the negation root to m + mu.
class StructuredState {
 public:
  StructuredState(Formula f, int mu, int enum_cap = kDefaultEnumCap)
      : formula_(std::move(f)),
        mu_(mu),
        negation_(formula_.num_clauses() + mu) {
    if (mu < 0) throw std::invalid_argument("mu must be >= 0");
    check_enum_cap(formula_.num_vars(), enum_cap);
    const std::uint64_t count = formula_.assignment_count();
    densities_.resize(count);
    max_shifted_density_ = 0;
    for (std::uint64_t k = 0; k < count; ++k) {
      std::uint32_t d = mu_;
      for (const Clause& c : formula_.clauses()) {
        d += eval_clause(c, static_cast<Assignment>(k));
      }
      densities_[k] = d;
      max_shifted_density_ = std::max(max_shifted_density_, d);
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    a_.assign(count, Complex(amp, 0.0));
    b_.assign(count, Complex(0.0, 0.0));
    powers_.resize(max_shifted_density_ + 1);
    for (std::uint32_t d = 0; d <= max_shifted_density_; ++d) {
      powers_[d] = negation_.power(static_cast<int>(d));
    }
  }

  const Formula& formula() const { return formula_; }
  int mu() const { return mu_; }
  int root_order() const { return negation_.root_order(); }
  const PartialNegation& negation() const { return negation_; }
  const std::vector<std::uint32_t>& shifted_densities() const {
    return densities_;
  }
  const std::vector<Complex>& aux_zero_amps() const { return a_; }
  const std::vector<Complex>& aux_one_amps() const { return b_; }

  double norm_squared() const {
    double s = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      s += std::norm(a_[k]) + std::norm(b_[k]);
    }
    return s;
  }

  // One controlled partial negation per satisfied clause and per dummy
  // qubit, i.e. the d_k-th power of the root-of-NOT on every pair.
  void apply_partial_negation() {
    for (std::size_t k = 0; k < a_.size(); ++k) {
      const Mat2& v = powers_[densities_[k]];
      const Complex a = a_[k];
      const Complex b = b_[k];
      a_[k] = v.a00 * a + v.a01 * b;
      b_[k] = v.a10 * a + v.a11 * b;
    }
    maybe_renormalize();
  }

  double prob_aux_one() const {
    double p = 0.0;
    for (const Complex& b : b_) p += std::norm(b);
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
  }

  struct Measurement {
    int outcome = 0;
    double prob_one = 0.0;
  };

  // Projective measurement of the auxiliary qubit. Outcome 1 keeps the
  // |1> components and immediately applies the X reset, so the survivors
  // continue in the a-slot with b cleared.
  Measurement measure_aux(Rng& rng) {
    const double p1 = prob_aux_one();
    return collapse_aux(rng.uniform() < p1 ? 1 : 0, p1);
  }

  Measurement measure_aux_forced(int outcome) {
    const double p1 = prob_aux_one();
    const double p = outcome == 1 ? p1 : 1.0 - p1;
    if (p < 1e-15) {
      throw std::runtime_error("forced outcome has vanishing probability");
    }
    return collapse_aux(outcome, p1);
  }

  // Mass currently sitting on maximum-density assignments (a-slot).
  double max_density_mass() const {
    double mass = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      if (densities_[k] == max_shifted_density_) mass += std::norm(a_[k]);
    }
    return mass > 1.0 ? 1.0 : mass;
  }

  struct Sample {
    TruthVector truth_vector;
    Assignment assignment = 0;
  };

  // Final read-out: draw a truth-vector class by its total mass, then an
  // assignment within the class. Two stages, two uniform draws.
  Sample sample_solution(Rng& rng) const {
    std::map<TruthVector, double> class_mass;
    std::map<TruthVector, std::vector<std::uint64_t>> class_members;
    double total = 0.0;
    for (std::uint64_t k = 0; k < a_.size(); ++k) {
      const double w = std::norm(a_[k]) + std::norm(b_[k]);
      TruthVector tv = truth_vector(formula_, static_cast<Assignment>(k));
      class_mass[tv] += w;
      class_members[tv].push_back(k);
      total += w;
    }
    const double u1 = rng.uniform() * total;
    auto it = class_mass.begin();
    double cum = 0.0;
    for (; it != class_mass.end(); ++it) {
      cum += it->second;
      if (u1 < cum) break;
    }
    if (it == class_mass.end()) --it;  // rounding pushed u1 past the last class
    const auto& members = class_members.at(it->first);
    const double u2 = rng.uniform() * it->second;
    cum = 0.0;
    std::uint64_t picked = members.back();
    for (std::uint64_t k : members) {
      cum += std::norm(a_[k]) + std::norm(b_[k]);
      if (u2 < cum) {
        picked = k;
        break;
      }
    }
    return {truth_vector(formula_, static_cast<Assignment>(picked)),
            static_cast<Assignment>(picked)};
  }

  // Debug dump: k,density,re_a,im_a,re_b,im_b (density is the shifted one
  // the engine rotates by).
  std::string amplitude_csv() const;

 private:
  Measurement collapse_aux(int outcome, double p1) {
    const double keep = outcome == 1 ? p1 : 1.0 - p1;
    const double scale = keep > 0.0 ? 1.0 / std::sqrt(keep) : 0.0;
    if (outcome == 1) {
      for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] = b_[k] * scale;
        b_[k] = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] *= scale;
        b_[k] = 0.0;
      }
    }
    return {outcome, p1};
  }

  void maybe_renormalize() {
    const double n = norm_squared();
    if (std::abs(n - 1.0) > 1e-12 && n > 0.0) {
      const double scale = 1.0 / std::sqrt(n);
      for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] *= scale;
        b_[k] *= scale;
      }
    }
  }

  Formula formula_;
  int mu_;
  PartialNegation negation_;
  std::vector<std::uint32_t> densities_;
  std::uint32_t max_shifted_density_ = 0;
  std::vector<Mat2> powers_;  // V^d per density class, fixed at preparation
  std::vector<Complex> a_, b_;
};

inline std::string StructuredState::amplitude_csv() const {
  std::string out = "k,density,re_a,im_a,re_b,im_b\n";
  char buf[160];
  for (std::uint64_t k = 0; k < a_.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%llu,%u,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<unsigned long long>(k), densities_[k],
                  a_[k].real(), a_[k].imag(), b_[k].real(), b_[k].imag());
    out += buf;
  }
  return out;
}

}  // namespace qmaxsat
