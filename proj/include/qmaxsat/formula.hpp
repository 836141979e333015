#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaxsat/rng.hpp"

namespace qmaxsat {

// Assignment k stores the truth value of x_i in bit i, so the assignment
// tuple (x_0, x_1, ..., x_{n-1}) reads the integer low bit first.
using Assignment = std::uint32_t;

inline bool assignment_bit(Assignment a, int var) { return (a >> var) & 1u; }

class FormulaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Literal {
  int var = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// Exactly three literals over pairwise distinct variables.
class Clause {
 public:
  Clause(Literal l0, Literal l1, Literal l2) : literals_{l0, l1, l2} {
    for (const Literal& l : literals_) {
      if (l.var < 0) throw FormulaError("negative variable index");
    }
    if (l0.var == l1.var || l0.var == l2.var || l1.var == l2.var) {
      throw FormulaError("repeated variable within a clause");
    }
  }

  const std::array<Literal, 3>& literals() const { return literals_; }

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::array<Literal, 3> literals_;
};

// 8 * C(n,3): the size of the complete clause set.
inline std::uint64_t max_clause_count(int n) {
  if (n < 3) return 0;
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  return 4 * un * (un - 1) * (un - 2) / 3;
}

class Formula {
 public:
  Formula(int n, std::vector<Clause> clauses)
      : n_(n), clauses_(std::move(clauses)) {
    if (n_ < 3) throw FormulaError("need at least 3 variables");
    if (clauses_.empty()) throw FormulaError("need at least one clause");
    if (clauses_.size() > max_clause_count(n_)) {
      throw FormulaError("clause count exceeds the complete-formula cap");
    }
    for (const Clause& c : clauses_) {
      for (const Literal& l : c.literals()) {
        if (l.var >= n_) throw FormulaError("variable index out of range");
      }
    }
  }

  int num_vars() const { return n_; }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::uint64_t assignment_count() const { return std::uint64_t{1} << n_; }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  int n_;
  std::vector<Clause> clauses_;
};

inline bool eval_literal(const Literal& l, Assignment a) {
  return assignment_bit(a, l.var) != l.negated;
}

// 1 iff at least one literal is satisfied.
inline int eval_clause(const Clause& c, Assignment a) {
  for (const Literal& l : c.literals()) {
    if (eval_literal(l, a)) return 1;
  }
  return 0;
}

// Truth values of all m clauses under one assignment, bit j = clause j.
// m may exceed 64, hence the word vector rather than a plain integer.
class TruthVector {
 public:
  TruthVector() = default;
  explicit TruthVector(int bit_count)
      : bits_(bit_count), words_((bit_count + 63) / 64, 0) {}

  int bit_count() const { return bits_; }

  bool bit(int j) const { return (words_[j >> 6] >> (j & 63)) & 1u; }

  void set_bit(int j, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (j & 63);
    if (v)
      words_[j >> 6] |= mask;
    else
      words_[j >> 6] &= ~mask;
  }

  int popcount() const {
    int total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
  }

  // Bit string, clause 0 first.
  std::string to_string() const {
    std::string s(bits_, '0');
    for (int j = 0; j < bits_; ++j) {
      if (bit(j)) s[j] = '1';
    }
    return s;
  }

  friend auto operator<=>(const TruthVector&, const TruthVector&) = default;

 private:
  int bits_ = 0;
  std::vector<std::uint64_t> words_;
};

inline TruthVector truth_vector(const Formula& f, Assignment a) {
  TruthVector tv(f.num_clauses());
  for (int j = 0; j < f.num_clauses(); ++j) {
    if (eval_clause(f.clauses()[j], a)) tv.set_bit(j, true);
  }
  return tv;
}

// All 8*C(n,3) clauses: variable triples in ascending lexicographic order,
// and for each triple the 8 sign patterns ascending as 3-bit integers where
// pattern bit (2-j) negates literal j (so patterns count up left to right:
// (a|b|c), (a|b|~c), (a|~b|c), ...).
inline Formula generate_complete(int n) {
  if (n < 3) throw FormulaError("need at least 3 variables");
  std::vector<Clause> clauses;
  clauses.reserve(max_clause_count(n));
  for (int v0 = 0; v0 < n; ++v0) {
    for (int v1 = v0 + 1; v1 < n; ++v1) {
      for (int v2 = v1 + 1; v2 < n; ++v2) {
        for (int pattern = 0; pattern < 8; ++pattern) {
          clauses.emplace_back(Literal{v0, ((pattern >> 2) & 1) != 0},
                               Literal{v1, ((pattern >> 1) & 1) != 0},
                               Literal{v2, (pattern & 1) != 0});
        }
      }
    }
  }
  return Formula(n, std::move(clauses));
}

// m clauses drawn uniformly without replacement from the complete clause
// set (partial Fisher-Yates, emitted in draw order).
inline Formula generate_random(int n, int m, std::uint64_t seed) {
  if (n < 3) throw FormulaError("need at least 3 variables");
  if (m < 1 || static_cast<std::uint64_t>(m) > max_clause_count(n)) {
    throw FormulaError("clause count out of range");
  }
  Formula complete = generate_complete(n);
  std::vector<Clause> pool = complete.clauses();
  Rng rng(seed);
  std::vector<Clause> picked;
  picked.reserve(m);
  for (int i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    picked.push_back(pool[i]);
  }
  return Formula(n, std::move(picked));
}

}  // namespace qmaxsat
