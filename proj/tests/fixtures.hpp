#pragma once

#include <initializer_list>

#include "qmaxsat/formula.hpp"

// Small instances shared across the suites.
namespace fixtures {

// (x0 | x1 | x2) & (~x0 | ~x1 | ~x2): m=2, d_max=2 with six optimal
// assignments, the two uniform ones score 1.
inline qmaxsat::Formula two_clause() {
  using qmaxsat::Literal;
  std::vector<qmaxsat::Clause> clauses{
      {Literal{0, false}, Literal{1, false}, Literal{2, false}},
      {Literal{0, true}, Literal{1, true}, Literal{2, true}},
  };
  return {3, std::move(clauses)};
}

// Satisfiable n=3, m=4 instance; optimal assignments (x0,x1,x2) =
// (0,0,1), (0,1,1), (1,0,1), (1,1,0).
inline qmaxsat::Formula sat_n3m4() {
  using qmaxsat::Literal;
  std::vector<qmaxsat::Clause> clauses{
      {Literal{0, true}, Literal{1, true}, Literal{2, true}},
      {Literal{0, true}, Literal{1, false}, Literal{2, false}},
      {Literal{0, false}, Literal{1, true}, Literal{2, false}},
      {Literal{0, false}, Literal{1, false}, Literal{2, false}},
  };
  return {3, std::move(clauses)};
}

// n=4, m=3 with mixed polarities across overlapping variable triples.
inline qmaxsat::Formula mixed_n4m3() {
  using qmaxsat::Literal;
  std::vector<qmaxsat::Clause> clauses{
      {Literal{0, false}, Literal{1, true}, Literal{2, true}},
      {Literal{0, true}, Literal{1, false}, Literal{3, true}},
      {Literal{0, false}, Literal{2, false}, Literal{3, true}},
  };
  return {4, std::move(clauses)};
}

// Assignment from the tuple (x0, x1, ...), x0 first.
inline qmaxsat::Assignment bits(std::initializer_list<int> xs) {
  qmaxsat::Assignment a = 0;
  int i = 0;
  for (int x : xs) {
    if (x) a |= 1u << i;
    ++i;
  }
  return a;
}

}  // namespace fixtures
