#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "qmaxsat/formula.hpp"

using namespace qmaxsat;

namespace {

// Independent clause oracle: ((l0^1) & (l1^1) & (l2^1)) ^ 1 over literal
// values, never touching eval_clause's OR path.
int xor_and_identity(const Clause& c, Assignment a) {
  int acc = 1;
  for (const Literal& l : c.literals()) {
    const int lit = assignment_bit(a, l.var) != l.negated ? 1 : 0;
    acc &= lit ^ 1;
  }
  return acc ^ 1;
}

}  // namespace

TEST_CASE("clause construction rejects repeated variables") {
  CHECK_THROWS_AS(Clause(Literal{0, false}, Literal{0, true}, Literal{1, false}),
                  FormulaError);
  CHECK_THROWS_AS(Clause(Literal{2, false}, Literal{1, true}, Literal{2, false}),
                  FormulaError);
}

TEST_CASE("formula construction validates shape") {
  const Clause c{Literal{0, false}, Literal{1, false}, Literal{2, false}};
  CHECK_THROWS_AS(Formula(2, {c}), FormulaError);     // fewer than 3 vars
  CHECK_THROWS_AS(Formula(3, {}), FormulaError);      // no clauses
  CHECK_THROWS_AS(Formula(3, std::vector<Clause>(9, c)), FormulaError);  // cap 8
  const Clause wide{Literal{0, false}, Literal{1, false}, Literal{5, false}};
  CHECK_THROWS_AS(Formula(4, {wide}), FormulaError);  // var out of range
  CHECK_NOTHROW(Formula(3, std::vector<Clause>(8, c)));  // duplicates allowed
}

TEST_CASE("eval_clause basics") {
  const Clause pos{Literal{0, false}, Literal{1, false}, Literal{2, false}};
  const Clause neg{Literal{0, true}, Literal{1, true}, Literal{2, true}};
  CHECK(eval_clause(pos, fixtures::bits({0, 0, 0})) == 0);
  CHECK(eval_clause(neg, fixtures::bits({0, 0, 0})) == 1);
  CHECK(eval_clause(pos, fixtures::bits({0, 1, 0})) == 1);
}

TEST_CASE("every clause of the satisfiable n3m4 instance holds at (0,0,1)") {
  const Formula f = fixtures::sat_n3m4();
  const Assignment a = fixtures::bits({0, 0, 1});
  for (const Clause& c : f.clauses()) CHECK(eval_clause(c, a) == 1);
}

TEST_CASE("eval_clause agrees with the xor/and identity everywhere") {
  const Formula all = generate_complete(4);
  for (const Clause& c : all.clauses()) {
    for (Assignment a = 0; a < 16; ++a) {
      CHECK(eval_clause(c, a) == xor_and_identity(c, a));
    }
  }
}

TEST_CASE("truth vectors of the two-clause instance") {
  const Formula f = fixtures::two_clause();
  const TruthVector t0 = truth_vector(f, fixtures::bits({0, 0, 0}));
  CHECK(t0.to_string() == "01");
  CHECK(t0.popcount() == 1);
  const TruthVector t1 = truth_vector(f, fixtures::bits({1, 0, 0}));
  CHECK(t1.to_string() == "11");
  CHECK(t1.popcount() == 2);
}

TEST_CASE("truth vector of the satisfiable instance at its optimum") {
  const TruthVector tv =
      truth_vector(fixtures::sat_n3m4(), fixtures::bits({0, 0, 1}));
  CHECK(tv.to_string() == "1111");
  CHECK(tv.popcount() == 4);
}

TEST_CASE("complete formula counts") {
  CHECK(max_clause_count(3) == 8);
  CHECK(max_clause_count(4) == 32);
  CHECK(generate_complete(3).num_clauses() == 8);
  CHECK(generate_complete(4).num_clauses() == 32);
  CHECK_THROWS_AS(generate_complete(2), FormulaError);
}

TEST_CASE("complete formula clauses are pairwise distinct") {
  const Formula f = generate_complete(5);
  std::set<std::array<std::pair<int, bool>, 3>> seen;
  for (const Clause& c : f.clauses()) {
    std::array<std::pair<int, bool>, 3> key;
    for (int i = 0; i < 3; ++i) {
      key[i] = {c.literals()[i].var, c.literals()[i].negated};
    }
    CHECK(seen.insert(key).second);
  }
  CHECK(seen.size() == max_clause_count(5));
}

TEST_CASE("every assignment of a complete formula scores 7m/8") {
  for (int n : {3, 4}) {
    const Formula f = generate_complete(n);
    const int expected = f.num_clauses() * 7 / 8;
    for (Assignment a = 0; a < f.assignment_count(); ++a) {
      CHECK(truth_vector(f, a).popcount() == expected);
    }
  }
}

TEST_CASE("random generation is deterministic per seed") {
  const Formula a = generate_random(4, 3, 1);
  const Formula b = generate_random(4, 3, 1);
  CHECK(a == b);
  CHECK(a.num_clauses() == 3);
  const Formula c = generate_random(4, 3, 2);
  CHECK(a != c);
}

TEST_CASE("drawing the whole pool yields the complete set up to order") {
  const Formula drawn = generate_random(3, 8, 99);
  const Formula complete = generate_complete(3);
  auto key = [](const Clause& c) {
    std::array<std::pair<int, bool>, 3> k;
    for (int i = 0; i < 3; ++i) {
      k[i] = {c.literals()[i].var, c.literals()[i].negated};
    }
    return k;
  };
  std::set<std::array<std::pair<int, bool>, 3>> lhs, rhs;
  for (const Clause& c : drawn.clauses()) lhs.insert(key(c));
  for (const Clause& c : complete.clauses()) rhs.insert(key(c));
  CHECK(lhs == rhs);
}

TEST_CASE("random generation emits distinct valid clauses") {
  const Formula f = generate_random(5, 20, 2);
  CHECK(f.num_clauses() == 20);
  std::set<std::array<std::pair<int, bool>, 3>> seen;
  for (const Clause& c : f.clauses()) {
    std::array<std::pair<int, bool>, 3> key;
    std::set<int> vars;
    for (int i = 0; i < 3; ++i) {
      CHECK(c.literals()[i].var < 5);
      vars.insert(c.literals()[i].var);
      key[i] = {c.literals()[i].var, c.literals()[i].negated};
    }
    CHECK(vars.size() == 3);
    CHECK(seen.insert(key).second);
  }
  CHECK_THROWS_AS(generate_random(3, 9, 1), FormulaError);
  CHECK_THROWS_AS(generate_random(3, 0, 1), FormulaError);
}
