#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmaxsat/formula.hpp"

namespace qmaxsat {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// DIMACS CNF restricted to exactly-3 clauses: optional `c` comment lines,
// one `p cnf <n> <m>` header, then m clauses of 3 nonzero integers each,
// terminated by 0. Integer v > 0 reads x_{v-1}, v < 0 reads ~x_{v-1}.
inline Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  long long n = -1, m = -1;
  std::vector<long long> tokens;

  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first[0] == 'c') continue;
    if (first == "p") {
      if (n >= 0) throw ParseError("duplicate header");
      std::string fmt;
      if (!(ls >> fmt >> n >> m) || fmt != "cnf") {
        throw ParseError("malformed header on line " + std::to_string(line_no));
      }
      if (n < 3) throw ParseError("header declares fewer than 3 variables");
      if (m < 1) throw ParseError("header declares no clauses");
      std::string extra;
      if (ls >> extra) throw ParseError("trailing tokens after header");
      continue;
    }
    if (n < 0) throw ParseError("clause before header");
    // clause tokens; clauses may wrap lines, 0 terminates each
    std::istringstream ts(line);
    long long v;
    while (ts >> v) tokens.push_back(v);
    if (!ts.eof()) {
      throw ParseError("non-integer token on line " + std::to_string(line_no));
    }
  }
  if (n < 0) throw ParseError("missing `p cnf` header");

  std::vector<Clause> clauses;
  std::vector<Literal> current;
  for (long long v : tokens) {
    if (v == 0) {
      if (current.size() != 3) {
        throw ParseError("clause " + std::to_string(clauses.size()) +
                         " does not have exactly 3 literals");
      }
      try {
        clauses.emplace_back(current[0], current[1], current[2]);
      } catch (const FormulaError& e) {
        throw ParseError("clause " + std::to_string(clauses.size()) + ": " +
                         e.what());
      }
      current.clear();
      continue;
    }
    const long long var = (v > 0 ? v : -v) - 1;
    if (var >= n) {
      throw ParseError("variable index " + std::to_string(v > 0 ? v : -v) +
                       " out of range (n=" + std::to_string(n) + ")");
    }
    current.push_back(Literal{static_cast<int>(var), v < 0});
  }
  if (!current.empty()) throw ParseError("unterminated final clause");
  if (static_cast<long long>(clauses.size()) != m) {
    throw ParseError("header declares " + std::to_string(m) + " clauses, found " +
                     std::to_string(clauses.size()));
  }
  try {
    return Formula(static_cast<int>(n), std::move(clauses));
  } catch (const FormulaError& e) {
    throw ParseError(e.what());
  }
}

// Canonical text: header, one clause per line, LF endings.
inline std::string serialize_dimacs(const Formula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars()) + " " +
                    std::to_string(f.num_clauses()) + "\n";
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c.literals()) {
      out += (l.negated ? "-" : "") + std::to_string(l.var + 1) + " ";
    }
    out += "0\n";
  }
  return out;
}

}  // namespace qmaxsat
