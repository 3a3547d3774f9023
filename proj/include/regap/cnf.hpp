#pragma once

#include <cstdlib>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "regap/attrs.hpp"

namespace regap {

// Plain CNF.  Variables are 1-based; a literal is +v or -v.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  int new_var() { return ++num_vars; }

  void add_clause(std::vector<int> lits) {
    if (lits.empty()) throw std::invalid_argument("empty clause");
    for (int l : lits) {
      int v = std::abs(l);
      if (l == 0 || v > num_vars)
        throw std::invalid_argument("literal " + std::to_string(l) + " out of range (num_vars=" +
                                    std::to_string(num_vars) + ")");
    }
    clauses.push_back(std::move(lits));
  }

  static bool clause_tautological(const std::vector<int>& c) {
    std::unordered_set<int> seen(c.begin(), c.end());
    for (int l : c)
      if (seen.count(-l)) return true;
    return false;
  }

  bool has_tautology() const {
    for (const auto& c : clauses)
      if (clause_tautological(c)) return true;
    return false;
  }
};

inline std::string to_dimacs(const CnfFormula& f) {
  std::string out;
  out += "p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) {
    for (int l : c) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

// Accepts comment lines on input; the writer never emits them.
inline CnfFormula from_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfFormula f;
  long long declared_clauses = -1;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, cnf;
      long long v = -1;
      hs >> p >> cnf >> v >> declared_clauses;
      if (p != "p" || cnf != "cnf" || v < 0 || declared_clauses < 0 || !hs)
        throw ParseError("bad DIMACS header: " + line);
      f.num_vars = static_cast<int>(v);
      continue;
    }
    if (declared_clauses < 0) throw ParseError("DIMACS clause before header");
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (cur.empty()) throw ParseError("empty clause in DIMACS input");
        f.add_clause(cur);
        cur.clear();
      } else {
        if (std::abs(lit) > f.num_vars)
          throw ParseError("DIMACS literal " + std::to_string(lit) + " exceeds declared vars");
        cur.push_back(lit);
      }
    }
    if (!ls.eof()) throw ParseError("junk in DIMACS clause line: " + line);
  }
  if (!cur.empty()) throw ParseError("DIMACS ends inside an unterminated clause");
  if (declared_clauses < 0) throw ParseError("DIMACS missing header");
  if (static_cast<long long>(f.clauses.size()) != declared_clauses)
    throw ParseError("DIMACS clause count mismatch: header says " +
                     std::to_string(declared_clauses) + ", found " +
                     std::to_string(f.clauses.size()));
  return f;
}

enum class AmoStrategy { Pairwise, Sequential };

// At-most-one over distinct literals.  Pairwise emits n(n-1)/2 binary clauses
// and no auxiliaries.  Sequential is the Sinz ladder: n-1 fresh commander vars
// drawn from `fresh`, 3n-4 clauses for n >= 2.
inline std::vector<std::vector<int>> amo(const std::vector<int>& lits, AmoStrategy strategy,
                                         CnfFormula& fresh) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(lits.size());
  if (n <= 1) return out;
  if (strategy == AmoStrategy::Pairwise) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) out.push_back({-lits[i], -lits[j]});
    return out;
  }
  std::vector<int> s(n - 1);
  for (int i = 0; i < n - 1; ++i) s[i] = fresh.new_var();
  out.push_back({-lits[0], s[0]});
  for (int i = 1; i < n - 1; ++i) {
    out.push_back({-lits[i], s[i]});
    out.push_back({-s[i - 1], s[i]});
    out.push_back({-lits[i], -s[i - 1]});
  }
  out.push_back({-lits[n - 1], -s[n - 2]});
  return out;
}

}  // namespace regap
