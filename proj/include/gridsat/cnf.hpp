#pragma once

// CNF construction: variable pool with a named registry, clauses, cardinality
// helpers and DIMACS serialization.

#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <istream>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gridsat {

struct RegistryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Var {
  int index = 0;  // 1-based, dense
  friend bool operator==(Var, Var) = default;
};

class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool positive = true)
      : code_(positive ? v.index : -v.index) {}

  static constexpr Lit from_dimacs(int code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return Var{code_ < 0 ? -code_ : code_}; }
  constexpr bool positive() const { return code_ > 0; }
  constexpr int dimacs() const { return code_; }

  constexpr Lit operator~() const { return from_dimacs(-code_); }
  friend constexpr bool operator==(Lit, Lit) = default;

 private:
  int code_ = 0;
};

constexpr Lit operator~(Var v) { return Lit(v, false); }

using Clause = std::vector<Lit>;

/// A literal or a Boolean constant. Clause construction through Terms folds
/// constants away: a true term satisfies the clause, a false term vanishes.
class Term {
 public:
  constexpr Term(Lit l) : lit_(l), kind_(Kind::Literal) {}
  constexpr Term(Var v) : lit_(v), kind_(Kind::Literal) {}

  static constexpr Term constant(bool value) {
    return Term(value ? Kind::True : Kind::False);
  }
  static constexpr Term truth() { return constant(true); }
  static constexpr Term falsity() { return constant(false); }

  constexpr bool is_constant() const { return kind_ != Kind::Literal; }
  constexpr bool is_true() const { return kind_ == Kind::True; }
  constexpr bool is_false() const { return kind_ == Kind::False; }
  constexpr Lit lit() const { return lit_; }

  constexpr Term operator~() const {
    switch (kind_) {
      case Kind::True: return falsity();
      case Kind::False: return truth();
      default: return Term(~lit_);
    }
  }

  friend constexpr bool operator==(const Term&, const Term&) = default;

 private:
  enum class Kind : std::uint8_t { Literal, True, False };
  constexpr explicit Term(Kind k) : kind_(k) {}
  Lit lit_{};
  Kind kind_ = Kind::False;
};

class Formula {
 public:
  /// Allocates the next variable and registers it under `name`.
  Var fresh_var(std::string name) {
    auto [it, inserted] = registry_.try_emplace(std::move(name), Var{num_vars_ + 1});
    if (!inserted) throw RegistryError("duplicate variable name: " + it->first);
    ++num_vars_;
    names_.push_back(it->first);
    return it->second;
  }

  /// Allocates an auxiliary variable named `<prefix>#<k>`.
  Var aux_var(std::string_view prefix = "aux") {
    return fresh_var(std::string(prefix) + "#" + std::to_string(aux_counter_++));
  }

  /// Variables without a registry entry (DIMACS input).
  void reserve_anonymous(int count) {
    for (int i = 0; i < count; ++i) {
      fresh_var("v#" + std::to_string(num_vars_ + 1));
    }
  }

  std::optional<Var> lookup(std::string_view name) const {
    auto it = registry_.find(std::string(name));
    if (it == registry_.end()) return std::nullopt;
    return it->second;
  }

  Var at(std::string_view name) const {
    if (auto v = lookup(name)) return *v;
    throw RegistryError("unknown variable name: " + std::string(name));
  }

  const std::string& name_of(Var v) const { return names_.at(v.index - 1); }

  void add_clause(Clause clause) {
    for (Lit l : clause) {
      if (l.dimacs() == 0 || l.var().index > num_vars_) {
        throw ContractError("clause references unallocated variable");
      }
    }
    clauses_.push_back(std::move(clause));
  }

  void add_clause(std::initializer_list<Lit> lits) { add_clause(Clause(lits)); }

  /// Adds the clause with constants folded. Returns false if it was dropped
  /// because some term is constantly true.
  bool add(std::span<const Term> terms) {
    Clause c;
    c.reserve(terms.size());
    for (const Term& t : terms) {
      if (t.is_true()) return false;
      if (!t.is_false()) c.push_back(t.lit());
    }
    add_clause(std::move(c));
    return true;
  }

  bool add(std::initializer_list<Term> terms) {
    return add(std::span<const Term>(terms.begin(), terms.size()));
  }

  int num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

 private:
  int num_vars_ = 0;
  int aux_counter_ = 0;
  std::vector<Clause> clauses_;
  std::unordered_map<std::string, Var> registry_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Cardinality constraints
// ---------------------------------------------------------------------------

inline void exactly_one(Formula& f, std::span<const Lit> lits) {
  if (lits.empty()) throw ContractError("exactly_one over an empty list");
  f.add_clause(Clause(lits.begin(), lits.end()));
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      f.add_clause({~lits[i], ~lits[j]});
    }
  }
}

inline void exactly_one(Formula& f, std::initializer_list<Lit> lits) {
  exactly_one(f, std::span<const Lit>(lits.begin(), lits.size()));
}

/// Sequential counter (Sinz 2005). k = 0 becomes unit clauses, k >= |lits| is
/// vacuous.
inline void at_most_k(Formula& f, std::span<const Lit> lits, int k) {
  if (k < 0) throw ContractError("at_most_k with negative bound");
  const int n = static_cast<int>(lits.size());
  if (k >= n) return;
  if (k == 0) {
    for (Lit l : lits) f.add_clause({~l});
    return;
  }
  // reg[i][j]: at least j+1 of lits[0..i] are true
  std::vector<std::vector<Var>> reg(n - 1, std::vector<Var>(k));
  for (int i = 0; i < n - 1; ++i) {
    for (int j = 0; j < k; ++j) reg[i][j] = f.aux_var("card");
  }
  f.add_clause({~lits[0], Lit(reg[0][0])});
  for (int j = 1; j < k; ++j) f.add_clause({~Lit(reg[0][j])});
  for (int i = 1; i < n - 1; ++i) {
    f.add_clause({~lits[i], Lit(reg[i][0])});
    f.add_clause({~Lit(reg[i - 1][0]), Lit(reg[i][0])});
    for (int j = 1; j < k; ++j) {
      f.add_clause({~lits[i], ~Lit(reg[i - 1][j - 1]), Lit(reg[i][j])});
      f.add_clause({~Lit(reg[i - 1][j]), Lit(reg[i][j])});
    }
    f.add_clause({~lits[i], ~Lit(reg[i - 1][k - 1])});
  }
  f.add_clause({~lits[n - 1], ~Lit(reg[n - 2][k - 1])});
}

inline void at_least_k(Formula& f, std::span<const Lit> lits, int k) {
  if (k < 0) throw ContractError("at_least_k with negative bound");
  const int n = static_cast<int>(lits.size());
  if (k > n) {
    f.add_clause(Clause{});
    return;
  }
  if (k == 0) return;
  if (k == n) {
    for (Lit l : lits) f.add_clause({l});
    return;
  }
  if (k == 1) {
    f.add_clause(Clause(lits.begin(), lits.end()));
    return;
  }
  if (n - k < k) {
    std::vector<Lit> negated;
    negated.reserve(lits.size());
    for (Lit l : lits) negated.push_back(~l);
    at_most_k(f, negated, n - k);
    return;
  }
  // reg[i][j] -> at least j+1 of lits[0..i] are true; only this direction is
  // needed to force the count from below
  std::vector<std::vector<Var>> reg(n, std::vector<Var>(k));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) reg[i][j] = f.aux_var("card");
  }
  f.add_clause({~Lit(reg[0][0]), lits[0]});
  for (int j = 1; j < k; ++j) f.add_clause({~Lit(reg[0][j])});
  for (int i = 1; i < n; ++i) {
    f.add_clause({~Lit(reg[i][0]), Lit(reg[i - 1][0]), lits[i]});
    for (int j = 1; j < k; ++j) {
      f.add_clause({~Lit(reg[i][j]), Lit(reg[i - 1][j]), lits[i]});
      f.add_clause({~Lit(reg[i][j]), Lit(reg[i - 1][j]), Lit(reg[i - 1][j - 1])});
    }
  }
  f.add_clause({Lit(reg[n - 1][k - 1])});
}

// ---------------------------------------------------------------------------
// DIMACS
// ---------------------------------------------------------------------------

inline std::string to_dimacs(const Formula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars()) + " " +
                    std::to_string(f.num_clauses()) + "\n";
  for (const Clause& c : f.clauses()) {
    for (Lit l : c) {
      out += std::to_string(l.dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

/// Parses DIMACS CNF. Variables get anonymous names "v#<index>".
inline Formula parse_dimacs(std::istream& in) {
  Formula f;
  std::string line;
  bool header = false;
  long declared_clauses = 0;
  Clause current;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      int vars = 0;
      if (!(ls >> p >> cnf >> vars >> declared_clauses) || cnf != "cnf" || vars < 0) {
        throw ParseError("bad DIMACS header: " + line);
      }
      f.reserve_anonymous(vars);
      header = true;
      continue;
    }
    if (!header) throw ParseError("clause before DIMACS header");
    long code = 0;
    while (ls >> code) {
      if (code == 0) {
        f.add_clause(std::move(current));
        current.clear();
      } else {
        if (std::labs(code) > f.num_vars()) throw ParseError("literal exceeds declared variable count");
        current.push_back(Lit::from_dimacs(static_cast<int>(code)));
      }
    }
    if (!ls.eof()) throw ParseError("bad DIMACS token in line: " + line);
  }
  if (!current.empty()) throw ParseError("unterminated final clause");
  if (!header) throw ParseError("missing DIMACS header");
  if (static_cast<long>(f.num_clauses()) != declared_clauses) {
    throw ParseError("clause count does not match header");
  }
  return f;
}

inline Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

/// Truth value of `l` in a 1-based assignment (index 0 unused).
inline bool value_of(const std::vector<bool>& model, Lit l) {
  return model.at(l.var().index) == l.positive();
}

inline bool satisfies(const Formula& f, const std::vector<bool>& model) {
  if (static_cast<int>(model.size()) < f.num_vars() + 1) return false;
  for (const Clause& c : f.clauses()) {
    bool sat = false;
    for (Lit l : c) {
      if (value_of(model, l)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace gridsat
