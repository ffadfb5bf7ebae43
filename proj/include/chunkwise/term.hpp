#pragma once

// Two-sorted terms over the fraction signature: naturals (with the error
// constant `a`) and fractions built by the pairing constructor n/m.
//
// Terms are immutable and share structure, so copying one is a pointer copy.
// Hash and node count are computed once at construction.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chunkwise/natural.hpp"

namespace chunkwise {

enum class Sort : std::uint8_t { Nat, Frac };

enum class Kind : std::uint8_t {
  // Nat sort
  Lit,
  ErrA,
  Add,
  Mul,
  Num,
  Denom,
  NVar,
  // Frac sort
  Frac,
  FAdd,
  FMul,
  FVar,
};

std::string sort_name(Sort s);

/// Path of 0-based child indices from the root; empty means the root.
using Position = std::vector<std::size_t>;

std::string position_to_string(const Position& p);

class Term {
 public:
  Term() = default;

  static Term lit(Natural value);
  static Term lit(unsigned long long value) { return lit(Natural(value)); }
  static Term err();
  static Term add(Term l, Term r);
  static Term mul(Term l, Term r);
  static Term num(Term f);
  static Term denom(Term f);
  static Term nvar(std::string name);
  static Term frac(Term numer, Term denom);
  static Term fadd(Term l, Term r);
  static Term fmul(Term l, Term r);
  static Term fvar(std::string name);

  /// `+` and `*` resolved by operand sort: Add/FAdd, Mul/FMul.
  static Term plus(Term l, Term r);
  static Term times(Term l, Term r);

  /// Rebuilds a node of the same kind over new children.
  Term with_children(const std::vector<Term>& kids) const;

  bool is_null() const { return !node_; }
  Kind kind() const;
  Sort sort() const;
  std::size_t arity() const;
  const Term& child(std::size_t i) const;
  const Natural& value() const;        // Lit only
  const std::string& name() const;     // NVar / FVar only
  std::size_t hash() const;
  std::size_t size() const;            // node count
  bool ground() const;

  bool is_lit() const { return node_ && kind() == Kind::Lit; }
  bool is_var() const { return node_ && (kind() == Kind::NVar || kind() == Kind::FVar); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Kind k, Natural value, std::string name, std::vector<Term> kids);

  std::shared_ptr<const Node> node_;
};

/// Total structural order: kind, then literal value / variable name, then
/// children left to right.
std::strong_ordering compare(const Term& a, const Term& b);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};

inline Sort sort_of(const Term& t) { return t.sort(); }

/// Throws Error(InvalidPosition) when an index selects a missing child.
const Term& subterm_at(const Term& t, const Position& p);

/// Throws Error(InvalidPosition) or Error(SortMismatch).
Term replace_at(const Term& t, const Position& p, const Term& s);

/// All positions of t in preorder (which is lexicographic path order).
std::vector<Position> positions(const Term& t);

/// Variable bindings. Nat variables range over numerals only; fraction
/// variables over ground fraction terms.
struct Valuation {
  std::map<std::string, Natural> nat;
  std::map<std::string, Term> frac;

  bool empty() const { return nat.empty() && frac.empty(); }
  bool binds(const std::string& name) const { return nat.count(name) || frac.count(name); }
  friend bool operator==(const Valuation& a, const Valuation& b);
};

/// Throws Error(UnboundVariable) naming the leftmost unbound variable.
Term apply_substitution(const Term& pattern, const Valuation& v);

/// Purely syntactic: a Nat variable matches a literal and nothing else;
/// repeated variables must bind equal values.
std::optional<Valuation> match_schema(const Term& pattern, const Term& ground);

struct VarInfo {
  std::string name;
  Sort sort;
};

/// Variables of t ordered by name.
std::vector<VarInfo> variables(const Term& t);

/// Structural arithmetic on a term built only from literals, + and *.
/// Returns nullopt for anything else.
std::optional<Natural> literal_value(const Term& t);

}  // namespace chunkwise

template <>
struct std::hash<chunkwise::Term> {
  std::size_t operator()(const chunkwise::Term& t) const { return t.hash(); }
};
