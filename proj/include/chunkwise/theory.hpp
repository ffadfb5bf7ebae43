#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chunkwise/term.hpp"

namespace chunkwise {

/// A sentence `lhs = rhs`. Both sides have the same sort; sentences handed
/// to the checker, models or prover are ground.
struct Equation {
  Term lhs;
  Term rhs;

  Sort sort() const { return lhs.sort(); }
  bool ground() const { return lhs.ground() && rhs.ground(); }
  friend bool operator==(const Equation&, const Equation&) = default;
};

/// Side condition `variable /= 0` or `variable /= a` on a Nat variable.
struct Condition {
  enum class Forbidden { Zero, ErrA };

  std::string variable;
  Forbidden forbidden = Forbidden::Zero;

  /// A literal binding violates `/= 0` iff it is 0; it never equals a.
  bool holds(const Valuation& v) const;
  std::string to_string() const;
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct AxiomSchema {
  std::string id;
  std::vector<Condition> conditions;
  Term lhs;
  Term rhs;

  Sort sort() const { return lhs.sort(); }
  /// Variables of lhs and rhs, ordered by name.
  std::vector<VarInfo> variables() const;
  /// First condition that v violates, or nullptr.
  const Condition* violated(const Valuation& v) const;
};

/// Strict weak order on axiom ids: numeric ids numerically and before
/// non-numeric ones, which compare as strings.
bool id_less(const std::string& a, const std::string& b);

struct IdLess {
  bool operator()(const std::string& a, const std::string& b) const { return id_less(a, b); }
};

using IdSet = std::set<std::string, IdLess>;

struct Theory {
  std::string name;
  std::vector<std::string> axioms;
};

/// A resolved, id-ordered collection of schemas (the "theory axioms" that
/// the checker and prover run against).
class AxiomSet {
 public:
  AxiomSet() = default;
  AxiomSet(std::string label, std::vector<AxiomSchema> schemas);

  const std::string& label() const { return label_; }
  const std::vector<AxiomSchema>& schemas() const { return schemas_; }
  const AxiomSchema* find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) != nullptr; }
  IdSet ids() const;
  std::size_t size() const { return schemas_.size(); }

  auto begin() const { return schemas_.begin(); }
  auto end() const { return schemas_.end(); }

 private:
  std::string label_;
  std::vector<AxiomSchema> schemas_;
};

/// Declared axioms plus named theories over them.
class Catalog {
 public:
  /// Throws DuplicateAxiom / UnusedConditionVariable / SortMismatch.
  void add_axiom(AxiomSchema schema);
  /// Throws DuplicateTheory / UndeclaredAxiom.
  void add_theory(Theory theory);

  const std::vector<AxiomSchema>& axioms() const { return axioms_; }
  const std::vector<Theory>& theories() const { return theories_; }
  const AxiomSchema* find_axiom(const std::string& id) const;
  const Theory* find_theory(const std::string& name) const;

  /// Resolves `name`, an axiom id, or a `+`-joined union of those.
  /// Throws UnknownTheory.
  AxiomSet resolve(const std::string& expr) const;
  AxiomSet resolve_ids(const std::string& label, const std::vector<std::string>& ids) const;

 private:
  std::vector<AxiomSchema> axioms_;
  std::map<std::string, std::size_t> axiom_index_;
  std::vector<Theory> theories_;
};

/// The two axiom tables and the theories gamma, gamma_s, gamma_t and the
/// permeability filter rho_st. Built once; immutable afterwards.
const Catalog& builtin_catalog();

/// Checks conditions, then substitutes. No arithmetic happens here.
/// Throws ConditionViolated, UnboundVariable, BadValuation.
Equation instantiate_axiom(const AxiomSchema& s, const Valuation& v);

}  // namespace chunkwise
