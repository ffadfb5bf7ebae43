#pragma once

// Calculation proofs: a start term and a chain of justified single-position
// rewrites. The checker is the trusted kernel; everything the prover and the
// C&P engine report is run back through it.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "chunkwise/term.hpp"
#include "chunkwise/theory.hpp"

namespace chunkwise {

enum class Direction { LR, RL };

inline Direction flip(Direction d) { return d == Direction::LR ? Direction::RL : Direction::LR; }

/// Instance of an axiom, used left-to-right or right-to-left at a position.
struct AxiomStep {
  std::string axiom;
  Direction direction = Direction::LR;
  Position position;
  Valuation valuation;
};

/// Folds `x + y` or `x * y` over literals into the literal result.
struct ArithStep {
  Position position;
};

/// Inverse of ArithStep: replaces literal v by the given `x + y` or `x * y`
/// over literals whose value is v. The target is spelled out, so checking
/// stays deterministic.
struct UnfoldStep {
  Position position;
  Term into;
};

struct ProofStep {
  std::variant<AxiomStep, ArithStep, UnfoldStep> step;

  ProofStep(AxiomStep s) : step(std::move(s)) {}
  ProofStep(ArithStep s) : step(s) {}
  ProofStep(UnfoldStep s) : step(std::move(s)) {}

  const Position& position() const;
  const AxiomStep* axiom() const { return std::get_if<AxiomStep>(&step); }
};

struct CalcProof {
  std::string name;
  /// Theory name, axiom id, or `+`-joined union (see Catalog::resolve).
  std::string theory;
  Equation claim;
  Term start;
  std::vector<ProofStep> steps;
};

/// Evidence that an equation follows from a set of axioms. Only the checker
/// creates these.
class VerifiedEquation {
 public:
  const Equation& equation() const { return equation_; }
  const IdSet& theory() const { return theory_; }
  std::size_t step_count() const { return steps_; }

 private:
  friend VerifiedEquation check_proof(const AxiomSet&, const CalcProof&);
  VerifiedEquation(Equation e, IdSet t, std::size_t n)
      : equation_(std::move(e)), theory_(std::move(t)), steps_(n) {}

  Equation equation_;
  IdSet theory_;
  std::size_t steps_;
};

/// One rewrite. Throws Error with kinds AxiomNotInTheory, BadValuation,
/// ConditionViolated, RedexMismatch, InvalidPosition, NotAnArithRedex.
Term check_step(const AxiomSet& axioms, const Term& current, const ProofStep& step);

/// Folds check_step over the chain. The chain may run from either side of
/// the claim to the other. Errors are rethrown as ProofError carrying the
/// failing step index.
VerifiedEquation check_proof(const AxiomSet& axioms, const CalcProof& p);
VerifiedEquation check_proof(const Catalog& catalog, const CalcProof& p);

/// Terms t0..tn visited by the chain (t0 = start). Throws like check_proof.
std::vector<Term> replay(const AxiomSet& axioms, const Term& start, const std::vector<ProofStep>& steps);

/// Chain from the last term of `terms` back to the first: axiom steps flip
/// direction, folds become unfolds and vice versa.
std::vector<ProofStep> reverse_chain(const std::vector<Term>& terms, const std::vector<ProofStep>& steps);

}  // namespace chunkwise
