#pragma once

// Bounded bidirectional search for calculation proofs.
//
// The consequence relation is only semi-decidable, so a search that runs out
// of budget says nothing about derivability. NotFoundWithinBounds is advisory.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "chunkwise/proof.hpp"
#include "chunkwise/theory.hpp"

namespace chunkwise {

struct SearchBounds {
  std::size_t max_depth = 12;       // search layers per direction
  std::size_t max_term_size = 64;   // node count
  unsigned fresh_lit_bound = 12;    // largest literal a move may invent
  std::size_t max_states = 200000;  // visited states, both directions
};

/// A primitive successor of a term: one checker step and its result.
struct Move {
  ProofStep step;
  Term result;
  /// True for literal-splitting moves (recorded as UnfoldStep).
  bool split = false;
};

/// Every primitive successor of t, in a fixed order: by position, then rule
/// (axiom id, folds, splits), then LR before RL, then invented literals
/// ascending. Results larger than max_term_size are dropped.
std::vector<Move> enumerate_moves(const AxiomSet& axioms, const Term& t, const SearchBounds& b);

struct Found {
  CalcProof proof;
  std::size_t states_explored = 0;
};

struct NotFoundWithinBounds {
  std::size_t states_explored = 0;
  /// The reason the search stopped ("max-states", "max-depth" or
  /// "exhausted"), followed by "max-term-size" when oversized terms were
  /// dropped along the way.
  std::vector<std::string> bounds_hit;
};

using ProveResult = std::variant<Found, NotFoundWithinBounds>;

inline bool found(const ProveResult& r) { return std::holds_alternative<Found>(r); }

/// Bidirectional breadth-first search over fold-normal terms. A short search
/// over the whole goal comes first, then the differing children of a shared
/// head are proved separately, then the rest of the budget goes to the whole
/// goal; states_explored counts all of them and never exceeds max_states.
/// Deterministic for fixed inputs. Every Found proof has passed check_proof
/// against `axioms` before it is returned.
ProveResult prove(const AxiomSet& axioms, const Equation& goal, const SearchBounds& b = {});

/// Derived rule usable as a single search edge: same-denominator addition
/// n/m + k/m = (n+k)/m, proved from 18, 14, 15 and 19. Its primitive
/// expansion from `n/m + k/m` at position `at` (empty = root).
std::vector<ProofStep> same_denominator_chain(const Natural& n, const Natural& k, const Natural& m,
                                              const Position& at = {});

}  // namespace chunkwise
