#pragma once

// Chunk & Permeate: a theory split into chunks, a permeability relation that
// says which schemas may flow from one chunk to another, and a designated
// chunk where conclusions are read off.
//
// Permeation works at schema granularity: a filter denotes the ground
// instances of the schemas it admits. Each chunk's deductive closure is never
// materialised; queries run the bounded prover over the schemas available to
// the designated chunk once permeation has reached a fixpoint.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chunkwise/proof.hpp"
#include "chunkwise/prover.hpp"
#include "chunkwise/theory.hpp"

namespace chunkwise {

struct PermFilter {
  enum class Kind { Allow, AllExcept, Nothing };

  Kind kind = Kind::Nothing;
  std::vector<std::string> ids;

  static PermFilter all() { return {Kind::AllExcept, {}}; }
  static PermFilter none() { return {Kind::Nothing, {}}; }
  bool admits(const std::string& id) const;
  std::string to_string() const;
};

/// Parsed form of a `.cp` file, before chunk theories are resolved.
struct CPConfig {
  struct Chunk {
    std::string id;
    std::string theory;               // empty when `axioms` is given inline
    std::vector<std::string> axioms;
  };
  struct Edge {
    std::string from;
    std::string to;
    PermFilter filter;
  };

  std::string name;
  std::vector<Chunk> chunks;
  std::vector<Edge> edges;
  std::string designated;
};

struct CPStructure {
  std::string name;
  std::map<std::string, IdSet> chunks;
  /// Missing pairs mean Nothing.
  std::map<std::pair<std::string, std::string>, PermFilter> permeability;
  std::string designated;

  const PermFilter& filter(const std::string& from, const std::string& to) const;
};

/// Throws UnknownTheory, UndeclaredAxiom, UnknownChunk, FilterIdUnresolved.
CPStructure resolve_cp(const CPConfig& config, const Catalog& catalog);

/// Schema ids currently available to each chunk (own plus received).
using RoundState = std::map<std::string, IdSet>;

/// What crossed one edge in one round.
struct EdgeFlow {
  std::string from;
  std::string to;
  IdSet ids;    // everything admitted along the edge
  IdSet added;  // the part that was new to the receiving chunk
};

RoundState initial_state(const CPStructure& cp);

/// One synchronous round: every edge reads the previous state.
RoundState permeate_round(const CPStructure& cp, const RoundState& st, std::vector<EdgeFlow>* flows = nullptr);

struct CPAnswer {
  bool derivable = false;
  std::optional<CalcProof> proof;
  /// One entry per round run (including the final no-change round).
  std::vector<std::vector<EdgeFlow>> permeated;
  /// Rounds that changed the state.
  int rounds_used = 0;
  RoundState final_state;
  IdSet available;
  std::size_t states_explored = 0;
  std::vector<std::string> bounds_hit;
};

/// Throws UnknownChunk when the designated chunk is missing.
CPAnswer cp_query(const Catalog& catalog, const CPStructure& cp, const Equation& goal, const SearchBounds& b,
                  int max_rounds = 4);

struct CoveringEntry {
  std::string axiom;
  bool present = false;  // declared in some chunk
  std::size_t sampled = 0;
  std::size_t found = 0;
  std::vector<Valuation> failures;
};

struct CoveringReport {
  std::vector<CoveringEntry> entries;
  bool all_found() const;
};

/// Nat variables sample [lo, hi]; Frac variables sample lo..hi fractions i/j.
struct SampleSpec {
  unsigned lo = 1;
  unsigned hi = 3;
};

CoveringReport verify_covering(const Catalog& catalog, const CPStructure& cp, const AxiomSet& target,
                               const SearchBounds& b, const SampleSpec& samples = {});

}  // namespace chunkwise
