#pragma once

// Computable algebras for the fraction signature and bounded satisfaction
// checks of axiom schemas against them.
//
//   M     naturals with an absorbing error a; fractions are raw pairs, added
//         only when denominators agree, (0,0) otherwise.
//   Q0    zero-totalized rationals: a is 0 and n/0 is 0.
//   Qa    a-totalized rationals: a and n/0 are an absorbing error.
//   Mgcd  as M, but addition cross-multiplies and divides by gcd(m, l).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chunkwise/natural.hpp"
#include "chunkwise/term.hpp"
#include "chunkwise/theory.hpp"

namespace chunkwise {

enum class ModelId { M, Q0, Qa, Mgcd };

std::string_view model_name(ModelId m);
std::optional<ModelId> parse_model_id(std::string_view s);

struct NatVal {
  bool error = false;
  Natural value;

  static NatVal n(Natural v) { return {false, std::move(v)}; }
  static NatVal a() { return {true, 0}; }
  friend bool operator==(const NatVal& x, const NatVal& y) {
    return x.error == y.error && (x.error || x.value == y.value);
  }
};

struct PairFracVal {
  Natural numer;
  Natural denom;
  friend bool operator==(const PairFracVal&, const PairFracVal&) = default;
};

struct RatFracVal {
  bool error = false;  // Qa only
  Rational value;
  friend bool operator==(const RatFracVal& x, const RatFracVal& y) {
    return x.error == y.error && (x.error || x.value == y.value);
  }
};

using FracVal = std::variant<PairFracVal, RatFracVal>;

std::string to_string(const NatVal& v);
std::string to_string(const FracVal& v);

/// Total on ground terms for every model.
NatVal eval_nat(ModelId m, const Term& t);
FracVal eval_frac(ModelId m, const Term& t);
/// Value of a ground term of either sort, printed.
std::string eval_to_string(ModelId m, const Term& t);

bool holds(ModelId m, const Equation& e);

enum class CheckMode { Exhaustive, Random };

struct CheckBounds {
  unsigned nat_bound = 3;
  unsigned frac_depth = 0;
  CheckMode mode = CheckMode::Exhaustive;
  std::size_t count = 1000;  // random mode
  std::uint64_t seed = 1;    // random mode
};

enum class CheckStatus { Verified, Falsified, Skipped };

std::string_view status_name(CheckStatus s);

struct CheckEntry {
  std::string axiom;
  CheckStatus status = CheckStatus::Skipped;
  std::optional<Valuation> witness;
  /// Term-level instances checked. For a falsified entry, the number of
  /// distinct valuations examined up to and including the witness.
  std::uint64_t instances = 0;
};

struct CheckReport {
  ModelId model = ModelId::M;
  std::string theory;
  CheckBounds bounds;
  std::vector<CheckEntry> entries;

  bool falsified() const;
  const CheckEntry* entry(const std::string& axiom) const;
};

/// Nat variables range over 0..nat_bound. Frac variables range over the
/// fractions i/j (i, j <= nat_bound) closed under + and * up to frac_depth.
/// Exhaustive mode enumerates valuations lexicographically (variables by
/// name, then value) and reports the first counterexample.
CheckEntry check_axiom(ModelId m, const AxiomSchema& s, const CheckBounds& b);

/// `jobs` > 1 checks axioms concurrently; the report is identical.
CheckReport check_theory(ModelId m, const AxiomSet& axioms, const CheckBounds& b, unsigned jobs = 1);

nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const Valuation& v);

}  // namespace chunkwise
