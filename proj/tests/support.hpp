#pragma once

// Shared test helpers: a random term generator and an evaluator written
// against machine integers, independent of src/model.cpp.

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chunkwise/term.hpp"

namespace chunkwise::testing {

struct TermGen {
  std::mt19937_64 rng;
  unsigned max_lit = 9;
  bool with_vars = true;
  bool with_err = true;
  bool with_proj = true;  // num / denom

  explicit TermGen(std::uint64_t seed) : rng(seed) {}

  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng); }

  Term nat(int depth) {
    unsigned leaves = 1 + (with_vars ? 1 : 0) + (with_err ? 1 : 0);
    if (depth <= 0 || pick(3) == 0) {
      unsigned c = pick(leaves + 2);
      if (c == 1 && with_vars) return Term::nvar(std::string(1, "nmklpq"[pick(6)]));
      if (c == 2 && with_err) return Term::err();
      return Term::lit(pick(max_lit + 1));
    }
    switch (pick(with_proj ? 4 : 2)) {
      case 0: return Term::add(nat(depth - 1), nat(depth - 1));
      case 1: return Term::mul(nat(depth - 1), nat(depth - 1));
      case 2: return Term::num(frac(depth - 1));
      default: return Term::denom(frac(depth - 1));
    }
  }

  Term frac(int depth) {
    if (depth <= 0) return Term::frac(Term::lit(pick(max_lit + 1)), Term::lit(pick(max_lit + 1)));
    switch (pick(with_vars ? 4 : 3)) {
      case 0: return Term::frac(nat(depth - 1), nat(depth - 1));
      case 1: return Term::fadd(frac(depth - 1), frac(depth - 1));
      case 2: return Term::fmul(frac(depth - 1), frac(depth - 1));
      default: {
        static const char* names[] = {"alpha", "beta", "gamma"};
        return Term::fvar(names[pick(3)]);
      }
    }
  }

  Term any(int depth) { return pick(2) ? nat(depth) : frac(depth); }
};

// Oracle values. Nat: nullopt is the error a. Frac: {numer, denom}.
using ONat = std::optional<std::int64_t>;
struct OPair {
  std::int64_t n = 0;
  std::int64_t d = 0;
  bool operator==(const OPair&) const = default;
};

inline std::int64_t lit64(const Term& t) { return static_cast<std::int64_t>(t.value()); }

// Pair model, with `gcd_add` selecting the gcd-normalised addition.
struct PairOracle {
  bool gcd_add = false;

  ONat nat(const Term& t) const {
    switch (t.kind()) {
      case Kind::Lit: return lit64(t);
      case Kind::ErrA: return std::nullopt;
      case Kind::Add:
      case Kind::Mul: {
        ONat x = nat(t.child(0)), y = nat(t.child(1));
        if (!x || !y) return std::nullopt;
        return t.kind() == Kind::Add ? *x + *y : *x * *y;
      }
      case Kind::Num:
      case Kind::Denom: {
        OPair p = frac(t.child(0));
        if (p.d == 0) return std::nullopt;
        return t.kind() == Kind::Num ? p.n : p.d;
      }
      default: return std::nullopt;
    }
  }

  OPair frac(const Term& t) const {
    switch (t.kind()) {
      case Kind::Frac: {
        ONat x = nat(t.child(0)), y = nat(t.child(1));
        if (!x || !y) return {0, 0};
        return {*x, *y};
      }
      case Kind::FAdd: {
        OPair x = frac(t.child(0)), y = frac(t.child(1));
        if (gcd_add) {
          if (x.d == 0 || y.d == 0) return {0, 0};
          std::int64_t g = std::gcd(x.d, y.d);
          return {(x.n * y.d + y.n * x.d) / g, x.d * y.d / g};
        }
        if (x.d == y.d && x.d != 0) return {x.n + y.n, x.d};
        return {0, 0};
      }
      case Kind::FMul: {
        OPair x = frac(t.child(0)), y = frac(t.child(1));
        if (x.d == 0 || y.d == 0) return {0, 0};
        return {x.n * y.n, x.d * y.d};
      }
      default: return {0, 0};
    }
  }
};

// Rationals in lowest terms. `err` marks the absorbing error of the
// a-totalised reading; in the zero-totalised one it never appears.
struct ORat {
  bool err = false;
  std::int64_t p = 0;
  std::int64_t q = 1;
  bool operator==(const ORat&) const = default;
};

inline ORat make_rat(std::int64_t p, std::int64_t q) {
  std::int64_t g = std::gcd(p, q);
  return {false, p / g, q / g};
}

struct RatOracle {
  bool absorbing = false;  // Qa when true, Q0 otherwise

  ONat nat(const Term& t) const {
    switch (t.kind()) {
      case Kind::Lit: return lit64(t);
      case Kind::ErrA:
        if (absorbing) return std::nullopt;
        return 0;
      case Kind::Add:
      case Kind::Mul: {
        ONat x = nat(t.child(0)), y = nat(t.child(1));
        if (!x || !y) return std::nullopt;
        return t.kind() == Kind::Add ? *x + *y : *x * *y;
      }
      case Kind::Num:
      case Kind::Denom: {
        ORat r = frac(t.child(0));
        if (r.err) return std::nullopt;
        return t.kind() == Kind::Num ? r.p : r.q;
      }
      default: return std::nullopt;
    }
  }

  ORat frac(const Term& t) const {
    const ORat bad = absorbing ? ORat{true, 0, 1} : ORat{false, 0, 1};
    switch (t.kind()) {
      case Kind::Frac: {
        ONat x = nat(t.child(0)), y = nat(t.child(1));
        if (!x || !y || *y == 0) return bad;
        return make_rat(*x, *y);
      }
      case Kind::FAdd:
      case Kind::FMul: {
        ORat x = frac(t.child(0)), y = frac(t.child(1));
        if (x.err || y.err) return bad;
        if (t.kind() == Kind::FAdd) return make_rat(x.p * y.q + y.p * x.q, x.q * y.q);
        return make_rat(x.p * y.p, x.q * y.q);
      }
      default: return bad;
    }
  }
};

}  // namespace chunkwise::testing
