#include "chunkwise/term.hpp"

#include <array>
#include <set>
#include <sstream>

#include "chunkwise/error.hpp"

namespace chunkwise {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPosition: return "invalid-position";
    case ErrorKind::SortMismatch: return "sort-mismatch";
    case ErrorKind::UnboundVariable: return "unbound-variable";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::DuplicateAxiom: return "duplicate-axiom";
    case ErrorKind::DuplicateTheory: return "duplicate-theory";
    case ErrorKind::UndeclaredAxiom: return "undeclared-axiom";
    case ErrorKind::UnusedConditionVariable: return "unused-condition-variable";
    case ErrorKind::UnknownTheory: return "unknown-theory";
    case ErrorKind::ConditionViolated: return "condition-violated";
    case ErrorKind::BadValuation: return "bad-valuation";
    case ErrorKind::AxiomNotInTheory: return "axiom-not-in-theory";
    case ErrorKind::RedexMismatch: return "redex-mismatch";
    case ErrorKind::NotAnArithRedex: return "not-an-arith-redex";
    case ErrorKind::EndpointMismatch: return "endpoint-mismatch";
    case ErrorKind::NotGround: return "not-ground";
    case ErrorKind::UnknownChunk: return "unknown-chunk";
    case ErrorKind::FilterIdUnresolved: return "filter-id-unresolved";
  }
  return "error";
}

ParseError::ParseError(ErrorKind kind, SourceSpan span, const std::string& message)
    : Error(kind, std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
      span_(span),
      detail_(message) {}

std::string sort_name(Sort s) { return s == Sort::Nat ? "Nat" : "Frac"; }

std::string position_to_string(const Position& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + "]";
}

struct Term::Node {
  Kind kind;
  Natural value;
  std::string name;
  std::array<Term, 2> kids;
  std::size_t arity = 0;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

Sort kind_sort(Kind k) {
  switch (k) {
    case Kind::Frac:
    case Kind::FAdd:
    case Kind::FMul:
    case Kind::FVar:
      return Sort::Frac;
    default:
      return Sort::Nat;
  }
}

const char* kind_label(Kind k) {
  switch (k) {
    case Kind::Lit: return "literal";
    case Kind::ErrA: return "a";
    case Kind::Add: return "+";
    case Kind::Mul: return "*";
    case Kind::Num: return "num";
    case Kind::Denom: return "denom";
    case Kind::NVar: return "nat variable";
    case Kind::Frac: return "/";
    case Kind::FAdd: return "+";
    case Kind::FMul: return "*";
    case Kind::FVar: return "frac variable";
  }
  return "?";
}

void require_sort(Kind k, const Term& t, Sort want) {
  if (t.is_null()) throw Error(ErrorKind::SortMismatch, std::string("missing operand of ") + kind_label(k));
  if (t.sort() != want) {
    throw Error(ErrorKind::SortMismatch, std::string("operand of ") + kind_label(k) + " must be " +
                                             sort_name(want) + ", got " + sort_name(t.sort()));
  }
}

}  // namespace

Term Term::make(Kind k, Natural value, std::string name, std::vector<Term> kids) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->value = std::move(value);
  n->name = std::move(name);
  n->arity = kids.size();
  std::size_t h = static_cast<std::size_t>(k) * 0x100000001b3ULL;
  if (k == Kind::Lit) h = mix(h, hash_natural(n->value));
  if (k == Kind::NVar || k == Kind::FVar) {
    h = mix(h, std::hash<std::string>{}(n->name));
    n->ground = false;
  }
  for (std::size_t i = 0; i < kids.size(); ++i) {
    n->kids[i] = std::move(kids[i]);
    h = mix(h, n->kids[i].hash());
    n->size += n->kids[i].size();
    n->ground = n->ground && n->kids[i].ground();
  }
  n->hash = h;
  return Term(std::move(n));
}

Term Term::lit(Natural value) {
  if (value < 0) throw Error(ErrorKind::SortMismatch, "negative literal");
  return make(Kind::Lit, std::move(value), {}, {});
}
Term Term::err() { return make(Kind::ErrA, 0, {}, {}); }

Term Term::add(Term l, Term r) {
  require_sort(Kind::Add, l, Sort::Nat);
  require_sort(Kind::Add, r, Sort::Nat);
  return make(Kind::Add, 0, {}, {std::move(l), std::move(r)});
}
Term Term::mul(Term l, Term r) {
  require_sort(Kind::Mul, l, Sort::Nat);
  require_sort(Kind::Mul, r, Sort::Nat);
  return make(Kind::Mul, 0, {}, {std::move(l), std::move(r)});
}
Term Term::num(Term f) {
  require_sort(Kind::Num, f, Sort::Frac);
  return make(Kind::Num, 0, {}, {std::move(f)});
}
Term Term::denom(Term f) {
  require_sort(Kind::Denom, f, Sort::Frac);
  return make(Kind::Denom, 0, {}, {std::move(f)});
}
Term Term::nvar(std::string name) { return make(Kind::NVar, 0, std::move(name), {}); }
Term Term::frac(Term numer, Term den) {
  require_sort(Kind::Frac, numer, Sort::Nat);
  require_sort(Kind::Frac, den, Sort::Nat);
  return make(Kind::Frac, 0, {}, {std::move(numer), std::move(den)});
}
Term Term::fadd(Term l, Term r) {
  require_sort(Kind::FAdd, l, Sort::Frac);
  require_sort(Kind::FAdd, r, Sort::Frac);
  return make(Kind::FAdd, 0, {}, {std::move(l), std::move(r)});
}
Term Term::fmul(Term l, Term r) {
  require_sort(Kind::FMul, l, Sort::Frac);
  require_sort(Kind::FMul, r, Sort::Frac);
  return make(Kind::FMul, 0, {}, {std::move(l), std::move(r)});
}
Term Term::fvar(std::string name) { return make(Kind::FVar, 0, std::move(name), {}); }

Term Term::plus(Term l, Term r) {
  if (l.sort() != r.sort()) {
    throw Error(ErrorKind::SortMismatch, "operands of + have different sorts (" + sort_name(l.sort()) +
                                             " and " + sort_name(r.sort()) + ")");
  }
  return l.sort() == Sort::Nat ? add(std::move(l), std::move(r)) : fadd(std::move(l), std::move(r));
}

Term Term::times(Term l, Term r) {
  if (l.sort() != r.sort()) {
    throw Error(ErrorKind::SortMismatch, "operands of * have different sorts (" + sort_name(l.sort()) +
                                             " and " + sort_name(r.sort()) + ")");
  }
  return l.sort() == Sort::Nat ? mul(std::move(l), std::move(r)) : fmul(std::move(l), std::move(r));
}

Term Term::with_children(const std::vector<Term>& kids) const {
  switch (kind()) {
    case Kind::Add: return add(kids.at(0), kids.at(1));
    case Kind::Mul: return mul(kids.at(0), kids.at(1));
    case Kind::Num: return num(kids.at(0));
    case Kind::Denom: return denom(kids.at(0));
    case Kind::Frac: return frac(kids.at(0), kids.at(1));
    case Kind::FAdd: return fadd(kids.at(0), kids.at(1));
    case Kind::FMul: return fmul(kids.at(0), kids.at(1));
    default: return *this;
  }
}

Kind Term::kind() const { return node_->kind; }
Sort Term::sort() const { return kind_sort(node_->kind); }
std::size_t Term::arity() const { return node_->arity; }
const Term& Term::child(std::size_t i) const {
  if (i >= node_->arity) throw Error(ErrorKind::InvalidPosition, "child index out of range");
  return node_->kids[i];
}
const Natural& Term::value() const { return node_->value; }
const std::string& Term::name() const { return node_->name; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
std::size_t Term::size() const { return node_ ? node_->size : 0; }
bool Term::ground() const { return node_ ? node_->ground : true; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind ||
      a.node_->size != b.node_->size) {
    return false;
  }
  switch (a.node_->kind) {
    case Kind::Lit: return a.node_->value == b.node_->value;
    case Kind::NVar:
    case Kind::FVar: return a.node_->name == b.node_->name;
    default: break;
  }
  for (std::size_t i = 0; i < a.node_->arity; ++i) {
    if (!(a.node_->kids[i] == b.node_->kids[i])) return false;
  }
  return true;
}

std::strong_ordering compare(const Term& a, const Term& b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (a.kind() == Kind::Lit) return a.value() < b.value() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_var()) return a.name() <=> b.name();
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (auto c = compare(a.child(i), b.child(i)); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::size_t depth = 0; depth < p.size(); ++depth) {
    if (p[depth] >= cur->arity()) {
      throw Error(ErrorKind::InvalidPosition,
                  "position " + position_to_string(p) + " is not valid (index " + std::to_string(p[depth]) +
                      " at depth " + std::to_string(depth) + ")");
    }
    cur = &cur->child(p[depth]);
  }
  return *cur;
}

namespace {

Term replace_rec(const Term& t, const Position& p, std::size_t depth, const Term& s) {
  if (depth == p.size()) {
    if (t.sort() != s.sort()) {
      throw Error(ErrorKind::SortMismatch, "cannot replace a " + sort_name(t.sort()) + " subterm by a " +
                                               sort_name(s.sort()) + " term");
    }
    return s;
  }
  if (p[depth] >= t.arity()) {
    throw Error(ErrorKind::InvalidPosition, "position " + position_to_string(p) + " is not valid");
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    kids.push_back(i == p[depth] ? replace_rec(t.child(i), p, depth + 1, s) : t.child(i));
  }
  return t.with_children(kids);
}

void collect_positions(const Term& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    cur.push_back(i);
    collect_positions(t.child(i), cur, out);
    cur.pop_back();
  }
}

}  // namespace

Term replace_at(const Term& t, const Position& p, const Term& s) { return replace_rec(t, p, 0, s); }

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  collect_positions(t, cur, out);
  return out;
}

bool operator==(const Valuation& a, const Valuation& b) { return a.nat == b.nat && a.frac == b.frac; }

Term apply_substitution(const Term& pattern, const Valuation& v) {
  if (pattern.ground()) return pattern;
  switch (pattern.kind()) {
    case Kind::NVar: {
      auto it = v.nat.find(pattern.name());
      if (it == v.nat.end()) throw Error(ErrorKind::UnboundVariable, "unbound variable " + pattern.name());
      return Term::lit(it->second);
    }
    case Kind::FVar: {
      auto it = v.frac.find(pattern.name());
      if (it == v.frac.end()) throw Error(ErrorKind::UnboundVariable, "unbound variable " + pattern.name());
      return it->second;
    }
    default: break;
  }
  std::vector<Term> kids;
  kids.reserve(pattern.arity());
  for (std::size_t i = 0; i < pattern.arity(); ++i) kids.push_back(apply_substitution(pattern.child(i), v));
  return pattern.with_children(kids);
}

namespace {

bool match_rec(const Term& pat, const Term& t, Valuation& v) {
  switch (pat.kind()) {
    case Kind::NVar: {
      if (!t.is_lit()) return false;
      auto [it, inserted] = v.nat.emplace(pat.name(), t.value());
      return inserted || it->second == t.value();
    }
    case Kind::FVar: {
      if (t.sort() != Sort::Frac) return false;
      auto [it, inserted] = v.frac.emplace(pat.name(), t);
      return inserted || it->second == t;
    }
    default: break;
  }
  if (pat.kind() != t.kind()) return false;
  if (pat.kind() == Kind::Lit) return pat.value() == t.value();
  for (std::size_t i = 0; i < pat.arity(); ++i) {
    if (!match_rec(pat.child(i), t.child(i), v)) return false;
  }
  return true;
}

void collect_vars(const Term& t, std::map<std::string, Sort>& out) {
  if (t.is_var()) {
    out.emplace(t.name(), t.sort());
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) collect_vars(t.child(i), out);
}

}  // namespace

std::optional<Valuation> match_schema(const Term& pattern, const Term& ground) {
  Valuation v;
  if (!match_rec(pattern, ground, v)) return std::nullopt;
  return v;
}

std::vector<VarInfo> variables(const Term& t) {
  std::map<std::string, Sort> vars;
  collect_vars(t, vars);
  std::vector<VarInfo> out;
  for (auto& [name, sort] : vars) out.push_back({name, sort});
  return out;
}

std::optional<Natural> literal_value(const Term& t) {
  switch (t.kind()) {
    case Kind::Lit: return t.value();
    case Kind::Add:
    case Kind::Mul: {
      auto l = literal_value(t.child(0));
      if (!l) return std::nullopt;
      auto r = literal_value(t.child(1));
      if (!r) return std::nullopt;
      return t.kind() == Kind::Add ? Natural(*l + *r) : Natural(*l * *r);
    }
    default: return std::nullopt;
  }
}

}  // namespace chunkwise
