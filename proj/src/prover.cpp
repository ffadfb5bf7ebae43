#include "chunkwise/prover.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <tuple>
#include <stdexcept>
#include <unordered_map>

#include "chunkwise/error.hpp"
#include "chunkwise/syntax.hpp"

namespace chunkwise {

namespace {

Position concat(const Position& a, std::initializer_list<std::size_t> b) {
  Position p = a;
  p.insert(p.end(), b);
  return p;
}

Term frac_lit(const Natural& n, const Natural& m) { return Term::frac(Term::lit(n), Term::lit(m)); }

// ---------------------------------------------------------------- literal folding

bool is_lit_pair(const Term& t) {
  return (t.kind() == Kind::Add || t.kind() == Kind::Mul) && t.child(0).is_lit() && t.child(1).is_lit();
}

/// Folds every literal sum and product bottom-up, recording the fold
/// positions (post-order, so each one is valid when it is applied).
Term normalize(const Term& t, Position& at, std::vector<ProofStep>* steps) {
  if (t.arity() == 0) return t;
  std::vector<Term> kids;
  bool changed = false;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    at.push_back(i);
    kids.push_back(normalize(t.child(i), at, steps));
    at.pop_back();
    changed = changed || kids.back() != t.child(i);
  }
  Term u = changed ? t.with_children(kids) : t;
  if (is_lit_pair(u)) {
    if (steps) steps->emplace_back(ArithStep{at});
    return Term::lit(u.kind() == Kind::Add ? Natural(u.child(0).value() + u.child(1).value())
                                           : Natural(u.child(0).value() * u.child(1).value()));
  }
  return u;
}

Term normalize(const Term& t, std::vector<ProofStep>* steps = nullptr) {
  Position at;
  return normalize(t, at, steps);
}

/// Unfold steps turning literal `have` into the literal-only tree `want`,
/// outermost first.
void unfolds(const Term& have, const Term& want, Position& at, std::vector<ProofStep>& out) {
  if (have.is_lit() && (want.kind() == Kind::Add || want.kind() == Kind::Mul)) {
    Term shallow = want.with_children({Term::lit(*literal_value(want.child(0))), Term::lit(*literal_value(want.child(1)))});
    out.emplace_back(UnfoldStep{at, shallow});
    for (std::size_t i = 0; i < 2; ++i) {
      at.push_back(i);
      unfolds(shallow.child(i), want.child(i), at, out);
      at.pop_back();
    }
    return;
  }
  if (have.kind() != want.kind() || have.arity() != want.arity()) return;
  for (std::size_t i = 0; i < have.arity(); ++i) {
    at.push_back(i);
    unfolds(have.child(i), want.child(i), at, out);
    at.pop_back();
  }
}

// ---------------------------------------------------------------- matching modulo literal arithmetic

std::optional<Natural> bound_value(const Term& p, const Valuation& v) {
  switch (p.kind()) {
    case Kind::Lit: return p.value();
    case Kind::NVar: {
      auto it = v.nat.find(p.name());
      if (it == v.nat.end()) return std::nullopt;
      return it->second;
    }
    case Kind::Add:
    case Kind::Mul: {
      auto a = bound_value(p.child(0), v);
      if (!a) return std::nullopt;
      auto b = bound_value(p.child(1), v);
      if (!b) return std::nullopt;
      return p.kind() == Kind::Add ? Natural(*a + *b) : Natural(*a * *b);
    }
    default: return std::nullopt;
  }
}

std::size_t op_count(const Term& p) {
  std::size_t n = (p.kind() == Kind::Add || p.kind() == Kind::Mul) ? 1 : 0;
  for (std::size_t i = 0; i < p.arity(); ++i) n += op_count(p.child(i));
  return n;
}

class Matcher {
 public:
  explicit Matcher(unsigned bound) : bound_(bound) {}

  /// Valuations v with normalize(apply(p, v)) == g, extending `v`.
  void match(const Term& p, const Term& g, const Valuation& v, bool at_root, std::vector<Valuation>& out) const {
    switch (p.kind()) {
      case Kind::NVar: {
        if (!g.is_lit()) return;
        auto it = v.nat.find(p.name());
        if (it != v.nat.end()) {
          if (it->second == g.value()) out.push_back(v);
          return;
        }
        Valuation w = v;
        w.nat.emplace(p.name(), g.value());
        out.push_back(std::move(w));
        return;
      }
      case Kind::FVar: {
        if (g.sort() != Sort::Frac) return;
        auto it = v.frac.find(p.name());
        if (it != v.frac.end()) {
          if (it->second == g) out.push_back(v);
          return;
        }
        Valuation w = v;
        w.frac.emplace(p.name(), g);
        out.push_back(std::move(w));
        return;
      }
      case Kind::Lit:
        if (g.is_lit() && g.value() == p.value()) out.push_back(v);
        return;
      case Kind::ErrA:
        if (g.kind() == Kind::ErrA) out.push_back(v);
        return;
      default: break;
    }
    if ((p.kind() == Kind::Add || p.kind() == Kind::Mul) && g.is_lit()) {
      if (!at_root) split(p, g.value(), v, out);
      return;
    }
    if (p.kind() != g.kind()) return;
    if (p.arity() == 1) {
      match(p.child(0), g.child(0), v, false, out);
      return;
    }
    // Cheaper side first: fewer arithmetic nodes means fewer splits.
    const std::size_t first = op_count(p.child(1)) < op_count(p.child(0)) ? 1 : 0;
    const std::size_t second = 1 - first;
    std::vector<Valuation> partial;
    match(p.child(first), g.child(first), v, false, partial);
    for (const auto& w : partial) match(p.child(second), g.child(second), w, false, out);
  }

 private:
  void match_pair(const Term& p, const Natural& a, const Natural& b, const Valuation& v,
                  std::vector<Valuation>& out) const {
    std::vector<Valuation> partial;
    match(p.child(0), Term::lit(a), v, false, partial);
    for (const auto& w : partial) match(p.child(1), Term::lit(b), w, false, out);
  }

  void split(const Term& p, const Natural& value, const Valuation& v, std::vector<Valuation>& out) const {
    const bool add = p.kind() == Kind::Add;
    const Natural bound(bound_);
    // One side already determined: the other follows.
    for (std::size_t side = 0; side < 2; ++side) {
      auto c = bound_value(p.child(side), v);
      if (!c) continue;
      std::vector<Natural> others;
      if (add) {
        if (*c <= value) others.push_back(value - *c);
      } else if (*c == 0) {
        if (value == 0) {
          for (unsigned y = 0; y <= bound_; ++y) others.emplace_back(y);
        }
      } else if (value % *c == 0) {
        others.push_back(value / *c);
      }
      for (const auto& o : others) {
        if (side == 0) {
          match_pair(p, *c, o, v, out);
        } else {
          match_pair(p, o, *c, v, out);
        }
      }
      return;
    }
    if (add) {
      const Natural top = std::min(value, bound);
      for (Natural a = 0; a <= top; ++a) match_pair(p, a, value - a, v, out);
    } else if (value == 0) {
      for (unsigned y = 0; y <= bound_; ++y) match_pair(p, 0, y, v, out);
      for (unsigned x = 1; x <= bound_; ++x) match_pair(p, x, 0, v, out);
    } else {
      const Natural top = std::min(value, bound);
      for (Natural d = 1; d <= top; ++d) {
        if (value % d == 0) match_pair(p, d, value / d, v, out);
      }
    }
  }

  unsigned bound_;
};

/// Binds variables that occur only on the producing side to 1..bound,
/// in name order, keeping valuations that satisfy the conditions.
void complete_fresh(const AxiomSchema& s, const Valuation& v, unsigned bound, std::vector<Valuation>& out) {
  std::vector<std::string> fresh;
  for (const auto& var : s.variables()) {
    if (v.binds(var.name)) continue;
    if (var.sort == Sort::Frac) return;  // no finite supply of fresh fractions
    fresh.push_back(var.name);
  }
  Valuation w = v;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == fresh.size()) {
      if (!s.violated(w)) out.push_back(w);
      return;
    }
    for (unsigned x = 1; x <= bound; ++x) {
      w.nat[fresh[i]] = x;
      self(self, i + 1);
    }
    w.nat.erase(fresh[i]);
  };
  rec(rec, 0);
}

// ---------------------------------------------------------------- search edges

struct Label {
  bool derived = false;  // same-denominator rule
  std::optional<Term> split;  // literal unfolded at the parent position first
  std::string axiom;
  Direction direction = Direction::LR;
  Position position;
  Valuation valuation;
};

struct Edge {
  Label label;
  Term result;
};

const AxiomSchema& builtin(const char* id) { return *builtin_catalog().find_axiom(id); }

bool same_schema(const AxiomSet& axioms, const char* id) {
  const AxiomSchema* s = axioms.find(id);
  const AxiomSchema& b = builtin(id);
  return s && s->lhs == b.lhs && s->rhs == b.rhs && s->conditions == b.conditions;
}

bool has_derived_rule(const AxiomSet& axioms) {
  return same_schema(axioms, "14") && same_schema(axioms, "15") && same_schema(axioms, "18") &&
         same_schema(axioms, "19");
}

// Growth of the same-denominator chain over its source term.
constexpr std::size_t kDerivedOverhead = 8;

class Expander {
 public:
  /// `target` is the normal term the other side of the search started from.
  Expander(const AxiomSet& axioms, const SearchBounds& b, const Term& target)
      : axioms_(axioms), bounds_(b), matcher_(b.fresh_lit_bound), derived_(has_derived_rule(axioms)) {
    for (const auto& pos : positions(target)) {
      const Term& t = subterm_at(target, pos);
      if (t.kind() != Kind::Add && t.kind() != Kind::Mul) continue;
      for (std::size_t j = 0; j < 2; ++j) {
        if (t.child(j).is_lit() && !t.child(1 - j).is_lit()) shapes_.emplace(t.kind(), j, t.child(j).value());
      }
    }
  }

  bool dropped_for_size() const { return dropped_; }

  std::vector<Edge> successors(const Term& s) {
    std::vector<Edge> out;
    for (const auto& pos : positions(s)) {
      const Term& sub = subterm_at(s, pos);
      axiom_moves(s, pos, std::nullopt, out);
      if (derived_) derived_moves(s, pos, sub, out);
      if (sub.is_lit()) split_moves(s, pos, sub.value(), out);
    }
    return out;
  }

 private:
  void axiom_moves(const Term& s, const Position& pos, const std::optional<Term>& split, std::vector<Edge>& out) {
    const Term& sub = subterm_at(s, pos);
    for (const auto& schema : axioms_) {
      for (Direction d : {Direction::LR, Direction::RL}) {
        const Term& src = d == Direction::LR ? schema.lhs : schema.rhs;
        const Term& tgt = d == Direction::LR ? schema.rhs : schema.lhs;
        if (src.sort() != sub.sort()) continue;
        std::vector<Valuation> matched;
        matcher_.match(src, sub, Valuation{}, true, matched);
        for (const auto& m : matched) {
          std::vector<Valuation> full;
          complete_fresh(schema, m, bounds_.fresh_lit_bound, full);
          for (auto& v : full) {
            Term replaced = replace_at(s, pos, apply_substitution(tgt, v));
            if (replaced.size() > bounds_.max_term_size) {
              dropped_ = true;
              continue;
            }
            out.push_back({Label{false, split, schema.id, d, pos, std::move(v)}, normalize(replaced)});
          }
        }
      }
    }
  }

  // A rewrite strictly inside an unfolded literal, such as 4 to 4 + 0 and
  // then 16 backwards on the 4, has no fold-normal redex of its own. The
  // other side can always undo one by a collapsing step and a fold, so these
  // moves only shortcut the meeting and are tried where the target has an
  // operator with that literal beside a compound operand.
  void split_moves(const Term& s, const Position& pos, const Natural& value, std::vector<Edge>& out) {
    const Natural top = std::min(value, Natural(bounds_.fresh_lit_bound));
    std::vector<Term> splits;
    for (Natural d = 1; d <= top; ++d) {
      if (value % d == 0) splits.push_back(Term::mul(Term::lit(d), Term::lit(value / d)));
    }
    for (Natural w = 0; w <= top; ++w) splits.push_back(Term::add(Term::lit(w), Term::lit(value - w)));
    for (const Term& sp : splits) {
      Term unfolded = replace_at(s, pos, sp);
      if (unfolded.size() > bounds_.max_term_size) {
        dropped_ = true;
        continue;
      }
      for (std::size_t i = 0; i < 2; ++i) {
        if (shapes_.count({sp.kind(), 1 - i, sp.child(1 - i).value()})) {
          axiom_moves(unfolded, concat(pos, {i}), sp, out);
        }
      }
    }
  }

  void derived_moves(const Term& s, const Position& pos, const Term& sub, std::vector<Edge>& out) {
    auto emit = [&](Direction d, const Natural& n, const Natural& k, const Natural& m, const Term& into,
                    std::size_t peak) {
      if (peak > bounds_.max_term_size) {
        dropped_ = true;
        return;
      }
      Valuation v;
      v.nat = {{"n", n}, {"k", k}, {"m", m}};
      out.push_back({Label{true, std::nullopt, "", d, pos, std::move(v)}, replace_at(s, pos, into)});
    };
    if (sub.kind() == Kind::FAdd) {
      const Term& x = sub.child(0);
      const Term& y = sub.child(1);
      if (x.kind() == Kind::Frac && y.kind() == Kind::Frac && x.child(0).is_lit() && x.child(1).is_lit() &&
          y.child(0).is_lit() && y.child(1) == x.child(1) && x.child(1).value() != 0) {
        const Natural& n = x.child(0).value();
        const Natural& k = y.child(0).value();
        const Natural& m = x.child(1).value();
        emit(Direction::LR, n, k, m, frac_lit(n + k, m), s.size() + kDerivedOverhead);
      }
    }
    if (sub.kind() == Kind::Frac && sub.child(0).is_lit() && sub.child(1).is_lit() && sub.child(1).value() != 0) {
      const Natural& value = sub.child(0).value();
      const Natural& m = sub.child(1).value();
      const Natural top = std::min(value, Natural(bounds_.fresh_lit_bound));
      for (Natural n = 0; n <= top; ++n) {
        Term into = Term::fadd(frac_lit(n, m), frac_lit(value - n, m));
        emit(Direction::RL, n, value - n, m, into, s.size() + 4 + kDerivedOverhead);
      }
    }
  }

  const AxiomSet& axioms_;
  SearchBounds bounds_;
  Matcher matcher_;
  bool derived_;
  std::set<std::tuple<Kind, std::size_t, Natural>> shapes_;
  bool dropped_ = false;
};

/// Primitive steps realising one search edge from normal state `s`.
std::vector<ProofStep> edge_chain(const AxiomSet& axioms, const Term& s, const Label& l) {
  if (l.split) {
    Position at(l.position.begin(), l.position.end() - 1);
    Label inner = l;
    inner.split.reset();
    std::vector<ProofStep> chain{UnfoldStep{at, *l.split}};
    auto rest = edge_chain(axioms, replace_at(s, at, *l.split), inner);
    chain.insert(chain.end(), rest.begin(), rest.end());
    return chain;
  }
  const Natural* n = nullptr;
  if (l.derived) {
    n = &l.valuation.nat.at("n");
    const Natural& k = l.valuation.nat.at("k");
    const Natural& m = l.valuation.nat.at("m");
    auto chain = same_denominator_chain(*n, k, m, l.position);
    if (l.direction == Direction::LR) return chain;
    Term from = replace_at(s, l.position, Term::fadd(frac_lit(*n, m), frac_lit(k, m)));
    return reverse_chain(replay(axioms, from, chain), chain);
  }
  const AxiomSchema& schema = *axioms.find(l.axiom);
  const Term& src = l.direction == Direction::LR ? schema.lhs : schema.rhs;
  const Term& tgt = l.direction == Direction::LR ? schema.rhs : schema.lhs;
  std::vector<ProofStep> chain;
  Position at = l.position;
  unfolds(subterm_at(s, l.position), apply_substitution(src, l.valuation), at, chain);
  chain.emplace_back(AxiomStep{l.axiom, l.direction, l.position, l.valuation});
  normalize(replace_at(s, l.position, apply_substitution(tgt, l.valuation)), &chain);
  return chain;
}

struct NodeInfo {
  Term parent;
  std::optional<Label> label;
  std::size_t depth = 0;
};

using Visited = std::unordered_map<Term, NodeInfo, TermHash>;

/// Steps from `origin` (not necessarily normal) to `state` along the tree.
std::vector<ProofStep> path_chain(const AxiomSet& axioms, const Visited& seen, const Term& origin, const Term& state) {
  std::vector<std::pair<Term, const Label*>> edges;
  for (Term cur = state;;) {
    const NodeInfo& info = seen.at(cur);
    if (!info.label) break;
    edges.emplace_back(info.parent, &*info.label);
    cur = info.parent;
  }
  std::reverse(edges.begin(), edges.end());
  std::vector<ProofStep> chain;
  normalize(origin, &chain);
  for (const auto& [from, label] : edges) {
    auto part = edge_chain(axioms, from, *label);
    chain.insert(chain.end(), part.begin(), part.end());
  }
  return chain;
}

}  // namespace

std::vector<ProofStep> same_denominator_chain(const Natural& n, const Natural& k, const Natural& m,
                                              const Position& at) {
  auto val = [](std::initializer_list<std::pair<const std::string, Natural>> nat,
                std::initializer_list<std::pair<const std::string, Term>> frac = {}) {
    Valuation v;
    v.nat = nat;
    v.frac = frac;
    return v;
  };
  const Term one_m = frac_lit(1, m);
  const Term n_1 = frac_lit(n, 1);
  const Term k_1 = frac_lit(k, 1);
  std::vector<ProofStep> out;
  out.emplace_back(AxiomStep{"18", Direction::LR, concat(at, {0}), val({{"n", n}, {"m", m}})});
  out.emplace_back(AxiomStep{"18", Direction::LR, concat(at, {1}), val({{"n", k}, {"m", m}})});
  out.emplace_back(AxiomStep{"14", Direction::LR, concat(at, {0}), val({}, {{"alpha", n_1}, {"beta", one_m}})});
  out.emplace_back(AxiomStep{"14", Direction::LR, concat(at, {1}), val({}, {{"alpha", k_1}, {"beta", one_m}})});
  out.emplace_back(
      AxiomStep{"15", Direction::RL, at, val({}, {{"alpha", one_m}, {"beta", n_1}, {"gamma", k_1}})});
  out.emplace_back(AxiomStep{"14", Direction::LR, at, val({}, {{"alpha", one_m}, {"beta", Term::fadd(n_1, k_1)}})});
  out.emplace_back(AxiomStep{"19", Direction::LR, concat(at, {0}), val({{"n", n}, {"m", k}})});
  out.emplace_back(ArithStep{concat(at, {0, 0})});
  out.emplace_back(AxiomStep{"18", Direction::RL, at, val({{"n", n + k}, {"m", m}})});
  return out;
}

std::vector<Move> enumerate_moves(const AxiomSet& axioms, const Term& t, const SearchBounds& b) {
  std::vector<Move> out;
  auto push = [&](ProofStep step, Term result, bool split) {
    if (result.size() <= b.max_term_size) out.push_back({std::move(step), std::move(result), split});
  };
  for (const auto& pos : positions(t)) {
    const Term& sub = subterm_at(t, pos);
    for (const auto& schema : axioms) {
      for (Direction d : {Direction::LR, Direction::RL}) {
        const Term& src = d == Direction::LR ? schema.lhs : schema.rhs;
        const Term& tgt = d == Direction::LR ? schema.rhs : schema.lhs;
        auto m = match_schema(src, sub);
        if (!m) continue;
        std::vector<Valuation> full;
        complete_fresh(schema, *m, b.fresh_lit_bound, full);
        for (auto& v : full) {
          Term result = replace_at(t, pos, apply_substitution(tgt, v));
          push(AxiomStep{schema.id, d, pos, std::move(v)}, std::move(result), false);
        }
      }
    }
    if (is_lit_pair(sub)) {
      Natural v = sub.kind() == Kind::Add ? Natural(sub.child(0).value() + sub.child(1).value())
                                          : Natural(sub.child(0).value() * sub.child(1).value());
      push(ArithStep{pos}, replace_at(t, pos, Term::lit(v)), false);
    }
    if (sub.is_lit()) {
      const Natural& v = sub.value();
      const Natural top = std::min(v, Natural(b.fresh_lit_bound));
      for (Natural d = 1; d <= top; ++d) {
        if (v % d != 0) continue;
        Term into = Term::mul(Term::lit(d), Term::lit(v / d));
        push(UnfoldStep{pos, into}, replace_at(t, pos, into), true);
      }
      for (Natural w = 0; w <= top; ++w) {
        Term into = Term::add(Term::lit(w), Term::lit(v - w));
        push(UnfoldStep{pos, into}, replace_at(t, pos, into), true);
      }
    }
  }
  return out;
}

namespace {

struct Search {
  std::optional<std::vector<ProofStep>> chain;  // from lhs to rhs, as given
  std::size_t states = 0;
  std::vector<std::string> bounds_hit;
};

Search bfs(const AxiomSet& axioms, const Term& lhs, const Term& rhs, const SearchBounds& b) {
  const Term origin[2] = {lhs, rhs};
  Visited seen[2];
  std::vector<Term> frontier[2];
  std::size_t depth[2] = {0, 0};
  for (int side = 0; side < 2; ++side) {
    Term start = normalize(origin[side]);
    seen[side].emplace(start, NodeInfo{});
    frontier[side].push_back(start);
  }
  Expander expander[2] = {Expander(axioms, b, frontier[1].front()), Expander(axioms, b, frontier[0].front())};

  auto found = [&](const Term& meet) {
    Search r;
    r.states = seen[0].size() + seen[1].size();
    auto steps = path_chain(axioms, seen[0], origin[0], meet);
    auto back = path_chain(axioms, seen[1], origin[1], meet);
    auto rev = reverse_chain(replay(axioms, origin[1], back), back);
    steps.insert(steps.end(), rev.begin(), rev.end());
    r.chain = std::move(steps);
    return r;
  };
  auto not_found = [&](std::string why) {
    Search r;
    r.states = seen[0].size() + seen[1].size();
    r.bounds_hit.push_back(std::move(why));
    if (expander[0].dropped_for_size() || expander[1].dropped_for_size()) r.bounds_hit.push_back("max-term-size");
    return r;
  };

  if (frontier[0].front() == frontier[1].front()) return found(frontier[0].front());

  for (;;) {
    if (frontier[0].empty() || frontier[1].empty()) return not_found("exhausted");
    const bool open0 = depth[0] < b.max_depth, open1 = depth[1] < b.max_depth;
    if (!open0 && !open1) return not_found("max-depth");
    int side = !open0 ? 1 : !open1 ? 0 : (frontier[1].size() < frontier[0].size() ? 1 : 0);
    Visited& own = seen[side];
    const Visited& other = seen[1 - side];
    std::vector<Term> next;
    std::optional<std::pair<std::size_t, Term>> best;
    bool out_of_states = false;
    for (const Term& s : frontier[side]) {
      for (auto& e : expander[side].successors(s)) {
        if (own.count(e.result)) continue;
        if (seen[0].size() + seen[1].size() >= b.max_states) {
          out_of_states = true;
          break;
        }
        own.emplace(e.result, NodeInfo{s, std::move(e.label), depth[side] + 1});
        auto hit = other.find(e.result);
        if (hit != other.end()) {
          std::size_t total = depth[side] + 1 + hit->second.depth;
          if (!best || total < best->first || (total == best->first && TermLess{}(e.result, best->second))) {
            best.emplace(total, e.result);
          }
        }
        next.push_back(e.result);
      }
      if (out_of_states) break;
    }
    if (best) return found(best->second);
    if (out_of_states) return not_found("max-states");
    frontier[side] = std::move(next);
    ++depth[side];
  }
}

std::optional<std::vector<ProofStep>> congruent(const AxiomSet& axioms, const Term& s, const Term& t,
                                                std::size_t context, const SearchBounds& b, std::size_t& budget,
                                                std::size_t& states);

/// Congruence: when both sides share their head, the differing children
/// are proved one at a time and the chains lifted under the head. `context`
/// is the size of everything around the node, charged against max_term_size.
std::optional<std::vector<ProofStep>> by_children(const AxiomSet& axioms, const Term& s, const Term& t,
                                                  std::size_t context, const SearchBounds& b, std::size_t& budget,
                                                  std::size_t& states) {
  if (s.kind() != t.kind() || s.arity() == 0) return std::nullopt;
  std::vector<ProofStep> out;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.child(i) == t.child(i)) continue;
    std::size_t around = context + 1;
    for (std::size_t j = 0; j < s.arity(); ++j) {
      if (j != i) around += std::max(s.child(j).size(), t.child(j).size());
    }
    auto sub = congruent(axioms, s.child(i), t.child(i), around, b, budget, states);
    if (!sub) return std::nullopt;
    for (auto& step : *sub) {
      std::visit([&](auto& x) { x.position.insert(x.position.begin(), i); }, step.step);
      out.push_back(std::move(step));
    }
  }
  return out;
}

/// Children first; a pair that resists falls back to a search on the node.
std::optional<std::vector<ProofStep>> congruent(const AxiomSet& axioms, const Term& s, const Term& t,
                                                std::size_t context, const SearchBounds& b, std::size_t& budget,
                                                std::size_t& states) {
  if (s == t) return std::vector<ProofStep>{};
  if (auto r = by_children(axioms, s, t, context, b, budget, states)) return r;
  if (budget == 0 || context >= b.max_term_size) return std::nullopt;
  SearchBounds local = b;
  local.max_states = budget;
  local.max_term_size = b.max_term_size - context;
  Search r = bfs(axioms, s, t, local);
  states += r.states;
  budget -= std::min(budget, r.states);
  return r.chain;
}

}  // namespace

ProveResult prove(const AxiomSet& axioms, const Equation& goal, const SearchBounds& b) {
  if (!goal.ground()) throw Error(ErrorKind::NotGround, "goal " + print_equation(goal) + " is not ground");

  auto assemble = [&](std::vector<ProofStep> steps, std::size_t states) {
    CalcProof p;
    p.name = "found";
    p.theory = axioms.label();
    p.claim = goal;
    p.start = goal.lhs;
    p.steps = std::move(steps);
    try {
      check_proof(axioms, p);
    } catch (const Error& e) {
      throw std::logic_error(std::string("prover produced a rejected proof: ") + e.what());
    }
    return Found{std::move(p), states};
  };

  // A short search over the whole goal catches small rearrangements, then
  // the differing children are tried separately, and whatever budget is
  // left goes to the full search. Each of the first two gets a fortieth.
  const std::size_t slice = b.max_states / 40;
  std::size_t used = 0;
  if (slice > 0) {
    SearchBounds quick = b;
    quick.max_states = slice;
    Search r = bfs(axioms, goal.lhs, goal.rhs, quick);
    used = r.states;
    if (r.chain) return assemble(std::move(*r.chain), used);
    if (r.bounds_hit.front() != "max-states") return NotFoundWithinBounds{used, std::move(r.bounds_hit)};
    std::size_t budget = slice;
    if (auto steps = by_children(axioms, goal.lhs, goal.rhs, 0, b, budget, used)) {
      return assemble(std::move(*steps), used);
    }
  }

  SearchBounds rest = b;
  rest.max_states = b.max_states - std::min(b.max_states, used);
  Search r = bfs(axioms, goal.lhs, goal.rhs, rest);
  if (r.chain) return assemble(std::move(*r.chain), used + r.states);
  return NotFoundWithinBounds{used + r.states, std::move(r.bounds_hit)};
}

}  // namespace chunkwise
