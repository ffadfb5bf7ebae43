#include "chunkwise/model.hpp"

#include <algorithm>
#include <map>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/integer/common_factor.hpp>

#include "chunkwise/error.hpp"
#include "chunkwise/syntax.hpp"

namespace chunkwise {

namespace {

// ---------------------------------------------------------------- operations per model

bool pairs(ModelId m) { return m == ModelId::M || m == ModelId::Mgcd; }

NatVal nat_err(ModelId m) { return m == ModelId::Q0 ? NatVal::n(0) : NatVal::a(); }

NatVal nat_op(bool add, const NatVal& x, const NatVal& y) {
  if (x.error || y.error) return NatVal::a();
  return NatVal::n(add ? Natural(x.value + y.value) : Natural(x.value * y.value));
}

void require_nonnegative(const Rational& q) {
  if (q < 0) throw std::logic_error("negative rational " + q.str() + " in a meadow model");
}

NatVal project(ModelId m, bool numer, const FracVal& f) {
  if (pairs(m)) {
    const auto& p = std::get<PairFracVal>(f);
    if (p.denom == 0) return NatVal::a();
    return NatVal::n(numer ? p.numer : p.denom);
  }
  const auto& r = std::get<RatFracVal>(f);
  if (r.error) return NatVal::a();
  require_nonnegative(r.value);
  return NatVal::n(numer ? Natural(boost::multiprecision::numerator(r.value))
                         : Natural(boost::multiprecision::denominator(r.value)));
}

FracVal cons(ModelId m, const NatVal& x, const NatVal& y) {
  if (pairs(m)) {
    if (x.error || y.error) return PairFracVal{0, 0};
    return PairFracVal{x.value, y.value};
  }
  if (x.error || y.error || y.value == 0) {
    if (m == ModelId::Q0) return RatFracVal{false, 0};
    return RatFracVal{true, 0};
  }
  return RatFracVal{false, Rational(x.value, y.value)};
}

FracVal frac_op(ModelId m, bool add, const FracVal& fx, const FracVal& fy) {
  if (pairs(m)) {
    const auto& [n, d1] = std::get<PairFracVal>(fx);
    const auto& [k, d2] = std::get<PairFracVal>(fy);
    if (!add) {
      if (d1 != 0 && d2 != 0) return PairFracVal{n * k, d1 * d2};
      return PairFracVal{0, 0};
    }
    if (m == ModelId::M) {
      if (d1 == d2 && d1 != 0) return PairFracVal{n + k, d1};
      return PairFracVal{0, 0};
    }
    if (d1 == 0 || d2 == 0) return PairFracVal{0, 0};
    Natural g = boost::integer::gcd(d1, d2);
    return PairFracVal{Natural((n * d2 + k * d1) / g), Natural((d1 * d2) / g)};
  }
  const auto& x = std::get<RatFracVal>(fx);
  const auto& y = std::get<RatFracVal>(fy);
  if (x.error || y.error) return RatFracVal{true, 0};
  return RatFracVal{false, add ? Rational(x.value + y.value) : Rational(x.value * y.value)};
}

// ---------------------------------------------------------------- compiled patterns

struct CNode {
  Kind kind;
  int var = -1;  // index into the environment of the node's sort
  Natural lit;
  int a = -1, b = -1;
};

struct Env {
  std::vector<NatVal> nat;
  std::vector<const FracVal*> frac;
};

class Program {
 public:
  Program(const AxiomSchema& s, const std::vector<VarInfo>& vars) : sort_(s.sort()) {
    for (const auto& v : vars) {
      auto& names = v.sort == Sort::Nat ? nat_names_ : frac_names_;
      index_[v.name] = static_cast<int>(names.size());
      names.push_back(v.name);
    }
    lhs_ = compile(s.lhs);
    rhs_ = compile(s.rhs);
  }

  bool holds(ModelId m, const Env& env) const {
    if (sort_ == Sort::Nat) return nat(m, lhs_, env) == nat(m, rhs_, env);
    return frac(m, lhs_, env) == frac(m, rhs_, env);
  }

 private:
  int compile(const Term& t) {
    CNode n;
    n.kind = t.kind();
    if (t.kind() == Kind::Lit) n.lit = t.value();
    if (t.is_var()) n.var = index_.at(t.name());
    if (t.arity() > 0) n.a = compile(t.child(0));
    if (t.arity() > 1) n.b = compile(t.child(1));
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  NatVal nat(ModelId m, int i, const Env& env) const {
    const CNode& n = nodes_[i];
    switch (n.kind) {
      case Kind::Lit: return NatVal::n(n.lit);
      case Kind::ErrA: return nat_err(m);
      case Kind::NVar: return env.nat[n.var];
      case Kind::Add:
      case Kind::Mul: return nat_op(n.kind == Kind::Add, nat(m, n.a, env), nat(m, n.b, env));
      case Kind::Num:
      case Kind::Denom: return project(m, n.kind == Kind::Num, frac(m, n.a, env));
      default: throw std::logic_error("Frac node in Nat position");
    }
  }

  FracVal frac(ModelId m, int i, const Env& env) const {
    const CNode& n = nodes_[i];
    switch (n.kind) {
      case Kind::FVar: return *env.frac[n.var];
      case Kind::Frac: return cons(m, nat(m, n.a, env), nat(m, n.b, env));
      case Kind::FAdd:
      case Kind::FMul: return frac_op(m, n.kind == Kind::FAdd, frac(m, n.a, env), frac(m, n.b, env));
      default: throw std::logic_error("Nat node in Frac position");
    }
  }

  Sort sort_;
  std::map<std::string, int> index_;
  std::vector<std::string> nat_names_, frac_names_;
  std::vector<CNode> nodes_;
  int lhs_ = -1, rhs_ = -1;
};

// ---------------------------------------------------------------- Frac-variable domains

/// Fraction terms grouped by model value. Classes are kept in order of their
/// first term in the enumeration, and `term` is that first term.
struct FracClass {
  FracVal value;
  Term term;
  std::uint64_t count = 0;
};

std::string value_key(const FracVal& v) { return to_string(v); }

std::vector<FracClass> frac_domain(ModelId m, unsigned bound, unsigned depth) {
  std::vector<FracClass> classes;
  std::map<std::string, std::size_t> index;
  auto add = [&](FracVal v, const Term& t, std::uint64_t count) {
    auto [it, fresh] = index.emplace(value_key(v), classes.size());
    if (fresh) {
      classes.push_back({std::move(v), t, count});
    } else {
      classes[it->second].count += count;
    }
  };
  for (unsigned i = 0; i <= bound; ++i) {
    for (unsigned j = 0; j <= bound; ++j) {
      add(cons(m, NatVal::n(i), NatVal::n(j)), Term::frac(Term::lit(i), Term::lit(j)), 1);
    }
  }
  for (unsigned d = 1; d <= depth; ++d) {
    const std::vector<FracClass> prev = classes;
    for (bool is_add : {true, false}) {
      for (const auto& x : prev) {
        for (const auto& y : prev) {
          Term t = is_add ? Term::fadd(x.term, y.term) : Term::fmul(x.term, y.term);
          add(frac_op(m, is_add, x.value, y.value), t, x.count * y.count);
        }
      }
    }
  }
  return classes;
}

std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling keeps the draw identical across standard libraries.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

std::uint64_t seed_for(const CheckBounds& b, const std::string& axiom) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : axiom) h = (h ^ c) * 1099511628211ull;
  return b.seed ^ h;
}

}  // namespace

std::string_view model_name(ModelId m) {
  switch (m) {
    case ModelId::M: return "M";
    case ModelId::Q0: return "Q0";
    case ModelId::Qa: return "Qa";
    case ModelId::Mgcd: return "Mgcd";
  }
  return "?";
}

std::optional<ModelId> parse_model_id(std::string_view s) {
  for (ModelId m : {ModelId::M, ModelId::Q0, ModelId::Qa, ModelId::Mgcd}) {
    if (model_name(m) == s) return m;
  }
  return std::nullopt;
}

std::string to_string(const NatVal& v) { return v.error ? "a" : v.value.str(); }

std::string to_string(const FracVal& v) {
  if (const auto* p = std::get_if<PairFracVal>(&v)) return "(" + p->numer.str() + "," + p->denom.str() + ")";
  const auto& r = std::get<RatFracVal>(v);
  if (r.error) return "a";
  return r.value.str();
}

NatVal eval_nat(ModelId m, const Term& t) {
  switch (t.kind()) {
    case Kind::Lit: return NatVal::n(t.value());
    case Kind::ErrA: return nat_err(m);
    case Kind::Add:
    case Kind::Mul: return nat_op(t.kind() == Kind::Add, eval_nat(m, t.child(0)), eval_nat(m, t.child(1)));
    case Kind::Num:
    case Kind::Denom: return project(m, t.kind() == Kind::Num, eval_frac(m, t.child(0)));
    case Kind::NVar: throw Error(ErrorKind::NotGround, "cannot evaluate variable " + t.name());
    default: throw Error(ErrorKind::SortMismatch, "expected a Nat term, got " + print_term(t));
  }
}

FracVal eval_frac(ModelId m, const Term& t) {
  switch (t.kind()) {
    case Kind::Frac: return cons(m, eval_nat(m, t.child(0)), eval_nat(m, t.child(1)));
    case Kind::FAdd:
    case Kind::FMul: return frac_op(m, t.kind() == Kind::FAdd, eval_frac(m, t.child(0)), eval_frac(m, t.child(1)));
    case Kind::FVar: throw Error(ErrorKind::NotGround, "cannot evaluate variable " + t.name());
    default: throw Error(ErrorKind::SortMismatch, "expected a Frac term, got " + print_term(t));
  }
}

std::string eval_to_string(ModelId m, const Term& t) {
  return t.sort() == Sort::Nat ? to_string(eval_nat(m, t)) : to_string(eval_frac(m, t));
}

bool holds(ModelId m, const Equation& e) {
  if (e.sort() == Sort::Nat) return eval_nat(m, e.lhs) == eval_nat(m, e.rhs);
  return eval_frac(m, e.lhs) == eval_frac(m, e.rhs);
}

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Verified: return "verified-at-bound";
    case CheckStatus::Falsified: return "falsified";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

CheckEntry check_axiom(ModelId m, const AxiomSchema& s, const CheckBounds& b) {
  CheckEntry entry{s.id, CheckStatus::Skipped, std::nullopt, 0};
  const auto vars = s.variables();
  Program prog(s, vars);
  const bool any_frac = std::any_of(vars.begin(), vars.end(), [](const VarInfo& v) { return v.sort == Sort::Frac; });
  const std::vector<FracClass> domain = any_frac ? frac_domain(m, b.nat_bound, b.frac_depth) : std::vector<FracClass>{};

  // Slot i of the valuation selects an element of vars[i]'s domain.
  std::vector<int> env_index(vars.size());
  Env env;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].sort == Sort::Nat) {
      env_index[i] = static_cast<int>(env.nat.size());
      env.nat.push_back(NatVal::n(0));
    } else {
      env_index[i] = static_cast<int>(env.frac.size());
      env.frac.push_back(nullptr);
    }
  }
  const std::size_t nat_size = b.nat_bound + 1;
  auto domain_size = [&](std::size_t i) { return vars[i].sort == Sort::Nat ? nat_size : domain.size(); };
  std::vector<std::size_t> choice(vars.size(), 0);

  auto load = [&](std::size_t i) {
    if (vars[i].sort == Sort::Nat) {
      env.nat[env_index[i]] = NatVal::n(choice[i]);
    } else {
      env.frac[env_index[i]] = &domain[choice[i]].value;
    }
  };
  auto valuation = [&]() {
    Valuation v;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].sort == Sort::Nat) {
        v.nat[vars[i].name] = choice[i];
      } else {
        v.frac.emplace(vars[i].name, domain[choice[i]].term);
      }
    }
    return v;
  };
  auto admissible = [&]() {
    for (const auto& c : s.conditions) {
      if (c.forbidden != Condition::Forbidden::Zero) continue;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == c.variable && choice[i] == 0) return false;
      }
    }
    return true;
  };
  auto weight = [&]() {
    std::uint64_t w = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].sort == Sort::Frac) w *= domain[choice[i]].count;
    }
    return w;
  };

  std::uint64_t examined = 0, instances = 0;
  if (b.mode == CheckMode::Exhaustive) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (domain_size(i) == 0) return entry;
      load(i);
    }
    // Odometer with the last variable (by name) varying fastest.
    auto advance = [&]() {
      for (std::size_t i = vars.size(); i-- > 0;) {
        if (++choice[i] < domain_size(i)) {
          load(i);
          return true;
        }
        choice[i] = 0;
        load(i);
      }
      return false;
    };
    do {
      if (!admissible()) continue;
      ++examined;
      instances += weight();
      if (!prog.holds(m, env)) {
        entry.status = CheckStatus::Falsified;
        entry.witness = valuation();
        entry.instances = examined;
        return entry;
      }
    } while (advance());
  } else {
    std::mt19937_64 rng(seed_for(b, s.id));
    std::vector<std::uint64_t> cumulative;
    for (const auto& c : domain) cumulative.push_back((cumulative.empty() ? 0 : cumulative.back()) + c.count);
    const std::size_t max_draws = std::max<std::size_t>(b.count, 1) * 100;
    for (std::size_t draw = 0; draw < max_draws && instances < b.count; ++draw) {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].sort == Sort::Nat) {
          choice[i] = uniform(rng, nat_size);
        } else {
          std::uint64_t r = uniform(rng, cumulative.back());
          choice[i] = std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin();
        }
        load(i);
      }
      if (!admissible()) continue;
      ++instances;
      if (!prog.holds(m, env)) {
        entry.status = CheckStatus::Falsified;
        entry.witness = valuation();
        entry.instances = instances;
        return entry;
      }
      if (vars.empty()) break;
    }
    examined = instances;
  }
  if (examined > 0) entry.status = CheckStatus::Verified;
  entry.instances = instances;
  return entry;
}

bool CheckReport::falsified() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const CheckEntry& e) { return e.status == CheckStatus::Falsified; });
}

const CheckEntry* CheckReport::entry(const std::string& axiom) const {
  for (const auto& e : entries) {
    if (e.axiom == axiom) return &e;
  }
  return nullptr;
}

CheckReport check_theory(ModelId m, const AxiomSet& axioms, const CheckBounds& b, unsigned jobs) {
  CheckReport r{m, axioms.label(), b, std::vector<CheckEntry>(axioms.size())};
  const auto& schemas = axioms.schemas();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(schemas.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < schemas.size(); ++i) r.entries[i] = check_axiom(m, schemas[i], b);
    return r;
  }
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < schemas.size(); i += jobs) r.entries[i] = check_axiom(m, schemas[i], b);
    });
  }
  for (auto& t : workers) t.join();
  return r;
}

nlohmann::json to_json(const Valuation& v) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : v.nat) {
    if (value <= std::numeric_limits<std::uint64_t>::max()) {
      j[name] = value.convert_to<std::uint64_t>();
    } else {
      j[name] = value.str();
    }
  }
  for (const auto& [name, value] : v.frac) j[name] = print_term(value);
  return j;
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json j{{"axiom", e.axiom}, {"status", status_name(e.status)}, {"instances", e.instances}};
    if (e.witness) j["witness"] = to_json(*e.witness);
    entries.push_back(std::move(j));
  }
  nlohmann::json bounds{{"nat_bound", r.bounds.nat_bound},
                        {"frac_depth", r.bounds.frac_depth},
                        {"mode", r.bounds.mode == CheckMode::Exhaustive ? "exhaustive" : "random"}};
  if (r.bounds.mode == CheckMode::Random) {
    bounds["count"] = r.bounds.count;
    bounds["seed"] = r.bounds.seed;
  }
  return {{"model", model_name(r.model)},
          {"theory", r.theory},
          {"bounds", bounds},
          {"entries", entries},
          {"verdict", r.falsified() ? "falsified" : "verified-at-bound"}};
}

}  // namespace chunkwise
