#include "chunkwise/theory.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "chunkwise/error.hpp"
#include "chunkwise/syntax.hpp"

namespace chunkwise {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// The source axioms 1..17, then the alternative axioms 18..20.
constexpr const char* kBuiltin = R"(
axiom 1: n + 0 = n
axiom 2: (n + m) + l = n + (m + l)
axiom 3: n + m = m + n
axiom 4: n * 1 = n
axiom 5: (n * m) * l = n * (m * l)
axiom 6: n * m = m * n
axiom 7: n * (m + l) = n * m + n * l
axiom 8 [m /= 0, k /= 0]: n/m * l/k = (n * l)/(m * k)
axiom 9 [m /= 0, k /= 0]: n/m + l/k = (n * k + l * m)/(m * k)
axiom 10 [m /= 0]: n/m + l/m = (n + l)/m
axiom 11: (alpha + beta) + gamma = alpha + (beta + gamma)
axiom 12: alpha + beta = beta + alpha
axiom 13: (alpha * beta) * gamma = alpha * (beta * gamma)
axiom 14: alpha * beta = beta * alpha
axiom 15: alpha * (beta + gamma) = alpha * beta + alpha * gamma
axiom 16 [m /= 0, m /= a]: num(n/m) = n
axiom 17 [m /= 0, n /= a]: denom(n/m) = m
axiom 18 [m /= 0]: n/m = n/1 * 1/m
axiom 19: n/1 + m/1 = (n + m)/1
axiom 20 [m /= 0, k /= 0]: (n * k)/(m * k) = n/m

theory gamma { axioms 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17 }
theory gamma_s { axioms 1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 15, 16, 17, 18, 19 }
theory gamma_t { axioms 20 }
theory rho_st { axioms 1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 15, 18, 19 }
)";

}  // namespace

bool Condition::holds(const Valuation& v) const {
  if (forbidden == Forbidden::ErrA) return true;
  auto it = v.nat.find(variable);
  return it == v.nat.end() || it->second != 0;
}

std::string Condition::to_string() const {
  return variable + (forbidden == Forbidden::Zero ? " /= 0" : " /= a");
}

std::vector<VarInfo> AxiomSchema::variables() const {
  std::map<std::string, Sort> all;
  for (const auto& v : chunkwise::variables(lhs)) all.emplace(v.name, v.sort);
  for (const auto& v : chunkwise::variables(rhs)) all.emplace(v.name, v.sort);
  std::vector<VarInfo> out;
  for (const auto& [name, sort] : all) out.push_back({name, sort});
  return out;
}

const Condition* AxiomSchema::violated(const Valuation& v) const {
  for (const auto& c : conditions) {
    if (!c.holds(v)) return &c;
  }
  return nullptr;
}

bool id_less(const std::string& a, const std::string& b) {
  const bool na = all_digits(a), nb = all_digits(b);
  if (na != nb) return na;
  if (na) {
    std::size_t ia = a.find_first_not_of('0'), ib = b.find_first_not_of('0');
    std::string ta = ia == std::string::npos ? "" : a.substr(ia);
    std::string tb = ib == std::string::npos ? "" : b.substr(ib);
    if (ta.size() != tb.size()) return ta.size() < tb.size();
    if (ta != tb) return ta < tb;
  }
  return a < b;
}

AxiomSet::AxiomSet(std::string label, std::vector<AxiomSchema> schemas)
    : label_(std::move(label)), schemas_(std::move(schemas)) {
  std::stable_sort(schemas_.begin(), schemas_.end(),
                   [](const AxiomSchema& x, const AxiomSchema& y) { return id_less(x.id, y.id); });
  schemas_.erase(std::unique(schemas_.begin(), schemas_.end(),
                             [](const AxiomSchema& x, const AxiomSchema& y) { return x.id == y.id; }),
                 schemas_.end());
}

const AxiomSchema* AxiomSet::find(const std::string& id) const {
  auto it = std::lower_bound(schemas_.begin(), schemas_.end(), id,
                             [](const AxiomSchema& s, const std::string& k) { return id_less(s.id, k); });
  return it != schemas_.end() && it->id == id ? &*it : nullptr;
}

IdSet AxiomSet::ids() const {
  IdSet out;
  for (const auto& s : schemas_) out.insert(s.id);
  return out;
}

void Catalog::add_axiom(AxiomSchema schema) {
  if (axiom_index_.count(schema.id)) {
    throw Error(ErrorKind::DuplicateAxiom, "axiom " + schema.id + " is declared twice");
  }
  if (schema.lhs.sort() != schema.rhs.sort()) {
    throw Error(ErrorKind::SortMismatch, "axiom " + schema.id + " equates terms of different sorts");
  }
  auto vars = schema.variables();
  for (const auto& c : schema.conditions) {
    bool used = std::any_of(vars.begin(), vars.end(), [&](const VarInfo& v) { return v.name == c.variable; });
    if (!used) {
      throw Error(ErrorKind::UnusedConditionVariable,
                  "axiom " + schema.id + ": condition variable " + c.variable + " does not occur in the equation");
    }
  }
  axiom_index_.emplace(schema.id, axioms_.size());
  axioms_.push_back(std::move(schema));
}

void Catalog::add_theory(Theory theory) {
  if (find_theory(theory.name)) throw Error(ErrorKind::DuplicateTheory, "theory " + theory.name + " is declared twice");
  std::vector<std::string> ids;
  for (const auto& id : theory.axioms) {
    if (!axiom_index_.count(id)) {
      throw Error(ErrorKind::UndeclaredAxiom, "theory " + theory.name + " references undeclared axiom " + id);
    }
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  theory.axioms = std::move(ids);
  theories_.push_back(std::move(theory));
}

const AxiomSchema* Catalog::find_axiom(const std::string& id) const {
  auto it = axiom_index_.find(id);
  return it == axiom_index_.end() ? nullptr : &axioms_[it->second];
}

const Theory* Catalog::find_theory(const std::string& name) const {
  for (const auto& t : theories_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

AxiomSet Catalog::resolve(const std::string& expr) const {
  std::vector<std::string> ids;
  std::size_t start = 0;
  for (;;) {
    std::size_t plus = expr.find('+', start);
    std::string part = expr.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (const Theory* t = find_theory(part)) {
      ids.insert(ids.end(), t->axioms.begin(), t->axioms.end());
    } else if (find_axiom(part)) {
      ids.push_back(part);
    } else {
      throw Error(ErrorKind::UnknownTheory, "unknown theory or axiom '" + part + "'");
    }
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return resolve_ids(expr, ids);
}

AxiomSet Catalog::resolve_ids(const std::string& label, const std::vector<std::string>& ids) const {
  std::vector<AxiomSchema> out;
  for (const auto& id : ids) {
    const AxiomSchema* s = find_axiom(id);
    if (!s) throw Error(ErrorKind::UndeclaredAxiom, "undeclared axiom " + id);
    out.push_back(*s);
  }
  return AxiomSet(label, std::move(out));
}

const Catalog& builtin_catalog() {
  static const Catalog catalog = [] {
    Catalog c;
    merge_theory_file(c, parse_theory_file(kBuiltin));
    return c;
  }();
  return catalog;
}

Equation instantiate_axiom(const AxiomSchema& s, const Valuation& v) {
  auto vars = s.variables();
  for (const auto& var : vars) {
    const bool nat = v.nat.count(var.name) > 0, frac = v.frac.count(var.name) > 0;
    if (!nat && !frac) continue;  // reported as UnboundVariable by substitution
    if ((var.sort == Sort::Nat) != nat) {
      throw Error(ErrorKind::BadValuation, "variable " + var.name + " of axiom " + s.id + " is bound at the wrong sort");
    }
    if (frac && !v.frac.at(var.name).ground()) {
      throw Error(ErrorKind::BadValuation, "binding of " + var.name + " is not ground");
    }
  }
  for (const auto& [name, _] : v.nat) {
    if (std::none_of(vars.begin(), vars.end(), [&](const VarInfo& x) { return x.name == name; })) {
      throw Error(ErrorKind::BadValuation, "axiom " + s.id + " has no variable " + name);
    }
  }
  for (const auto& [name, _] : v.frac) {
    if (std::none_of(vars.begin(), vars.end(), [&](const VarInfo& x) { return x.name == name; })) {
      throw Error(ErrorKind::BadValuation, "axiom " + s.id + " has no variable " + name);
    }
  }
  if (const Condition* c = s.violated(v)) {
    throw Error(ErrorKind::ConditionViolated,
                "axiom " + s.id + ": condition " + c->to_string() + " violated by " + c->variable + "=" +
                    v.nat.at(c->variable).str());
  }
  return {apply_substitution(s.lhs, v), apply_substitution(s.rhs, v)};
}

}  // namespace chunkwise
