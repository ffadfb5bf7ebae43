#include "chunkwise/proof.hpp"

#include <algorithm>

#include "chunkwise/error.hpp"
#include "chunkwise/syntax.hpp"

namespace chunkwise {

namespace {

bool is_lit_pair(const Term& t) {
  return (t.kind() == Kind::Add || t.kind() == Kind::Mul) && t.child(0).is_lit() && t.child(1).is_lit();
}

Natural fold_pair(const Term& t) {
  return t.kind() == Kind::Add ? Natural(t.child(0).value() + t.child(1).value())
                               : Natural(t.child(0).value() * t.child(1).value());
}

Term check_axiom_step(const AxiomSet& axioms, const Term& current, const AxiomStep& s) {
  const AxiomSchema* schema = axioms.find(s.axiom);
  if (!schema) {
    throw Error(ErrorKind::AxiomNotInTheory, "axiom " + s.axiom + " is not in theory " + axioms.label());
  }
  for (const auto& var : schema->variables()) {
    if (!s.valuation.binds(var.name)) {
      throw Error(ErrorKind::BadValuation, "axiom " + s.axiom + ": variable " + var.name + " is not bound");
    }
  }
  Equation inst = instantiate_axiom(*schema, s.valuation);
  const Term& from = s.direction == Direction::LR ? inst.lhs : inst.rhs;
  const Term& to = s.direction == Direction::LR ? inst.rhs : inst.lhs;
  const Term& found = subterm_at(current, s.position);
  if (found != from) {
    throw Error(ErrorKind::RedexMismatch, "axiom " + s.axiom + " at " + position_to_string(s.position) +
                                              ": expected " + print_term(from) + ", found " + print_term(found));
  }
  return replace_at(current, s.position, to);
}

}  // namespace

const Position& ProofStep::position() const {
  return std::visit([](const auto& s) -> const Position& { return s.position; }, step);
}

Term check_step(const AxiomSet& axioms, const Term& current, const ProofStep& step) {
  if (const auto* a = std::get_if<AxiomStep>(&step.step)) return check_axiom_step(axioms, current, *a);
  if (const auto* f = std::get_if<ArithStep>(&step.step)) {
    const Term& sub = subterm_at(current, f->position);
    if (!is_lit_pair(sub)) {
      throw Error(ErrorKind::NotAnArithRedex,
                  "arith at " + position_to_string(f->position) + ": " + print_term(sub) + " is not a literal sum or product");
    }
    return replace_at(current, f->position, Term::lit(fold_pair(sub)));
  }
  const auto& u = std::get<UnfoldStep>(step.step);
  const Term& sub = subterm_at(current, u.position);
  if (!sub.is_lit()) {
    throw Error(ErrorKind::NotAnArithRedex,
                "unfold at " + position_to_string(u.position) + ": " + print_term(sub) + " is not a literal");
  }
  if (u.into.is_null() || !is_lit_pair(u.into) || fold_pair(u.into) != sub.value()) {
    throw Error(ErrorKind::NotAnArithRedex, "unfold at " + position_to_string(u.position) + ": " +
                                                (u.into.is_null() ? std::string("?") : print_term(u.into)) +
                                                " is not a literal sum or product equal to " + sub.value().str());
  }
  return replace_at(current, u.position, u.into);
}

std::vector<Term> replay(const AxiomSet& axioms, const Term& start, const std::vector<ProofStep>& steps) {
  std::vector<Term> terms{start};
  terms.reserve(steps.size() + 1);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      terms.push_back(check_step(axioms, terms.back(), steps[i]));
    } catch (const ProofError&) {
      throw;
    } catch (const Error& e) {
      throw ProofError(e.kind(), i, "step " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return terms;
}

VerifiedEquation check_proof(const AxiomSet& axioms, const CalcProof& p) {
  if (p.claim.lhs.is_null() || p.claim.rhs.is_null() || p.start.is_null()) {
    throw ProofError(ErrorKind::EndpointMismatch, ProofError::npos, "proof has no claim or start term");
  }
  if (!p.claim.ground() || !p.start.ground()) {
    throw ProofError(ErrorKind::NotGround, ProofError::npos, "claim and start term must be ground");
  }
  if (p.start != p.claim.lhs && p.start != p.claim.rhs) {
    throw ProofError(ErrorKind::EndpointMismatch, ProofError::npos,
                     "start term " + print_term(p.start) + " is neither side of the claim");
  }
  auto terms = replay(axioms, p.start, p.steps);
  const Term& goal = p.start == p.claim.lhs ? p.claim.rhs : p.claim.lhs;
  const Term& last = terms.back();
  // A chain whose start equals both sides (reflexive claims) may end at either.
  if (last != goal && !(p.claim.lhs == p.claim.rhs && last == p.start)) {
    throw ProofError(ErrorKind::EndpointMismatch, ProofError::npos,
                     "chain ends at " + print_term(last) + ", expected " + print_term(goal));
  }
  return VerifiedEquation(p.claim, axioms.ids(), p.steps.size());
}

VerifiedEquation check_proof(const Catalog& catalog, const CalcProof& p) {
  AxiomSet axioms;
  try {
    axioms = catalog.resolve(p.theory);
  } catch (const Error& e) {
    throw ProofError(e.kind(), ProofError::npos, e.what());
  }
  return check_proof(axioms, p);
}

std::vector<ProofStep> reverse_chain(const std::vector<Term>& terms, const std::vector<ProofStep>& steps) {
  std::vector<ProofStep> out;
  out.reserve(steps.size());
  for (std::size_t i = steps.size(); i-- > 0;) {
    const ProofStep& s = steps[i];
    if (const auto* a = s.axiom()) {
      AxiomStep r = *a;
      r.direction = flip(a->direction);
      out.emplace_back(std::move(r));
    } else if (const auto* f = std::get_if<ArithStep>(&s.step)) {
      out.emplace_back(UnfoldStep{f->position, subterm_at(terms[i], f->position)});
    } else {
      out.emplace_back(ArithStep{std::get<UnfoldStep>(s.step).position});
    }
  }
  return out;
}

}  // namespace chunkwise
