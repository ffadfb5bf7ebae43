#pragma once

// Concrete syntax. `/` builds a fraction and binds tighter than `*`, which
// binds tighter than `+`; all three are left-associative. `a` is the error
// constant, n m k l p q are Nat variables, alpha beta gamma Frac variables.

#include <string>
#include <string_view>
#include <vector>

#include "chunkwise/error.hpp"
#include "chunkwise/term.hpp"
#include "chunkwise/theory.hpp"

namespace chunkwise {

struct CalcProof;
struct CPConfig;
struct ProofStep;

Term parse_term(std::string_view input);
Equation parse_equation(std::string_view input);

/// Axiom and theory declarations. Theory bodies may reference axioms of
/// `base` as well as those declared in the file.
struct TheoryFile {
  std::vector<AxiomSchema> axioms;
  std::vector<Theory> theories;
};
TheoryFile parse_theory_file(std::string_view input, const Catalog* base = nullptr);

/// Adds every declaration of `file` to `catalog`.
void merge_theory_file(Catalog& catalog, const TheoryFile& file);

CPConfig parse_cp_config(std::string_view input);
CalcProof parse_proof_script(std::string_view input);

std::string print_term(const Term& t);
std::string print_equation(const Equation& e);
std::string print_valuation(const Valuation& v);
std::string print_axiom(const AxiomSchema& s);
std::string print_catalog(const Catalog& c);
std::string print_step(const ProofStep& s);
std::string print_proof_script(const CalcProof& p);

}  // namespace chunkwise
