#include "chunkwise/syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "chunkwise/cp.hpp"
#include "chunkwise/proof.hpp"

namespace chunkwise {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Int, Ident, Sym, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.span = {line, col, 1};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.type = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
    } else {
      static const char* two[] = {"/=", "->", "<-"};
      t.type = Tok::Sym;
      for (const char* s : two) {
        if (src.substr(i, 2) == s) t.text = s;
      }
      if (t.text.empty()) {
        static const std::string singles = "+*/()=,:;[]{}";
        if (singles.find(c) == std::string::npos) {
          throw ParseError(ErrorKind::Parse, t.span, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
      }
    }
    t.span.length = t.text.size();
    advance(t.text.size());
    out.push_back(std::move(t));
  }
  Token end;
  end.span = {line, col, 0};
  out.push_back(end);
  return out;
}

bool is_nat_var_name(const std::string& s) {
  return s == "n" || s == "m" || s == "k" || s == "l" || s == "p" || s == "q";
}

bool is_frac_var_name(const std::string& s) { return s == "alpha" || s == "beta" || s == "gamma"; }

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().type == Tok::End; }
  Token next() { return at_end() ? peek() : toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg, ErrorKind kind = ErrorKind::Parse) const {
    throw ParseError(kind, t.span, msg);
  }

  static std::string describe(const Token& t) {
    return t.type == Tok::End ? std::string("end of input") : "'" + t.text + "'";
  }

  bool is_sym(const char* s) const { return peek().type == Tok::Sym && peek().text == s; }
  bool is_word(const char* s) const { return peek().type == Tok::Ident && peek().text == s; }

  bool accept_sym(const char* s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }

  Token expect_sym(const char* s) {
    if (!is_sym(s)) fail(peek(), std::string("expected '") + s + "', found " + describe(peek()));
    return next();
  }

  Token expect_word(const char* s) {
    if (!is_word(s)) fail(peek(), std::string("expected '") + s + "', found " + describe(peek()));
    return next();
  }

  Token expect_ident() {
    if (peek().type != Tok::Ident) fail(peek(), "expected an identifier, found " + describe(peek()));
    return next();
  }

  /// Axiom ids are integers or identifiers.
  Token expect_id() {
    if (peek().type != Tok::Ident && peek().type != Tok::Int) {
      fail(peek(), "expected an id, found " + describe(peek()));
    }
    return next();
  }

  void expect_end() {
    if (!at_end()) fail(peek(), "unexpected " + describe(peek()) + " after end of input");
  }

  Term term() { return expr(1); }

  Equation equation() {
    Term lhs = term();
    Token eq = expect_sym("=");
    Term rhs = term();
    if (lhs.sort() != rhs.sort()) {
      fail(eq, "sides of '=' have different sorts (" + sort_name(lhs.sort()) + " and " + sort_name(rhs.sort()) + ")",
           ErrorKind::SortMismatch);
    }
    return {lhs, rhs};
  }

  Natural natural() {
    if (peek().type != Tok::Int) fail(peek(), "expected a number, found " + describe(peek()));
    return Natural(next().text);
  }

  Position position() {
    expect_sym("[");
    Position p;
    if (!is_sym("]")) {
      do {
        if (peek().type != Tok::Int) fail(peek(), "expected a child index, found " + describe(peek()));
        p.push_back(std::stoul(next().text));
      } while (accept_sym(","));
    }
    expect_sym("]");
    return p;
  }

  std::vector<std::string> id_list() {
    std::vector<std::string> ids;
    do {
      ids.push_back(expect_id().text);
    } while (accept_sym(","));
    return ids;
  }

  /// name ('+' name)*
  std::string theory_ref() {
    std::string out = expect_id().text;
    while (accept_sym("+")) out += "+" + expect_id().text;
    return out;
  }

 private:
  static int precedence(const Token& t) {
    if (t.type != Tok::Sym) return 0;
    if (t.text == "+") return 1;
    if (t.text == "*") return 2;
    if (t.text == "/") return 3;
    return 0;
  }

  Term expr(int min_prec) {
    Term lhs = primary();
    for (;;) {
      const Token& op = peek();
      int prec = precedence(op);
      if (prec == 0 || prec < min_prec) break;
      Token op_tok = next();
      Term rhs = expr(prec + 1);
      lhs = combine(op_tok, lhs, rhs);
    }
    return lhs;
  }

  Term combine(const Token& op, const Term& l, const Term& r) {
    try {
      if (op.text == "/") {
        if (l.sort() != Sort::Nat || r.sort() != Sort::Nat) {
          fail(op, "operands of '/' must be Nat terms", ErrorKind::SortMismatch);
        }
        return Term::frac(l, r);
      }
      return op.text == "+" ? Term::plus(l, r) : Term::times(l, r);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(op, e.what(), ErrorKind::SortMismatch);
    }
  }

  Term primary() {
    const Token& t = peek();
    if (t.type == Tok::Int) return Term::lit(Natural(next().text));
    if (t.type == Tok::Ident) {
      Token id = next();
      if (id.text == "a") return Term::err();
      if (is_nat_var_name(id.text)) return Term::nvar(id.text);
      if (is_frac_var_name(id.text)) return Term::fvar(id.text);
      if (id.text == "num" || id.text == "denom") {
        expect_sym("(");
        Term arg = term();
        expect_sym(")");
        if (arg.sort() != Sort::Frac) fail(id, id.text + " expects a Frac argument", ErrorKind::SortMismatch);
        return id.text == "num" ? Term::num(arg) : Term::denom(arg);
      }
      fail(id, "unknown identifier '" + id.text + "'");
    }
    if (accept_sym("(")) {
      Term inner = term();
      expect_sym(")");
      return inner;
    }
    fail(t, "expected a term, found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printer

int print_prec(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::FAdd: return 1;
    case Kind::Mul:
    case Kind::FMul: return 2;
    case Kind::Frac: return 3;
    default: return 4;
  }
}

void print_into(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Kind::Lit: out += t.value().str(); return;
    case Kind::ErrA: out += "a"; return;
    case Kind::NVar:
    case Kind::FVar: out += t.name(); return;
    case Kind::Num:
    case Kind::Denom:
      out += t.kind() == Kind::Num ? "num(" : "denom(";
      print_into(t.child(0), out);
      out += ")";
      return;
    default: break;
  }
  const int p = print_prec(t.kind());
  auto side = [&](const Term& c, bool right) {
    const int cp = print_prec(c.kind());
    const bool parens = right ? cp <= p : cp < p;
    if (parens) out += "(";
    print_into(c, out);
    if (parens) out += ")";
  };
  side(t.child(0), false);
  switch (t.kind()) {
    case Kind::Frac: out += "/"; break;
    case Kind::Add:
    case Kind::FAdd: out += " + "; break;
    default: out += " * "; break;
  }
  side(t.child(1), true);
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

Valuation parse_valuation(Parser& ps) {
  Valuation v;
  ps.expect_sym("{");
  if (!ps.is_sym("}")) {
    do {
      Token name = ps.expect_ident();
      ps.expect_sym("=");
      Token at = ps.peek();
      Term value = ps.term();
      if (v.binds(name.text)) ps.fail(name, "variable " + name.text + " bound twice");
      if (is_nat_var_name(name.text)) {
        if (!value.is_lit()) ps.fail(at, "Nat variable " + name.text + " must be bound to a numeral");
        v.nat.emplace(name.text, value.value());
      } else if (is_frac_var_name(name.text)) {
        if (value.sort() != Sort::Frac || !value.ground()) {
          ps.fail(at, "Frac variable " + name.text + " must be bound to a ground fraction term");
        }
        v.frac.emplace(name.text, value);
      } else {
        ps.fail(name, "'" + name.text + "' is not a schema variable");
      }
    } while (ps.accept_sym(","));
  }
  ps.expect_sym("}");
  return v;
}

}  // namespace

Term parse_term(std::string_view input) {
  Parser ps(input);
  Term t = ps.term();
  ps.expect_end();
  return t;
}

Equation parse_equation(std::string_view input) {
  Parser ps(input);
  Equation e = ps.equation();
  ps.expect_end();
  return e;
}

TheoryFile parse_theory_file(std::string_view input, const Catalog* base) {
  Parser ps(input);
  TheoryFile file;
  std::set<std::string> declared;
  std::set<std::string> theory_names;
  while (!ps.at_end()) {
    if (ps.is_word("axiom")) {
      ps.next();
      Token id = ps.expect_id();
      if (declared.count(id.text) || (base && base->find_axiom(id.text))) {
        ps.fail(id, "axiom " + id.text + " is declared twice", ErrorKind::DuplicateAxiom);
      }
      AxiomSchema s;
      s.id = id.text;
      std::vector<Token> cond_tokens;
      if (ps.accept_sym("[")) {
        do {
          Token var = ps.expect_ident();
          if (!is_nat_var_name(var.text)) ps.fail(var, "conditions constrain Nat variables only");
          ps.expect_sym("/=");
          Condition c{var.text, Condition::Forbidden::Zero};
          if (ps.peek().type == Tok::Int && ps.peek().text == "0") {
            ps.next();
          } else if (ps.is_word("a")) {
            ps.next();
            c.forbidden = Condition::Forbidden::ErrA;
          } else {
            ps.fail(ps.peek(), "expected '0' or 'a' after '/='");
          }
          s.conditions.push_back(c);
          cond_tokens.push_back(var);
        } while (ps.accept_sym(","));
        ps.expect_sym("]");
      }
      ps.expect_sym(":");
      Equation eq = ps.equation();
      s.lhs = eq.lhs;
      s.rhs = eq.rhs;
      auto vars = s.variables();
      for (std::size_t i = 0; i < s.conditions.size(); ++i) {
        bool used = false;
        for (auto& v : vars) used = used || v.name == s.conditions[i].variable;
        if (!used) {
          ps.fail(cond_tokens[i], "condition variable " + s.conditions[i].variable + " does not occur in the equation",
                  ErrorKind::UnusedConditionVariable);
        }
      }
      declared.insert(s.id);
      file.axioms.push_back(std::move(s));
    } else if (ps.is_word("theory")) {
      ps.next();
      Token name = ps.expect_ident();
      if (theory_names.count(name.text) || (base && base->find_theory(name.text))) {
        ps.fail(name, "theory " + name.text + " is declared twice", ErrorKind::DuplicateTheory);
      }
      ps.expect_sym("{");
      ps.expect_word("axioms");
      Theory th{name.text, {}};
      std::set<std::string> seen;
      do {
        Token id = ps.expect_id();
        if (!declared.count(id.text) && !(base && base->find_axiom(id.text))) {
          ps.fail(id, "theory " + name.text + " references undeclared axiom " + id.text, ErrorKind::UndeclaredAxiom);
        }
        if (seen.insert(id.text).second) th.axioms.push_back(id.text);
      } while (ps.accept_sym(","));
      ps.expect_sym("}");
      theory_names.insert(th.name);
      file.theories.push_back(std::move(th));
    } else {
      ps.fail(ps.peek(), "expected 'axiom' or 'theory', found " + Parser::describe(ps.peek()));
    }
  }
  return file;
}

void merge_theory_file(Catalog& catalog, const TheoryFile& file) {
  for (const auto& a : file.axioms) catalog.add_axiom(a);
  for (const auto& t : file.theories) catalog.add_theory(t);
}

CPConfig parse_cp_config(std::string_view input) {
  Parser ps(input);
  CPConfig cfg;
  ps.expect_word("cp");
  cfg.name = ps.expect_ident().text;
  ps.expect_sym("{");
  while (!ps.is_sym("}")) {
    if (ps.accept_sym(";")) continue;
    if (ps.is_word("chunk")) {
      ps.next();
      CPConfig::Chunk c;
      c.id = ps.expect_ident().text;
      ps.expect_sym("=");
      if (ps.accept_sym("{")) {
        ps.expect_word("axioms");
        c.axioms = ps.id_list();
        ps.expect_sym("}");
      } else {
        c.theory = ps.theory_ref();
      }
      cfg.chunks.push_back(std::move(c));
    } else if (ps.is_word("permeate")) {
      ps.next();
      CPConfig::Edge e;
      e.from = ps.expect_ident().text;
      ps.expect_sym("->");
      e.to = ps.expect_ident().text;
      ps.expect_sym(":");
      Token mode = ps.expect_ident();
      if (mode.text == "all") {
        e.filter = PermFilter::all();
      } else if (mode.text == "none") {
        e.filter = PermFilter::none();
      } else if (mode.text == "only") {
        e.filter = {PermFilter::Kind::Allow, ps.id_list()};
      } else if (mode.text == "except") {
        e.filter = {PermFilter::Kind::AllExcept, ps.id_list()};
      } else {
        ps.fail(mode, "expected all, none, only or except");
      }
      cfg.edges.push_back(std::move(e));
    } else if (ps.is_word("designated")) {
      Token kw = ps.next();
      if (!cfg.designated.empty()) ps.fail(kw, "designated chunk given twice");
      cfg.designated = ps.expect_ident().text;
    } else {
      ps.fail(ps.peek(), "expected chunk, permeate or designated, found " + Parser::describe(ps.peek()));
    }
  }
  if (cfg.designated.empty()) ps.fail(ps.peek(), "cp " + cfg.name + " has no designated chunk");
  ps.expect_sym("}");
  ps.expect_end();
  return cfg;
}

CalcProof parse_proof_script(std::string_view input) {
  Parser ps(input);
  CalcProof p;
  ps.expect_word("proof");
  p.name = ps.expect_ident().text;
  ps.expect_word("in");
  p.theory = ps.theory_ref();
  ps.expect_sym("{");
  bool have_claim = false, have_start = false;
  while (!ps.is_sym("}")) {
    if (ps.accept_sym(";")) continue;
    if (ps.is_word("claim")) {
      ps.next();
      ps.expect_sym(":");
      p.claim = ps.equation();
      have_claim = true;
    } else if (ps.is_word("start")) {
      ps.next();
      ps.expect_sym(":");
      p.start = ps.term();
      have_start = true;
    } else if (ps.is_word("step")) {
      ps.next();
      Token kind = ps.expect_ident();
      if (kind.text == "axiom") {
        AxiomStep s;
        s.axiom = ps.expect_id().text;
        if (ps.accept_sym("->")) {
          s.direction = Direction::LR;
        } else if (ps.accept_sym("<-")) {
          s.direction = Direction::RL;
        } else {
          ps.fail(ps.peek(), "expected '->' or '<-'");
        }
        ps.expect_word("at");
        s.position = ps.position();
        if (ps.is_word("with")) {
          ps.next();
          s.valuation = parse_valuation(ps);
        }
        p.steps.emplace_back(std::move(s));
      } else if (kind.text == "arith") {
        ps.expect_word("at");
        p.steps.emplace_back(ArithStep{ps.position()});
      } else if (kind.text == "unfold") {
        ps.expect_word("at");
        UnfoldStep s;
        s.position = ps.position();
        ps.expect_word("to");
        s.into = ps.term();
        p.steps.emplace_back(std::move(s));
      } else {
        ps.fail(kind, "expected axiom, arith or unfold");
      }
    } else {
      ps.fail(ps.peek(), "expected claim, start or step, found " + Parser::describe(ps.peek()));
    }
  }
  Token close = ps.expect_sym("}");
  ps.expect_end();
  if (!have_claim) ps.fail(close, "proof has no claim");
  if (!have_start) ps.fail(close, "proof has no start term");
  return p;
}

std::string print_term(const Term& t) {
  std::string out;
  print_into(t, out);
  return out;
}

std::string print_equation(const Equation& e) { return print_term(e.lhs) + " = " + print_term(e.rhs); }

std::string print_valuation(const Valuation& v) {
  std::vector<std::string> parts;
  for (const auto& [name, value] : v.nat) parts.push_back(name + "=" + value.str());
  for (const auto& [name, value] : v.frac) parts.push_back(name + "=" + print_term(value));
  return "{" + join(parts, ", ") + "}";
}

std::string print_axiom(const AxiomSchema& s) {
  std::string out = "axiom " + s.id;
  if (!s.conditions.empty()) {
    std::vector<std::string> cs;
    for (const auto& c : s.conditions) cs.push_back(c.to_string());
    out += " [" + join(cs, ", ") + "]";
  }
  return out + ": " + print_term(s.lhs) + " = " + print_term(s.rhs);
}

std::string print_catalog(const Catalog& c) {
  std::string out;
  for (const auto& a : c.axioms()) out += print_axiom(a) + "\n";
  if (!c.theories().empty()) out += "\n";
  for (const auto& t : c.theories()) out += "theory " + t.name + " { axioms " + join(t.axioms, ", ") + " }\n";
  return out;
}

std::string print_step(const ProofStep& s) {
  if (const auto* a = std::get_if<AxiomStep>(&s.step)) {
    std::string out = "step axiom " + a->axiom + (a->direction == Direction::LR ? " -> " : " <- ") + "at " +
                      position_to_string(a->position);
    if (!a->valuation.empty()) out += " with " + print_valuation(a->valuation);
    return out;
  }
  if (const auto* f = std::get_if<ArithStep>(&s.step)) return "step arith at " + position_to_string(f->position);
  const auto& u = std::get<UnfoldStep>(s.step);
  return "step unfold at " + position_to_string(u.position) + " to " + print_term(u.into);
}

std::string print_proof_script(const CalcProof& p) {
  std::string out = "proof " + (p.name.empty() ? std::string("unnamed") : p.name) + " in " + p.theory + " {\n";
  out += "  claim: " + print_equation(p.claim) + ";\n";
  out += "  start: " + print_term(p.start) + ";\n";
  for (const auto& s : p.steps) out += "  " + print_step(s) + ";\n";
  return out + "}\n";
}

}  // namespace chunkwise
