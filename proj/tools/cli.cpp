#include "chunkwise/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "chunkwise/cp.hpp"
#include "chunkwise/error.hpp"
#include "chunkwise/model.hpp"
#include "chunkwise/proof.hpp"
#include "chunkwise/prover.hpp"
#include "chunkwise/syntax.hpp"

namespace chunkwise {

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kFail = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& name) {
  std::ifstream in(name, std::ios::binary);
  if (in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  const auto& files = bundled_files();
  auto it = files.find(std::filesystem::path(name).filename().string());
  if (it != files.end()) return it->second;
  throw UsageError("cannot open " + name);
}

std::string join(const IdSet& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out.empty() ? "none" : out;
}

json ids_json(const IdSet& ids) { return json(std::vector<std::string>(ids.begin(), ids.end())); }

json proof_json(const CalcProof& p) {
  json steps = json::array();
  for (const auto& s : p.steps) steps.push_back(print_step(s));
  return {{"name", p.name},
          {"theory", p.theory},
          {"claim", print_equation(p.claim)},
          {"start", print_term(p.start)},
          {"steps", steps}};
}

std::string step_note(const ProofStep& s) {
  if (const auto* a = s.axiom()) {
    return "(" + a->axiom + ")" + (a->direction == Direction::RL ? " <-" : "") + " at " +
           position_to_string(a->position);
  }
  if (std::holds_alternative<ArithStep>(s.step)) return "arith at " + position_to_string(s.position());
  return "unfold at " + position_to_string(s.position());
}

/// The chain as a calculation: one term per line, justification on the right.
void print_chain(std::ostream& out, const std::vector<Term>& terms, const std::vector<ProofStep>& steps) {
  std::size_t width = 0;
  for (const auto& t : terms) width = std::max(width, print_term(t).size());
  out << "    " << print_term(terms.front()) << "\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::string t = print_term(terms[i + 1]);
    out << "  = " << t << std::string(width - t.size() + 3, ' ') << step_note(steps[i]) << "\n";
  }
}

struct Options {
  bool json = false;
  std::uint64_t seed = 1;
  std::vector<std::string> theory_files;
  SearchBounds bounds;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Options opt;
  Catalog catalog;

  void load_catalog() {
    catalog = builtin_catalog();
    for (const auto& f : opt.theory_files) merge_theory_file(catalog, parse_theory_file(read_source(f), &catalog));
  }

  void emit(const json& j) { out << j.dump(2) << "\n"; }
};

ModelId model_arg(const std::string& s) {
  auto m = parse_model_id(s);
  if (!m) throw UsageError("unknown model '" + s + "' (expected M, Q0, Qa or Mgcd)");
  return *m;
}

void add_bounds(CLI::App* cmd, SearchBounds& b) {
  cmd->add_option("--max-depth", b.max_depth, "Search layers per direction")->capture_default_str();
  cmd->add_option("--max-term-size", b.max_term_size, "Largest term, in nodes")->capture_default_str();
  cmd->add_option("--fresh-lit-bound", b.fresh_lit_bound, "Largest literal a step may invent")->capture_default_str();
  cmd->add_option("--max-states", b.max_states, "Visited-state budget")->capture_default_str();
}

// ---------------------------------------------------------------- commands

int cmd_parse(Context& cx, const std::string& text) {
  Term t = parse_term(text);
  if (cx.opt.json) {
    cx.emit({{"term", print_term(t)}, {"sort", sort_name(t.sort())}, {"size", t.size()}, {"ground", t.ground()}});
  } else {
    cx.out << print_term(t) << " : " << sort_name(t.sort()) << "\n";
  }
  return kOk;
}

int cmd_eval(Context& cx, const std::string& model, const std::string& text) {
  ModelId m = model_arg(model);
  if (text.find('=') != std::string::npos) {
    Equation e = parse_equation(text);
    std::string l = eval_to_string(m, e.lhs), r = eval_to_string(m, e.rhs);
    bool ok = holds(m, e);
    if (cx.opt.json) {
      cx.emit({{"model", model_name(m)}, {"equation", print_equation(e)}, {"lhs", l}, {"rhs", r}, {"holds", ok}});
    } else {
      cx.out << l << " " << (ok ? "=" : "/=") << " " << r << "  (" << (ok ? "holds" : "fails") << " in "
             << model_name(m) << ")\n";
    }
    return ok ? kOk : kFail;
  }
  Term t = parse_term(text);
  std::string v = eval_to_string(m, t);
  if (cx.opt.json) {
    cx.emit({{"model", model_name(m)}, {"term", print_term(t)}, {"value", v}});
  } else {
    cx.out << v << "\n";
  }
  return kOk;
}

int cmd_check_model(Context& cx, const std::string& model, const std::string& theory, unsigned nat_bound,
                    unsigned frac_depth, std::size_t random, unsigned jobs) {
  ModelId m = model_arg(model);
  AxiomSet axioms = cx.catalog.resolve(theory);
  CheckBounds b{nat_bound, frac_depth, random > 0 ? CheckMode::Random : CheckMode::Exhaustive,
                random > 0 ? random : 1000, cx.opt.seed};
  CheckReport r = check_theory(m, axioms, b, jobs);
  if (cx.opt.json) {
    cx.emit(to_json(r));
  } else {
    cx.out << "model " << model_name(m) << ", theory " << theory << ", nat-bound " << nat_bound << ", frac-depth "
           << frac_depth;
    if (random > 0) {
      cx.out << ", random " << random << " (seed " << cx.opt.seed << ")";
    } else {
      cx.out << ", exhaustive";
    }
    cx.out << "\n";
    for (const auto& e : r.entries) {
      cx.out << "  axiom " << std::left << std::setw(4) << e.axiom << std::setw(19) << status_name(e.status);
      if (e.witness) {
        const AxiomSchema& s = *axioms.find(e.axiom);
        Equation inst{apply_substitution(s.lhs, *e.witness), apply_substitution(s.rhs, *e.witness)};
        cx.out << "witness " << print_valuation(*e.witness) << ": LHS " << eval_to_string(m, inst.lhs) << ", RHS "
               << eval_to_string(m, inst.rhs);
      } else {
        cx.out << e.instances << " instances";
      }
      cx.out << "\n";
    }
    cx.out << "verdict: " << (r.falsified() ? "falsified" : "verified-at-bound") << "\n";
  }
  return r.falsified() ? kFail : kOk;
}

int cmd_check_proof(Context& cx, const std::string& file) {
  CalcProof p = parse_proof_script(read_source(file));
  AxiomSet axioms = cx.catalog.resolve(p.theory);
  json j{{"proof", proof_json(p)}};
  try {
    auto terms = replay(axioms, p.start, p.steps);
    VerifiedEquation v = check_proof(axioms, p);
    if (cx.opt.json) {
      json ts = json::array();
      for (const auto& t : terms) ts.push_back(print_term(t));
      j["accepted"] = true;
      j["terms"] = ts;
      cx.emit(j);
    } else {
      cx.out << "proof " << p.name << " in " << p.theory << "\n";
      print_chain(cx.out, terms, p.steps);
      cx.out << "accepted: " << print_equation(v.equation()) << " (" << v.step_count() << " steps)\n";
    }
    return kOk;
  } catch (const ProofError& e) {
    if (cx.opt.json) {
      j["accepted"] = false;
      j["error"] = {{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
      if (e.step() != ProofError::npos) j["error"]["step"] = e.step() + 1;
      cx.emit(j);
    } else {
      cx.out << "proof " << p.name << " in " << p.theory << "\n";
      cx.out << "rejected (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    }
    return kFail;
  }
}

void print_not_found(std::ostream& out, const NotFoundWithinBounds& nf) {
  std::string hit;
  for (const auto& h : nf.bounds_hit) hit += (hit.empty() ? "" : ", ") + h;
  out << "not derivable within bounds (" << hit << "; " << nf.states_explored << " states explored)\n"
      << "note: bounded search is a semi-decision procedure; this is not a proof of non-derivability\n";
}

int cmd_prove(Context& cx, const std::string& theory, const std::string& goal_text) {
  AxiomSet axioms = cx.catalog.resolve(theory);
  Equation goal = parse_equation(goal_text);
  ProveResult r = prove(axioms, goal, cx.opt.bounds);
  if (auto* f = std::get_if<Found>(&r)) {
    f->proof.name = "goal";
    f->proof.theory = theory;
    if (cx.opt.json) {
      cx.emit({{"derivable", true}, {"states_explored", f->states_explored}, {"proof", proof_json(f->proof)}});
    } else {
      cx.out << "derivable (" << f->states_explored << " states explored)\n";
      print_chain(cx.out, replay(axioms, f->proof.start, f->proof.steps), f->proof.steps);
      cx.out << "\n" << print_proof_script(f->proof);
    }
    return kOk;
  }
  const auto& nf = std::get<NotFoundWithinBounds>(r);
  if (cx.opt.json) {
    cx.emit({{"derivable", false}, {"states_explored", nf.states_explored}, {"bounds_hit", nf.bounds_hit}});
  } else {
    print_not_found(cx.out, nf);
  }
  return kFail;
}

CPStructure load_cp(Context& cx, const std::string& file) {
  return resolve_cp(parse_cp_config(read_source(file)), cx.catalog);
}

json flows_json(const CPStructure& cp, const RoundState& before, const std::vector<EdgeFlow>& flows) {
  json out = json::array();
  for (const auto& f : flows) {
    IdSet withheld;
    for (const auto& id : before.at(f.from)) {
      if (!f.ids.count(id)) withheld.insert(id);
    }
    out.push_back({{"from", f.from},
                   {"to", f.to},
                   {"filter", cp.filter(f.from, f.to).to_string()},
                   {"admitted", ids_json(f.ids)},
                   {"added", ids_json(f.added)},
                   {"withheld", ids_json(withheld)}});
  }
  return out;
}

int cmd_cp_query(Context& cx, const std::string& file, const std::string& goal_text, int max_rounds) {
  CPStructure cp = load_cp(cx, file);
  Equation goal = parse_equation(goal_text);
  CPAnswer a = cp_query(cx.catalog, cp, goal, cx.opt.bounds, max_rounds);

  // Replay the rounds to recover the state each flow read from.
  std::vector<RoundState> states{initial_state(cp)};
  for (std::size_t i = 1; i < a.permeated.size(); ++i) states.push_back(permeate_round(cp, states.back()));

  if (cx.opt.json) {
    json rounds = json::array();
    for (std::size_t i = 0; i < a.permeated.size(); ++i) rounds.push_back(flows_json(cp, states[i], a.permeated[i]));
    json j{{"structure", cp.name},
           {"designated", cp.designated},
           {"goal", print_equation(goal)},
           {"rounds", rounds},
           {"rounds_used", a.rounds_used},
           {"available", ids_json(a.available)},
           {"derivable", a.derivable},
           {"states_explored", a.states_explored}};
    if (a.proof) j["proof"] = proof_json(*a.proof);
    if (!a.derivable) j["bounds_hit"] = a.bounds_hit;
    cx.emit(j);
    return a.derivable ? kOk : kFail;
  }
  cx.out << "structure " << cp.name << ", designated chunk " << cp.designated << "\n";
  for (std::size_t i = 0; i < a.permeated.size(); ++i) {
    cx.out << "round " << i + 1 << ":";
    if (a.permeated[i].empty()) cx.out << " no permeability edges";
    cx.out << "\n";
    json flows = flows_json(cp, states[i], a.permeated[i]);
    for (const auto& f : flows) {
      auto list = [](const json& ids) {
        std::string s;
        for (const auto& id : ids) s += (s.empty() ? "" : ", ") + id.get<std::string>();
        return s.empty() ? std::string("none") : s;
      };
      cx.out << "  " << f["from"].get<std::string>() << " -> " << f["to"].get<std::string>() << " ("
             << f["filter"].get<std::string>() << ")\n"
             << "    added:    " << list(f["added"]) << "\n"
             << "    withheld: " << list(f["withheld"]) << "\n";
    }
  }
  cx.out << "fixpoint after " << a.rounds_used << " round(s)\n";
  cx.out << "available in " << cp.designated << ": " << join(a.available) << "\n";
  cx.out << "goal " << print_equation(goal) << ": ";
  if (a.derivable) {
    AxiomSet axioms = cx.catalog.resolve(a.proof->theory);
    cx.out << "derivable (" << a.states_explored << " states explored)\n";
    print_chain(cx.out, replay(axioms, a.proof->start, a.proof->steps), a.proof->steps);
    return kOk;
  }
  print_not_found(cx.out, NotFoundWithinBounds{a.states_explored, a.bounds_hit});
  return kFail;
}

int cmd_verify_covering(Context& cx, const std::string& file, const std::string& target, unsigned lo, unsigned hi) {
  CPStructure cp = load_cp(cx, file);
  AxiomSet axioms = cx.catalog.resolve(target);
  CoveringReport r = verify_covering(cx.catalog, cp, axioms, cx.opt.bounds, {lo, hi});
  if (cx.opt.json) {
    json entries = json::array();
    for (const auto& e : r.entries) {
      json j{{"axiom", e.axiom}, {"present", e.present}};
      if (!e.present) {
        json failures = json::array();
        for (const auto& v : e.failures) failures.push_back(to_json(v));
        j["sampled"] = e.sampled;
        j["found"] = e.found;
        j["failures"] = failures;
      }
      entries.push_back(j);
    }
    cx.emit({{"structure", cp.name},
             {"target", target},
             {"sample", {{"min", lo}, {"max", hi}}},
             {"entries", entries},
             {"covered", r.all_found()}});
  } else {
    cx.out << "structure " << cp.name << " against " << target << " (samples " << lo << ".." << hi << ")\n";
    for (const auto& e : r.entries) {
      cx.out << "  axiom " << std::left << std::setw(4) << e.axiom;
      if (e.present) {
        cx.out << "present in a chunk\n";
        continue;
      }
      cx.out << e.found << "/" << e.sampled << " sampled instances derivable from the union of chunks\n";
      for (const auto& v : e.failures) cx.out << "    not found within bounds: " << print_valuation(v) << "\n";
    }
    cx.out << (r.all_found() ? "covered: every sampled instance is derivable\n"
                             : "not covered within bounds\n");
  }
  return r.all_found() ? kOk : kFail;
}

int cmd_dump_catalog(Context& cx) {
  if (cx.opt.json) {
    json axioms = json::array();
    for (const auto& a : cx.catalog.axioms()) axioms.push_back(print_axiom(a));
    json theories = json::object();
    for (const auto& t : cx.catalog.theories()) theories[t.name] = t.axioms;
    cx.emit({{"axioms", axioms}, {"theories", theories}});
  } else {
    cx.out << print_catalog(cx.catalog);
  }
  return kOk;
}

// ---------------------------------------------------------------- demos

struct Checked {
  CalcProof proof;
  std::vector<Term> terms;
  bool accepted = false;
  std::string error;
};

Checked check_bundled(Context& cx, const std::string& file) {
  Checked c{parse_proof_script(read_source(file)), {}, false, {}};
  AxiomSet axioms = cx.catalog.resolve(c.proof.theory);
  try {
    c.terms = replay(axioms, c.proof.start, c.proof.steps);
    check_proof(axioms, c.proof);
    c.accepted = true;
  } catch (const ProofError& e) {
    c.error = e.what();
  }
  return c;
}

int demo_explosion(Context& cx) {
  Checked c = check_bundled(cx, "explosion.proof");
  const Equation& claim = c.proof.claim;
  bool in_m = holds(ModelId::M, claim), in_q0 = holds(ModelId::Q0, claim);
  if (cx.opt.json) {
    cx.emit({{"proof", proof_json(c.proof)},
             {"accepted", c.accepted},
             {"holds", {{"M", in_m}, {"Q0", in_q0}}}});
  } else {
    cx.out << "The full theory gamma proves a false numeral identity.\n\n";
    if (!c.terms.empty()) print_chain(cx.out, c.terms, c.proof.steps);
    cx.out << "\nclaim " << print_equation(claim) << (c.accepted ? " ACCEPTED" : " NOT ACCEPTED")
           << " by the checker in theory " << c.proof.theory << "\n";
    if (!c.accepted) cx.out << "  " << c.error << "\n";
    for (ModelId m : {ModelId::M, ModelId::Q0}) {
      bool ok = holds(m, claim);
      cx.out << "claim " << print_equation(claim) << (ok ? " HOLDS in" : " REJECTED by") << " model " << model_name(m)
             << " (" << eval_to_string(m, claim.lhs) << " vs " << eval_to_string(m, claim.rhs) << ")\n";
    }
  }
  return c.accepted && !in_m && !in_q0 ? kOk : kFail;
}

/// Justification lines of the same-denominator chain. The commutation and
/// distribution steps are the fraction laws 14 and 15.
std::vector<std::vector<std::string>> justification_lines(const std::vector<ProofStep>& steps) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> ids;
  for (const auto& s : steps) {
    if (const auto* a = s.axiom()) ids.push_back(a->axiom);
  }
  auto group = [](const std::string& id) {
    if (id == "14" || id == "15") return std::string("comm-dist");
    return id;
  };
  for (std::size_t i = 0; i < ids.size(); ++i) {
    // The two opening uses of 18 share a line; so do runs of 14/15.
    if (!lines.empty() && group(lines.back().back()) == group(ids[i]) && (ids[i] != "18" || lines.size() == 1)) {
      lines.back().push_back(ids[i]);
    } else {
      lines.push_back({ids[i]});
    }
  }
  return lines;
}

int demo_dagger(Context& cx) {
  Checked c = check_bundled(cx, "dagger.proof");
  auto lines = justification_lines(c.proof.steps);
  if (cx.opt.json) {
    cx.emit({{"proof", proof_json(c.proof)}, {"accepted", c.accepted}, {"justifications", lines}});
  } else {
    cx.out << "Fractions with identical denominators can be added, inside the source chunk.\n\n";
    if (!c.terms.empty()) print_chain(cx.out, c.terms, c.proof.steps);
    cx.out << "\njustification lines:";
    for (const auto& line : lines) {
      cx.out << " ";
      for (std::size_t i = 0; i < line.size(); ++i) cx.out << (i ? "," : "") << "(" << line[i] << ")";
    }
    cx.out << "\nclaim " << print_equation(c.proof.claim) << (c.accepted ? " ACCEPTED" : " NOT ACCEPTED")
           << " by the checker in theory " << c.proof.theory << "\n";
    if (!c.accepted) cx.out << "  " << c.error << "\n";
  }
  return c.accepted ? kOk : kFail;
}

int demo_full_addition(Context& cx) {
  Checked c = check_bundled(cx, "full_addition.proof");
  CPStructure cp = resolve_cp(parse_cp_config(read_source("fractions.cp")), cx.catalog);
  CPAnswer a = cp_query(cx.catalog, cp, c.proof.claim, cx.opt.bounds);
  if (cx.opt.json) {
    json j{{"proof", proof_json(c.proof)},
           {"accepted", c.accepted},
           {"query", {{"derivable", a.derivable}, {"rounds_used", a.rounds_used}}}};
    if (a.proof) j["query"]["proof"] = proof_json(*a.proof);
    cx.emit(j);
  } else {
    cx.out << "Full addition of fractions in the permeated target chunk.\n\n";
    if (!c.terms.empty()) print_chain(cx.out, c.terms, c.proof.steps);
    cx.out << "\nclaim " << print_equation(c.proof.claim) << (c.accepted ? " ACCEPTED" : " NOT ACCEPTED")
           << " by the checker in theory " << c.proof.theory << "\n";
    if (!c.accepted) cx.out << "  " << c.error << "\n";
    cx.out << "cp-query on fractions.cp: " << (a.derivable ? "derivable" : "not derivable within bounds")
           << " after " << a.rounds_used << " permeation round(s)";
    if (a.proof) cx.out << ", proof of " << a.proof->steps.size() << " steps found by search";
    cx.out << "\n";
  }
  return c.accepted && a.derivable ? kOk : kFail;
}

int demo_model_m(Context& cx) {
  CheckBounds small{3, 1, CheckMode::Exhaustive, 1000, 1};
  CheckReport source = check_theory(ModelId::M, cx.catalog.resolve("gamma_s"), small);
  CheckBounds base{3, 0, CheckMode::Exhaustive, 1000, 1};
  CheckReport full = check_theory(ModelId::M, cx.catalog.resolve("gamma"), base);
  const CheckEntry* nine = full.entry("9");
  bool ok = !source.falsified() && nine && nine->status == CheckStatus::Falsified;
  if (cx.opt.json) {
    cx.emit({{"gamma_s", to_json(source)}, {"gamma", to_json(full)}});
    return ok ? kOk : kFail;
  }
  cx.out << "The pair model M: naturals with an error a, fractions as pairs.\n\n";
  for (const char* t : {"1/2 + 1/2", "1/2 + 1/3", "3/0", "num(3/0)", "a + 1"}) {
    cx.out << "  " << std::left << std::setw(12) << t << "-> " << eval_to_string(ModelId::M, parse_term(t)) << "\n";
  }
  cx.out << "\ngamma_s at nat-bound 3, frac-depth 1: " << (source.falsified() ? "falsified" : "verified-at-bound")
         << " (" << source.entries.size() << " axioms)\n";
  cx.out << "gamma at nat-bound 3, frac-depth 0:";
  for (const auto& e : full.entries) {
    if (e.status == CheckStatus::Falsified) cx.out << " " << e.axiom;
  }
  cx.out << " falsified\n";
  if (nine && nine->witness) {
    const AxiomSchema& s = *cx.catalog.find_axiom("9");
    for (const Valuation& v : {*nine->witness, Valuation{{{"k", 3}, {"l", 1}, {"m", 2}, {"n", 1}}, {}}}) {
      Equation e = instantiate_axiom(s, v);
      cx.out << "  axiom 9 at " << print_valuation(v) << ": " << print_term(e.lhs) << " -> "
             << eval_to_string(ModelId::M, e.lhs) << ", " << print_term(e.rhs) << " -> "
             << eval_to_string(ModelId::M, e.rhs) << "\n";
    }
  }
  return ok ? kOk : kFail;
}

int demo_necker(Context& cx) {
  CPStructure cp = resolve_cp(parse_cp_config(read_source("fractions.cp")), cx.catalog);
  SearchBounds b = cx.opt.bounds;
  b.max_states = std::min<std::size_t>(b.max_states, 20000);
  RoundState st = initial_state(cp);
  for (;;) {
    RoundState next = permeate_round(cp, st);
    if (next == st) break;
    st = next;
  }
  auto as_set = [&](const IdSet& ids) {
    return cx.catalog.resolve_ids("", std::vector<std::string>(ids.begin(), ids.end()));
  };
  AxiomSet source = as_set(st.at("S")), target = as_set(st.at("T"));
  struct Row {
    std::string goal;
    bool s_derivable, s_true, t_derivable, t_true;
  };
  std::vector<Row> rows;
  for (const char* g : {"1/2 + 1/3 = 5/6", "num(2/4) = 2"}) {
    Equation e = parse_equation(g);
    rows.push_back({g, found(prove(source, e, b)), holds(ModelId::M, e), found(prove(target, e, b)),
                    holds(ModelId::Q0, e)});
  }
  if (cx.opt.json) {
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"goal", r.goal},
                     {"S", {{"derivable", r.s_derivable}, {"model", "M"}, {"holds", r.s_true}}},
                     {"T", {{"derivable", r.t_derivable}, {"model", "Q0"}, {"holds", r.t_true}}}});
    }
    cx.emit(out);
    return kOk;
  }
  auto cell = [](bool d, bool h, const char* m) {
    return std::string(d ? "derivable" : "not derivable") + ", " + (h ? "true" : "false") + " in " + m;
  };
  cx.out << "One set of sentences, two readings (search capped at " << b.max_states << " states).\n\n";
  cx.out << std::left << std::setw(18) << "" << std::setw(32) << "source chunk S" << "target chunk T\n";
  for (const auto& r : rows) {
    cx.out << std::left << std::setw(18) << r.goal << std::setw(32) << cell(r.s_derivable, r.s_true, "M")
           << cell(r.t_derivable, r.t_true, "Q0") << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context cx{out, err, {}, {}};
  CLI::App app{"Paraconsistent reasoning about fractions with Chunk & Permeate.", "chunkwise"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto common = [&](CLI::App* cmd, bool theory_files = true) {
    cmd->add_flag("--json", cx.opt.json, "Machine-readable output");
    cmd->add_option("--seed", cx.opt.seed, "Seed for randomised modes")->capture_default_str();
    if (theory_files) cmd->add_option("--theory-file", cx.opt.theory_files, "Extra axiom/theory declarations");
  };

  std::string text, model, theory, file, goal, target;
  unsigned nat_bound = 3, frac_depth = 0, jobs = 1, sample_min = 1, sample_max = 3;
  std::size_t random = 0;
  int max_rounds = 4;

  auto* parse = app.add_subcommand("parse", "Parse and print a term");
  parse->add_option("term", text, "Term")->required();
  common(parse, false);

  auto* eval = app.add_subcommand("eval", "Evaluate a ground term (or equation) in a model");
  eval->add_option("--model", model, "M, Q0, Qa or Mgcd")->required();
  eval->add_option("term", text, "Ground term or equation")->required();
  common(eval, false);

  auto* check_model = app.add_subcommand("check-model", "Check a theory against a model at bounds");
  check_model->add_option("--model", model, "M, Q0, Qa or Mgcd")->required();
  check_model->add_option("--theory", theory, "Theory name, axiom id, or a+b union")->required();
  check_model->add_option("--nat-bound", nat_bound, "Nat variables range over 0..B")->capture_default_str();
  check_model->add_option("--frac-depth", frac_depth, "Nesting depth of Frac values")->capture_default_str();
  check_model->add_option("--random", random, "Check N seeded random instances per axiom");
  check_model->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  common(check_model);

  auto* check_proof_cmd = app.add_subcommand("check-proof", "Check a proof script");
  check_proof_cmd->add_option("file", file, "Proof script")->required();
  common(check_proof_cmd);

  auto* prove_cmd = app.add_subcommand("prove", "Search for a calculation proof");
  prove_cmd->add_option("--theory", theory, "Theory name, axiom id, or a+b union")->required();
  prove_cmd->add_option("equation", goal, "Ground equation")->required();
  add_bounds(prove_cmd, cx.opt.bounds);
  common(prove_cmd);

  auto* cp_cmd = app.add_subcommand("cp-query", "Query the designated chunk of a C&P structure");
  cp_cmd->add_option("--config", file, "C&P configuration")->required();
  cp_cmd->add_option("--goal", goal, "Ground equation")->required();
  cp_cmd->add_option("--max-rounds", max_rounds, "Permeation rounds")->capture_default_str();
  add_bounds(cp_cmd, cx.opt.bounds);
  common(cp_cmd);

  auto* cover = app.add_subcommand("verify-covering", "Derive sampled instances of a theory from all chunks");
  cover->add_option("--config", file, "C&P configuration")->required();
  cover->add_option("--target", target, "Theory to cover")->required();
  cover->add_option("--sample-min", sample_min, "Smallest sampled literal")->capture_default_str();
  cover->add_option("--sample-max", sample_max, "Largest sampled literal")->capture_default_str();
  add_bounds(cover, cx.opt.bounds);
  common(cover);

  auto* dump = app.add_subcommand("dump-catalog", "Print the axiom catalog as a theory file");
  common(dump);

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Run a bundled demonstration");
  demo->add_option("name", demo_name, "explosion, dagger, full-addition, model-m or necker")
      ->required()
      ->check(CLI::IsMember({"explosion", "dagger", "full-addition", "model-m", "necker"}));
  add_bounds(demo, cx.opt.bounds);
  common(demo);

  std::vector<std::string> argv_store{"chunkwise"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cx.load_catalog();
    if (parse->parsed()) return cmd_parse(cx, text);
    if (eval->parsed()) return cmd_eval(cx, model, text);
    if (check_model->parsed()) return cmd_check_model(cx, model, theory, nat_bound, frac_depth, random, jobs);
    if (check_proof_cmd->parsed()) return cmd_check_proof(cx, file);
    if (prove_cmd->parsed()) return cmd_prove(cx, theory, goal);
    if (cp_cmd->parsed()) return cmd_cp_query(cx, file, goal, max_rounds);
    if (cover->parsed()) return cmd_verify_covering(cx, file, target, sample_min, sample_max);
    if (dump->parsed()) return cmd_dump_catalog(cx);
    if (demo_name == "explosion") return demo_explosion(cx);
    if (demo_name == "dagger") return demo_dagger(cx);
    if (demo_name == "full-addition") return demo_full_addition(cx);
    if (demo_name == "model-m") return demo_model_m(cx);
    return demo_necker(cx);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace chunkwise
