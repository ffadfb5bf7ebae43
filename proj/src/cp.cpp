#include "chunkwise/cp.hpp"

#include <algorithm>

#include "chunkwise/error.hpp"

namespace chunkwise {

namespace {

std::string join_ids(const IdSet& ids, const char* sep) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id;
  }
  return out;
}

}  // namespace

bool PermFilter::admits(const std::string& id) const {
  const bool listed = std::find(ids.begin(), ids.end(), id) != ids.end();
  switch (kind) {
    case Kind::Allow: return listed;
    case Kind::AllExcept: return !listed;
    case Kind::Nothing: return false;
  }
  return false;
}

std::string PermFilter::to_string() const {
  std::string list;
  for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
  switch (kind) {
    case Kind::Allow: return "only " + list;
    case Kind::AllExcept: return ids.empty() ? "all" : "except " + list;
    case Kind::Nothing: return "none";
  }
  return "none";
}

const PermFilter& CPStructure::filter(const std::string& from, const std::string& to) const {
  static const PermFilter nothing = PermFilter::none();
  auto it = permeability.find({from, to});
  return it == permeability.end() ? nothing : it->second;
}

CPStructure resolve_cp(const CPConfig& config, const Catalog& catalog) {
  CPStructure cp;
  cp.name = config.name;
  IdSet declared;
  for (const auto& c : config.chunks) {
    if (cp.chunks.count(c.id)) throw Error(ErrorKind::UnknownChunk, "chunk " + c.id + " is declared twice");
    IdSet ids;
    if (!c.theory.empty()) {
      ids = catalog.resolve(c.theory).ids();
    } else {
      for (const auto& id : c.axioms) {
        if (!catalog.find_axiom(id)) {
          throw Error(ErrorKind::UndeclaredAxiom, "chunk " + c.id + " references undeclared axiom " + id);
        }
        ids.insert(id);
      }
    }
    declared.insert(ids.begin(), ids.end());
    cp.chunks.emplace(c.id, std::move(ids));
  }
  for (const auto& e : config.edges) {
    for (const auto* end : {&e.from, &e.to}) {
      if (!cp.chunks.count(*end)) throw Error(ErrorKind::UnknownChunk, "permeate names unknown chunk " + *end);
    }
    for (const auto& id : e.filter.ids) {
      if (!declared.count(id)) {
        throw Error(ErrorKind::FilterIdUnresolved,
                    "filter on " + e.from + " -> " + e.to + " names axiom " + id + ", which no chunk contains");
      }
    }
    if (!cp.permeability.emplace(std::pair{e.from, e.to}, e.filter).second) {
      throw Error(ErrorKind::Parse, "permeability " + e.from + " -> " + e.to + " is given twice");
    }
  }
  if (!cp.chunks.count(config.designated)) {
    throw Error(ErrorKind::UnknownChunk, "designated chunk '" + config.designated + "' is not declared");
  }
  cp.designated = config.designated;
  return cp;
}

RoundState initial_state(const CPStructure& cp) {
  RoundState st;
  for (const auto& [id, ids] : cp.chunks) st[id] = ids;
  return st;
}

RoundState permeate_round(const CPStructure& cp, const RoundState& st, std::vector<EdgeFlow>* flows) {
  RoundState next = st;
  for (const auto& [edge, filter] : cp.permeability) {
    const auto& [from, to] = edge;
    EdgeFlow flow{from, to, {}, {}};
    auto src = st.find(from);
    if (src == st.end()) continue;
    const IdSet& have = st.at(to);
    for (const auto& id : src->second) {
      if (!filter.admits(id)) continue;
      flow.ids.insert(id);
      if (!have.count(id)) flow.added.insert(id);
    }
    next[to].insert(flow.ids.begin(), flow.ids.end());
    if (flows) flows->push_back(std::move(flow));
  }
  return next;
}

CPAnswer cp_query(const Catalog& catalog, const CPStructure& cp, const Equation& goal, const SearchBounds& b,
                  int max_rounds) {
  if (!cp.chunks.count(cp.designated)) {
    throw Error(ErrorKind::UnknownChunk, "designated chunk '" + cp.designated + "' is not declared");
  }
  CPAnswer answer;
  RoundState st = initial_state(cp);
  for (int round = 0; round < std::max(max_rounds, 1); ++round) {
    std::vector<EdgeFlow> flows;
    RoundState next = permeate_round(cp, st, &flows);
    answer.permeated.push_back(std::move(flows));
    if (next == st) break;
    st = std::move(next);
    ++answer.rounds_used;
  }
  answer.final_state = st;
  answer.available = st.at(cp.designated);
  AxiomSet axioms = catalog.resolve_ids(join_ids(answer.available, "+"),
                                        std::vector<std::string>(answer.available.begin(), answer.available.end()));
  ProveResult r = prove(axioms, goal, b);
  if (auto* f = std::get_if<Found>(&r)) {
    answer.derivable = true;
    answer.states_explored = f->states_explored;
    f->proof.name = cp.name + "_" + cp.designated;
    answer.proof = std::move(f->proof);
  } else {
    const auto& nf = std::get<NotFoundWithinBounds>(r);
    answer.states_explored = nf.states_explored;
    answer.bounds_hit = nf.bounds_hit;
  }
  return answer;
}

bool CoveringReport::all_found() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const CoveringEntry& e) { return e.present || (e.sampled > 0 && e.found == e.sampled); });
}

CoveringReport verify_covering(const Catalog& catalog, const CPStructure& cp, const AxiomSet& target,
                               const SearchBounds& b, const SampleSpec& samples) {
  IdSet all;
  for (const auto& [id, ids] : cp.chunks) all.insert(ids.begin(), ids.end());
  AxiomSet axioms = catalog.resolve_ids(join_ids(all, "+"), std::vector<std::string>(all.begin(), all.end()));

  std::vector<Term> fracs;
  for (unsigned i = samples.lo; i <= samples.hi; ++i) {
    for (unsigned j = samples.lo; j <= samples.hi; ++j) fracs.push_back(Term::frac(Term::lit(i), Term::lit(j)));
  }
  const std::size_t nat_count = samples.hi >= samples.lo ? samples.hi - samples.lo + 1 : 0;

  CoveringReport report;
  for (const auto& schema : target) {
    CoveringEntry entry;
    entry.axiom = schema.id;
    if (all.count(schema.id)) {
      entry.present = true;
      report.entries.push_back(std::move(entry));
      continue;
    }
    const auto vars = schema.variables();
    std::vector<std::size_t> choice(vars.size(), 0);
    auto size_of = [&](std::size_t i) { return vars[i].sort == Sort::Nat ? nat_count : fracs.size(); };
    bool empty = false;
    for (std::size_t i = 0; i < vars.size(); ++i) empty = empty || size_of(i) == 0;
    while (!empty) {
      Valuation v;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].sort == Sort::Nat) {
          v.nat[vars[i].name] = samples.lo + choice[i];
        } else {
          v.frac.emplace(vars[i].name, fracs[choice[i]]);
        }
      }
      if (!schema.violated(v)) {
        ++entry.sampled;
        if (found(prove(axioms, instantiate_axiom(schema, v), b))) {
          ++entry.found;
        } else {
          entry.failures.push_back(std::move(v));
        }
      }
      std::size_t i = vars.size();
      for (; i-- > 0;) {
        if (++choice[i] < size_of(i)) break;
        choice[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace chunkwise
