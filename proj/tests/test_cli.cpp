#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chunkwise/cli.hpp"
#include "chunkwise/syntax.hpp"

using namespace chunkwise;

namespace {

struct Out {
  int code;
  std::string out;
  std::string err;
};

Out cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("parse and eval") {
  Out p = cli({"parse", "1/2 + 1/3"});
  CHECK(p.code == 0);
  CHECK(p.out == "1/2 + 1/3 : Frac\n");

  Out e = cli({"eval", "--model", "M", "1/2 + 1/3"});
  CHECK(e.code == 0);
  CHECK(e.out == "(0,0)\n");
  CHECK(cli({"eval", "--model", "Mgcd", "1/2 + 1/2"}).out == "(2,2)\n");
  CHECK(cli({"eval", "--model", "Q0", "a"}).out == "0\n");

  Out eq = cli({"eval", "--model", "M", "1/2 + 1/3 = 5/6"});
  CHECK(eq.code == 1);
  CHECK(cli({"eval", "--model", "Q0", "1/2 + 1/3 = 5/6"}).code == 0);

  Out j = cli({"eval", "--model", "Q0", "--json", "1/2 + 1/3"});
  CHECK(nlohmann::json::parse(j.out)["value"] == "5/6");
}

TEST_CASE("usage and parse errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"eval", "--model", "Z", "1"}).code == 2);
  CHECK(cli({"parse", "--bogus", "1"}).code == 2);
  Out bad = cli({"parse", "1 + 1/2"});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "1:"));
  CHECK(cli({"check-model", "--model", "M", "--theory", "nope"}).code == 2);
  CHECK(cli({"check-proof", "/nonexistent/x.proof"}).code == 2);
}

TEST_CASE("check-model") {
  Out r = cli({"check-model", "--model", "M", "--theory", "gamma", "--nat-bound", "3", "--frac-depth", "0"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "axiom 9"));
  CHECK(contains(r.out, "falsified"));

  Out j = cli({"check-model", "--model", "M", "--theory", "gamma", "--nat-bound", "3", "--json", "--jobs", "4"});
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["verdict"] == "falsified");
  CHECK(doc["model"] == "M");
  CHECK(doc["bounds"]["nat_bound"] == 3);
  CHECK(doc["entries"].size() == 17);

  Out q = cli({"check-model", "--model", "Qa", "--theory", "gamma_t+rho_st", "--random", "200", "--seed", "9",
               "--nat-bound", "6", "--frac-depth", "1", "--json"});
  CHECK(q.code == 0);
  auto qd = nlohmann::json::parse(q.out);
  CHECK(qd["bounds"]["mode"] == "random");
  CHECK(qd["bounds"]["seed"] == 9);
  CHECK(qd["verdict"] == "verified-at-bound");
  CHECK(q.out == cli({"check-model", "--model", "Qa", "--theory", "gamma_t+rho_st", "--random", "200", "--seed", "9",
                      "--nat-bound", "6", "--frac-depth", "1", "--json"})
                     .out);
}

TEST_CASE("check-proof uses bundled scripts") {
  Out d = cli({"check-proof", "dagger.proof"});
  CHECK(d.code == 0);
  CHECK(contains(d.out, "accepted"));

  std::string path = "cli_test_bad.proof";
  {
    std::ofstream f(path);
    f << "proof bad in gamma_s { claim: 1/2 = 2/4; start: 1/2; step axiom 18 -> at [] with {n=1, m=3}; }\n";
  }
  Out b = cli({"check-proof", path});
  CHECK(b.code == 1);
  CHECK(contains(b.out, "rejected (redex-mismatch)"));
  std::remove(path.c_str());
}

TEST_CASE("prove") {
  Out p = cli({"prove", "--theory", "gamma_s", "1/3 + 2/3 = 3/3"});
  CHECK(p.code == 0);
  CHECK(contains(p.out, "proof "));

  Out n = cli({"prove", "--theory", "rho_st+gamma_t", "num(1/2) = 1"});
  CHECK(n.code == 1);
  CHECK(contains(n.out, "not derivable within bounds"));

  Out j = cli({"prove", "--theory", "gamma_t", "--json", "2/4 = 1/2", "--max-states", "1000"});
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["derivable"] == true);
}

TEST_CASE("cp-query and verify-covering") {
  Out a = cli({"cp-query", "--config", "fractions.cp", "--goal", "1/2 + 1/3 = 5/6"});
  CHECK(a.code == 0);
  CHECK(contains(a.out, "fixpoint after 1 round"));

  Out b = cli({"cp-query", "--config", "fractions.cp", "--goal", "num(1/2) = 1", "--json"});
  CHECK(b.code == 1);
  auto doc = nlohmann::json::parse(b.out);
  CHECK(doc["derivable"] == false);
  CHECK(doc["rounds_used"] == 1);

  Out c = cli({"verify-covering", "--config", "fractions.cp", "--target", "gamma"});
  CHECK(c.code == 0);
}

TEST_CASE("dump-catalog is stable and re-parses") {
  Out a = cli({"dump-catalog"});
  Out b = cli({"dump-catalog"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "axiom 20 [m /= 0, k /= 0]: (n * k)/(m * k) = n/m"));
  CHECK(contains(a.out, "theory gamma_t { axioms 20 }"));

  TheoryFile f = parse_theory_file(a.out);
  CHECK(f.axioms.size() == 20);
  CHECK(f.theories.size() == 4);
  Catalog fresh;
  merge_theory_file(fresh, f);
  CHECK(print_catalog(fresh) == a.out);
  // Merging the dump into the builtin catalog clashes on every id.
  std::string path = "cli_test_catalog.txt";
  std::ofstream(path) << a.out;
  CHECK(cli({"parse", "--theory-file", path, "1"}).code == 2);
  std::remove(path.c_str());
}

TEST_CASE("demos exit 0") {
  for (const char* d : {"explosion", "dagger", "full-addition", "model-m", "necker"}) {
    Out o = cli({"demo", d});
    CHECK_MESSAGE(o.code == 0, d);
  }
  CHECK(contains(cli({"demo", "explosion"}).out, "claim 1 + 1 = 4 REJECTED by model M"));
  CHECK(cli({"demo", "nothing"}).code == 2);
}
