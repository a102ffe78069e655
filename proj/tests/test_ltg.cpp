#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "llx/extract.hpp"
#include "llx/ltg.hpp"
#include "llx/productivity.hpp"
#include "oracles.hpp"

using namespace llx;

namespace {

Term canon(const std::string& s) { return to_canonical(parse_term(s, ParseOptions{true})); }

std::map<std::string, Term> productive_corpus() {
  std::map<std::string, Term> out;
  for (const auto& e : std::filesystem::directory_iterator(LLX_CORPUS_DIR)) {
    if (e.path().extension() != ".lam") continue;
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    if (looks_like_scheme(ss.str())) continue;
    Term t = to_canonical(parse_term(ss.str()));
    if (is_productive(t).productive) out.emplace(e.path().stem().string(), t);
  }
  return out;
}

bool same_graph(const Ltg& a, const Ltg& b) {
  return a.start == b.start && a.kind == b.kind && a.next == b.next;
}

}  // namespace

TEST_CASE("build_ltg examples") {
  Ltg id = build_ltg(canon("\\x. x"));
  REQUIRE(id.size() == 2);
  CHECK(id.kind[id.start] == StateKind::Lam);
  CHECK(id.kind[id.next[id.start][0]] == StateKind::Var);

  Ltg f = build_ltg(canon("letrec f = \\x y. (f y) x in f"));
  std::map<StateKind, int> count;
  for (auto k : f.kind) ++count[k];
  CHECK(count[StateKind::Lam] == 2);
  CHECK(count[StateKind::App] == 2);
  CHECK(count[StateKind::Var] == 2);
  CHECK(count[StateKind::S] == 3);
  CHECK(audit(f).ok());
  // the λλ prefix is re-entered through S steps
  auto pl = prefix_lengths(f);
  CHECK(pl[f.start] == 0);
  int back = 0;
  for (int s = 0; s < f.size(); ++s)
    if (f.kind[s] == StateKind::S && f.next[s][0] == f.start) ++back;
  CHECK(back == 1);

  try {
    build_ltg(parse_scheme("def rec(x) = \\y. rec(y) x; main = \\a. rec(a)"));
    FAIL("expected NotStronglyRegular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotStronglyRegular);
  }
  try {
    build_ltg(canon("letrec f = f in f"));
    FAIL("expected Unproductive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unproductive);
  }
  try {
    build_ltg(canon("\\x. letrec f = \\y. (f y) x in f"), StrategyKind::LazyRegPlus, 40);
    FAIL("expected Exceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Exceeded);
  }
}

TEST_CASE("bisimilar examples") {
  Ltg f = build_ltg(canon("letrec f = \\x y. (f y) x in f"));
  CHECK(bisimilar(f, f).equal);
  CHECK(bisimilar(build_ltg(canon("\\c x. letrec r = (c x) r in r")),
                  build_ltg(canon("\\c x. letrec r = (c x) ((c x) r) in r")))
            .equal);
  CHECK(bisimilar(f, build_ltg(canon("\\x y. letrec f = \\x y. (f y) x in (f y) x"))).equal);
  Bisimulation d = bisimilar(build_ltg(canon("\\x. x")), build_ltg(canon("\\x y. y")));
  CHECK(!d.equal);
  CHECK(d.trace == std::vector<std::string>{"λ"});
  CHECK(d.mismatch == "var vs s");
}

TEST_CASE("readback_depth examples") {
  CHECK(equal(readback_depth(build_ltg(canon("letrec f = \\x y. (f y) x in f")), 4), canon("\\a b. (_ b) a")));
  CHECK(equal(readback_depth(build_ltg(canon("\\x. x")), 5), canon("\\a. a")));
  try {
    readback_depth(build_ltg(canon("\\x y. x"), StrategyKind::EagerReg), 3);
    FAIL("expected AmbiguousNameless");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AmbiguousNameless);
  }
}

TEST_CASE("serialization") {
  Ltg id = build_ltg(canon("\\x. x"));
  std::string dot = to_dot(id);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(std::count(dot.begin(), dot.end(), '\n') > 4);
  std::size_t lam_edges = 0;
  for (std::size_t p = dot.find("[label=\"λ\"]"); p != std::string::npos; p = dot.find("[label=\"λ\"]", p + 1)) ++lam_edges;
  CHECK(lam_edges == 1);
  CHECK(dot.find("s0 [") != std::string::npos);
  CHECK(dot.find("s1 [") != std::string::npos);
  CHECK(dot.find("s2 [") == std::string::npos);

  for (const auto& [name, t] : productive_corpus()) {
    CAPTURE(name);
    Ltg g = build_ltg(t);
    std::string js = to_json(g);
    CHECK(same_graph(from_json(js), g));
    CHECK(to_json(from_json(js)) == js);
    // recount against the graph
    auto j = nlohmann::json::parse(js);
    CHECK(static_cast<int>(j["states"].size()) == g.size());
    std::size_t edges = 0;
    for (const auto& n : g.next) edges += (n[0] >= 0) + (n[1] >= 0);
    CHECK(j["edges"].size() == edges);
  }

  for (const char* bad : {"", "{}", "[1,2]", "{\"start\":0,\"states\":[],\"edges\":[]}",
                          "{\"start\":0,\"states\":[{\"id\":0,\"kind\":\"box\"}],\"edges\":[]}",
                          "{\"start\":0,\"states\":[{\"id\":0,\"kind\":\"lam\"}],\"edges\":[]}",
                          "{\"start\":3,\"states\":[{\"id\":0,\"kind\":\"var\"}],\"edges\":[]}",
                          "{\"start\":0,\"states\":[{\"id\":0,\"kind\":\"var\"}],\"edges\":[{\"from\":0,\"label\":\"lam\",\"to\":0}]}"}) {
    CAPTURE(bad);
    try {
      from_json(bad);
      FAIL("expected SchemaError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Schema);
    }
  }
}

TEST_CASE("audit") {
  Ltg g;
  g.add(StateKind::S, 0);
  CHECK(!audit(g).ok());  // S loop
  Ltg h;
  h.add(StateKind::App, 1);
  h.add(StateKind::Var);
  CHECK(!audit(h).ok());  // missing @1
  Ltg u;
  u.add(StateKind::Var);
  u.add(StateKind::Var);
  CHECK(!audit(u).ok());  // unreachable state
  for (const auto& [name, t] : productive_corpus())
    for (StrategyKind k : {StrategyKind::EagerRegPlus, StrategyKind::EagerReg}) {
      CAPTURE(name);
      CHECK(audit(build_ltg(t, k)).ok());
    }
}

TEST_CASE("eager and lazy graphs read back alike where the lazy exploration is finite") {
  std::mt19937_64 rng(51);
  int compared = 0;
  auto check = [&](const Term& t) {
    Ltg eager = build_ltg(t, StrategyKind::EagerRegPlus);
    try {
      Ltg lazy = build_ltg(t, StrategyKind::LazyRegPlus, 2000);
      CHECK(audit(lazy).ok());
      // S steps sit at different places, so compare the denoted terms
      for (int d = 0; d <= 8; ++d) CHECK(equal(readback_depth(lazy, d), readback_depth(eager, d)));
      ++compared;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Exceeded);
    }
  };
  for (const auto& [name, t] : productive_corpus()) check(t);
  for (int i = 0; i < 300; ++i) {
    NTerm n = oracle::random_term(rng, 12, {"x", "y", "z"});
    if (!validate(n).ok()) continue;
    Term t = to_canonical(n);
    if (is_productive(t).productive) check(t);
  }
  CHECK(compared > 100);
}

TEST_CASE("property: bisimilar graphs denote equal unfoldings") {
  auto corpus = productive_corpus();
  std::vector<Term> terms;
  for (const auto& [name, t] : corpus) terms.push_back(t);
  // a few unrolled variants so that equal pairs exist
  for (const auto& [name, t] : corpus) {
    for (const auto& s : enumerate_unfold_steps(t)) terms.push_back(s.result);
  }
  int equal_pairs = 0;
  std::vector<Ltg> gs;
  for (const auto& t : terms) gs.push_back(build_ltg(t));
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (!bisimilar(gs[i], gs[j]).equal) continue;
      ++equal_pairs;
      for (int d = 0; d <= 12; ++d) CHECK(equal(lazy_unfold_to_depth(terms[i], d), lazy_unfold_to_depth(terms[j], d)));
    }
  CHECK(equal_pairs > 10);
  // distinguished pairs have a witness that the truncations see
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      Bisimulation b = bisimilar(gs[i], gs[j]);
      if (b.equal) continue;
      bool differs = false;
      for (int d = 0; d <= 12 && !differs; ++d)
        differs = !equal(lazy_unfold_to_depth(terms[i], d), lazy_unfold_to_depth(terms[j], d));
      CHECK(differs);
    }
}

TEST_CASE("readback reconstructs the unfolding") {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 300; ++i) {
    NTerm n = oracle::random_term(rng, 12, {"x", "y", "z"});
    if (!validate(n).ok()) continue;
    Term t = to_canonical(n);
    if (!is_productive(t).productive) continue;
    Ltg g = build_ltg(t);
    Ltg m = minimize(g);
    CHECK(m.size() <= g.size());
    CHECK(bisimilar(g, m).equal);
    for (int d = 0; d <= 8; ++d) {
      Term want = unfold_to_depth(t, d);
      CHECK(equal(readback_depth(g, d), want));
      CHECK(equal(readback_depth(m, d), want));
    }
  }
}
