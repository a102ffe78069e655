#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "llx/decompose.hpp"
#include "llx/productivity.hpp"
#include "llx/syntax.hpp"
#include "oracles.hpp"

using namespace llx;

namespace {

Term canon(const std::string& s) { return to_canonical(parse_term(s)); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::pair<std::string, Term>> corpus_terms() {
  std::vector<std::pair<std::string, Term>> out;
  for (const auto& e : std::filesystem::directory_iterator(LLX_CORPUS_DIR)) {
    if (e.path().extension() != ".lam") continue;
    std::string src = slurp(e.path());
    if (looks_like_scheme(src)) continue;
    out.emplace_back(e.path().stem().string(), to_canonical(parse_term(src)));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool reaches_label(const AccessGraph& g, const std::string& label) {
  for (int i : g.reachable())
    if (g.label(i) == label) return true;
  return false;
}

}  // namespace

TEST_CASE("is_productive examples") {
  CHECK(!is_productive(canon("letrec f = f in f")).productive);
  CHECK(!is_productive(canon("letrec f = (letrec g = f in g) in f")).productive);
  CHECK(is_productive(canon("letrec f = \\x y. (f y) x in f")).productive);
  CHECK(is_productive(canon("letrec f = f, g = \\x. x in \\y. g")).productive);
  auto bad = is_productive(canon("letrec f = f, g = \\x. x in \\y. f g"));
  CHECK(!bad.productive);
  REQUIRE(bad.cycle.size() >= 2);
  CHECK(bad.cycle.front() == bad.cycle.back());
  CHECK(bad.cycle_labels.size() == bad.cycle.size());
  REQUIRE(bad.bottom_at);
  CHECK(bad.bottom_at->str() == "000");

  CHECK(expresses_some_term(parse_term("letrec f = \\x y. (f y) x in f")));
  CHECK(!expresses_some_term(parse_term("letrec f = f in f")));
  CHECK(!expresses_some_term(parse_term("letrec f = (letrec g = f in g) in f")));
}

TEST_CASE("access graph examples") {
  AccessGraph id = build_access_graph(canon("\\x. x"));
  CHECK(id.nodes.size() == 2);
  REQUIRE(id.edges.size() == 1);
  CHECK(id.edges[0].guarded);

  AccessGraph good = build_access_graph(canon("letrec f = f, g = \\x. x in \\y. g"));
  CHECK(reaches_label(good, "() c_v"));
  CHECK(!reaches_label(good, "() c_u"));

  AccessGraph bad = build_access_graph(canon("letrec f = f, g = \\x. x in \\y. f g"));
  CHECK(reaches_label(bad, "() c_u"));
  // the self-jump of f is an unguarded cycle
  bool loop = std::any_of(bad.edges.begin(), bad.edges.end(), [](const AccessGraph::Edge& e) {
    return e.from == e.to && !e.guarded && e.kind == EdgeKind::RecJump;
  });
  CHECK(loop);

  for (const auto& e : bad.edges) {
    bool structural = e.kind == EdgeKind::AbsBody || e.kind == EdgeKind::AppLeft || e.kind == EdgeKind::AppRight;
    CHECK(e.guarded == structural);
  }
}

TEST_CASE("access graphs stay within the quadratic bound") {
  for (const auto& [name, t] : corpus_terms()) {
    AccessGraph g = build_access_graph(t);
    long n = t->size;
    CAPTURE(name);
    CHECK(static_cast<long>(g.nodes.size()) <= 4 * n * n);
    CHECK(static_cast<long>(g.edges.size()) <= 4 * n * n);
  }
}

TEST_CASE("property: productivity is invariant under reduce") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 3000; ++i) {
    NTerm n = oracle::random_term(rng, 14, {"x", "y", "z"});
    if (!validate(n).ok()) continue;
    Term t = to_canonical(n);
    CHECK(is_productive(t).productive == is_productive(reduce(t)).productive);
  }
}

TEST_CASE("property: agreement with the stagnation oracle on random terms") {
  std::mt19937_64 rng(32);
  oracle::StagnationOracle o;
  int undecided = 0, unproductive = 0;
  for (int i = 0; i < 3000; ++i) {
    NTerm n = oracle::random_term(rng, 16, {"x", "y", "z"});
    if (!validate(n).ok()) continue;
    oracle::Verdict v = o.check(n);
    if (v == oracle::Verdict::Undecided) {
      ++undecided;
      continue;
    }
    bool p = is_productive(to_canonical(n)).productive;
    unproductive += !p;
    CHECK_MESSAGE(p == (v == oracle::Verdict::Productive), print_term(n));
  }
  CHECK(undecided == 0);
  CHECK(unproductive > 100);
}

TEST_CASE("strategy independence on the corpus") {
  for (const auto& [name, t] : corpus_terms()) {
    CAPTURE(name);
    bool p = is_productive(t).productive;
    bool stagnates = false;
    try {
      ExploreOptions opt;
      opt.bound = 2000;
      generated_subterms(t, StrategyKind::EagerRegPlus, opt);
    } catch (const Error& e) {
      stagnates = e.kind() == ErrorKind::Unproductive;
    }
    CHECK(p == !stagnates);
    // the check must not be what decides it
    ExploreOptions raw;
    raw.bound = 2000;
    raw.check_productive = false;
    bool raw_stagnates = false;
    try {
      generated_subterms(t, StrategyKind::EagerRegPlus, raw);
    } catch (const Error& e) {
      raw_stagnates = e.kind() == ErrorKind::Unproductive;
    }
    CHECK(p == !raw_stagnates);
  }
}
