#include <doctest.h>

#include <random>
#include <sstream>

#include "llx/extract.hpp"
#include "llx/productivity.hpp"
#include "oracles.hpp"

using namespace llx;

namespace {

Term canon(const std::string& s) { return to_canonical(parse_term(s)); }

bool alpha(const NTerm& a, const std::string& b) { return oracle::alpha_equal(a, parse_term(b)); }

// Schemes over variable arguments: each def body is a random λ/@ tree whose
// leaves are in-scope variables or calls with in-scope arguments.
std::string random_scheme(std::mt19937_64& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const int ndefs = 1 + pick(2);
  std::vector<int> arity(ndefs);
  for (auto& a : arity) a = pick(3);
  int fresh = 0;
  std::function<std::string(std::vector<std::string>&, int)> body = [&](std::vector<std::string>& scope, int budget) {
    int r = pick(10);
    if (budget <= 1 || r < 3) {
      if (!scope.empty() && r < 2) return scope[pick(scope.size())];
      int f = pick(ndefs);
      if (arity[f] > 0 && scope.empty()) {
        std::string v = "v" + std::to_string(fresh++);
        scope.push_back(v);
        std::string b = "\\" + v + ". " + body(scope, budget - 1);
        scope.pop_back();
        return "(" + b + ")";
      }
      std::string call = "f" + std::to_string(f) + "(";
      for (int k = 0; k < arity[f]; ++k) call += (k ? ", " : "") + scope[pick(scope.size())];
      return call + ")";
    }
    if (r < 6) {
      std::string v = "v" + std::to_string(fresh++);
      scope.push_back(v);
      std::string b = "\\" + v + ". " + body(scope, budget - 1);
      scope.pop_back();
      return "(" + b + ")";
    }
    std::string a = body(scope, budget / 2);
    return "(" + a + " " + body(scope, budget / 2) + ")";
  };
  std::ostringstream out;
  for (int f = 0; f < ndefs; ++f) {
    std::vector<std::string> scope;
    for (int k = 0; k < arity[f]; ++k) scope.push_back("p" + std::to_string(k));
    out << "def f" << f << "(";
    for (int k = 0; k < arity[f]; ++k) out << (k ? ", " : "") << scope[k];
    // guarded: every body starts with a constructor
    out << ") = \\w. " << [&] {
      scope.push_back("w");
      std::string b = body(scope, 6);
      scope.pop_back();
      return b;
    }() << ";\n";
  }
  std::vector<std::string> scope;
  out << "main = " << body(scope, 3);
  return out.str();
}

}  // namespace

TEST_CASE("extract_letrec examples") {
  NTerm f = extract_letrec(build_ltg(canon("letrec f = \\x y. (f y) x in f")));
  CHECK(alpha(f, "letrec u = \\a b. (u b) a in u"));
  CHECK(bisimilar(build_ltg(to_canonical(f)), build_ltg(canon("letrec f = \\x y. (f y) x in f"))).equal);
  CHECK(alpha(extract_letrec(build_ltg(canon("\\x. x"))), "\\a. a"));
  Scheme s = parse_scheme("def f() = \\x. x f(); main = f()");
  NTerm fs = extract_letrec(build_ltg(s));
  CHECK(alpha(fs, "letrec u = \\a. a u in u"));
  for (int d = 0; d <= 10; ++d) CHECK(equal(unfold_to_depth(to_canonical(fs), d), oracle::scheme_depth(s, d)));

  // extraction straight from an exploration
  Exploration e = generated_subterms(canon("letrec f = \\x y. (f y) x in f"), StrategyKind::EagerRegPlus);
  CHECK(alpha(extract_letrec(e), "letrec u = \\a b. (u b) a in u"));
}

TEST_CASE("extract_letrec errors") {
  // λλλ… with a growing prefix: the back-edge is not grounded
  Ltg g;
  g.add(StateKind::Lam, 1);
  g.add(StateKind::Lam, 0);
  REQUIRE(audit(g).ok());
  try {
    extract_letrec(g);
    FAIL("expected UngroundedCycle");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UngroundedCycle);
  }
  try {
    extract_letrec(build_ltg(canon("\\x y. x"), StrategyKind::EagerReg));
    FAIL("expected AmbiguousNameless");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AmbiguousNameless);
  }
  Ltg bad;
  bad.add(StateKind::App, 1);
  bad.add(StateKind::Var);
  CHECK_THROWS_AS(extract_letrec(bad), Error);
}

TEST_CASE("canonicalize examples") {
  NTerm a = canonicalize(parse_term("\\c x. letrec r = (c x) r in r"));
  NTerm b = canonicalize(parse_term("\\c x. letrec r = (c x) ((c x) r) in r"));
  CHECK(oracle::alpha_equal(a, b));
  CHECK(alpha(canonicalize(parse_term("\\x. x")), "\\x. x"));
  CHECK(oracle::alpha_equal(canonicalize(parse_term("\\x y. letrec f = \\x y. (f y) x in (f y) x")),
                            canonicalize(parse_term("letrec f = \\x y. (f y) x in f"))));
  CHECK_THROWS_AS(canonicalize(parse_term("letrec f = f in f")), Error);
}

TEST_CASE("classify examples") {
  Classification e = classify(parse_scheme("def rec(x) = \\y. rec(y) x; main = \\a. rec(a)"));
  CHECK(e.kind == Classification::RegularNotStrong);
  REQUIRE(e.witness);
  CHECK(e.witness->n1 == 1);
  CHECK(e.witness->n2 == 2);
  CHECK(e.witness->verified);
  CHECK(e.eager_reg_finite);

  Classification f = classify(parse_scheme("def f() = \\x. x f(); main = f()"));
  CHECK(f.kind == Classification::StronglyRegular);
  CHECK(f.graph_size == 4);
  Classification g = classify(parse_scheme("def g(x) = \\y. g(y); main = \\a. g(a)"));
  CHECK(g.kind == Classification::StronglyRegular);
  CHECK(std::string(classification_name(g.kind)) == "STRONGLY_REGULAR");

  Classification u = classify(parse_scheme("def rec(x) = \\y. rec(y) x; main = \\a. rec(a)"), 3);
  CHECK(u.kind == Classification::Unknown);
}

TEST_CASE("property: extraction is sound, reduced and idempotent") {
  std::mt19937_64 rng(61);
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    NTerm n = oracle::random_term(rng, 14, {"x", "y", "z"});
    if (!validate(n).ok()) continue;
    Term t = to_canonical(n);
    if (!is_productive(t).productive) continue;
    ++checked;
    Ltg g = build_ltg(t);
    NTerm x = extract_letrec(g);
    Term xc = to_canonical(x);
    CHECK(is_reduced(xc));
    CHECK(bisimilar(build_ltg(xc), g).equal);
    for (int d = 0; d <= 10; ++d) CHECK(equal(lazy_unfold_to_depth(xc, d), lazy_unfold_to_depth(t, d)));

    NTerm c1 = canonicalize(n);
    NTerm c2 = canonicalize(c1);
    CHECK(oracle::alpha_equal(c1, c2));
    CHECK(is_reduced(to_canonical(c1)));
  }
  CHECK(checked > 300);
}

TEST_CASE("property: strongly regular schemes extract") {
  std::mt19937_64 rng(62);
  int sr = 0, rns = 0;
  for (int i = 0; i < 400; ++i) {
    std::string src = random_scheme(rng);
    CAPTURE(src);
    Scheme s = parse_scheme(src);
    Classification c = classify(s, 2000);
    CHECK(c.eager_reg_finite);
    if (c.kind == Classification::RegularNotStrong) {
      ++rns;
      CHECK(c.witness->verified);
      CHECK_THROWS_AS(build_ltg(s, StrategyKind::EagerRegPlus, 2000), Error);
      continue;
    }
    if (c.kind != Classification::StronglyRegular) continue;
    ++sr;
    Ltg g = build_ltg(s, StrategyKind::EagerRegPlus, 2000);
    CHECK(g.size() == c.graph_size);
    NTerm x = extract_letrec(minimize(g));
    Term xc = to_canonical(x);
    CHECK(is_reduced(xc));
    CHECK(bisimilar(build_ltg(xc), g).equal);
    for (int d = 0; d <= 8; ++d) CHECK(equal(lazy_unfold_to_depth(xc, d), oracle::scheme_depth(s, d)));
  }
  CHECK(sr > 100);
  CHECK(rns > 5);
}
