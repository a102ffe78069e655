#include <doctest.h>

#include <algorithm>
#include <random>

#include "llx/decompose.hpp"
#include "llx/productivity.hpp"
#include "llx/syntax.hpp"
#include "oracles.hpp"

using namespace llx;

namespace {

Term canon(const std::string& s) { return to_canonical(parse_term(s)); }

ExplorationState st(int n, Term body) { return ExplorationState{n, std::move(body), std::nullopt}; }

bool same(const ExplorationState& a, const ExplorationState& b) { return a.n == b.n && equal(a.body, b.body); }

bool has(const std::vector<Step>& steps, DecompLabel l, const ExplorationState& s) {
  return std::any_of(steps.begin(), steps.end(), [&](const Step& x) { return x.first == l && same(x.second, s); });
}

const Scheme kEntangled = parse_scheme("def rec(x) = \\y. rec(y) x; main = \\a. rec(a)");

std::vector<Term> random_closed(std::uint64_t seed, int count, int max_size, bool letrec) {
  std::mt19937_64 rng(seed);
  std::vector<Term> out;
  while (static_cast<int>(out.size()) < count) {
    NTerm t = oracle::random_term(rng, max_size, {"x", "y", "z"}, letrec);
    if (!validate(t).ok()) continue;
    Term c = to_canonical(t);
    if (letrec && !is_productive(c).productive) continue;
    out.push_back(c);
  }
  return out;
}

int max_prefix(const Exploration& e) {
  int m = 0;
  for (const auto& s : e.states) m = std::max(m, s.n);
  return m;
}

const Term v1 = mk_var(1), v0 = mk_var(0);

}  // namespace

TEST_CASE("decomp_steps examples") {
  auto s = decomp_steps(st(2, mk_app(mk_app(v1, v1), v0)), System::RegPlus);
  CHECK(s.size() == 2);
  CHECK(has(s, {DecompLabel::App0}, st(2, mk_app(v1, v1))));
  CHECK(has(s, {DecompLabel::App1}, st(2, v0)));

  auto xx = decomp_steps(st(2, mk_app(v1, v1)), System::RegPlus);
  CHECK(has(xx, {DecompLabel::S}, st(1, mk_app(v0, v0))));

  auto reg = decomp_steps(st(2, v0), System::Reg);
  CHECK(has(reg, {DecompLabel::Del, 0}, st(1, v0)));
  CHECK(decomp_steps(st(2, v0), System::RegPlus).empty());
  CHECK(decomp_steps(st(1, v0), System::Reg).empty());

  auto lam = decomp_steps(st(0, canon("\\x. x")), System::RegMinus);
  REQUIRE(lam.size() == 1);
  CHECK(has(lam, {DecompLabel::Lam}, st(1, v0)));
}

TEST_CASE("generated_subterms examples") {
  ExploreOptions opt;
  opt.bound = 100;
  Exploration sa = generated_subterms(canon("\\x y. (x x) y"), StrategyKind::EagerRegPlus, opt);
  CHECK(sa.finite());
  CHECK(sa.states.size() == 7);

  Exploration f = generated_subterms(canon("letrec f = \\x y. (f y) x in f"), StrategyKind::EagerRegPlus, opt);
  CHECK(f.finite());
  CHECK(max_prefix(f) == 2);

  ExploreOptions small;
  small.bound = 50;
  CHECK(generated_subterms(kEntangled, StrategyKind::EagerRegPlus, small).exceeded);
  Exploration er = generated_subterms(kEntangled, StrategyKind::EagerReg, opt);
  CHECK(er.finite());

  try {
    generated_subterms(canon("letrec f = f in f"), StrategyKind::EagerRegPlus, opt);
    FAIL("expected Unproductive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unproductive);
  }
}

TEST_CASE("binds and captured_by") {
  Term t = canon("\\x y. (x x) y");
  auto P = Position::parse;
  CHECK(binds(t, P("ε"), P("000000")));
  CHECK(binds(t, P("ε"), P("000001")));
  CHECK(binds(t, P("00"), P("00001")));
  CHECK(!binds(t, P("ε"), P("00001")));
  CHECK(!binds(t, P("00"), P("000000")));
  CHECK(captured_by(t, P("000000"), P("00")));
  CHECK(!captured_by(t, P("00001"), P("00")));
  try {
    binds(t, P("ε"), P("0101"));
    FAIL("expected PositionOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PositionOutOfRange);
  }
}

TEST_CASE("chains examples") {
  ChainReport sa = chains(canon("\\x y. (x x) y"), 10);
  CHECK(!sa.infinite);
  CHECK(sa.max_finite_length == 1);
  CHECK(format_chain(sa.sample_chain) == "ε ◁ 000000 ⊣ 00 ◁ 00001");

  ChainReport f = chains(canon("letrec f = \\x y. (f y) x in f"), 10);
  CHECK(!f.infinite);
  CHECK(f.max_finite_length == 1);

  ChainReport e = chains(kEntangled, 10);
  CHECK(e.infinite);
  REQUIRE(e.witness);
  CHECK(e.witness->verified);
  CHECK(e.witness->n2 > e.witness->n1);
}

TEST_CASE("property: Reg+ steps are Reg steps") {
  for (const Term& t : random_closed(41, 200, 12, true)) {
    Exploration e = generated_subterms(t, StrategyKind::EagerRegPlus);
    REQUIRE(e.finite());
    for (const auto& s : e.states) {
      auto reg = decomp_steps(s, System::Reg);
      for (const auto& [l, r] : decomp_steps(s, System::RegPlus)) {
        DecompLabel want = l.kind == DecompLabel::S ? DecompLabel{DecompLabel::Del, s.n - 1} : l;
        CHECK(has(reg, want, r));
      }
    }
  }
}

TEST_CASE("property: normal forms") {
  auto terms = random_closed(42, 150, 12, false);
  auto more = random_closed(43, 150, 12, true);
  terms.insert(terms.end(), more.begin(), more.end());
  for (const Term& t : terms) {
    for (StrategyKind k : {StrategyKind::EagerRegPlus, StrategyKind::LazyRegPlus, StrategyKind::EagerReg,
                           StrategyKind::LazyReg}) {
      ExploreOptions opt;
      opt.bound = 3000;
      opt.with_origin = false;  // lazy prefixes grow along infinite runs
      Exploration e = generated_subterms(t, k, opt);
      if (!e.finite()) continue;
      auto out = e.out();
      for (std::size_t i = 0; i < e.states.size(); ++i) {
        if (!out[i].empty()) continue;
        const auto& s = e.states[i];
        CHECK(equal(s.body, mk_var(0)));
        if (is_plus(k)) CHECK(s.n >= 1);
        else CHECK(s.n == 1);
      }
    }
  }
}

TEST_CASE("property: explorations of finite terms terminate") {
  for (const Term& t : random_closed(44, 300, 14, false))
    for (StrategyKind k : {StrategyKind::EagerRegPlus, StrategyKind::LazyRegPlus, StrategyKind::EagerReg,
                           StrategyKind::LazyReg}) {
      ExploreOptions opt;
      opt.bound = 1000000;
      CHECK(generated_subterms(t, k, opt).finite());
    }
}

TEST_CASE("property: eager states are lazy states after compression") {
  // closes under deletion of vacuous prefix entries (any position)
  auto compress_closure = [](std::vector<ExplorationState> todo) {
    std::vector<ExplorationState> seen;
    while (!todo.empty()) {
      ExplorationState s = todo.back();
      todo.pop_back();
      if (std::any_of(seen.begin(), seen.end(), [&](const auto& x) { return same(x, s); })) continue;
      seen.push_back(s);
      for (auto& [l, r] : decomp_steps(s, System::Reg))
        if (l.kind == DecompLabel::Del) todo.push_back(r);
    }
    return seen;
  };
  for (const Term& t : random_closed(45, 120, 10, false)) {
    for (auto [eager, lazy] : {std::pair{StrategyKind::EagerRegPlus, StrategyKind::LazyRegPlus},
                               std::pair{StrategyKind::EagerReg, StrategyKind::LazyReg}}) {
      Exploration e = generated_subterms(t, eager);
      Exploration l = generated_subterms(t, lazy);
      auto closure = compress_closure(l.states);
      for (const auto& s : e.states)
        CHECK(std::any_of(closure.begin(), closure.end(), [&](const auto& x) { return same(x, s); }));
    }
  }
}

TEST_CASE("property: long eager runs contain grounded cycles") {
  std::mt19937_64 rng(46);
  int runs = 0;
  for (const Term& t : random_closed(47, 800, 14, true)) {
    Exploration e = generated_subterms(t, StrategyKind::EagerRegPlus);
    REQUIRE(e.finite());
    auto out = e.out();
    // states with an infinite continuation
    std::vector<char> alive(e.states.size(), 1);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < alive.size(); ++i) {
        if (!alive[i]) continue;
        bool any = std::any_of(out[i].begin(), out[i].end(), [&](const Transition& tr) { return alive[tr.to]; });
        if (!any) alive[i] = 0, changed = true;
      }
    }
    if (!alive[0]) continue;
    std::vector<int> run{0};
    std::size_t len = 5 * e.states.size();
    while (run.size() <= len) {
      std::vector<int> next;
      for (const auto& tr : out[run.back()])
        if (alive[tr.to]) next.push_back(tr.to);
      run.push_back(next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)]);
    }
    ++runs;
    bool grounded = false;
    for (std::size_t i = 0; i < run.size() && !grounded; ++i) {
      int lo = e.states[run[i]].n;
      for (std::size_t j = i + 1; j < run.size(); ++j) {
        lo = std::min(lo, e.states[run[j]].n);
        if (lo < e.states[run[i]].n) break;
        if (run[j] == run[i]) {
          grounded = true;
          break;
        }
      }
    }
    CHECK(grounded);
  }
  CHECK(runs > 60);
}

TEST_CASE("property: prefix lengths are witnessed by chains") {
  for (const Term& t : random_closed(48, 150, 12, false)) {
    Exploration e = generated_subterms(t, StrategyKind::EagerRegPlus);
    int n = max_prefix(e) - 1;
    ChainReport c = chains(t, 64);
    CHECK(!c.infinite);
    CHECK(c.max_finite_length >= n);
    const auto& ch = c.sample_chain;
    if (ch.empty()) continue;
    // p0 ◁ q1 ⊣ p1 ◁ q2 ... : p binds the next q, q is captured by the next p
    for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
      if (i % 2 == 0) CHECK(binds(t, ch[i], ch[i + 1]));
      else CHECK(captured_by(t, ch[i], ch[i + 1]));
    }
  }
  for (const Term& t : random_closed(49, 100, 12, true)) {
    Exploration e = generated_subterms(t, StrategyKind::EagerRegPlus);
    CHECK(chains(t, 64).max_finite_length >= max_prefix(e) - 1);
  }
}
