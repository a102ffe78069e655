#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <unordered_set>

#include "llx/extract.hpp"
#include "llx/ltg.hpp"
#include "llx/productivity.hpp"
#include "llx/unfold.hpp"
#include "oracles.hpp"

namespace llx::acceptance {

namespace {

// Pinned parameters.
constexpr int kOracleMaxSize = 9;
constexpr int kOracleNames = 3;
constexpr int kOracleRootSteps = 200;
constexpr double kOracleBudgetSeconds = 30.0;
constexpr int kPeaks = 1000;
constexpr int kPeakMaxSize = 10;
constexpr int kJoinLevels = 50;
constexpr std::size_t kJoinCap = 50000;
constexpr std::uint64_t kPeakSeed = 20240601;
constexpr int kEqualDepth = 12;
constexpr int kRoundTripDepth = 10;
constexpr int kReadbackDepth = 8;
constexpr int kAuditRandomTerms = 300;

struct CorpusEntry {
  std::string name;
  std::optional<Scheme> scheme;
  NTerm named;
  Term term;
  bool productive = false;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  std::vector<std::string> errors;

  const CorpusEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

Corpus load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  Corpus c;
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& f : fs::directory_iterator(dir, ec))
    if (f.path().extension() == ".lam") files.push_back(f.path());
  if (ec) c.errors.push_back("cannot list " + dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    CorpusEntry e;
    e.name = p.stem().string();
    try {
      if (looks_like_scheme(ss.str())) {
        e.scheme = parse_scheme(ss.str());
      } else {
        e.named = parse_term(ss.str());
        e.term = to_canonical(e.named);
        e.productive = is_productive(e.term).productive;
      }
      c.entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      c.errors.push_back(e.name + ": " + ex.what());
    }
  }
  return c;
}

Term canon(const std::string& src) { return to_canonical(parse_term(src, ParseOptions{true})); }

std::string show(const Term& t) { return print_term(t); }

struct Check {
  bool ok = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    ok = false;
    if (notes.size() < 4) notes.push_back(why);
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
  std::string detail(const std::string& summary) const {
    std::string s = summary;
    for (const auto& n : notes) s += "; " + n;
    return s;
  }
};

std::string rules_str(const std::vector<UnfoldRule>& rs) {
  std::string s;
  for (std::size_t i = 0; i < rs.size(); ++i) s += (i ? "," : "") + std::string(rule_name(rs[i]));
  return s;
}

// 1 -------------------------------------------------------------------------
Outcome unfolding_replay() {
  const std::string F = "(λx y. (f y) x)";
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"rec", "letrec f = " + F + " in " + F},
      {"λ", "λx. letrec f = " + F + " in λy. (f y) x"},
      {"λ", "λx y. letrec f = " + F + " in (f y) x"},
      {"@", "λx y. (letrec f = " + F + " in f y) (letrec f = " + F + " in x)"},
      {"red", "λx y. (letrec f = " + F + " in f y) (letrec in x)"},
      {"nil", "λx y. (letrec f = " + F + " in f y) x"},
      {"@", "λx y. ((letrec f = " + F + " in f) (letrec f = " + F + " in y)) x"},
      {"red", "λx y. ((letrec f = " + F + " in f) (letrec in y)) x"},
      {"nil", "λx y. ((letrec f = " + F + " in f) y) x"},
      {"rec", "λx y. ((letrec f = " + F + " in " + F + ") y) x"},
  };
  Check c;
  std::vector<std::string> trace;
  UnfoldOptions opt;
  opt.trace = &trace;
  Term r = unfold_to_depth(canon("letrec f = λx y. (f y) x in f"), 4, opt);
  c.expect(trace.size() >= expected.size(), "only " + std::to_string(trace.size()) + " steps");
  for (std::size_t i = 0; i < expected.size() && i < trace.size(); ++i) {
    const std::string& line = trace[i];
    std::size_t arrow = line.find(" ⇒ ");
    std::size_t at = line.rfind('@', arrow);
    if (arrow == std::string::npos || at == std::string::npos) {
      c.fail("unreadable trace line " + line);
      continue;
    }
    std::string rule = line.substr(0, at);
    Term got = canon(line.substr(arrow + std::string(" ⇒ ").size()));
    c.expect(rule == expected[i].first, "step " + std::to_string(i + 1) + " rule " + rule);
    c.expect(equal(got, canon(expected[i].second)), "step " + std::to_string(i + 1) + " term " + show(got));
  }
  c.expect(equal(r, canon("λa b. (_ b) a")), "depth 4 gives " + show(r));
  return {1, "unfolding replay", c.ok, c.detail("10 steps, depth 4 = " + show(r)), 0};
}

// 2 -------------------------------------------------------------------------
Outcome unproductivity() {
  Check c;
  ProductivityResult a = is_productive(canon("letrec f = f in f"));
  ProductivityResult b = is_productive(canon("letrec f = (letrec g = f in g) in f"));
  c.expect(!a.productive && !a.cycle.empty(), "letrec f=f in f not rejected with a cycle");
  c.expect(!b.productive && !b.cycle.empty(), "nested term not rejected with a cycle");
  std::string ra = a.root_cycle ? rules_str(a.root_cycle->rules) : "-";
  std::string rb = b.root_cycle ? rules_str(b.root_cycle->rules) : "-";
  c.expect(ra == "rec", "first root cycle " + ra);
  c.expect(rb == "rec,merge,rec,red", "second root cycle " + rb);
  return {2, "unproductivity witnesses", c.ok, c.detail("cycles [" + ra + "] and [" + rb + "]"), 0};
}

// 3 -------------------------------------------------------------------------
Outcome guardedness() {
  Check c;
  bool p1 = is_productive(canon("letrec f = f, g = λx. x in λy. g")).productive;
  bool p2 = is_productive(canon("letrec f = f, g = λx. x in λy. f g")).productive;
  c.expect(p1, "λy.g rejected");
  c.expect(!p2, "λy.(f g) accepted");
  return {3, "guardedness pair", c.ok,
          c.detail(std::string("λy.g ") + (p1 ? "productive" : "unproductive") + ", λy.(f g) " +
                   (p2 ? "productive" : "unproductive")),
          0};
}

// 4 -------------------------------------------------------------------------
Outcome oracle_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  oracle::StagnationOracle so(kOracleRootSteps);
  long total = 0, unproductive = 0, mismatches = 0, undecided = 0;
  std::string first;
  oracle::for_each_closed_class(kOracleMaxSize, kOracleNames, [&](const Term& t) {
    ++total;
    bool lib = is_productive(t).productive;
    oracle::Verdict v = so.check(to_named(t));
    if (v == oracle::Verdict::Undecided) {
      ++undecided;
      return;
    }
    unproductive += !lib;
    if (lib != (v == oracle::Verdict::Productive) && mismatches++ == 0) first = show(t);
  });
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << total << " α-classes (size ≤ " << kOracleMaxSize << ", " << kOracleNames << " names), " << unproductive
    << " unproductive, " << mismatches << " disagreements, " << undecided << " undecided";
  if (!first.empty()) d << "; first: " << first;
  if (s > kOracleBudgetSeconds) d << "; over the " << kOracleBudgetSeconds << " s budget";
  return {4, "oracle equivalence", mismatches == 0 && undecided == 0, d.str(), 0};
}

// 5 -------------------------------------------------------------------------
struct Joiner {
  std::unordered_set<Term, TermHash, TermEq> seen[2];
  std::vector<Term> frontier[2];

  bool joined(const Term& t, int side) const { return seen[1 - side].count(t) > 0; }
};

// Breadth-first from both sides, one level per side per round.
int join_levels(const Term& a, const Term& b, bool& capped) {
  Joiner j;
  j.seen[0].insert(a);
  j.seen[1].insert(b);
  j.frontier[0] = {a};
  j.frontier[1] = {b};
  capped = false;
  if (equal(a, b)) return 0;
  for (int level = 1; level <= kJoinLevels; ++level) {
    for (int side = 0; side < 2; ++side) {
      std::vector<Term> next;
      for (const auto& t : j.frontier[side])
        for (const auto& st : enumerate_unfold_steps(t)) {
          if (j.joined(st.result, side)) return level;
          if (j.seen[side].size() >= kJoinCap) {
            capped = true;
            continue;
          }
          if (j.seen[side].insert(st.result).second) next.push_back(st.result);
        }
      j.frontier[side] = std::move(next);
    }
  }
  return -1;
}

Outcome confluence() {
  std::mt19937_64 rng(kPeakSeed);
  const std::vector<std::string> names = {"x", "y", "z"};
  int peaks = 0, failures = 0, worst = 0, draws = 0;
  std::string first;
  while (peaks < kPeaks && draws < 100 * kPeaks) {
    ++draws;
    NTerm n = oracle::random_term(rng, kPeakMaxSize, names);
    if (oracle::size(n) > kPeakMaxSize) continue;
    Term t = to_canonical(n);
    auto steps = enumerate_unfold_steps(t);
    if (steps.size() < 2) continue;
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(rng);
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, steps.size() - 2)(rng);
    if (k >= i) ++k;
    ++peaks;
    bool capped = false;
    int lv = join_levels(steps[i].result, steps[k].result, capped);
    if (lv < 0) {
      if (failures++ == 0) first = show(t) + (capped ? " (search capped)" : "");
    } else {
      worst = std::max(worst, lv);
    }
  }
  std::ostringstream d;
  d << peaks << " peaks, " << failures << " not joined within " << kJoinLevels << " levels, deepest join " << worst;
  if (!first.empty()) d << "; first: " << first;
  return {5, "confluence sampling", peaks == kPeaks && failures == 0, d.str(), 0};
}

// 6 -------------------------------------------------------------------------
Outcome classification() {
  Check c;
  Classification e = classify(parse_scheme("def rec(x) = λy. rec(y) x; main = λa. rec(a)"));
  Classification f = classify(parse_scheme("def f() = λx. x f(); main = f()"));
  c.expect(e.kind == Classification::RegularNotStrong, std::string("entangled: ") + classification_name(e.kind));
  c.expect(e.witness && e.witness->verified, "entangled: no verified pump");
  c.expect(e.eager_reg_finite, "entangled: eager-reg exploration not finite");
  c.expect(f.kind == Classification::StronglyRegular, std::string("f(): ") + classification_name(f.kind));
  std::ostringstream d;
  d << "entangled " << classification_name(e.kind);
  if (e.witness) d << " pump (" << e.witness->n1 << "," << e.witness->n2 << ")";
  d << ", eager-reg " << e.eager_reg_states << " states; f() " << classification_name(f.kind) << " ("
    << f.graph_size << " states)";
  return {6, "classification", c.ok, c.detail(d.str()), 0};
}

// 7 -------------------------------------------------------------------------
Outcome equality(const Corpus& corpus) {
  Check c;
  Term s1 = canon("λc x. letrec r = (c x) r in r");
  Term s2 = canon("λc x. letrec r = (c x) ((c x) r) in r");
  c.expect(bisimilar(build_ltg(s1), build_ltg(s2)).equal, "stream terms distinguished");
  c.expect(equal(unfold_to_depth(s1, kEqualDepth), unfold_to_depth(s2, kEqualDepth)),
           "depth-12 truncations differ");
  c.expect(oracle::alpha_equal(oracle::unfold_depth(to_named(s1), kEqualDepth),
                               oracle::unfold_depth(to_named(s2), kEqualDepth)),
           "reference depth-12 truncations differ");
  int unrolled = 0;
  for (const auto& e : corpus.entries) {
    if (e.scheme || !e.productive) continue;
    Ltg g = build_ltg(e.term);
    for (const auto& st : enumerate_unfold_steps(e.term)) {
      ++unrolled;
      c.expect(bisimilar(build_ltg(st.result), g).equal,
               e.name + ": step " + rule_name(st.rule) + "@" + st.at.str() + " changes the graph");
    }
  }
  const CorpusEntry* a = corpus.find("fyx");
  const CorpusEntry* b = corpus.find("fyx_unrolled");
  if (a && b) c.expect(bisimilar(build_ltg(a->term), build_ltg(b->term)).equal, "fyx vs fyx_unrolled");
  return {7, "equality", c.ok, c.detail("streams equal; " + std::to_string(unrolled) + " one-step unrollings"), 0};
}

// 8 -------------------------------------------------------------------------
Outcome extraction(const Corpus& corpus) {
  Check c;
  int terms = 0, schemes = 0;
  for (const auto& e : corpus.entries) {
    try {
      if (!e.scheme) {
        if (!e.productive) continue;
        ++terms;
        Term k = canonicalize(e.term);
        c.expect(bisimilar(build_ltg(k), build_ltg(e.term)).equal, e.name + ": graphs differ");
        c.expect(oracle::alpha_equal(oracle::unfold_depth(to_named(k), kRoundTripDepth),
                                     oracle::unfold_depth(e.named, kRoundTripDepth)),
                 e.name + ": depth-10 truncations differ");
      } else {
        if (classify(*e.scheme).kind != Classification::StronglyRegular) continue;
        ++schemes;
        Ltg g = build_ltg(*e.scheme);
        NTerm x = extract_letrec(minimize(g));
        c.expect(bisimilar(build_ltg(to_canonical(x)), g).equal, e.name + ": graphs differ");
        c.expect(equal(to_canonical(oracle::unfold_depth(x, kRoundTripDepth)),
                       oracle::scheme_depth(*e.scheme, kRoundTripDepth)),
                 e.name + ": depth-10 truncations differ");
      }
    } catch (const std::exception& ex) {
      c.fail(e.name + ": " + ex.what());
    }
  }
  return {8, "extraction round trip", c.ok && terms > 0 && schemes > 0,
          c.detail(std::to_string(terms) + " terms, " + std::to_string(schemes) + " schemes"), 0};
}

// 9 -------------------------------------------------------------------------
Outcome readback(const Corpus& corpus) {
  Check c;
  int cases = 0;
  for (const auto& e : corpus.entries) {
    if (e.scheme || !e.productive) continue;
    Ltg g = build_ltg(e.term);
    for (int d = 0; d <= kReadbackDepth; ++d) {
      ++cases;
      Term rb = readback_depth(g, d);
      Term un = unfold_to_depth(e.term, d);
      c.expect(equal(rb, un), e.name + " at depth " + std::to_string(d) + ": " + show(rb) + " vs " + show(un));
    }
  }
  return {9, "readback reconstruction", c.ok && cases > 0, c.detail(std::to_string(cases) + " (term, depth) pairs"),
          0};
}

// 10 ------------------------------------------------------------------------
Outcome chain_lengths() {
  Check c;
  ChainReport a = chains(canon("λx y. (x x) y"), 8);
  c.expect(!a.infinite && !a.capped && a.max_finite_length == 1,
           "λxy.(x x) y: length " + std::to_string(a.max_finite_length));
  std::string ca = format_chain(a.sample_chain);
  c.expect(ca == "ε ◁ 000000 ⊣ 00 ◁ 00001", "λxy.(x x) y chain " + ca);

  Term fyx = canon("letrec f = λx y. (f y) x in f");
  ExploreOptions opt;
  opt.with_origin = false;
  Exploration e = generated_subterms(fyx, StrategyKind::EagerRegPlus, opt);
  int max_n = 0;
  for (const auto& s : e.states) max_n = std::max(max_n, s.n);
  ChainReport b = chains(fyx, 8);
  std::string cb = format_chain(b.sample_chain);
  c.expect(max_n == 2, "fyx max prefix " + std::to_string(max_n));
  c.expect(!b.infinite && !b.capped && b.max_finite_length == max_n - 1,
           "fyx chain length " + std::to_string(b.max_finite_length));
  c.expect(cb == "ε ◁ 00001 ⊣ 00 ◁ 000001", "fyx chain " + cb);
  return {10, "chains", c.ok, c.detail(ca + "; fyx prefix " + std::to_string(max_n) + ", " + cb), 0};
}

// 11 ------------------------------------------------------------------------
void audit_one(Check& c, const std::string& what, const Term* t, const Scheme* s, int& graphs, int& normal_forms) {
  const StrategyKind all[] = {StrategyKind::EagerRegPlus, StrategyKind::LazyRegPlus, StrategyKind::EagerReg,
                              StrategyKind::LazyReg};
  for (StrategyKind k : all) {
    ExploreOptions opt;
    opt.bound = 2000;
    opt.with_origin = false;
    Exploration e;
    try {
      e = s ? generated_subterms(*s, k, opt) : generated_subterms(*t, k, opt);
    } catch (const Error&) {
      return;  // unproductive input
    }
    if (!e.finite()) continue;
    auto out = e.out();
    for (std::size_t i = 0; i < e.states.size(); ++i) {
      if (!out[i].empty()) continue;
      ++normal_forms;
      const auto& st = e.states[i];
      bool var0 = st.body->tag == Tag::Var && st.body->a == 0;
      bool ok = is_plus(k) ? var0 && st.n >= 1 : var0 && st.n == 1;
      c.expect(ok, what + " " + strategy_name(k) + ": normal form " + print_state(st, s));
    }
    Ltg g = ltg_from_exploration(e, s);
    ++graphs;
    Audit a = audit(g);
    c.expect(a.ok(), what + " " + strategy_name(k) + ": " + (a.ok() ? "" : a.problems.front()));
    if (is_plus(k)) {
      ++graphs;
      Audit m = audit(minimize(g));
      c.expect(m.ok(), what + " minimized: " + (m.ok() ? "" : m.problems.front()));
    }
  }
}

Outcome audits(const Corpus& corpus) {
  Check c;
  int graphs = 0, normal_forms = 0;
  for (const auto& e : corpus.entries)
    audit_one(c, e.name, e.scheme ? nullptr : &e.term, e.scheme ? &*e.scheme : nullptr, graphs, normal_forms);
  std::mt19937_64 rng(kPeakSeed + 1);
  for (int i = 0; i < kAuditRandomTerms; ++i) {
    Term t = to_canonical(oracle::random_term(rng, 12, {"x", "y", "z"}));
    audit_one(c, show(t), &t, nullptr, graphs, normal_forms);
  }
  return {11, "structural audits", c.ok && graphs > 0,
          c.detail(std::to_string(graphs) + " graphs, " + std::to_string(normal_forms) + " normal forms"), 0};
}

}  // namespace

std::vector<Outcome> run(const std::string& corpus_dir, const std::vector<int>& only,
                         const std::function<void(const Outcome&)>& report) {
  Corpus corpus = load_corpus(corpus_dir);
  std::vector<std::pair<int, std::function<Outcome()>>> all = {
      {1, unfolding_replay},
      {2, unproductivity},
      {3, guardedness},
      {4, oracle_equivalence},
      {5, confluence},
      {6, classification},
      {7, [&] { return equality(corpus); }},
      {8, [&] { return extraction(corpus); }},
      {9, [&] { return readback(corpus); }},
      {10, chain_lengths},
      {11, [&] { return audits(corpus); }},
  };
  std::vector<Outcome> out;
  for (auto& [id, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0};
    }
    if (id >= 7 && !corpus.errors.empty()) {
      o.pass = false;
      o.detail += "; corpus: " + corpus.errors.front();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (report) report(o);
    out.push_back(o);
  }
  return out;
}

std::string format(const Outcome& o) {
  std::ostringstream s;
  s << (o.pass ? "PASS " : "FAIL ") << std::setw(2) << o.id << " " << o.name << ": " << o.detail << " ("
    << std::fixed << std::setprecision(2) << o.seconds << " s)";
  return s.str();
}

}  // namespace llx::acceptance
