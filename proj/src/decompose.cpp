#include "llx/decompose.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "llx/productivity.hpp"
#include "llx/unfold.hpp"

namespace llx {

const char* strategy_name(StrategyKind s) {
  switch (s) {
    case StrategyKind::EagerRegPlus: return "eager-reg-plus";
    case StrategyKind::LazyRegPlus: return "lazy-reg-plus";
    case StrategyKind::EagerReg: return "eager-reg";
    case StrategyKind::LazyReg: return "lazy-reg";
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& s) {
  for (auto k : {StrategyKind::EagerRegPlus, StrategyKind::LazyRegPlus, StrategyKind::EagerReg, StrategyKind::LazyReg})
    if (s == strategy_name(k)) return k;
  throw Error(ErrorKind::Usage, "unknown strategy '" + s + "'");
}

bool is_plus(StrategyKind s) { return s == StrategyKind::EagerRegPlus || s == StrategyKind::LazyRegPlus; }

std::string DecompLabel::str() const {
  switch (kind) {
    case Lam: return "λ";
    case App0: return "@0";
    case App1: return "@1";
    case S: return "S";
    case Del: return "del(" + std::to_string(index) + ")";
  }
  return "?";
}

std::string print_state(const ExplorationState& s, const Scheme* scheme) {
  if (!scheme) return print_prefixed(s.n, s.body);
  auto syms = scheme->symbols();
  return print_prefixed(s.n, s.body, &syms);
}

ExplorationState normalize(ExplorationState s, const Scheme* scheme) {
  std::unordered_set<Term, TermHash, TermEq> calls;
  for (int guard = 0;; ++guard) {
    if (guard > 100000) throw Error(ErrorKind::Exceeded, "silent steps exceeded limit");
    if (s.body->tag == Tag::Letrec) {
      RootClosure rc = root_closure(s.body);
      if (rc.cycle) throw UnproductiveError("unproductive: root-stagnating state " + print_state(s, scheme), *rc.cycle);
      s.body = *rc.head;
    } else if (s.body->tag == Tag::Call) {
      if (!scheme) throw Error(ErrorKind::Usage, "scheme call without a scheme");
      if (!calls.insert(s.body).second)
        throw Error(ErrorKind::Unproductive, "unproductive: call cycle at " + print_state(s, scheme));
      s.body = scheme->expand(s.body->a, s.body->args);
    } else {
      break;
    }
  }
  s.body = reduce(s.body);
  return s;
}

ExplorationState initial_state(const Term& t, const Scheme* scheme, bool with_origin) {
  ExplorationState s;
  s.n = 0;
  s.body = t;
  if (with_origin) s.origin = Origin{};
  return normalize(s, scheme);
}

bool is_vacuous(const ExplorationState& s, int k) { return !has_free_var(s.body, s.n - 1 - k); }

namespace {

Step lam_step(const ExplorationState& s, const Scheme* sc) {
  ExplorationState r;
  r.n = s.n + 1;
  r.body = s.body->kids[0];
  if (s.origin) {
    r.origin = s.origin;
    r.origin->p.push_back(s.origin->q);
    r.origin->q = s.origin->q.child2(0, 0);
  }
  return {{DecompLabel::Lam}, normalize(r, sc)};
}

Step app_step(const ExplorationState& s, int i, const Scheme* sc) {
  ExplorationState r;
  r.n = s.n;
  r.body = s.body->kids[i];
  if (s.origin) {
    r.origin = s.origin;
    r.origin->q = s.origin->q.child(i);
  }
  return {{i == 0 ? DecompLabel::App0 : DecompLabel::App1}, normalize(r, sc)};
}

// Removes prefix entry k (0 = outermost).
ExplorationState drop_entry(const ExplorationState& s, int k) {
  ExplorationState r;
  r.n = s.n - 1;
  r.body = drop_var(s.body, s.n - 1 - k);
  if (s.origin) {
    r.origin = s.origin;
    r.origin->p.erase(r.origin->p.begin() + k);
  }
  return r;
}

Step s_step(const ExplorationState& s) { return {{DecompLabel::S}, drop_entry(s, s.n - 1)}; }
Step del_step(const ExplorationState& s, int k) { return {{DecompLabel::Del, k}, drop_entry(s, k)}; }

void structural(const ExplorationState& s, std::vector<Step>& out, const Scheme* sc) {
  if (s.body->tag == Tag::Abs) out.push_back(lam_step(s, sc));
  if (s.body->tag == Tag::App) {
    out.push_back(app_step(s, 0, sc));
    out.push_back(app_step(s, 1, sc));
  }
}

int lowest_vacuous(const ExplorationState& s) {
  if (s.n == 0) return -1;
  std::vector<char> used(s.n, 0);
  for (int i : free_vars(s.body))
    if (i < s.n) used[s.n - 1 - i] = 1;
  for (int k = 0; k < s.n; ++k)
    if (!used[k]) return k;
  return -1;
}

struct StateHash {
  std::size_t operator()(const ExplorationState& s) const { return s.body->hash * 31 + static_cast<std::size_t>(s.n); }
};
struct StateEq {
  bool operator()(const ExplorationState& a, const ExplorationState& b) const {
    return a.n == b.n && equal(a.body, b.body);
  }
};

}  // namespace

std::vector<Step> decomp_steps(const ExplorationState& s0, System sys, const Scheme* sc) {
  ExplorationState s = normalize(s0, sc);
  std::vector<Step> out;
  structural(s, out, sc);
  if (sys == System::RegPlus && s.n > 0 && is_vacuous(s, s.n - 1)) out.push_back(s_step(s));
  if (sys == System::Reg)
    for (int k = 0; k < s.n; ++k)
      if (is_vacuous(s, k)) out.push_back(del_step(s, k));
  return out;
}

std::vector<Step> strategy_steps(const ExplorationState& s0, StrategyKind k, const Scheme* sc) {
  ExplorationState s = normalize(s0, sc);
  std::vector<Step> out;
  bool var = s.body->tag == Tag::Var;
  switch (k) {
    case StrategyKind::EagerRegPlus:
      if (s.n > 0 && is_vacuous(s, s.n - 1)) out.push_back(s_step(s));
      else structural(s, out, sc);
      break;
    case StrategyKind::LazyRegPlus:
      if (var && s.body->a > 0) out.push_back(s_step(s));
      else structural(s, out, sc);
      break;
    case StrategyKind::EagerReg: {
      int v = lowest_vacuous(s);
      if (v >= 0) out.push_back(del_step(s, v));
      else structural(s, out, sc);
      break;
    }
    case StrategyKind::LazyReg:
      if (var && s.n > 1) out.push_back(del_step(s, lowest_vacuous(s)));
      else structural(s, out, sc);
      break;
  }
  return out;
}

std::vector<std::vector<Transition>> Exploration::out() const {
  std::vector<std::vector<Transition>> o(states.size());
  for (const auto& t : transitions) o[t.from].push_back(t);
  return o;
}

Exploration generated_subterms(const Term& t, StrategyKind k, const ExploreOptions& opt, const Scheme* sc) {
  if (opt.check_productive && !sc && !contains_tag(t, Tag::Call)) {
    ProductivityResult pr = is_productive(t);
    if (!pr.productive) {
      std::string cyc;
      for (const auto& l : pr.cycle_labels) cyc += (cyc.empty() ? "" : " → ") + l;
      throw Error(ErrorKind::Unproductive, "unproductive: unguarded access cycle " + cyc);
    }
  }
  Exploration e;
  e.strategy = k;
  std::unordered_map<ExplorationState, int, StateHash, StateEq> index;
  auto add = [&](ExplorationState s, int parent, DecompLabel l) {
    auto [it, fresh] = index.emplace(s, static_cast<int>(e.states.size()));
    if (fresh) {
      e.states.push_back(std::move(s));
      e.parent.push_back(parent);
      e.parent_label.push_back(l);
    }
    return std::pair<int, bool>{it->second, fresh};
  };
  add(initial_state(t, sc, opt.with_origin), -1, {DecompLabel::Lam});
  if (opt.on_new && opt.on_new(e, 0)) {
    e.stopped = true;
    return e;
  }
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    for (auto& [l, s] : strategy_steps(e.states[i], k, sc)) {
      auto [id, fresh] = add(std::move(s), static_cast<int>(i), l);
      e.transitions.push_back({static_cast<int>(i), l, id});
      if (fresh) {
        if (static_cast<int>(e.states.size()) > opt.bound) {
          e.exceeded = true;
          return e;
        }
        if (opt.on_new && opt.on_new(e, id)) {
          e.stopped = true;
          return e;
        }
      }
    }
  }
  return e;
}

Exploration generated_subterms(const Scheme& s, StrategyKind k, const ExploreOptions& opt) {
  return generated_subterms(s.cmain, k, opt, &s);
}

std::optional<ExplorationState> replay(const ExplorationState& from, const std::vector<DecompLabel>& labels,
                                       StrategyKind k, const Scheme* sc) {
  ExplorationState cur = from;
  for (const auto& l : labels) {
    bool found = false;
    for (auto& [l2, s] : strategy_steps(cur, k, sc))
      if (l2 == l) {
        cur = std::move(s);
        found = true;
        break;
      }
    if (!found) return std::nullopt;
  }
  return cur;
}

std::optional<PumpWitness> find_pump(const Exploration& e, int state, const Scheme* sc) {
  const ExplorationState& v = e.states[state];
  int min_n = v.n;
  std::vector<DecompLabel> rev;
  for (int a = state; e.parent[a] >= 0;) {
    rev.push_back(e.parent_label[a]);
    a = e.parent[a];
    const ExplorationState& s = e.states[a];
    if (s.n < v.n && min_n >= s.n && equal(s.body, v.body)) {
      PumpWitness w;
      w.first = a;
      w.second = state;
      w.n1 = s.n;
      w.n2 = v.n;
      w.path.assign(rev.rbegin(), rev.rend());
      w.first_text = print_state(s, sc);
      w.second_text = print_state(v, sc);
      if (verify_pump(e, w, sc)) return w;
    }
    min_n = std::min(min_n, s.n);
  }
  return std::nullopt;
}

bool verify_pump(const Exploration& e, PumpWitness& w, const Scheme* sc) {
  const ExplorationState& a = e.states[w.first];
  auto once = replay(a, w.path, e.strategy, sc);
  if (!once || once->n != w.n2 || !equal(once->body, a.body)) return w.verified = false;
  auto twice = replay(*once, w.path, e.strategy, sc);
  w.verified = twice && twice->n == 2 * w.n2 - w.n1 && equal(twice->body, a.body);
  return w.verified;
}

ExplorationState navigate(const Term& t, const Position& q, const Scheme* sc) {
  ExplorationState cur = initial_state(t, sc, true);
  const auto& path = q.path;
  std::size_t i = 0;
  auto bad = [&]() { return Error(ErrorKind::PositionOutOfRange, "position " + q.str() + " out of range"); };
  while (i < path.size()) {
    if (cur.body->tag == Tag::Abs) {
      if (path[i] != 0 || i + 1 >= path.size() || path[i + 1] != 0) throw bad();
      cur = lam_step(cur, sc).second;
      i += 2;
    } else if (cur.body->tag == Tag::App) {
      if (path[i] != 0 && path[i] != 1) throw bad();
      cur = app_step(cur, path[i], sc).second;
      i += 1;
    } else {
      throw bad();
    }
  }
  return cur;
}

namespace {

Position binder_of(const ExplorationState& s) { return s.origin->p[s.n - 1 - s.body->a]; }

std::optional<Position> find_bound_occurrence(const Term& t, const Position& scope, const Position& binder,
                                              const Scheme* sc, int cap = 256) {
  std::deque<ExplorationState> q{navigate(t, scope, sc)};
  for (int seen = 0; !q.empty() && seen < cap; ++seen) {
    ExplorationState s = std::move(q.front());
    q.pop_front();
    if (s.body->tag == Tag::Var) {
      if (binder_of(s) == binder) return s.origin->q;
      continue;
    }
    for (auto& [l, r] : decomp_steps(s, System::RegMinus, sc)) q.push_back(std::move(r));
  }
  return std::nullopt;
}

std::vector<Position> chain_from(const Term& t, const std::vector<Position>& p, const Scheme* sc) {
  std::vector<Position> c;
  if (p.empty()) return c;
  c.push_back(p[0]);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    auto occ = find_bound_occurrence(t, p[k + 1].child2(0, 0), p[k], sc);
    if (!occ) return c;
    c.push_back(*occ);
    c.push_back(p[k + 1]);
  }
  if (auto last = find_bound_occurrence(t, p.back().child2(0, 0), p.back(), sc)) c.push_back(*last);
  return c;
}

}  // namespace

bool binds(const Term& t, const Position& p, const Position& q, const Scheme* sc) {
  ExplorationState a = navigate(t, p, sc);
  if (a.body->tag != Tag::Abs) throw Error(ErrorKind::PositionOutOfRange, "no abstraction at " + p.str());
  ExplorationState v = navigate(t, q, sc);
  if (v.body->tag != Tag::Var) throw Error(ErrorKind::PositionOutOfRange, "no variable at " + q.str());
  return binder_of(v) == p;
}

bool captured_by(const Term& t, const Position& q, const Position& p, const Scheme* sc) {
  ExplorationState a = navigate(t, p, sc);
  if (a.body->tag != Tag::Abs) throw Error(ErrorKind::PositionOutOfRange, "no abstraction at " + p.str());
  ExplorationState v = navigate(t, q, sc);
  if (v.body->tag != Tag::Var) throw Error(ErrorKind::PositionOutOfRange, "no variable at " + q.str());
  Position b = binder_of(v);
  return p.child2(0, 0).is_prefix_of(q) && b.is_prefix_of(p) && !(b == p);
}

std::string format_chain(const std::vector<Position>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += i % 2 ? " ◁ " : " ⊣ ";
    s += c[i].str();
  }
  return s;
}

ChainReport chains(const Term& t, int max_len, int bound, const Scheme* sc) {
  ExploreOptions opt;
  opt.bound = bound;
  ChainReport r;
  std::optional<PumpWitness> pump;
  opt.on_new = [&](const Exploration& e, int id) {
    if (sc || contains_tag(t, Tag::Call)) pump = find_pump(e, id, sc);
    return pump.has_value();
  };
  Exploration e = generated_subterms(t, StrategyKind::EagerRegPlus, opt, sc);
  int best = 0;
  for (std::size_t i = 0; i < e.states.size(); ++i)
    if (e.states[i].n > e.states[best].n) best = static_cast<int>(i);
  int n = e.states[best].n;
  std::vector<Position> ps = e.states[best].origin->p;
  if (pump) {
    verify_pump(e, *pump, sc);
    r.infinite = true;
    r.witness = pump;
  } else if (e.exceeded) {
    r.capped = true;
  }
  int links = std::max(0, n - 1);
  if (r.infinite || r.capped) {
    links = std::min(links, max_len);
    ps.resize(std::min<std::size_t>(ps.size(), static_cast<std::size_t>(links) + 1));
  }
  r.max_finite_length = links;
  r.sample_chain = chain_from(t, ps, sc);
  return r;
}

ChainReport chains(const Scheme& s, int max_len, int bound) { return chains(s.cmain, max_len, bound, &s); }

}  // namespace llx
