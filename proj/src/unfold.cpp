#include "llx/unfold.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "llx/syntax.hpp"

namespace llx {

const char* rule_name(UnfoldRule r) {
  switch (r) {
    case UnfoldRule::NuApp: return "@";
    case UnfoldRule::NuLam: return "λ";
    case UnfoldRule::NuMerge: return "merge";
    case UnfoldRule::NuRec: return "rec";
    case UnfoldRule::NuNil: return "nil";
    case UnfoldRule::NuRed: return "red";
  }
  return "?";
}

namespace {

// Rewrites free Rec references: f(relative frame, slot, frames) gives the
// replacement for a reference that escapes `frames` enclosing letrecs.
template <class F>
Term map_recs(const Term& t, int frames, F& f) {
  switch (t->tag) {
    case Tag::Rec:
      if (t->a < frames) return t;
      return f(t->a - frames, t->b, frames);
    case Tag::Var:
    case Tag::Hole:
    case Tag::Bottom:
    case Tag::Call:
      return t;
    case Tag::Abs: {
      Term b = map_recs(t->kids[0], frames, f);
      return b == t->kids[0] ? t : mk_abs(b);
    }
    case Tag::App: {
      Term x = map_recs(t->kids[0], frames, f);
      Term y = map_recs(t->kids[1], frames, f);
      return (x == t->kids[0] && y == t->kids[1]) ? t : mk_app(x, y);
    }
    case Tag::Letrec: {
      std::vector<Term> ks;
      bool same = true;
      for (const auto& k : t->kids) {
        ks.push_back(map_recs(k, frames + 1, f));
        same = same && ks.back() == k;
      }
      return same ? t : mk_letrec({ks.begin(), ks.end() - 1}, ks.back());
    }
  }
  return t;
}

// Marks slots of the frame that is `frames` letrecs above t's root.
void mark_refs(const Term& t, int frames, std::vector<char>& hit) {
  switch (t->tag) {
    case Tag::Rec:
      if (t->a == frames && t->b < static_cast<int>(hit.size())) hit[t->b] = 1;
      return;
    case Tag::Letrec:
      for (const auto& k : t->kids) mark_refs(k, frames + 1, hit);
      return;
    default:
      for (const auto& k : t->kids) mark_refs(k, frames, hit);
  }
}

std::vector<char> reachable_slots(const Term& t) {
  int n = t->nbinds();
  std::vector<char> hit(n, 0), done(n, 0);
  mark_refs(t->body(), 0, hit);
  for (bool more = true; more;) {
    more = false;
    for (int i = 0; i < n; ++i)
      if (hit[i] && !done[i]) {
        done[i] = 1;
        mark_refs(t->kids[i], 0, hit);
        more = true;
      }
  }
  return hit;
}

bool red_applies(const Term& t) {
  auto r = reachable_slots(t);
  return std::find(r.begin(), r.end(), 0) != r.end();
}

[[noreturn]] void invalid(UnfoldRule r, const std::string& why) {
  throw Error(ErrorKind::InvalidStep, std::string("no ") + rule_name(r) + "-redex: " + why);
}

void walk_letrecs(const Term& t, const Position& at, std::vector<Position>& out) {
  switch (t->tag) {
    case Tag::Abs:
      walk_letrecs(t->kids[0], at.child2(0, 0), out);
      return;
    case Tag::App:
      walk_letrecs(t->kids[0], at.child(0), out);
      walk_letrecs(t->kids[1], at.child(1), out);
      return;
    case Tag::Letrec:
      out.push_back(at);
      walk_letrecs(t->body(), at.child(0), out);
      for (int i = 0; i < t->nbinds(); ++i) walk_letrecs(t->kids[i], at.child(i + 1), out);
      return;
    default:
      return;
  }
}

std::size_t child_index(const Term& t, const std::vector<int>& path, std::size_t& i) {
  int c = path[i];
  switch (t->tag) {
    case Tag::Abs:
      if (c != 0 || i + 1 >= path.size() || path[i + 1] != 0) break;
      i += 2;
      return 0;
    case Tag::App:
      if (c != 0 && c != 1) break;
      i += 1;
      return static_cast<std::size_t>(c);
    case Tag::Letrec:
      if (c < 0 || c > t->nbinds()) break;
      i += 1;
      return c == 0 ? t->kids.size() - 1 : static_cast<std::size_t>(c - 1);
    default:
      break;
  }
  throw Error(ErrorKind::PositionOutOfRange, "position out of range");
}

Term replace_rec(const Term& t, const std::vector<int>& path, std::size_t i, const Term& with) {
  if (i == path.size()) return with;
  std::size_t j = i;
  std::size_t k = child_index(t, path, j);
  Term nk = replace_rec(t->kids[k], path, j, with);
  switch (t->tag) {
    case Tag::Abs: return mk_abs(nk);
    case Tag::App: return k == 0 ? mk_app(nk, t->kids[1]) : mk_app(t->kids[0], nk);
    default: {
      std::vector<Term> ks = t->kids;
      ks[k] = nk;
      return mk_letrec({ks.begin(), ks.end() - 1}, ks.back());
    }
  }
}

Term reduce_root(const Term& t) {
  Term u = t;
  if (u->nbinds() > 0 && red_applies(u)) u = rewrite_root(u, UnfoldRule::NuRed);
  if (u->nbinds() == 0) u = rewrite_root(u, UnfoldRule::NuNil);
  return u;
}

}  // namespace

std::vector<std::pair<UnfoldRule, int>> root_rules(const Term& t) {
  std::vector<std::pair<UnfoldRule, int>> out;
  if (t->tag != Tag::Letrec) return out;
  const Term& b = t->body();
  switch (b->tag) {
    case Tag::Abs: out.emplace_back(UnfoldRule::NuLam, -1); break;
    case Tag::App: out.emplace_back(UnfoldRule::NuApp, -1); break;
    case Tag::Letrec: out.emplace_back(UnfoldRule::NuMerge, -1); break;
    case Tag::Rec:
      if (b->a == 0) out.emplace_back(UnfoldRule::NuRec, b->b);
      break;
    default: break;
  }
  if (t->nbinds() == 0) out.emplace_back(UnfoldRule::NuNil, -1);
  else if (red_applies(t)) out.emplace_back(UnfoldRule::NuRed, -1);
  return out;
}

std::pair<UnfoldRule, int> root_step_rule(const Term& t) {
  auto rs = root_rules(t);
  for (const auto& r : rs)
    if (r.first == UnfoldRule::NuRed) return r;
  if (t->nbinds() == 0) return {UnfoldRule::NuNil, -1};
  if (rs.empty()) invalid(UnfoldRule::NuRed, "not a letrec");
  return rs.front();
}

Term rewrite_root(const Term& t, UnfoldRule rule, int slot) {
  if (t->tag != Tag::Letrec) invalid(rule, "not a letrec");
  const int n = t->nbinds();
  const Term& body = t->body();
  std::vector<Term> rhss(t->kids.begin(), t->kids.end() - 1);
  switch (rule) {
    case UnfoldRule::NuLam: {
      if (body->tag != Tag::Abs) invalid(rule, "body is not an abstraction");
      for (auto& r : rhss) r = shift(r, 1, 0);
      return mk_abs(mk_letrec(rhss, body->kids[0]));
    }
    case UnfoldRule::NuApp: {
      if (body->tag != Tag::App) invalid(rule, "body is not an application");
      return mk_app(mk_letrec(rhss, body->kids[0]), mk_letrec(rhss, body->kids[1]));
    }
    case UnfoldRule::NuRec: {
      if (body->tag != Tag::Rec || body->a != 0) invalid(rule, "body is not a bound recursion variable");
      if (slot >= 0 && slot != body->b) invalid(rule, "wrong slot");
      return mk_letrec(rhss, rhss[body->b]);
    }
    case UnfoldRule::NuMerge: {
      if (body->tag != Tag::Letrec) invalid(rule, "body is not a letrec");
      auto f = [n](int rel, int s, int frames) -> Term {
        if (rel == 0) return mk_rec(frames, n + s);
        return mk_rec(rel - 1 + frames, s);
      };
      std::vector<Term> all = rhss;
      for (int i = 0; i < body->nbinds(); ++i) all.push_back(map_recs(body->kids[i], 0, f));
      return mk_letrec(all, map_recs(body->body(), 0, f));
    }
    case UnfoldRule::NuNil: {
      if (n != 0) invalid(rule, "binding group is not empty");
      auto f = [](int rel, int s, int frames) -> Term { return mk_rec(rel - 1 + frames, s); };
      return map_recs(body, 0, f);
    }
    case UnfoldRule::NuRed: {
      auto keep = reachable_slots(t);
      if (std::find(keep.begin(), keep.end(), 0) == keep.end()) invalid(rule, "all bindings reachable");
      std::vector<int> renum(n, -1);
      int m = 0;
      for (int i = 0; i < n; ++i)
        if (keep[i]) renum[i] = m++;
      auto f = [&renum](int rel, int s, int frames) -> Term {
        if (rel != 0) return mk_rec(rel + frames, s);
        if (renum[s] < 0) return mk_abs(mk_var(0));
        return mk_rec(frames, renum[s]);
      };
      std::vector<Term> kept;
      for (int i = 0; i < n; ++i)
        if (keep[i]) kept.push_back(map_recs(rhss[i], 0, f));
      return mk_letrec(kept, map_recs(body, 0, f));
    }
  }
  invalid(rule, "unknown rule");
}

Term subterm_at(const Term& t, const Position& p) {
  Term cur = t;
  std::size_t i = 0;
  while (i < p.path.size()) cur = cur->kids[child_index(cur, p.path, i)];
  return cur;
}

Term replace_at(const Term& t, const Position& p, const Term& with) {
  return replace_rec(t, p.path, 0, with);
}

std::vector<UnfoldStep> enumerate_unfold_steps(const Term& t) {
  std::vector<Position> ps;
  walk_letrecs(t, Position{}, ps);
  std::vector<UnfoldStep> out;
  for (const auto& p : ps) {
    Term sub = subterm_at(t, p);
    for (auto [r, s] : root_rules(sub)) out.push_back({r, s, p, replace_at(t, p, rewrite_root(sub, r, s))});
  }
  return out;
}

std::vector<UnfoldStep> enumerate_unfold_steps(const NTerm& t) {
  return enumerate_unfold_steps(to_canonical(t));
}

Term apply_step(const Term& t, const UnfoldStep& s) {
  Term sub;
  try {
    sub = subterm_at(t, s.at);
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidStep, "no redex at " + s.at.str());
  }
  return replace_at(t, s.at, rewrite_root(sub, s.rule, s.slot));
}

NTerm apply_step(const NTerm& t, const UnfoldStep& s) {
  return to_named(apply_step(to_canonical(t), s));
}

Term reduce(const Term& t) {
  switch (t->tag) {
    case Tag::Abs: return mk_abs(reduce(t->kids[0]));
    case Tag::App: return mk_app(reduce(t->kids[0]), reduce(t->kids[1]));
    case Tag::Letrec: {
      std::vector<Term> ks;
      for (const auto& k : t->kids) ks.push_back(reduce(k));
      return reduce_root(mk_letrec({ks.begin(), ks.end() - 1}, ks.back()));
    }
    default: return t;
  }
}

NTerm reduce(const NTerm& t) { return to_named(reduce(to_canonical(t))); }

bool is_reduced(const Term& t) {
  if (t->tag == Tag::Letrec && (t->nbinds() == 0 || red_applies(t))) return false;
  for (const auto& k : t->kids)
    if (!is_reduced(k)) return false;
  return true;
}

RootClosure root_closure(const Term& t, int cap) {
  RootClosure rc;
  std::unordered_map<Term, int, TermHash, TermEq> seen;
  std::vector<Term> path{t};
  std::vector<UnfoldRule> rules;
  Term cur = t;
  seen.emplace(cur, 0);
  while (cur->tag == Tag::Letrec) {
    if (rc.steps >= cap) throw Error(ErrorKind::Exceeded, "root closure exceeded step cap");
    auto [r, s] = root_step_rule(cur);
    cur = rewrite_root(cur, r, s);
    ++rc.steps;
    rules.push_back(r);
    path.push_back(cur);
    auto [it, fresh] = seen.emplace(cur, static_cast<int>(path.size()) - 1);
    if (!fresh) {
      RootCycle c;
      c.entry = path[it->second];
      for (std::size_t i = it->second; i < rules.size(); ++i) {
        c.rules.push_back(rules[i]);
        c.terms.push_back(path[i + 1]);
      }
      rc.cycle = std::move(c);
      return rc;
    }
  }
  rc.head = cur;
  return rc;
}

Term truncate(const Term& t, int d) {
  switch (t->tag) {
    case Tag::Abs:
      return d == 0 ? mk_hole() : mk_abs(truncate(t->kids[0], d - 1));
    case Tag::App:
      return d == 0 ? mk_hole() : mk_app(truncate(t->kids[0], d - 1), truncate(t->kids[1], d - 1));
    case Tag::Letrec:
    case Tag::Call:
      throw std::logic_error("truncate: term is not letrec-free");
    default:
      return t;
  }
}

namespace {

std::string cycle_text(const RootCycle& c) {
  std::string s = print_term(c.entry);
  for (std::size_t i = 0; i < c.rules.size(); ++i) s += std::string(" →") + rule_name(c.rules[i]) + " " + print_term(c.terms[i]);
  return s;
}

void frontier(const Term& t, int depth, int d, const Position& at, std::vector<Position>& out) {
  switch (t->tag) {
    case Tag::Abs:
      if (depth < d) frontier(t->kids[0], depth + 1, d, at.child2(0, 0), out);
      return;
    case Tag::App:
      if (depth < d) {
        frontier(t->kids[0], depth + 1, d, at.child(0), out);
        frontier(t->kids[1], depth + 1, d, at.child(1), out);
      }
      return;
    case Tag::Letrec:
      out.push_back(at);
      return;
    default:
      return;
  }
}

Term schedule(const Term& input, int d, bool bottom, const UnfoldOptions& opt) {
  if (d < 0) throw Error(ErrorKind::Usage, "depth must be nonnegative");
  std::unordered_set<Term, TermHash, TermEq> settled;  // root closure known to terminate
  std::mt19937_64 rng(opt.seed);
  std::size_t cursor = static_cast<std::size_t>(rng());
  Term t = input;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > opt.max_steps) throw Error(ErrorKind::Exceeded, "unfolding exceeded step limit");
    std::vector<Position> fr;
    frontier(t, 0, d, Position{}, fr);
    if (fr.empty()) break;

    bool replaced = false;
    for (const auto& p : fr) {
      Term sub = subterm_at(t, p);
      if (settled.count(sub)) continue;
      RootClosure rc = root_closure(sub);
      if (rc.cycle) {
        if (!bottom)
          throw UnproductiveError("unproductive: root-stagnating subterm at " + p.str() + ": " +
                                      cycle_text(*rc.cycle),
                                  *rc.cycle);
        t = replace_at(t, p, mk_bottom());
        if (opt.trace) opt.trace->push_back("⊥@" + p.str() + " ⇒ " + print_term(t));
        replaced = true;
        break;
      }
      // every intermediate term shares the same terminating closure
      Term cur = sub;
      while (cur->tag == Tag::Letrec) {
        settled.insert(cur);
        auto [r, s] = root_step_rule(cur);
        cur = rewrite_root(cur, r, s);
      }
    }
    if (replaced) continue;

    // garbage rules first: red, and nil on a group red just emptied
    std::size_t pick = fr.size();
    for (std::size_t i = 0; i < fr.size() && pick == fr.size(); ++i) {
      Term sub = subterm_at(t, fr[i]);
      if (sub->nbinds() == 0 || red_applies(sub)) pick = i;
    }
    if (pick == fr.size()) pick = cursor++ % fr.size();
    Term sub = subterm_at(t, fr[pick]);
    auto [r, s] = root_step_rule(sub);
    t = replace_at(t, fr[pick], rewrite_root(sub, r, s));
    if (opt.trace) opt.trace->push_back(std::string(rule_name(r)) + "@" + fr[pick].str() + " ⇒ " + print_term(t));
  }
  return truncate(t, d);
}

Term lazy(const Term& t, int d, bool bottom,
          std::unordered_map<Term, Term, TermHash, TermEq>& heads) {
  Term cur = t;
  if (cur->tag == Tag::Letrec) {
    auto it = heads.find(cur);
    if (it != heads.end()) {
      cur = it->second;
    } else {
      RootClosure rc = root_closure(cur);
      if (rc.cycle) {
        if (!bottom) throw UnproductiveError("unproductive: " + cycle_text(*rc.cycle), *rc.cycle);
        heads.emplace(cur, mk_bottom());
        cur = mk_bottom();
      } else {
        heads.emplace(cur, *rc.head);
        cur = *rc.head;
      }
    }
  }
  switch (cur->tag) {
    case Tag::Abs:
      return d == 0 ? mk_hole() : mk_abs(lazy(cur->kids[0], d - 1, bottom, heads));
    case Tag::App:
      return d == 0 ? mk_hole()
                    : mk_app(lazy(cur->kids[0], d - 1, bottom, heads), lazy(cur->kids[1], d - 1, bottom, heads));
    default:
      return cur;
  }
}

}  // namespace

Term unfold_to_depth(const Term& t, int d, const UnfoldOptions& opt) { return schedule(t, d, false, opt); }

Term partial_unfold_to_depth(const Term& t, int d, const UnfoldOptions& opt) {
  return schedule(t, d, true, opt);
}

Term lazy_unfold_to_depth(const Term& t, int d, bool bottom) {
  std::unordered_map<Term, Term, TermHash, TermEq> heads;
  return lazy(t, d, bottom, heads);
}

}  // namespace llx
