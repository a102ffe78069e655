#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace llx::oracle {

namespace {

using Env = std::vector<std::pair<std::string, int>>;

int lookup(const Env& env, const std::string& x) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == x) return it->second;
  return -1;
}

bool alpha(const NTerm& a, const NTerm& b, Env& ea, Env& eb, int& next) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case NTag::Var: {
      int i = lookup(ea, a->name), j = lookup(eb, b->name);
      if (i < 0 && j < 0) return a->name == b->name;
      return i == j;
    }
    case NTag::Abs: {
      int id = next++;
      ea.emplace_back(a->name, id);
      eb.emplace_back(b->name, id);
      bool r = alpha(a->a, b->a, ea, eb, next);
      ea.pop_back();
      eb.pop_back();
      return r;
    }
    case NTag::App:
      return alpha(a->a, b->a, ea, eb, next) && alpha(a->b, b->b, ea, eb, next);
    case NTag::Letrec: {
      if (a->binds.size() != b->binds.size()) return false;
      for (std::size_t i = 0; i < a->binds.size(); ++i) {
        int id = next++;
        ea.emplace_back(a->binds[i].first, id);
        eb.emplace_back(b->binds[i].first, id);
      }
      bool r = alpha(a->a, b->a, ea, eb, next);
      for (std::size_t i = 0; r && i < a->binds.size(); ++i)
        r = alpha(a->binds[i].second, b->binds[i].second, ea, eb, next);
      ea.resize(ea.size() - a->binds.size());
      eb.resize(eb.size() - b->binds.size());
      return r;
    }
    case NTag::Hole:
    case NTag::Bottom:
      return true;
    case NTag::Call: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!alpha(a->args[i], b->args[i], ea, eb, next)) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Named unfolding. Every binder crossed on the way down gets a fresh name, so
// substitution never captures.

class Unfolder {
 public:
  explicit Unfolder(int limit) : limit_(limit) {}

  std::string fresh(const std::string& base) { return base + "#" + std::to_string(counter_++); }

  // Renames free occurrences of x to y.
  static NTerm rename(const NTerm& t, const std::string& x, const std::string& y) {
    switch (t->tag) {
      case NTag::Var:
        return t->name == x ? nvar(y) : t;
      case NTag::Abs:
        return t->name == x ? t : nabs(t->name, rename(t->a, x, y));
      case NTag::App:
        return napp(rename(t->a, x, y), rename(t->b, x, y));
      case NTag::Letrec: {
        for (const auto& [n, _] : t->binds)
          if (n == x) return t;
        std::vector<std::pair<std::string, NTerm>> bs;
        for (const auto& [n, r] : t->binds) bs.emplace_back(n, rename(r, x, y));
        return nletrec(bs, rename(t->a, x, y));
      }
      default:
        return t;
    }
  }

  using Names = std::vector<const std::string*>;

  static bool has(const Names& v, const std::string& x) {
    for (const auto* n : v)
      if (*n == x) return true;
    return false;
  }

  static void free_names(const NTerm& t, Names& bound, Names& out) {
    switch (t->tag) {
      case NTag::Var:
        if (!has(bound, t->name) && !has(out, t->name)) out.push_back(&t->name);
        return;
      case NTag::Abs:
        bound.push_back(&t->name);
        free_names(t->a, bound, out);
        bound.pop_back();
        return;
      case NTag::App:
        free_names(t->a, bound, out);
        free_names(t->b, bound, out);
        return;
      case NTag::Letrec:
        for (const auto& b : t->binds) bound.push_back(&b.first);
        for (const auto& b : t->binds) free_names(b.second, bound, out);
        free_names(t->a, bound, out);
        bound.resize(bound.size() - t->binds.size());
        return;
      default:
        return;
    }
  }

  static Names free_names(const NTerm& t) {
    Names bound, out;
    free_names(t, bound, out);
    return out;
  }

  // Drops bindings the body cannot reach.
  static NTerm collect(const NTerm& t) {
    const auto& bs = t->binds;
    auto slot = [&](const std::string& x) {
      for (std::size_t i = 0; i < bs.size(); ++i)
        if (bs[i].first == x) return static_cast<int>(i);
      return -1;
    };
    std::vector<char> live(bs.size(), 0);
    std::vector<int> work;
    auto mark = [&](const Names& ns) {
      for (const auto* n : ns) {
        int i = slot(*n);
        if (i >= 0 && !live[i]) {
          live[i] = 1;
          work.push_back(i);
        }
      }
    };
    mark(free_names(t->a));
    while (!work.empty()) {
      int i = work.back();
      work.pop_back();
      mark(free_names(bs[i].second));
    }
    std::size_t n = std::count(live.begin(), live.end(), 1);
    if (n == 0) return t->a;
    if (n == bs.size()) return t;
    std::vector<std::pair<std::string, NTerm>> kept;
    for (std::size_t i = 0; i < bs.size(); ++i)
      if (live[i]) kept.push_back(bs[i]);
    return nletrec(kept, t->a);
  }

  // Root rewrites until the root is a λ, @ or variable; nullptr when the
  // step limit is reached first.
  NTerm head(NTerm t) {
    for (int steps = 0;; ++steps) {
      if (t->tag != NTag::Letrec) return t;
      if (steps > limit_) return nullptr;
      t = collect(t);
      if (t->tag != NTag::Letrec) continue;
      const NTerm& m = t->a;
      switch (m->tag) {
        case NTag::Var: {
          NTerm rhs;
          for (const auto& [n, r] : t->binds)
            if (n == m->name) rhs = r;
          t = rhs ? nletrec(t->binds, rhs) : m;
          break;
        }
        case NTag::Abs: {
          std::string x = fresh(m->name);
          return nabs(x, nletrec(t->binds, rename(m->a, m->name, x)));
        }
        case NTag::App:
          return napp(nletrec(t->binds, m->a), nletrec(t->binds, m->b));
        case NTag::Letrec: {
          std::vector<std::pair<std::string, NTerm>> inner = m->binds;
          NTerm body = m->a;
          for (auto& [n, _] : m->binds) {
            std::string y = fresh(n);
            for (auto& b : inner) b.second = rename(b.second, n, y);
            body = rename(body, n, y);
            for (auto& b : inner)
              if (b.first == n) b.first = y;
          }
          std::vector<std::pair<std::string, NTerm>> all = t->binds;
          all.insert(all.end(), inner.begin(), inner.end());
          t = nletrec(all, body);
          break;
        }
        default:
          return m;
      }
    }
  }

 private:
  int limit_;
  long counter_ = 0;
};

// Key modulo renaming of bound names; free variables all print as '*'.
void key(const NTerm& t, Env& env, int& next, std::string& out) {
  switch (t->tag) {
    case NTag::Var: {
      int i = lookup(env, t->name);
      out += i < 0 ? std::string("*") : "v" + std::to_string(i);
      return;
    }
    case NTag::Abs:
      env.emplace_back(t->name, next++);
      out += "(L";
      key(t->a, env, next, out);
      out += ")";
      env.pop_back();
      return;
    case NTag::App:
      out += "(A";
      key(t->a, env, next, out);
      out += " ";
      key(t->b, env, next, out);
      out += ")";
      return;
    case NTag::Letrec:
      out += "(R";
      for (const auto& b : t->binds) env.emplace_back(b.first, next++);
      for (const auto& b : t->binds) {
        key(b.second, env, next, out);
        out += ",";
      }
      key(t->a, env, next, out);
      out += ")";
      env.resize(env.size() - t->binds.size());
      return;
    default:
      out += "?";
      return;
  }
}

std::string key(const NTerm& t) {
  Env env;
  int next = 0;
  std::string s;
  key(t, env, next, s);
  return s;
}

NTerm unfold_rec(Unfolder& u, const NTerm& t, int d) {
  NTerm h = u.head(t);
  if (!h) throw std::runtime_error("root stagnates");
  switch (h->tag) {
    case NTag::Var:
      return h;
    case NTag::Abs:
      return d == 0 ? nhole() : nabs(h->name, unfold_rec(u, h->a, d - 1));
    case NTag::App:
      return d == 0 ? nhole() : napp(unfold_rec(u, h->a, d - 1), unfold_rec(u, h->b, d - 1));
    default:
      throw std::runtime_error("unexpected node in unfolding");
  }
}

void gen(int size, const std::vector<std::string>& scope, const std::vector<std::string>& names,
         const std::function<void(const NTerm&)>& fn);

// All ways to fill `rhs.size()` right-hand sides and a body with total size
// `budget` under `scope`.
void gen_group(std::size_t i, int budget, std::vector<NTerm>& parts, const std::vector<std::string>& scope,
               const std::vector<std::string>& names, const std::function<void(const std::vector<NTerm>&)>& fn) {
  if (i + 1 == parts.size()) {
    gen(budget, scope, names, [&](const NTerm& t) {
      parts[i] = t;
      fn(parts);
    });
    return;
  }
  int rest = static_cast<int>(parts.size() - i - 1);
  for (int k = 1; k <= budget - rest; ++k)
    gen(k, scope, names, [&](const NTerm& t) {
      parts[i] = t;
      gen_group(i + 1, budget - k, parts, scope, names, fn);
    });
}

// Callbacks run while the generator is suspended, so every extended scope is
// a copy.
void gen(int size, const std::vector<std::string>& scope, const std::vector<std::string>& names,
         const std::function<void(const NTerm&)>& fn) {
  if (size <= 0) return;
  if (size == 1) {
    std::set<std::string> seen(scope.begin(), scope.end());
    for (const auto& x : seen) fn(nvar(x));
    return;
  }
  // A binder that shadows nothing only takes the first unused name; the other
  // choices are renamings of it.
  auto unused = [&](const std::string& x) { return std::find(scope.begin(), scope.end(), x) == scope.end(); };
  std::string first_unused;
  for (const auto& x : names)
    if (unused(x)) {
      first_unused = x;
      break;
    }
  for (const auto& x : names) {
    if (unused(x) && x != first_unused) continue;
    std::vector<std::string> inner = scope;
    inner.push_back(x);
    gen(size - 1, inner, names, [&](const NTerm& b) { fn(nabs(x, b)); });
  }
  for (int k = 1; k <= size - 2; ++k)
    gen(k, scope, names, [&](const NTerm& f) {
      gen(size - 1 - k, scope, names, [&](const NTerm& a) { fn(napp(f, a)); });
    });
  // letrec with n distinct names: 1 + n rhss + body
  std::size_t m = names.size();
  for (std::size_t n = 1; n <= m && static_cast<int>(n) + 2 <= size; ++n) {
    std::vector<std::size_t> pick;
    std::function<void()> choose = [&]() {
      if (pick.size() == n) {
        std::vector<std::pair<std::string, NTerm>> skel;
        std::vector<std::string> inner = scope;
        for (auto p : pick) {
          inner.push_back(names[p]);
          skel.emplace_back(names[p], nullptr);
        }
        std::vector<NTerm> parts(n + 1);
        gen_group(0, size - 1, parts, inner, names, [&](const std::vector<NTerm>& ps) {
          auto bs = skel;
          for (std::size_t i = 0; i < n; ++i) bs[i].second = ps[i];
          fn(nletrec(bs, ps[n]));
        });
        return;
      }
      bool fresh_taken = false;  // only the lowest unpicked unused name
      for (std::size_t i = 0; i < m; ++i) {
        bool used = false;
        for (auto p : pick) used = used || p == i;
        if (used) continue;
        if (unused(names[i])) {
          if (fresh_taken) continue;
          fresh_taken = true;
        }
        pick.push_back(i);
        choose();
        pick.pop_back();
      }
    };
    choose();
  }
}

// Nameless enumeration. Binders get flat ids in scope order; a node's
// reference mask is the set of outer binders it mentions. A binder needs a
// name different from every outer binder still referenced inside its scope,
// and naming top-down greedily is optimal, so a term fits in k names iff at
// every binder: |outer references| + own binders ≤ k.
struct ClassGen {
  struct Entry {
    bool lam;
    int first;  // flat id of the first binder
    int n;
  };
  int k;
  std::vector<Entry> scope;
  int binders = 0;

  using Emit = std::function<void(const Term&, std::uint32_t)>;

  Term ref(int id) const {
    int lams = 0, groups = 0;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (id >= it->first && id < it->first + it->n)
        return it->lam ? mk_var(lams) : mk_rec(groups, id - it->first);
      (it->lam ? lams : groups)++;
    }
    return nullptr;
  }

  void gen(int size, const Emit& fn) {
    if (size <= 0) return;
    if (size == 1) {
      for (int id = 0; id < binders; ++id) fn(ref(id), 1u << id);
      return;
    }
    {
      int id = binders;
      scope.push_back({true, id, 1});
      ++binders;
      std::uint32_t own = 1u << id;
      gen(size - 1, [&](const Term& b, std::uint32_t m) {
        std::uint32_t outer = m & ~own;
        if (std::popcount(outer) + 1 > k) return;
        // callers see the scope they called with
        Entry e = scope.back();
        scope.pop_back();
        --binders;
        fn(mk_abs(b), outer);
        scope.push_back(e);
        ++binders;
      });
      --binders;
      scope.pop_back();
    }
    for (int a = 1; a <= size - 2; ++a)
      gen(a, [&](const Term& f, std::uint32_t mf) {
        gen(size - 1 - a, [&](const Term& x, std::uint32_t mx) { fn(mk_app(f, x), mf | mx); });
      });
    for (int n = 1; n <= k && n + 2 <= size; ++n) {
      int first = binders;
      scope.push_back({false, first, n});
      binders += n;
      std::uint32_t own = ((1u << n) - 1) << first;
      std::vector<Term> parts(n + 1);
      std::function<void(int, int, std::uint32_t)> fill = [&](int i, int budget, std::uint32_t m) {
        if (i == n) {
          gen(budget, [&](const Term& body, std::uint32_t mb) {
            std::uint32_t outer = (m | mb) & ~own;
            if (std::popcount(outer) + n > k) return;
            Term t = mk_letrec({parts.begin(), parts.begin() + n}, body);
            Entry e = scope.back();
            scope.pop_back();
            binders -= n;
            fn(t, outer);
            scope.push_back(e);
            binders += n;
          });
          return;
        }
        for (int c = 1; c <= budget - (n - i); ++c)
          gen(c, [&](const Term& r, std::uint32_t mr) {
            parts[i] = r;
            fill(i + 1, budget - c, m | mr);
          });
      };
      fill(0, size - 1, 0);
      binders -= n;
      scope.pop_back();
    }
  }
};

NTerm random_rec(std::mt19937_64& rng, int budget, std::vector<std::string>& scope,
                 const std::vector<std::string>& names, bool allow_letrec) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  if (budget <= 1 || (budget == 2 && !scope.empty() && pick(2) == 0)) {
    if (scope.empty()) {
      const std::string& x = names[pick(names.size())];
      return nabs(x, nvar(x));
    }
    return nvar(scope[pick(scope.size())]);
  }
  int choice = static_cast<int>(pick(allow_letrec && budget >= 3 ? 4 : 3));
  if (choice == 0 && !scope.empty()) return nvar(scope[pick(scope.size())]);
  if (choice <= 1 || budget < 3) {
    const std::string& x = names[pick(names.size())];
    scope.push_back(x);
    NTerm b = random_rec(rng, budget - 1, scope, names, allow_letrec);
    scope.pop_back();
    return nabs(x, b);
  }
  if (choice == 2) {
    int k = 1 + static_cast<int>(pick(static_cast<std::size_t>(budget - 2)));
    NTerm f = random_rec(rng, k, scope, names, allow_letrec);
    NTerm a = random_rec(rng, budget - 1 - k, scope, names, allow_letrec);
    return napp(f, a);
  }
  std::size_t n = 1 + pick(std::min<std::size_t>(names.size(), budget >= 5 ? 2 : 1));
  std::vector<std::string> pool = names;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<std::pair<std::string, NTerm>> bs;
  for (std::size_t i = 0; i < n; ++i) scope.push_back(pool[i]);
  int left = budget - 1;
  for (std::size_t i = 0; i < n; ++i) {
    int share = std::max(1, left / static_cast<int>(n + 1 - i));
    bs.emplace_back(pool[i], random_rec(rng, share, scope, names, allow_letrec));
    left -= share;
  }
  NTerm body = random_rec(rng, std::max(1, left), scope, names, allow_letrec);
  scope.resize(scope.size() - n);
  return nletrec(bs, body);
}

}  // namespace

bool alpha_equal(const NTerm& a, const NTerm& b) {
  Env ea, eb;
  int next = 0;
  return alpha(a, b, ea, eb, next);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Productive: return "productive";
    case Verdict::Unproductive: return "unproductive";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

Verdict StagnationOracle::check(const NTerm& t) {
  Unfolder u(root_steps_);
  std::string k0 = key(t);
  if (auto it = known_.find(k0); it != known_.end()) return it->second ? Verdict::Productive : Verdict::Unproductive;
  std::unordered_set<std::string> seen{k0};
  std::vector<NTerm> work{t};
  while (!work.empty()) {
    NTerm s = work.back();
    work.pop_back();
    NTerm h = u.head(s);
    if (!h) {
      known_[key(s)] = false;
      known_[k0] = false;
      return Verdict::Unproductive;
    }
    std::vector<NTerm> kids;
    if (h->tag == NTag::Abs) kids.push_back(h->a);
    if (h->tag == NTag::App) kids = {h->a, h->b};
    for (const auto& c : kids) {
      std::string k = key(c);
      if (auto it = known_.find(k); it != known_.end()) {
        if (it->second) continue;
        known_[k0] = false;
        return Verdict::Unproductive;
      }
      if (seen.insert(std::move(k)).second) {
        if (seen.size() > cap_) return Verdict::Undecided;
        work.push_back(c);
      }
    }
  }
  // nothing reachable stagnates, so every explored subterm is productive
  for (auto& k : seen) known_.emplace(k, true);
  return Verdict::Productive;
}

Verdict stagnation(const NTerm& t, int root_steps, std::size_t cap) {
  StagnationOracle o(root_steps, cap);
  return o.check(t);
}

NTerm unfold_depth(const NTerm& t, int d, int root_steps) {
  Unfolder u(root_steps);
  return unfold_rec(u, t, d);
}

Term scheme_depth(const Scheme& s, int d) {
  std::function<Term(Term, int)> go = [&](Term t, int d) -> Term {
    for (int guard = 0; t->tag == Tag::Call; ++guard) {
      if (guard > 10000) throw std::runtime_error("scheme call loop");
      t = s.expand(t->a, t->args);
    }
    switch (t->tag) {
      case Tag::Var:
        return t;
      case Tag::Abs:
        return d == 0 ? mk_hole() : mk_abs(go(t->kids[0], d - 1));
      case Tag::App:
        return d == 0 ? mk_hole() : mk_app(go(t->kids[0], d - 1), go(t->kids[1], d - 1));
      default:
        throw std::runtime_error("scheme bodies with letrec are not covered");
    }
  };
  return go(s.cmain, d);
}

int size(const NTerm& t) {
  switch (t->tag) {
    case NTag::Abs: return 1 + size(t->a);
    case NTag::App: return 1 + size(t->a) + size(t->b);
    case NTag::Letrec: {
      int n = 1 + size(t->a);
      for (const auto& b : t->binds) n += size(b.second);
      return n;
    }
    default: return 1;
  }
}

void for_each_closed(int max_size, const std::vector<std::string>& names,
                     const std::function<void(const NTerm&)>& fn) {
  std::vector<std::string> scope;
  for (int n = 1; n <= max_size; ++n) gen(n, scope, names, fn);
}

void for_each_closed_class(int max_size, int names, const std::function<void(const Term&)>& fn) {
  ClassGen g{names, {}, 0};
  for (int n = 1; n <= max_size; ++n) g.gen(n, [&](const Term& t, std::uint32_t) { fn(t); });
}

NTerm random_term(std::mt19937_64& rng, int max_size, const std::vector<std::string>& names, bool allow_letrec) {
  std::vector<std::string> scope;
  int budget = std::uniform_int_distribution<int>(2, std::max(2, max_size))(rng);
  return random_rec(rng, budget, scope, names, allow_letrec);
}

}  // namespace llx::oracle
