#include "llx/ltg.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "llx/productivity.hpp"

namespace llx {

const char* kind_name(StateKind k) {
  switch (k) {
    case StateKind::Lam: return "lam";
    case StateKind::S: return "s";
    case StateKind::App: return "app";
    case StateKind::Var: return "var";
  }
  return "?";
}

int Ltg::add(StateKind k, int a, int b) {
  kind.push_back(k);
  next.push_back({a, b});
  return size() - 1;
}

namespace {

int arity(StateKind k) {
  switch (k) {
    case StateKind::Lam:
    case StateKind::S: return 1;
    case StateKind::App: return 2;
    case StateKind::Var: return 0;
  }
  return 0;
}

const char* label_of(StateKind k, int slot) {
  switch (k) {
    case StateKind::Lam: return "lam";
    case StateKind::S: return "s";
    case StateKind::App: return slot == 0 ? "app0" : "app1";
    default: return "?";
  }
}

const char* symbol_of(StateKind k, int slot) {
  switch (k) {
    case StateKind::Lam: return "λ";
    case StateKind::S: return "S";
    case StateKind::App: return slot == 0 ? "@0" : "@1";
    default: return "?";
  }
}

}  // namespace

Ltg ltg_from_exploration(const Exploration& e, const Scheme* scheme) {
  Ltg g;
  g.start = 0;
  g.kind.assign(e.states.size(), StateKind::Var);
  g.next.assign(e.states.size(), {-1, -1});
  for (const auto& t : e.transitions) {
    switch (t.label.kind) {
      case DecompLabel::Lam:
        g.kind[t.from] = StateKind::Lam;
        g.next[t.from][0] = t.to;
        break;
      case DecompLabel::S:
      case DecompLabel::Del:
        g.kind[t.from] = StateKind::S;
        g.next[t.from][0] = t.to;
        if (t.label.kind == DecompLabel::Del) g.built_with_reg = true;
        break;
      case DecompLabel::App0:
      case DecompLabel::App1:
        g.kind[t.from] = StateKind::App;
        g.next[t.from][t.label.kind == DecompLabel::App0 ? 0 : 1] = t.to;
        break;
    }
  }
  if (!is_plus(e.strategy)) g.built_with_reg = true;
  for (const auto& s : e.states) g.text.push_back(print_state(s, scheme));
  return g;
}

Ltg build_ltg(const Term& t, StrategyKind k, int bound, const Scheme* scheme) {
  ExploreOptions opt;
  opt.bound = bound;
  opt.with_origin = false;
  std::optional<PumpWitness> pump;
  if (scheme && is_plus(k))
    opt.on_new = [&](const Exploration& e, int id) {
      pump = find_pump(e, id, scheme);
      return pump.has_value();
    };
  Exploration e = generated_subterms(t, k, opt, scheme);
  if (pump)
    throw Error(ErrorKind::NotStronglyRegular, "not strongly regular: prefix pumps from " + pump->first_text +
                                                   " to " + pump->second_text);
  if (e.exceeded) throw Error(ErrorKind::Exceeded, "exploration exceeded bound " + std::to_string(bound));
  return ltg_from_exploration(e, scheme);
}

Ltg build_ltg(const NTerm& t, StrategyKind k, int bound) { return build_ltg(to_canonical(t), k, bound); }

Ltg build_ltg(const Scheme& s, StrategyKind k, int bound) { return build_ltg(s.cmain, k, bound, &s); }

Audit audit(const Ltg& g) {
  Audit a;
  int n = g.size();
  if (n == 0 || g.start < 0 || g.start >= n) {
    a.problems.push_back("start state out of range");
    return a;
  }
  for (int s = 0; s < n; ++s) {
    int want = arity(g.kind[s]);
    for (int i = 0; i < 2; ++i) {
      int t = g.next[s][i];
      bool need = i < want;
      if (need && (t < 0 || t >= n))
        a.problems.push_back("state " + std::to_string(s) + " (" + kind_name(g.kind[s]) + ") misses successor " +
                             std::to_string(i));
      if (!need && t != -1)
        a.problems.push_back("state " + std::to_string(s) + " (" + kind_name(g.kind[s]) + ") has extra successor");
    }
  }
  if (!a.ok()) return a;

  // S-only subgraph must be acyclic
  std::vector<int> indeg(n, 0);
  for (int s = 0; s < n; ++s)
    if (g.kind[s] == StateKind::S) ++indeg[g.next[s][0]];
  std::vector<int> work;
  for (int s = 0; s < n; ++s)
    if (indeg[s] == 0) work.push_back(s);
  int removed = 0;
  while (!work.empty()) {
    int s = work.back();
    work.pop_back();
    ++removed;
    if (g.kind[s] == StateKind::S && --indeg[g.next[s][0]] == 0) work.push_back(g.next[s][0]);
  }
  if (removed != n) a.problems.push_back("cycle of S-transitions");

  std::vector<char> seen(n, 0);
  std::vector<int> st{g.start};
  seen[g.start] = 1;
  int count = 1;
  while (!st.empty()) {
    int s = st.back();
    st.pop_back();
    for (int i = 0; i < arity(g.kind[s]); ++i)
      if (!seen[g.next[s][i]]) {
        seen[g.next[s][i]] = 1;
        ++count;
        st.push_back(g.next[s][i]);
      }
  }
  if (count != n) a.problems.push_back(std::to_string(n - count) + " states unreachable from start");
  return a;
}

std::vector<int> prefix_lengths(const Ltg& g) {
  std::vector<int> p(g.size(), -1);
  std::vector<char> bad(g.size(), 0);
  std::deque<int> q{g.start};
  p[g.start] = 0;
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int i = 0; i < arity(g.kind[s]); ++i) {
      int t = g.next[s][i];
      int v = p[s] + (g.kind[s] == StateKind::Lam ? 1 : g.kind[s] == StateKind::S ? -1 : 0);
      if (p[t] < 0 && !bad[t]) {
        p[t] = v;
        q.push_back(t);
      } else if (p[t] != v) {
        bad[t] = 1;
      }
    }
  }
  for (int s = 0; s < g.size(); ++s)
    if (bad[s]) p[s] = -1;
  return p;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

Bisimulation shortest_difference(const Ltg& a, const Ltg& b) {
  struct Item {
    int x, y, parent;
    std::string label;
  };
  std::vector<Item> items{{a.start, b.start, -1, ""}};
  std::map<std::pair<int, int>, int> seen{{{a.start, b.start}, 0}};
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto [x, y, par, lab] = items[i];
    if (a.kind[x] != b.kind[y]) {
      Bisimulation r;
      r.equal = false;
      r.mismatch = std::string(kind_name(a.kind[x])) + " vs " + kind_name(b.kind[y]);
      for (int j = static_cast<int>(i); items[j].parent >= 0; j = items[j].parent) r.trace.push_back(items[j].label);
      std::reverse(r.trace.begin(), r.trace.end());
      return r;
    }
    for (int k = 0; k < arity(a.kind[x]); ++k) {
      std::pair<int, int> p{a.next[x][k], b.next[y][k]};
      if (seen.emplace(p, static_cast<int>(items.size())).second)
        items.push_back({p.first, p.second, static_cast<int>(i), symbol_of(a.kind[x], k)});
    }
  }
  return {};
}

}  // namespace

Bisimulation bisimilar(const Ltg& a, const Ltg& b) {
  int na = a.size();
  UnionFind uf(na + b.size());
  std::deque<std::pair<int, int>> q{{a.start, b.start}};
  uf.unite(a.start, na + b.start);
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    if (a.kind[x] != b.kind[y]) return shortest_difference(a, b);
    for (int k = 0; k < arity(a.kind[x]); ++k) {
      int x2 = a.next[x][k], y2 = b.next[y][k];
      if (uf.unite(x2, na + y2)) q.emplace_back(x2, y2);
    }
  }
  return {};
}

namespace {

Term rb(const Ltg& g, int s, std::vector<int>& ctx, int depth, int d) {
  switch (g.kind[s]) {
    case StateKind::Lam: {
      if (d == 0) return mk_hole();
      ctx.push_back(depth);
      Term b = rb(g, g.next[s][0], ctx, depth + 1, d - 1);
      ctx.pop_back();
      return mk_abs(b);
    }
    case StateKind::S: {
      if (ctx.empty()) throw Error(ErrorKind::Schema, "S-transition with empty context");
      int top = ctx.back();
      ctx.pop_back();
      Term r = rb(g, g.next[s][0], ctx, depth, d);
      ctx.push_back(top);
      return r;
    }
    case StateKind::App:
      if (d == 0) return mk_hole();
      return mk_app(rb(g, g.next[s][0], ctx, depth, d - 1), rb(g, g.next[s][1], ctx, depth, d - 1));
    case StateKind::Var:
      if (ctx.empty()) throw Error(ErrorKind::Schema, "variable leaf with empty context");
      return mk_var(depth - 1 - ctx.back());
  }
  return mk_hole();
}

}  // namespace

Term readback_depth(const Ltg& g, int d) {
  if (g.built_with_reg)
    throw Error(ErrorKind::AmbiguousNameless, "graph built with a Reg strategy has no unique readback");
  std::vector<int> ctx;
  return rb(g, g.start, ctx, 0, d);
}

Ltg minimize(const Ltg& g) {
  int n = g.size();
  auto pl = prefix_lengths(g);
  std::vector<int> cls(n);
  {
    std::map<std::pair<int, int>, int> ids;
    for (int s = 0; s < n; ++s)
      cls[s] = ids.emplace(std::pair<int, int>{static_cast<int>(g.kind[s]), pl[s]}, static_cast<int>(ids.size()))
                   .first->second;
  }
  for (;;) {
    std::map<std::array<int, 3>, int> ids;
    std::vector<int> next(n);
    for (int s = 0; s < n; ++s) {
      std::array<int, 3> sig{cls[s], g.next[s][0] >= 0 ? cls[g.next[s][0]] : -1,
                             g.next[s][1] >= 0 ? cls[g.next[s][1]] : -1};
      next[s] = ids.emplace(sig, static_cast<int>(ids.size())).first->second;
    }
    int before = *std::max_element(cls.begin(), cls.end());
    int after = *std::max_element(next.begin(), next.end());
    cls = std::move(next);
    if (after == before) break;
  }
  // renumber classes in BFS order from the start
  Ltg m;
  m.built_with_reg = g.built_with_reg;
  std::unordered_map<int, int> id;
  std::vector<int> rep;
  std::deque<int> q{g.start};
  id[cls[g.start]] = 0;
  rep.push_back(g.start);
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int i = 0; i < arity(g.kind[s]); ++i) {
      int t = g.next[s][i];
      if (id.emplace(cls[t], static_cast<int>(rep.size())).second) {
        rep.push_back(t);
        q.push_back(t);
      }
    }
  }
  for (int r : rep) {
    int a = g.next[r][0] >= 0 ? id.at(cls[g.next[r][0]]) : -1;
    int b = g.next[r][1] >= 0 ? id.at(cls[g.next[r][1]]) : -1;
    m.add(g.kind[r], a, b);
    if (!g.text.empty()) m.text.push_back(g.text[r]);
  }
  m.start = 0;
  return m;
}

std::string to_dot(const Ltg& g) {
  std::ostringstream o;
  o << "digraph ltg {\n";
  o << "  node [shape=circle];\n";
  o << "  init [shape=point];\n";
  o << "  init -> s" << g.start << ";\n";
  for (int s = 0; s < g.size(); ++s) {
    const char* shape = g.kind[s] == StateKind::Var ? "doublecircle" : "circle";
    o << "  s" << s << " [label=\"" << s << ":" << kind_name(g.kind[s]) << "\", shape=" << shape << "];\n";
  }
  for (int s = 0; s < g.size(); ++s)
    for (int i = 0; i < arity(g.kind[s]); ++i)
      o << "  s" << s << " -> s" << g.next[s][i] << " [label=\"" << symbol_of(g.kind[s], i) << "\"];\n";
  o << "}\n";
  return o.str();
}

std::string to_json(const Ltg& g) {
  nlohmann::ordered_json j;
  j["start"] = g.start;
  j["states"] = nlohmann::ordered_json::array();
  j["edges"] = nlohmann::ordered_json::array();
  for (int s = 0; s < g.size(); ++s) {
    nlohmann::ordered_json st;
    st["id"] = s;
    st["kind"] = kind_name(g.kind[s]);
    j["states"].push_back(st);
  }
  for (int s = 0; s < g.size(); ++s)
    for (int i = 0; i < arity(g.kind[s]); ++i) {
      nlohmann::ordered_json e;
      e["from"] = s;
      e["label"] = label_of(g.kind[s], i);
      e["to"] = g.next[s][i];
      j["edges"].push_back(e);
    }
  return j.dump();
}

Ltg from_json(const std::string& text) {
  auto fail = [](const std::string& why) { return Error(ErrorKind::Schema, "schema error: " + why); };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  if (!j.is_object() || !j.contains("start") || !j.contains("states") || !j.contains("edges"))
    throw fail("expected object with start, states, edges");
  if (!j["start"].is_number_integer() || !j["states"].is_array() || !j["edges"].is_array())
    throw fail("wrong field types");
  Ltg g;
  int n = static_cast<int>(j["states"].size());
  g.kind.assign(n, StateKind::Var);
  g.next.assign(n, {-1, -1});
  std::vector<char> have(n, 0);
  for (const auto& s : j["states"]) {
    if (!s.is_object() || !s.contains("id") || !s.contains("kind") || !s["id"].is_number_integer() ||
        !s["kind"].is_string())
      throw fail("malformed state");
    int id = s["id"].get<int>();
    if (id < 0 || id >= n || have[id]) throw fail("state ids must be 0..n-1 without repeats");
    have[id] = 1;
    std::string k = s["kind"].get<std::string>();
    if (k == "lam") g.kind[id] = StateKind::Lam;
    else if (k == "s") g.kind[id] = StateKind::S;
    else if (k == "app") g.kind[id] = StateKind::App;
    else if (k == "var") g.kind[id] = StateKind::Var;
    else throw fail("unknown kind '" + k + "'");
  }
  g.start = j["start"].get<int>();
  if (g.start < 0 || g.start >= n) throw fail("start out of range");
  for (const auto& e : j["edges"]) {
    if (!e.is_object() || !e.contains("from") || !e.contains("label") || !e.contains("to") ||
        !e["from"].is_number_integer() || !e["to"].is_number_integer() || !e["label"].is_string())
      throw fail("malformed edge");
    int from = e["from"].get<int>(), to = e["to"].get<int>();
    if (from < 0 || from >= n || to < 0 || to >= n) throw fail("edge endpoint out of range");
    std::string l = e["label"].get<std::string>();
    int slot = l == "app1" ? 1 : 0;
    if (std::string(label_of(g.kind[from], slot)) != l)
      throw fail("label '" + l + "' not allowed on a " + kind_name(g.kind[from]) + " state");
    if (g.next[from][slot] != -1) throw fail("duplicate '" + l + "' edge on state " + std::to_string(from));
    g.next[from][slot] = to;
  }
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < arity(g.kind[s]); ++i)
      if (g.next[s][i] < 0) throw fail("state " + std::to_string(s) + " misses an outgoing edge");
  return g;
}

}  // namespace llx
