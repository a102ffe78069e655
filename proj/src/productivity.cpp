#include "llx/productivity.hpp"

#include <algorithm>
#include <deque>

namespace llx {

const char* edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::InPart: return "in-part";
    case EdgeKind::AppLeft: return "app-left";
    case EdgeKind::AppRight: return "app-right";
    case EdgeKind::AbsBody: return "abs-body";
    case EdgeKind::Vac: return "vac";
    case EdgeKind::RecJump: return "rec-jump";
  }
  return "?";
}

std::string AccessGraph::label(int node) const {
  const Node& n = nodes.at(node);
  return print_with_constants(n.prefix, n.body, frame_names.at(n.ctx));
}

namespace {

std::vector<std::vector<int>> adjacency(const AccessGraph& g, bool unguarded_only) {
  std::vector<std::vector<int>> adj(g.nodes.size());
  for (const auto& e : g.edges)
    if (!unguarded_only || !e.guarded) adj[e.from].push_back(e.to);
  return adj;
}

class Builder {
 public:
  AccessGraph g;

  int build(const Term& t, int n, std::vector<int>& fixes, int ctx) {
    int me = add(n, t, ctx);
    switch (t->tag) {
      case Tag::Var:
        if (t->a > 0) edge(me, build(mk_var(t->a - 1), n - 1, fixes, ctx), false, EdgeKind::Vac);
        break;
      case Tag::Abs:
        edge(me, build(t->kids[0], n + 1, fixes, ctx), true, EdgeKind::AbsBody);
        break;
      case Tag::App:
        edge(me, build(t->kids[0], n, fixes, ctx), true, EdgeKind::AppLeft);
        edge(me, build(t->kids[1], n, fixes, ctx), true, EdgeKind::AppRight);
        break;
      case Tag::Rec: {
        const Fix& f = fix_[fixes[fixes.size() - 1 - t->a]];
        int cur = me;
        for (int m = n; m > f.prefix; --m) {
          int next = add(m - 1, t, ctx);
          edge(cur, next, false, EdgeKind::Vac);
          cur = next;
        }
        jumps_.push_back({cur, fixes[fixes.size() - 1 - t->a], t->b});
        break;
      }
      case Tag::Letrec: {
        int id = static_cast<int>(fix_.size());
        fix_.push_back({n, {}});
        auto names = g.frame_names[ctx];
        int count = 0;
        for (const auto& f : names) count += static_cast<int>(f.size());
        names.emplace_back();
        for (int i = 0; i < t->nbinds(); ++i) names.back().push_back(rec_name(count + i));
        int inner = static_cast<int>(g.frame_names.size());
        g.frame_names.push_back(std::move(names));
        fixes.push_back(id);
        std::vector<int> roots;
        for (int i = 0; i < t->nbinds(); ++i) roots.push_back(build(t->kids[i], n, fixes, inner));
        fix_[id].rhs_root = roots;
        edge(me, build(t->body(), n, fixes, inner), false, EdgeKind::InPart);
        fixes.pop_back();
        break;
      }
      case Tag::Call:
        throw Error(ErrorKind::Usage, "access graphs are defined for letrec terms only");
      default:
        break;
    }
    return me;
  }

  void finish() {
    for (const auto& j : jumps_) edge(j.from, fix_[j.fix].rhs_root[j.slot], false, EdgeKind::RecJump);
  }

 private:
  struct Fix {
    int prefix;
    std::vector<int> rhs_root;
  };
  struct Jump {
    int from, fix, slot;
  };
  std::vector<Fix> fix_;
  std::vector<Jump> jumps_;

  int add(int prefix, const Term& body, int ctx) {
    g.nodes.push_back({prefix, body, ctx});
    return static_cast<int>(g.nodes.size()) - 1;
  }
  void edge(int from, int to, bool guarded, EdgeKind k) { g.edges.push_back({from, to, guarded, k}); }
};

// A cycle of unguarded edges among nodes marked in `live`, or empty.
std::vector<int> unguarded_cycle(const AccessGraph& g, const std::vector<char>& live) {
  auto adj = adjacency(g, true);
  std::size_t n = g.nodes.size();
  std::vector<char> color(n, 0);
  std::vector<int> parent(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (!live[s] || color[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(s), 0}};
    color[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < adj[v].size()) {
        int w = adj[v][i++];
        if (!live[w]) continue;
        if (color[w] == 1) {
          std::vector<int> cyc{w};
          for (int x = v; x != w; x = parent[x]) cyc.push_back(x);
          cyc.push_back(w);
          std::reverse(cyc.begin() + 1, cyc.end() - 1);
          return cyc;
        }
        if (color[w] == 0) {
          color[w] = 1;
          parent[w] = v;
          stack.push_back({w, 0});
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

std::vector<int> AccessGraph::reachable() const {
  auto adj = adjacency(*this, false);
  std::vector<char> seen(nodes.size(), 0);
  std::vector<int> out{root}, work{root};
  seen[root] = 1;
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        out.push_back(w);
        work.push_back(w);
      }
  }
  return out;
}

AccessGraph build_access_graph(const Term& t) {
  Builder b;
  b.g.frame_names.emplace_back();
  std::vector<int> fixes;
  b.g.root = b.build(t, 0, fixes, 0);
  b.finish();
  return std::move(b.g);
}

AccessGraph build_access_graph(const NTerm& t) { return build_access_graph(to_canonical(t)); }

ProductivityResult is_productive(const Term& t) {
  AccessGraph g = build_access_graph(t);
  std::vector<char> live(g.nodes.size(), 0);
  for (int v : g.reachable()) live[v] = 1;
  ProductivityResult r;
  r.cycle = unguarded_cycle(g, live);
  if (r.cycle.empty()) return r;
  r.productive = false;
  for (int v : r.cycle) r.cycle_labels.push_back(g.label(v));

  // Locate the root-active subterm: the guards on an access path to the cycle
  // spell its position in the unfolding.
  std::vector<int> via(g.nodes.size(), -1);
  std::deque<int> q{g.root};
  std::vector<char> seen(g.nodes.size(), 0);
  seen[g.root] = 1;
  std::vector<std::vector<int>> out(g.nodes.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) out[g.edges[i].from].push_back(static_cast<int>(i));
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e : out[v]) {
      int w = g.edges[e].to;
      if (!seen[w]) {
        seen[w] = 1;
        via[w] = e;
        q.push_back(w);
      }
    }
  }
  std::vector<EdgeKind> guards;
  for (int v = r.cycle.front(); v != g.root; v = g.edges[via[v]].from)
    if (g.edges[via[v]].guarded) guards.push_back(g.edges[via[v]].kind);
  std::reverse(guards.begin(), guards.end());

  try {
    Term cur = t;
    Position at;
    for (EdgeKind k : guards) {
      RootClosure rc = root_closure(cur);
      if (rc.cycle) {
        r.bottom_at = at;
        r.root_cycle = rc.cycle;
        return r;
      }
      cur = *rc.head;
      if (k == EdgeKind::AbsBody && cur->tag == Tag::Abs) {
        cur = cur->kids[0];
        at = at.child2(0, 0);
      } else if (k != EdgeKind::AbsBody && cur->tag == Tag::App) {
        cur = cur->kids[k == EdgeKind::AppLeft ? 0 : 1];
        at = at.child(k == EdgeKind::AppLeft ? 0 : 1);
      } else {
        return r;
      }
    }
    RootClosure rc = root_closure(cur);
    if (rc.cycle) {
      r.bottom_at = at;
      r.root_cycle = rc.cycle;
    }
  } catch (const Error&) {
  }
  return r;
}

ProductivityResult is_productive(const NTerm& t) { return is_productive(to_canonical(t)); }

bool expresses_some_term(const Term& t) { return is_productive(t).productive; }
bool expresses_some_term(const NTerm& t) { return is_productive(t).productive; }

}  // namespace llx
