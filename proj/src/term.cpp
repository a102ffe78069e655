#include "llx/term.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace llx {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::DuplicateRecVar: return "DuplicateRecVar";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::NonVariableArgument: return "NonVariableArgument";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::Unproductive: return "Unproductive";
    case ErrorKind::NotStronglyRegular: return "NotStronglyRegular";
    case ErrorKind::Exceeded: return "Exceeded";
    case ErrorKind::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::AmbiguousNameless: return "AmbiguousNameless";
    case ErrorKind::UngroundedCycle: return "UngroundedCycle";
    case ErrorKind::Usage: return "UsageError";
  }
  return "Error";
}

SyntaxError::SyntaxError(int l, int c, std::string exp)
    : Error(ErrorKind::Syntax, "syntax error at " + std::to_string(l) + ":" +
                                   std::to_string(c) + ": expected " + exp),
      line(l),
      col(c),
      expected(std::move(exp)) {}

// ---------------------------------------------------------------------------

Position Position::parse(const std::string& s) {
  Position p;
  if (s == "ε" || s == "e" || s.empty()) return p;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      p.path.push_back(c - '0');
    } else if (c == '[') {
      std::size_t j = s.find(']', i);
      if (j == std::string::npos) throw Error(ErrorKind::PositionOutOfRange, "bad position " + s);
      p.path.push_back(std::stoi(s.substr(i + 1, j - i - 1)));
      i = j;
    } else {
      throw Error(ErrorKind::PositionOutOfRange, "bad position " + s);
    }
  }
  return p;
}

Position Position::child(int c) const {
  Position p = *this;
  p.path.push_back(c);
  return p;
}

Position Position::child2(int a, int b) const {
  Position p = *this;
  p.path.push_back(a);
  p.path.push_back(b);
  return p;
}

bool Position::is_prefix_of(const Position& o) const {
  return path.size() <= o.path.size() && std::equal(path.begin(), path.end(), o.path.begin());
}

std::string Position::str() const {
  if (path.empty()) return "ε";
  std::string s;
  for (int c : path) {
    if (c < 10) s += static_cast<char>('0' + c);
    else s += "[" + std::to_string(c) + "]";
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Term finish(Node n) {
  std::size_t h = static_cast<std::size_t>(n.tag) * 1315423911u;
  h = mix(h, static_cast<std::size_t>(n.a));
  h = mix(h, static_cast<std::size_t>(n.b));
  int size = 1;
  for (const auto& k : n.kids) {
    h = mix(h, k->hash);
    size += k->size;
  }
  for (int x : n.args) h = mix(h, static_cast<std::size_t>(x + 7));
  n.hash = h;
  n.size = size;
  return std::make_shared<const Node>(std::move(n));
}

Node blank(Tag tag, int a = 0, int b = 0) {
  Node n;
  n.tag = tag;
  n.a = a;
  n.b = b;
  return n;
}

}  // namespace

Term mk_var(int i) { return finish(blank(Tag::Var, i)); }
Term mk_rec(int frame, int slot) { return finish(blank(Tag::Rec, frame, slot)); }
Term mk_abs(Term body) {
  Node n = blank(Tag::Abs);
  n.kids.push_back(std::move(body));
  return finish(std::move(n));
}
Term mk_app(Term f, Term a) {
  Node n = blank(Tag::App);
  n.kids.push_back(std::move(f));
  n.kids.push_back(std::move(a));
  return finish(std::move(n));
}
Term mk_letrec(std::vector<Term> rhss, Term body) {
  Node n = blank(Tag::Letrec);
  n.kids = std::move(rhss);
  n.kids.push_back(std::move(body));
  return finish(std::move(n));
}
Term mk_hole() {
  static const Term h = finish(blank(Tag::Hole));
  return h;
}
Term mk_bottom() {
  static const Term b = finish(blank(Tag::Bottom));
  return b;
}
Term mk_call(int sym, std::vector<int> args) {
  Node n = blank(Tag::Call, sym);
  n.args = std::move(args);
  return finish(std::move(n));
}

bool equal(const Term& x, const Term& y) {
  if (x == y) return true;
  if (x->hash != y->hash || x->tag != y->tag || x->a != y->a || x->b != y->b ||
      x->size != y->size || x->kids.size() != y->kids.size() || x->args != y->args)
    return false;
  for (std::size_t i = 0; i < x->kids.size(); ++i)
    if (!equal(x->kids[i], y->kids[i])) return false;
  return true;
}

namespace {

void fv_rec(const Term& t, int depth, std::set<int>& out) {
  switch (t->tag) {
    case Tag::Var:
      if (t->a >= depth) out.insert(t->a - depth);
      return;
    case Tag::Call:
      for (int x : t->args)
        if (x >= depth) out.insert(x - depth);
      return;
    case Tag::Abs:
      fv_rec(t->kids[0], depth + 1, out);
      return;
    default:
      for (const auto& k : t->kids) fv_rec(k, depth, out);
  }
}

bool has_fv_rec(const Term& t, int depth, int idx) {
  switch (t->tag) {
    case Tag::Var: return t->a == idx + depth;
    case Tag::Call:
      for (int x : t->args)
        if (x == idx + depth) return true;
      return false;
    case Tag::Abs: return has_fv_rec(t->kids[0], depth + 1, idx);
    default:
      for (const auto& k : t->kids)
        if (has_fv_rec(k, depth, idx)) return true;
      return false;
  }
}

int frd_rec(const Term& t, int frames) {
  switch (t->tag) {
    case Tag::Rec: return t->a >= frames ? t->a - frames + 1 : 0;
    case Tag::Letrec: {
      int m = 0;
      for (const auto& k : t->kids) m = std::max(m, frd_rec(k, frames + 1));
      return m;
    }
    default: {
      int m = 0;
      for (const auto& k : t->kids) m = std::max(m, frd_rec(k, frames));
      return m;
    }
  }
}

Term shift_rec_rec(const Term& t, int by, int cutoff) {
  switch (t->tag) {
    case Tag::Rec:
      return t->a >= cutoff ? mk_rec(t->a + by, t->b) : t;
    case Tag::Var:
    case Tag::Hole:
    case Tag::Bottom:
    case Tag::Call:
      return t;
    case Tag::Abs: {
      Term b = shift_rec_rec(t->kids[0], by, cutoff);
      return b == t->kids[0] ? t : mk_abs(b);
    }
    case Tag::App: {
      Term x = shift_rec_rec(t->kids[0], by, cutoff);
      Term y = shift_rec_rec(t->kids[1], by, cutoff);
      return (x == t->kids[0] && y == t->kids[1]) ? t : mk_app(x, y);
    }
    case Tag::Letrec: {
      std::vector<Term> ks;
      bool same = true;
      for (const auto& k : t->kids) {
        ks.push_back(shift_rec_rec(k, by, cutoff + 1));
        same = same && ks.back() == k;
      }
      return same ? t : mk_letrec({ks.begin(), ks.end() - 1}, ks.back());
    }
  }
  return t;
}

}  // namespace

std::vector<int> free_vars(const Term& t) {
  std::set<int> s;
  fv_rec(t, 0, s);
  return {s.begin(), s.end()};
}

bool has_free_var(const Term& t, int idx) { return has_fv_rec(t, 0, idx); }

int free_rec_depth(const Term& t) { return frd_rec(t, 0); }

bool contains_tag(const Term& t, Tag tag) {
  if (t->tag == tag) return true;
  for (const auto& k : t->kids)
    if (contains_tag(k, tag)) return true;
  return false;
}

bool contains_letrec(const Term& t) { return contains_tag(t, Tag::Letrec); }

Term shift(const Term& t, int by, int cutoff) {
  if (by == 0) return t;
  return map_free(t, [&](int i) { return i >= cutoff ? i + by : i; });
}

Term drop_var(const Term& t, int gone) {
  return map_free(t, [&](int i) {
    if (i == gone) return -1;
    return i > gone ? i - 1 : i;
  });
}

Term shift_rec(const Term& t, int by, int cutoff) {
  if (by == 0) return t;
  return shift_rec_rec(t, by, cutoff);
}

// ---------------------------------------------------------------------------

NTerm nvar(std::string x) {
  auto n = std::make_shared<NNode>();
  n->tag = NTag::Var;
  n->name = std::move(x);
  return n;
}
NTerm nabs(std::string x, NTerm body) {
  auto n = std::make_shared<NNode>();
  n->tag = NTag::Abs;
  n->name = std::move(x);
  n->a = std::move(body);
  return n;
}
NTerm napp(NTerm f, NTerm a) {
  auto n = std::make_shared<NNode>();
  n->tag = NTag::App;
  n->a = std::move(f);
  n->b = std::move(a);
  return n;
}
NTerm nletrec(std::vector<std::pair<std::string, NTerm>> binds, NTerm body) {
  auto n = std::make_shared<NNode>();
  n->tag = NTag::Letrec;
  n->binds = std::move(binds);
  n->a = std::move(body);
  return n;
}
NTerm nhole() {
  auto n = std::make_shared<NNode>();
  n->tag = NTag::Hole;
  return n;
}
NTerm nbottom() {
  auto n = std::make_shared<NNode>();
  n->tag = NTag::Bottom;
  return n;
}
NTerm ncall(std::string sym, std::vector<NTerm> args) {
  auto n = std::make_shared<NNode>();
  n->tag = NTag::Call;
  n->name = std::move(sym);
  n->args = std::move(args);
  return n;
}

int nsize(const NTerm& t) {
  switch (t->tag) {
    case NTag::Abs: return 1 + nsize(t->a);
    case NTag::App: return 1 + nsize(t->a) + nsize(t->b);
    case NTag::Letrec: {
      int s = 1 + nsize(t->a);
      for (const auto& [n, r] : t->binds) s += 1 + nsize(r);
      return s;
    }
    default: return 1;
  }
}

}  // namespace llx
