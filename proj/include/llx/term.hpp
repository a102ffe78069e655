#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace llx {

// ---------------------------------------------------------------------------
// Errors

enum class ErrorKind {
  Syntax,
  DuplicateRecVar,
  ArityMismatch,
  UnboundVariable,
  NonVariableArgument,
  InvalidStep,
  Unproductive,
  NotStronglyRegular,
  Exceeded,
  PositionOutOfRange,
  Schema,
  AmbiguousNameless,
  UngroundedCycle,
  Usage,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, std::string expected);
  int line;
  int col;
  std::string expected;
};

// ---------------------------------------------------------------------------
// Positions. Abs at q: binder at q0, body at q00. App: q0, q1.
// Letrec at q: in-part at q0, binding i at q(i+1).

struct Position {
  std::vector<int> path;

  Position() = default;
  explicit Position(std::vector<int> p) : path(std::move(p)) {}
  static Position parse(const std::string& s);

  Position child(int c) const;
  Position child2(int a, int b) const;
  bool is_prefix_of(const Position& o) const;
  bool operator==(const Position& o) const { return path == o.path; }
  bool operator<(const Position& o) const { return path < o.path; }
  std::string str() const;
};

// ---------------------------------------------------------------------------
// Canonical (nameless) terms.
//
// Var(i): de Bruijn index counting enclosing Abs only; letrec frames are
// transparent. Rec(d, s): slot s of the d-th enclosing letrec frame (0 =
// innermost); inside a right-hand side the own frame is frame 0.
// Call(sym, args): scheme call, args are de Bruijn indices or -1 for an
// argument position the callee never uses.

enum class Tag : std::uint8_t { Var, Rec, Abs, App, Letrec, Hole, Bottom, Call };

struct Node;
using Term = std::shared_ptr<const Node>;

struct Node {
  Tag tag;
  int a = 0;  // Var: index; Rec: frame; Call: symbol
  int b = 0;  // Rec: slot
  std::vector<Term> kids;  // Abs: body; App: fun,arg; Letrec: rhs..., body
  std::vector<int> args;   // Call
  std::size_t hash = 0;
  int size = 1;

  int nbinds() const { return static_cast<int>(kids.size()) - 1; }
  const Term& body() const { return kids.back(); }
};

Term mk_var(int i);
Term mk_rec(int frame, int slot);
Term mk_abs(Term body);
Term mk_app(Term f, Term a);
Term mk_letrec(std::vector<Term> rhss, Term body);
Term mk_hole();
Term mk_bottom();
Term mk_call(int sym, std::vector<int> args);

bool equal(const Term& x, const Term& y);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t->hash; }
};
struct TermEq {
  bool operator()(const Term& x, const Term& y) const { return equal(x, y); }
};

// Free de Bruijn indices (relative to the root), sorted.
std::vector<int> free_vars(const Term& t);
bool has_free_var(const Term& t, int idx);
// Largest free letrec-frame distance + 1 (0 when no free Rec).
int free_rec_depth(const Term& t);
bool contains_letrec(const Term& t);
bool contains_tag(const Term& t, Tag tag);

// Maps every free index i (relative to root) to f(i); -1 results are only
// legal for call arguments.
template <class F>
Term map_free(const Term& t, F&& f);

Term shift(const Term& t, int by, int cutoff = 0);
// Removes free index `gone` (which must not occur outside erased call args)
// and closes the gap.
Term drop_var(const Term& t, int gone);
// Shifts free Rec frame references >= cutoff by `by`.
Term shift_rec(const Term& t, int by, int cutoff = 0);

// ---------------------------------------------------------------------------
// Named terms (surface syntax).

enum class NTag : std::uint8_t { Var, Abs, App, Letrec, Hole, Bottom, Call };

struct NNode;
using NTerm = std::shared_ptr<const NNode>;

struct NNode {
  NTag tag;
  std::string name;  // Var, Abs binder, Call symbol
  std::vector<std::pair<std::string, NTerm>> binds;
  NTerm a, b;  // Abs: a = body; App: a, b; Letrec: a = body
  std::vector<NTerm> args;  // Call
};

NTerm nvar(std::string x);
NTerm nabs(std::string x, NTerm body);
NTerm napp(NTerm f, NTerm a);
NTerm nletrec(std::vector<std::pair<std::string, NTerm>> binds, NTerm body);
NTerm nhole();
NTerm nbottom();
NTerm ncall(std::string sym, std::vector<NTerm> args);

int nsize(const NTerm& t);

// ---------------------------------------------------------------------------
// map_free implementation

namespace detail {
template <class F>
Term map_free_rec(const Term& t, int depth, F& f) {
  switch (t->tag) {
    case Tag::Var:
      if (t->a < depth) return t;
      {
        int y = f(t->a - depth);
        if (y < 0) throw std::logic_error("map_free: variable mapped to nothing");
        return y == t->a - depth ? t : mk_var(y + depth);
      }
    case Tag::Rec:
    case Tag::Hole:
    case Tag::Bottom:
      return t;
    case Tag::Abs: {
      Term b = map_free_rec(t->kids[0], depth + 1, f);
      return b == t->kids[0] ? t : mk_abs(b);
    }
    case Tag::App: {
      Term x = map_free_rec(t->kids[0], depth, f);
      Term y = map_free_rec(t->kids[1], depth, f);
      return (x == t->kids[0] && y == t->kids[1]) ? t : mk_app(x, y);
    }
    case Tag::Letrec: {
      std::vector<Term> ks;
      bool same = true;
      ks.reserve(t->kids.size());
      for (const auto& k : t->kids) {
        ks.push_back(map_free_rec(k, depth, f));
        same = same && ks.back() == k;
      }
      return same ? t : mk_letrec({ks.begin(), ks.end() - 1}, ks.back());
    }
    case Tag::Call: {
      std::vector<int> as = t->args;
      for (auto& x : as) {
        if (x >= depth) {
          int y = f(x - depth);
          x = y < 0 ? -1 : y + depth;
        }
      }
      return as == t->args ? t : mk_call(t->a, as);
    }
  }
  return t;
}
}  // namespace detail

template <class F>
Term map_free(const Term& t, F&& f) {
  return detail::map_free_rec(t, 0, f);
}

}  // namespace llx
