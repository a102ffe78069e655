#include "llx/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace llx {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Lambda, Dot, LParen, RParen, Comma, Eq, Semi, Hole, Bottom, Letrec, In, Def, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Lambda: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Eq: return "'='";
    case Tok::Semi: return "';'";
    case Tok::Hole: return "'_'";
    case Tok::Bottom: return "'!'";
    case Tok::Letrec: return "'letrec'";
    case Tok::In: return "'in'";
    case Tok::Def: return "'def'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& s, bool scheme_mode) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      std::string w = s.substr(i, j - i);
      Tok k = Tok::Ident;
      if (w == "letrec") k = Tok::Letrec;
      else if (w == "in") k = Tok::In;
      else if (w == "def" && scheme_mode) k = Tok::Def;
      out.push_back({k, w, l, cl});
      adv(j - i);
      continue;
    }
    if (c == 0xCE && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xBB) {
      out.push_back({Tok::Lambda, "λ", l, cl});
      adv(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '\\': k = Tok::Lambda; break;
      case '.': k = Tok::Dot; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '=': k = Tok::Eq; break;
      case ';': k = Tok::Semi; break;
      case '_': k = Tok::Hole; break;
      case '!': k = Tok::Bottom; break;
      default: throw SyntaxError(l, cl, "a term (unexpected character)");
    }
    out.push_back({k, std::string(1, static_cast<char>(c)), l, cl});
    adv(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> toks, ParseOptions opt, const std::set<std::string>* defs)
      : t_(std::move(toks)), opt_(opt), defs_(defs) {}

  const Token& peek() const { return t_[p_]; }
  const Token& peek2() const { return t_[std::min(p_ + 1, t_.size() - 1)]; }
  Token take() { return t_[p_ < t_.size() - 1 ? p_++ : p_]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(peek().line, peek().col, what);
  }
  Token expect(Tok k) {
    if (peek().kind != k) fail(tok_name(k));
    return take();
  }
  bool at(Tok k) const { return peek().kind == k; }

  // Later passes recurse over the tree, so deep nesting is rejected here.
  static constexpr int kMaxDepth = 5000;

  NTerm term() {
    struct Guard {
      int& d;
      explicit Guard(int& d) : d(++d) {}
      ~Guard() { --d; }
    } guard(depth_);
    if (depth_ > kMaxDepth) fail("nesting depth at most " + std::to_string(kMaxDepth));
    if (at(Tok::Lambda)) {
      take();
      std::vector<std::string> xs;
      xs.push_back(expect(Tok::Ident).text);
      while (at(Tok::Ident)) xs.push_back(take().text);
      expect(Tok::Dot);
      NTerm b = term();
      if (depth_ + static_cast<int>(xs.size()) > kMaxDepth) fail("nesting depth at most " + std::to_string(kMaxDepth));
      for (auto it = xs.rbegin(); it != xs.rend(); ++it) b = nabs(*it, b);
      return b;
    }
    NTerm a = atom();
    for (int spine = 1; starts_atom(); ++spine) {
      if (depth_ + spine > kMaxDepth) fail("nesting depth at most " + std::to_string(kMaxDepth));
      a = napp(a, atom());
    }
    return a;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::LParen:
      case Tok::Letrec:
        return true;
      case Tok::Hole:
      case Tok::Bottom:
        return opt_.allow_holes;
      default:
        return false;
    }
  }

  NTerm atom() {
    switch (peek().kind) {
      case Tok::Ident: {
        Token id = take();
        if (defs_ && defs_->count(id.text) && at(Tok::LParen)) {
          take();
          std::vector<NTerm> args;
          if (!at(Tok::RParen)) {
            args.push_back(term());
            while (at(Tok::Comma)) {
              take();
              args.push_back(term());
            }
          }
          expect(Tok::RParen);
          return ncall(id.text, std::move(args));
        }
        return nvar(id.text);
      }
      case Tok::LParen: {
        take();
        NTerm t = term();
        expect(Tok::RParen);
        return t;
      }
      case Tok::Letrec: {
        take();
        std::vector<std::pair<std::string, NTerm>> bs;
        std::set<std::string> seen;
        // an empty group only arises mid-unfolding; accepted so traces read back
        if (at(Tok::In)) {
          take();
          return nletrec({}, term());
        }
        do {
          if (!bs.empty()) take();
          Token id = expect(Tok::Ident);
          if (!seen.insert(id.text).second)
            throw Error(ErrorKind::DuplicateRecVar,
                        "duplicate recursion variable '" + id.text + "' at " +
                            std::to_string(id.line) + ":" + std::to_string(id.col));
          expect(Tok::Eq);
          bs.emplace_back(id.text, term());
        } while (at(Tok::Comma));
        expect(Tok::In);
        NTerm body = term();
        return nletrec(std::move(bs), body);
      }
      case Tok::Hole:
        if (opt_.allow_holes) {
          take();
          return nhole();
        }
        fail("a term ('_' needs --allow-holes)");
      case Tok::Bottom:
        if (opt_.allow_holes) {
          take();
          return nbottom();
        }
        fail("a term ('!' needs --allow-holes)");
      default:
        fail("a term");
    }
  }

  std::size_t p_ = 0;
  int depth_ = 0;

 private:
  std::vector<Token> t_;
  ParseOptions opt_;
  const std::set<std::string>* defs_;
};

// ---------------------------------------------------------------------------
// Canonical conversion

struct ScopeEntry {
  std::string name;
  bool is_rec;
  int level;  // lambda depth or frame depth at introduction
  int slot;
};

struct CanonCtx {
  std::vector<ScopeEntry> scope;
  int lam = 0;
  int frames = 0;
  const std::map<std::string, int>* syms = nullptr;
  const std::vector<std::size_t>* arity = nullptr;
};

const ScopeEntry* lookup(const CanonCtx& c, const std::string& x) {
  for (auto it = c.scope.rbegin(); it != c.scope.rend(); ++it)
    if (it->name == x) return &*it;
  return nullptr;
}

Term canon(const NTerm& t, CanonCtx& c) {
  switch (t->tag) {
    case NTag::Var: {
      const ScopeEntry* e = lookup(c, t->name);
      if (!e) throw Error(ErrorKind::UnboundVariable, "unbound variable '" + t->name + "'");
      if (e->is_rec) return mk_rec(c.frames - 1 - e->level, e->slot);
      return mk_var(c.lam - 1 - e->level);
    }
    case NTag::Abs: {
      c.scope.push_back({t->name, false, c.lam, 0});
      ++c.lam;
      Term b = canon(t->a, c);
      --c.lam;
      c.scope.pop_back();
      return mk_abs(b);
    }
    case NTag::App: return mk_app(canon(t->a, c), canon(t->b, c));
    case NTag::Letrec: {
      std::size_t mark = c.scope.size();
      for (std::size_t i = 0; i < t->binds.size(); ++i)
        c.scope.push_back({t->binds[i].first, true, c.frames, static_cast<int>(i)});
      ++c.frames;
      std::vector<Term> rhss;
      for (const auto& [n, r] : t->binds) rhss.push_back(canon(r, c));
      Term body = canon(t->a, c);
      --c.frames;
      c.scope.resize(mark);
      return mk_letrec(std::move(rhss), body);
    }
    case NTag::Hole: return mk_hole();
    case NTag::Bottom: return mk_bottom();
    case NTag::Call: {
      if (!c.syms || !c.syms->count(t->name))
        throw Error(ErrorKind::UnboundVariable, "unknown scheme symbol '" + t->name + "'");
      int sym = c.syms->at(t->name);
      if ((*c.arity)[sym] != t->args.size())
        throw Error(ErrorKind::ArityMismatch,
                    "call " + t->name + " with " + std::to_string(t->args.size()) +
                        " arguments, expected " + std::to_string((*c.arity)[sym]));
      std::vector<int> args;
      for (const auto& a : t->args) {
        if (a->tag != NTag::Var)
          throw Error(ErrorKind::NonVariableArgument,
                      "argument of " + t->name + " is not a variable: " + print_term(a));
        const ScopeEntry* e = lookup(c, a->name);
        if (!e) throw Error(ErrorKind::UnboundVariable, "unbound variable '" + a->name + "'");
        if (e->is_rec)
          throw Error(ErrorKind::NonVariableArgument,
                      "argument of " + t->name + " is a recursion variable: " + a->name);
        args.push_back(c.lam - 1 - e->level);
      }
      return mk_call(sym, std::move(args));
    }
  }
  return t->tag == NTag::Hole ? mk_hole() : mk_bottom();
}

Term canon_with_prefix(const NTerm& t, const std::vector<std::string>& prefix, CanonCtx c) {
  for (const auto& x : prefix) {
    c.scope.push_back({x, false, c.lam, 0});
    ++c.lam;
  }
  return canon(t, c);
}

// ---------------------------------------------------------------------------
// Naming

NTerm name_rec(const Term& t, std::vector<std::string>& lams, std::vector<std::vector<std::string>>& frames,
               int& rec_count, const std::vector<std::string>* syms) {
  switch (t->tag) {
    case Tag::Var: {
      int i = static_cast<int>(lams.size()) - 1 - t->a;
      if (i < 0) return nvar("free" + std::to_string(-i));
      return nvar(lams[i]);
    }
    case Tag::Rec: {
      int f = static_cast<int>(frames.size()) - 1 - t->a;
      if (f < 0 || t->b >= static_cast<int>(frames[f].size()))
        return nvar("rfree" + std::to_string(t->a) + "_" + std::to_string(t->b));
      return nvar(frames[f][t->b]);
    }
    case Tag::Abs: {
      lams.push_back(lambda_name(static_cast<int>(lams.size())));
      NTerm b = name_rec(t->kids[0], lams, frames, rec_count, syms);
      std::string x = lams.back();
      lams.pop_back();
      return nabs(x, b);
    }
    case Tag::App:
      return napp(name_rec(t->kids[0], lams, frames, rec_count, syms),
                  name_rec(t->kids[1], lams, frames, rec_count, syms));
    case Tag::Letrec: {
      std::vector<std::string> names;
      for (int i = 0; i < t->nbinds(); ++i) names.push_back(rec_name(rec_count + i));
      rec_count += t->nbinds();
      frames.push_back(names);
      std::vector<std::pair<std::string, NTerm>> bs;
      for (int i = 0; i < t->nbinds(); ++i)
        bs.emplace_back(names[i], name_rec(t->kids[i], lams, frames, rec_count, syms));
      NTerm body = name_rec(t->body(), lams, frames, rec_count, syms);
      frames.pop_back();
      rec_count -= t->nbinds();
      return nletrec(std::move(bs), body);
    }
    case Tag::Hole: return nhole();
    case Tag::Bottom: return nbottom();
    case Tag::Call: {
      std::vector<NTerm> args;
      for (int x : t->args) {
        if (x < 0) {
          args.push_back(nhole());
          continue;
        }
        int i = static_cast<int>(lams.size()) - 1 - x;
        args.push_back(nvar(i < 0 ? "free" + std::to_string(-i) : lams[i]));
      }
      std::string s = syms && t->a < static_cast<int>(syms->size()) ? (*syms)[t->a]
                                                                     : "F" + std::to_string(t->a);
      return ncall(s, std::move(args));
    }
  }
  return nhole();
}

// ---------------------------------------------------------------------------
// Printing

void pr(const NTerm& t, std::ostringstream& o);

void pr_atom(const NTerm& t, std::ostringstream& o) {
  switch (t->tag) {
    case NTag::Var:
    case NTag::Hole:
    case NTag::Bottom:
    case NTag::Call:
      pr(t, o);
      return;
    default:
      o << '(';
      pr(t, o);
      o << ')';
  }
}

void pr(const NTerm& t, std::ostringstream& o) {
  switch (t->tag) {
    case NTag::Var: o << t->name; return;
    case NTag::Hole: o << '_'; return;
    case NTag::Bottom: o << '!'; return;
    case NTag::Call: {
      o << t->name << '(';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) o << ", ";
        pr(t->args[i], o);
      }
      o << ')';
      return;
    }
    case NTag::Abs: {
      o << '\\' << t->name;
      NTerm b = t->a;
      while (b->tag == NTag::Abs) {
        o << ' ' << b->name;
        b = b->a;
      }
      o << ". ";
      pr(b, o);
      return;
    }
    case NTag::App:
      pr_atom(t->a, o);
      o << ' ';
      pr_atom(t->b, o);
      return;
    case NTag::Letrec: {
      o << "letrec";
      for (std::size_t i = 0; i < t->binds.size(); ++i) {
        o << (i ? ", " : " ") << t->binds[i].first << " = ";
        pr(t->binds[i].second, o);
      }
      o << " in ";
      pr(t->a, o);
      return;
    }
  }
}

// ---------------------------------------------------------------------------

void validate_rec(const NTerm& t, std::vector<std::string>& scope, const Position& at,
                  ValidationReport& rep) {
  switch (t->tag) {
    case NTag::Var:
      if (std::find(scope.begin(), scope.end(), t->name) == scope.end())
        rep.unbound.push_back({t->name, at});
      return;
    case NTag::Abs:
      scope.push_back(t->name);
      validate_rec(t->a, scope, at.child2(0, 0), rep);
      scope.pop_back();
      return;
    case NTag::App:
      validate_rec(t->a, scope, at.child(0), rep);
      validate_rec(t->b, scope, at.child(1), rep);
      return;
    case NTag::Letrec: {
      std::size_t mark = scope.size();
      for (const auto& [n, r] : t->binds) scope.push_back(n);
      for (std::size_t i = 0; i < t->binds.size(); ++i)
        validate_rec(t->binds[i].second, scope, at.child(static_cast<int>(i) + 1), rep);
      validate_rec(t->a, scope, at.child(0), rep);
      scope.resize(mark);
      return;
    }
    case NTag::Call:
      for (std::size_t i = 0; i < t->args.size(); ++i)
        validate_rec(t->args[i], scope, at.child(static_cast<int>(i)), rep);
      return;
    default:
      return;
  }
}

void positions_rec(const NTerm& t, const Position& at, std::vector<PositionedNode>& out) {
  switch (t->tag) {
    case NTag::Var: out.push_back({at, "var"}); return;
    case NTag::Hole: out.push_back({at, "hole"}); return;
    case NTag::Bottom: out.push_back({at, "bottom"}); return;
    case NTag::Call: out.push_back({at, "call"}); return;
    case NTag::Abs:
      out.push_back({at, "abs"});
      out.push_back({at.child(0), "binder"});
      positions_rec(t->a, at.child2(0, 0), out);
      return;
    case NTag::App:
      out.push_back({at, "app"});
      positions_rec(t->a, at.child(0), out);
      positions_rec(t->b, at.child(1), out);
      return;
    case NTag::Letrec:
      out.push_back({at, "letrec"});
      positions_rec(t->a, at.child(0), out);
      for (std::size_t i = 0; i < t->binds.size(); ++i)
        positions_rec(t->binds[i].second, at.child(static_cast<int>(i) + 1), out);
      return;
  }
}

// used-parameter analysis on canonical bodies with full call arguments
void collect_uses(const Term& t, int depth, int nparams, std::vector<bool>& direct,
                  std::vector<std::tuple<int, int, int>>& flows) {
  // flows: (param, callee, callee position)
  switch (t->tag) {
    case Tag::Var:
      if (t->a >= depth && t->a - depth < nparams) direct[nparams - 1 - (t->a - depth)] = true;
      return;
    case Tag::Call:
      for (std::size_t j = 0; j < t->args.size(); ++j) {
        int x = t->args[j];
        if (x >= depth && x - depth < nparams)
          flows.emplace_back(nparams - 1 - (x - depth), t->a, static_cast<int>(j));
      }
      return;
    case Tag::Abs:
      collect_uses(t->kids[0], depth + 1, nparams, direct, flows);
      return;
    default:
      for (const auto& k : t->kids) collect_uses(k, depth, nparams, direct, flows);
  }
}

Term erase_unused(const Term& t, const std::vector<std::vector<bool>>& used) {
  switch (t->tag) {
    case Tag::Call: {
      std::vector<int> as = t->args;
      for (std::size_t j = 0; j < as.size(); ++j)
        if (!used[t->a][j]) as[j] = -1;
      return mk_call(t->a, as);
    }
    case Tag::Abs: return mk_abs(erase_unused(t->kids[0], used));
    case Tag::App: return mk_app(erase_unused(t->kids[0], used), erase_unused(t->kids[1], used));
    case Tag::Letrec: {
      std::vector<Term> ks;
      for (const auto& k : t->kids) ks.push_back(erase_unused(k, used));
      return mk_letrec({ks.begin(), ks.end() - 1}, ks.back());
    }
    default: return t;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

NTerm parse_term(const std::string& src, ParseOptions opt) {
  Parser p(lex(src, false), opt, nullptr);
  NTerm t = p.term();
  if (!p.at(Tok::End)) p.fail("end of input");
  return t;
}

bool looks_like_scheme(const std::string& src) {
  try {
    auto toks = lex(src, true);
    return toks.front().kind == Tok::Def;
  } catch (const Error&) {
    std::size_t i = src.find_first_not_of(" \t\r\n");
    return i != std::string::npos && src.compare(i, 3, "def") == 0;
  }
}

int Scheme::symbol(const std::string& name) const {
  for (std::size_t i = 0; i < defs.size(); ++i)
    if (defs[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> Scheme::symbols() const {
  std::vector<std::string> s;
  for (const auto& d : defs) s.push_back(d.name);
  return s;
}

Term Scheme::expand(int sym, const std::vector<int>& args) const {
  const SchemeDef& d = defs.at(sym);
  int k = static_cast<int>(d.params.size());
  return map_free(d.cbody, [&](int i) { return args.at(k - 1 - i); });
}

Scheme parse_scheme(const std::string& src) {
  auto toks = lex(src, true);
  std::set<std::string> names;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i)
    if (toks[i].kind == Tok::Def && toks[i + 1].kind == Tok::Ident) names.insert(toks[i + 1].text);

  Parser p(std::move(toks), ParseOptions{}, &names);
  Scheme s;
  std::set<std::string> seen;
  while (p.at(Tok::Def)) {
    p.take();
    Token name = p.expect(Tok::Ident);
    if (!seen.insert(name.text).second)
      throw SyntaxError(name.line, name.col, "a fresh definition name (duplicate '" + name.text + "')");
    p.expect(Tok::LParen);
    std::vector<std::string> params;
    if (!p.at(Tok::RParen)) {
      params.push_back(p.expect(Tok::Ident).text);
      while (p.at(Tok::Comma)) {
        p.take();
        params.push_back(p.expect(Tok::Ident).text);
      }
    }
    std::set<std::string> ps(params.begin(), params.end());
    if (ps.size() != params.size()) throw SyntaxError(name.line, name.col, "distinct parameter names");
    p.expect(Tok::RParen);
    p.expect(Tok::Eq);
    NTerm body = p.term();
    p.expect(Tok::Semi);
    s.defs.push_back({name.text, params, body, nullptr});
  }
  Token m = p.expect(Tok::Ident);
  if (m.text != "main") throw SyntaxError(m.line, m.col, "'def' or 'main'");
  p.expect(Tok::Eq);
  s.main = p.term();
  if (p.at(Tok::Semi)) p.take();
  if (!p.at(Tok::End)) p.fail("end of input");

  std::map<std::string, int> syms;
  std::vector<std::size_t> arity;
  for (std::size_t i = 0; i < s.defs.size(); ++i) {
    syms[s.defs[i].name] = static_cast<int>(i);
    arity.push_back(s.defs[i].params.size());
  }
  CanonCtx c;
  c.syms = &syms;
  c.arity = &arity;
  for (auto& d : s.defs) d.cbody = canon_with_prefix(d.body, d.params, c);
  s.cmain = canon_with_prefix(s.main, {}, c);

  // least fixpoint of parameter usage
  std::size_t n = s.defs.size();
  std::vector<std::vector<bool>> used(n);
  std::vector<std::vector<std::tuple<int, int, int>>> flows(n);
  for (std::size_t i = 0; i < n; ++i) {
    int k = static_cast<int>(s.defs[i].params.size());
    used[i].assign(k, false);
    collect_uses(s.defs[i].cbody, 0, k, used[i], flows[i]);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (auto [param, callee, pos] : flows[i])
        if (!used[i][param] && used[callee][pos]) {
          used[i][param] = true;
          changed = true;
        }
  }
  for (std::size_t i = 0; i < n; ++i) {
    s.used_mask[s.defs[i].name] = used[i];
    s.defs[i].cbody = erase_unused(s.defs[i].cbody, used);
  }
  s.cmain = erase_unused(s.cmain, used);
  return s;
}

Term to_canonical(const NTerm& t, const std::vector<std::string>& prefix) {
  return canon_with_prefix(t, prefix, CanonCtx{});
}

std::string lambda_name(int k) {
  std::string s(1, static_cast<char>('a' + k % 20));
  if (k >= 20) s += std::to_string(k / 20);
  return s;
}

std::string rec_name(int k) {
  std::string s(1, static_cast<char>('u' + k % 6));
  if (k >= 6) s += std::to_string(k / 6);
  return s;
}

NTerm to_named(const Term& t, int prefix_len, const std::vector<std::string>* symbols) {
  std::vector<std::string> lams;
  for (int i = 0; i < prefix_len; ++i) lams.push_back(lambda_name(i));
  std::vector<std::vector<std::string>> frames;
  int rc = 0;
  return name_rec(t, lams, frames, rc, symbols);
}

std::string print_term(const NTerm& t) {
  std::ostringstream o;
  pr(t, o);
  return o.str();
}

std::string print_term(const Term& t, int prefix_len, const std::vector<std::string>* symbols) {
  return print_term(to_named(t, prefix_len, symbols));
}

std::string print_prefixed(int prefix_len, const Term& body, const std::vector<std::string>* symbols) {
  std::string s = "(";
  for (int i = 0; i < prefix_len; ++i) {
    if (i) s += ' ';
    s += lambda_name(i);
  }
  s += ") ";
  return s + print_term(body, prefix_len, symbols);
}

std::string print_with_constants(int prefix_len, const Term& body,
                                 const std::vector<std::vector<std::string>>& frames) {
  std::vector<std::string> lams;
  for (int i = 0; i < prefix_len; ++i) lams.push_back(lambda_name(i));
  std::vector<std::vector<std::string>> fs;
  int rc = 0;
  for (const auto& f : frames) {
    fs.emplace_back();
    for (const auto& n : f) fs.back().push_back("c_" + n);
    rc += static_cast<int>(f.size());
  }
  std::string s = "(";
  for (int i = 0; i < prefix_len; ++i) {
    if (i) s += ' ';
    s += lams[i];
  }
  return s + ") " + print_term(name_rec(body, lams, fs, rc, nullptr));
}

std::string ValidationReport::str() const {
  if (ok()) return "ok";
  std::string s;
  for (const auto& u : unbound) {
    if (!s.empty()) s += ", ";
    s += u.name + " @ " + u.at.str();
  }
  return s;
}

ValidationReport validate(const NTerm& t) {
  ValidationReport rep;
  std::vector<std::string> scope;
  validate_rec(t, scope, Position{}, rep);
  return rep;
}

std::vector<PositionedNode> subterm_positions(const NTerm& t) {
  std::vector<PositionedNode> out;
  positions_rec(t, Position{}, out);
  return out;
}

}  // namespace llx
