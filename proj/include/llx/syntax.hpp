#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llx/term.hpp"

namespace llx {

struct ParseOptions {
  bool allow_holes = false;
};

NTerm parse_term(const std::string& src, ParseOptions opt = {});

struct SchemeDef {
  std::string name;
  std::vector<std::string> params;
  NTerm body;
  Term cbody;  // canonical, params as prefix (last param = index 0)
};

struct Scheme {
  std::vector<SchemeDef> defs;
  NTerm main;
  Term cmain;
  std::map<std::string, std::vector<bool>> used_mask;

  int symbol(const std::string& name) const;
  std::vector<std::string> symbols() const;
  // Body of defs[sym] instantiated with call arguments (de Bruijn indices
  // relative to the call site).
  Term expand(int sym, const std::vector<int>& args) const;
};

Scheme parse_scheme(const std::string& src);

// True when the source (after comments/whitespace) starts with `def`.
bool looks_like_scheme(const std::string& src);

Term to_canonical(const NTerm& t, const std::vector<std::string>& prefix = {});

// Readable names for a canonical term. Prefix entries are named first.
NTerm to_named(const Term& t, int prefix_len = 0,
               const std::vector<std::string>* symbols = nullptr);

std::string print_term(const NTerm& t);
std::string print_term(const Term& t, int prefix_len = 0,
                       const std::vector<std::string>* symbols = nullptr);
// "(a b) body" form for prefixed states.
std::string print_prefixed(int prefix_len, const Term& body,
                           const std::vector<std::string>* symbols = nullptr);

// Prefixed term whose free recursion variables resolve to the given outer
// binding groups (outermost first); they print as constants c_<name>.
std::string print_with_constants(int prefix_len, const Term& body,
                                 const std::vector<std::vector<std::string>>& frames);

std::string lambda_name(int k);
std::string rec_name(int k);

struct Unbound {
  std::string name;
  Position at;
};

struct ValidationReport {
  bool ok() const { return unbound.empty(); }
  std::vector<Unbound> unbound;
  std::string str() const;
};

ValidationReport validate(const NTerm& t);

// Every node of t with its position; binder positions (q0 of an Abs at q)
// are reported with kind "binder".
struct PositionedNode {
  Position at;
  std::string kind;  // var, abs, binder, app, letrec, hole, bottom, call
};
std::vector<PositionedNode> subterm_positions(const NTerm& t);

}  // namespace llx
