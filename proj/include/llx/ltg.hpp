#pragma once

#include <array>
#include <string>
#include <vector>

#include "llx/decompose.hpp"

namespace llx {

enum class StateKind { Lam, S, App, Var };
const char* kind_name(StateKind k);  // lam s app var

// λ-transition graph. next[s][0] is the λ/S/@0 successor, next[s][1] the @1
// successor; unused slots are -1.
struct Ltg {
  int start = 0;
  std::vector<StateKind> kind;
  std::vector<std::array<int, 2>> next;
  std::vector<std::string> text;  // optional state descriptions (not serialized)
  bool built_with_reg = false;    // Del steps recorded as S; not serialized

  int size() const { return static_cast<int>(kind.size()); }
  int add(StateKind k, int a = -1, int b = -1);
};

Ltg ltg_from_exploration(const Exploration& e, const Scheme* scheme = nullptr);
Ltg build_ltg(const Term& t, StrategyKind k = StrategyKind::EagerRegPlus, int bound = 10000,
              const Scheme* scheme = nullptr);
Ltg build_ltg(const NTerm& t, StrategyKind k = StrategyKind::EagerRegPlus, int bound = 10000);
Ltg build_ltg(const Scheme& s, StrategyKind k = StrategyKind::EagerRegPlus, int bound = 10000);

struct Audit {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};
// Out-degree per kind, S-acyclicity, connectivity from start.
Audit audit(const Ltg& g);

// Prefix length of every state (λ +1, S -1 from the start); -1 where
// inconsistent or unreachable.
std::vector<int> prefix_lengths(const Ltg& g);

struct Bisimulation {
  bool equal = true;
  std::vector<std::string> trace;  // labels from the starts to the mismatch
  std::string mismatch;            // "lam vs var"
};
Bisimulation bisimilar(const Ltg& a, const Ltg& b);

// Throws AmbiguousNameless on graphs built with Reg strategies.
Term readback_depth(const Ltg& g, int d);

// Coarsest partition compatible with kinds, prefix lengths and successors.
Ltg minimize(const Ltg& g);

std::string to_dot(const Ltg& g);
std::string to_json(const Ltg& g);
Ltg from_json(const std::string& s);  // throws Error(Schema)

}  // namespace llx
