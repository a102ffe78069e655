#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llx/term.hpp"

namespace llx {

enum class UnfoldRule { NuApp, NuLam, NuMerge, NuRec, NuNil, NuRed };

// "@", "λ", "merge", "rec", "nil", "red"
const char* rule_name(UnfoldRule r);

struct UnfoldStep {
  UnfoldRule rule;
  int slot = -1;  // NuRec only
  Position at;
  Term result;  // whole term after the step
};

// The rewrite at a single letrec node (t itself is the redex).
// Throws InvalidStep when t is not a redex of `rule`.
Term rewrite_root(const Term& t, UnfoldRule rule, int slot = -1);
// Rules applicable at the root of t (empty unless t is a letrec).
std::vector<std::pair<UnfoldRule, int>> root_rules(const Term& t);

std::vector<UnfoldStep> enumerate_unfold_steps(const Term& t);
std::vector<UnfoldStep> enumerate_unfold_steps(const NTerm& t);
Term apply_step(const Term& t, const UnfoldStep& s);
NTerm apply_step(const NTerm& t, const UnfoldStep& s);

// Subterm at a position; throws PositionOutOfRange.
Term subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, const Term& with);

// Normal form under nil and red.
Term reduce(const Term& t);
NTerm reduce(const NTerm& t);
bool is_reduced(const Term& t);

// The deterministic root step: red if it applies, otherwise the single
// structural rule matching the body (nil for an empty group).
std::pair<UnfoldRule, int> root_step_rule(const Term& t);

struct RootCycle {
  Term entry;  // first repeated term
  std::vector<UnfoldRule> rules;  // steps from entry back to entry
  std::vector<Term> terms;        // terms after each step
};

// Applies root steps until the root is no letrec. Returns the head term or,
// when a term repeats, the cycle.
struct RootClosure {
  std::optional<Term> head;
  std::optional<RootCycle> cycle;
  int steps = 0;
};
RootClosure root_closure(const Term& t, int cap = 100000);

class UnproductiveError : public Error {
 public:
  UnproductiveError(const std::string& msg, RootCycle c)
      : Error(ErrorKind::Unproductive, msg), cycle(std::move(c)) {}
  RootCycle cycle;
};

struct UnfoldOptions {
  std::uint64_t seed = 0;
  std::vector<std::string>* trace = nullptr;  // "<rule>@<pos> ⇒ <term>" lines
  std::size_t max_steps = 2000000;
};

// Depth counts λ and @ only; λ/@ nodes at depth d become Hole, variables are
// always kept. Throws UnproductiveError on a root-stagnating subterm above
// the cut.
Term unfold_to_depth(const Term& t, int d, const UnfoldOptions& opt = {});
// Same, with root-active subterms replaced by Bottom.
Term partial_unfold_to_depth(const Term& t, int d, const UnfoldOptions& opt = {});

// Recursive root-closure descent; same results as the scheduler, much
// cheaper on deep cuts.
Term lazy_unfold_to_depth(const Term& t, int d, bool bottom = false);

// Depth-d truncation of a letrec-free term.
Term truncate(const Term& t, int d);

}  // namespace llx
