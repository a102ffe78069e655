#pragma once

// Reference implementations used to cross-check the library. They work on
// named terms with fresh renaming and share no code with unfold/decompose.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "llx/syntax.hpp"
#include "llx/term.hpp"

namespace llx::oracle {

// α-equivalence by simultaneous renaming. Binding groups compare in order.
bool alpha_equal(const NTerm& a, const NTerm& b);

enum class Verdict { Productive, Unproductive, Undecided };
const char* verdict_name(Verdict v);

// Explores every subterm of the unfolding, flagging one whose root does not
// produce a constructor within `root_steps` root rewrites. Undecided when
// more than `cap` distinct subterms show up.
Verdict stagnation(const NTerm& t, int root_steps = 200, std::size_t cap = 200000);

// The same check with verdicts remembered across calls; subterm keys ignore
// free variables, which cannot influence stagnation.
class StagnationOracle {
 public:
  explicit StagnationOracle(int root_steps = 200, std::size_t cap = 200000) : root_steps_(root_steps), cap_(cap) {}
  Verdict check(const NTerm& t);

 private:
  int root_steps_;
  std::size_t cap_;
  std::unordered_map<std::string, bool> known_;
};

// Depth-d truncation of the unfolding (λ and @ counted, variables kept).
// Throws std::runtime_error when a root stagnates.
NTerm unfold_depth(const NTerm& t, int d, int root_steps = 200);

// Depth-d truncation of the infinite term a scheme denotes.
Term scheme_depth(const Scheme& s, int d);

// Node count: variables, λ, @, one per letrec, plus its right-hand sides.
int size(const NTerm& t);

// Every closed term of size ≤ max_size over the given names (used for λ
// binders and recursion variables alike).
void for_each_closed(int max_size, const std::vector<std::string>& names,
                     const std::function<void(const NTerm&)>& fn);

// Every α-class of closed terms of size ≤ max_size that can be written with
// `names` distinct identifiers, each exactly once, generated namelessly.
void for_each_closed_class(int max_size, int names, const std::function<void(const Term&)>& fn);

NTerm random_term(std::mt19937_64& rng, int max_size, const std::vector<std::string>& names,
                  bool allow_letrec = true);

}  // namespace llx::oracle
