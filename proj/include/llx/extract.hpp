#pragma once

#include <optional>
#include <string>

#include "llx/ltg.hpp"

namespace llx {

struct Classification {
  enum Kind { StronglyRegular, RegularNotStrong, Unknown } kind = Unknown;
  int graph_size = 0;                  // StronglyRegular
  std::optional<PumpWitness> witness;  // RegularNotStrong
  int bound_hit = 0;                   // Unknown
  bool eager_reg_finite = false;
  int eager_reg_states = 0;
};

const char* classification_name(Classification::Kind k);  // STRONGLY_REGULAR ...

Classification classify(const Scheme& s, int bound = 10000);

// Throws UngroundedCycle when some cycle has no point it is grounded at
// (its prefix length changes around the cycle), AmbiguousNameless on
// Reg-built graphs.
NTerm extract_letrec(const Ltg& g);
NTerm extract_letrec(const Exploration& e);

Term canonicalize(const Term& t, int bound = 10000);
NTerm canonicalize(const NTerm& t, int bound = 10000);

}  // namespace llx
