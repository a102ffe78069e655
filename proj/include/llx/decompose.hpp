#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llx/syntax.hpp"
#include "llx/term.hpp"

namespace llx {

enum class System { RegMinus, Reg, RegPlus };
enum class StrategyKind { EagerRegPlus, LazyRegPlus, EagerReg, LazyReg };

const char* strategy_name(StrategyKind s);  // eager-reg-plus, ...
StrategyKind parse_strategy(const std::string& s);
bool is_plus(StrategyKind s);

struct DecompLabel {
  enum Kind { Lam, App0, App1, S, Del } kind;
  int index = -1;  // Del only: prefix entry, 0 = outermost

  bool operator==(const DecompLabel& o) const { return kind == o.kind && index == o.index; }
  std::string str() const;  // λ @0 @1 S del(i)
};

// Position annotation: p[i] is the abstraction position of prefix entry i,
// q the position of the body in the (unfolded) root term.
struct Origin {
  std::vector<Position> p;
  Position q;
};

// A prefixed term (x1 … xn) body. Binding groups stay inside the body as
// letrec nodes; Var(i) in the body refers to prefix entry n-1-i.
struct ExplorationState {
  int n = 0;
  Term body;
  std::optional<Origin> origin;
};

std::string print_state(const ExplorationState& s, const Scheme* scheme = nullptr);

// Silent steps at the root (unfolding steps with red first, scheme call
// expansion) until the head is a variable, abstraction or application; then
// reduce. Throws UnproductiveError / Error(Unproductive) on stagnation.
ExplorationState normalize(ExplorationState s, const Scheme* scheme = nullptr);

ExplorationState initial_state(const Term& t, const Scheme* scheme = nullptr, bool with_origin = true);

// Prefix entry k (0 = outermost) does not occur in the body.
bool is_vacuous(const ExplorationState& s, int k);

using Step = std::pair<DecompLabel, ExplorationState>;

// All enabled steps of the system; results are normalized.
std::vector<Step> decomp_steps(const ExplorationState& s, System sys, const Scheme* scheme = nullptr);
// The steps a strategy allows (only @0/@1 branch).
std::vector<Step> strategy_steps(const ExplorationState& s, StrategyKind k, const Scheme* scheme = nullptr);

struct Transition {
  int from;
  DecompLabel label;
  int to;
};

struct Exploration {
  std::vector<ExplorationState> states;  // states[0] is the start
  std::vector<Transition> transitions;
  std::vector<int> parent;               // BFS tree, -1 for the start
  std::vector<DecompLabel> parent_label;
  bool exceeded = false;
  bool stopped = false;  // stopped by the callback
  StrategyKind strategy = StrategyKind::EagerRegPlus;

  std::vector<std::vector<Transition>> out() const;
  bool finite() const { return !exceeded && !stopped; }
};

struct ExploreOptions {
  int bound = 10000;
  bool with_origin = true;
  bool check_productive = true;  // letrec inputs only
  std::function<bool(const Exploration&, int)> on_new;  // return true to stop
};

Exploration generated_subterms(const Term& t, StrategyKind k, const ExploreOptions& opt = {},
                               const Scheme* scheme = nullptr);
Exploration generated_subterms(const Scheme& s, StrategyKind k, const ExploreOptions& opt = {});

// Replays labels under a strategy; nullopt when a label is not enabled.
std::optional<ExplorationState> replay(const ExplorationState& from, const std::vector<DecompLabel>& labels,
                                       StrategyKind k, const Scheme* scheme = nullptr);

struct PumpWitness {
  int first = -1, second = -1;  // state ids in the exploration
  int n1 = 0, n2 = 0;           // prefix lengths
  std::vector<DecompLabel> path;
  std::string first_text, second_text;
  bool verified = false;  // replayed twice
};

// Searches the BFS tree for an ancestor with the same body, a shorter prefix
// and no prefix dip below it on the connecting path; only witnesses that
// replay twice are returned.
std::optional<PumpWitness> find_pump(const Exploration& e, int state, const Scheme* scheme = nullptr);
bool verify_pump(const Exploration& e, PumpWitness& w, const Scheme* scheme = nullptr);

// Reg⁻_pos descent from the root to position q.
ExplorationState navigate(const Term& t, const Position& q, const Scheme* scheme = nullptr);

bool binds(const Term& t, const Position& p, const Position& q, const Scheme* scheme = nullptr);
bool captured_by(const Term& t, const Position& q, const Position& p, const Scheme* scheme = nullptr);

struct ChainReport {
  bool infinite = false;
  int max_finite_length = 0;
  bool capped = false;  // exploration did not close; value is a lower bound
  std::optional<PumpWitness> witness;
  std::vector<Position> sample_chain;
};

std::string format_chain(const std::vector<Position>& c);

ChainReport chains(const Term& t, int max_len, int bound = 10000, const Scheme* scheme = nullptr);
ChainReport chains(const Scheme& s, int max_len, int bound = 10000);

}  // namespace llx
