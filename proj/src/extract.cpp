#include "llx/extract.hpp"

#include <algorithm>

namespace llx {

const char* classification_name(Classification::Kind k) {
  switch (k) {
    case Classification::StronglyRegular: return "STRONGLY_REGULAR";
    case Classification::RegularNotStrong: return "REGULAR_NOT_STRONG";
    case Classification::Unknown: return "UNKNOWN";
  }
  return "?";
}

Classification classify(const Scheme& s, int bound) {
  Classification c;
  ExploreOptions opt;
  opt.bound = bound;
  opt.with_origin = false;
  std::optional<PumpWitness> pump;
  opt.on_new = [&](const Exploration& e, int id) {
    pump = find_pump(e, id, &s);
    return pump.has_value();
  };
  Exploration e = generated_subterms(s, StrategyKind::EagerRegPlus, opt);
  if (pump) {
    c.kind = Classification::RegularNotStrong;
    c.witness = pump;
  } else if (e.exceeded) {
    c.kind = Classification::Unknown;
    c.bound_hit = bound;
  } else {
    c.kind = Classification::StronglyRegular;
    c.graph_size = static_cast<int>(e.states.size());
  }
  ExploreOptions plain;
  plain.bound = bound;
  plain.with_origin = false;
  Exploration r = generated_subterms(s, StrategyKind::EagerReg, plain);
  c.eager_reg_finite = r.finite();
  c.eager_reg_states = static_cast<int>(r.states.size());
  return c;
}

namespace {

// A back-edge closes a letrec only when the stack segment from the target's
// latest occurrence is grounded. Otherwise the target is entered again: a
// cycle entered above its lowest point then closes at that point one lap
// later. Graphs whose cycles change the prefix length never close and hit
// the depth cap.
class Extractor {
 public:
  explicit Extractor(const Ltg& g) : g_(g), occ_(g.size()), cap_(4 * g.size() + 8) {}

  NTerm go(int s) {
    int arrive = static_cast<int>(names_.size());
    if (!occ_[s].empty()) {
      int from = occ_[s].back();
      int need = stack_n_[from];
      int low = *std::min_element(stack_n_.begin() + from, stack_n_.end());
      if (low >= need && arrive == need) {
        if (rec_[from].empty()) rec_[from] = rec_name(recs_++);
        return nvar(rec_[from]);
      }
      if (static_cast<int>(stack_n_.size()) >= cap_)
        throw Error(ErrorKind::UngroundedCycle, "ungrounded cycle through state " + std::to_string(s) +
                                                    ": prefix length " + std::to_string(need) + ", dips to " +
                                                    std::to_string(std::min(low, arrive)) + ", returns with " +
                                                    std::to_string(arrive));
    }
    int at = static_cast<int>(stack_n_.size());
    occ_[s].push_back(at);
    stack_n_.push_back(arrive);
    rec_.emplace_back();
    NTerm r;
    switch (g_.kind[s]) {
      case StateKind::Lam: {
        std::string x = lambda_name(lams_++);
        names_.push_back(x);
        NTerm b = go(g_.next[s][0]);
        names_.pop_back();
        r = nabs(x, b);
        break;
      }
      case StateKind::S: {
        if (names_.empty()) throw Error(ErrorKind::Schema, "S-transition with empty prefix");
        std::string top = names_.back();
        names_.pop_back();
        r = go(g_.next[s][0]);
        names_.push_back(top);
        break;
      }
      case StateKind::App: {
        NTerm f = go(g_.next[s][0]);
        NTerm a = go(g_.next[s][1]);
        r = napp(f, a);
        break;
      }
      case StateKind::Var:
        if (names_.empty()) throw Error(ErrorKind::Schema, "variable leaf with empty prefix");
        r = nvar(names_.back());
        break;
    }
    std::string u = std::move(rec_.back());
    rec_.pop_back();
    stack_n_.pop_back();
    occ_[s].pop_back();
    if (!u.empty()) r = nletrec({{u, r}}, nvar(u));
    return r;
  }

 private:
  const Ltg& g_;
  std::vector<std::vector<int>> occ_;  // stack positions of each state
  std::vector<int> stack_n_;           // prefix length per stack position
  std::vector<std::string> rec_;       // recursion variable per stack position
  std::vector<std::string> names_;
  int cap_;
  int lams_ = 0;
  int recs_ = 0;
};

}  // namespace

NTerm extract_letrec(const Ltg& g) {
  if (g.built_with_reg)
    throw Error(ErrorKind::AmbiguousNameless, "graph built with a Reg strategy has no unique readback");
  Audit a = audit(g);
  if (!a.ok()) throw Error(ErrorKind::Schema, "malformed graph: " + a.problems.front());
  Extractor x(g);
  return x.go(g.start);
}

NTerm extract_letrec(const Exploration& e) { return extract_letrec(ltg_from_exploration(e)); }

Term canonicalize(const Term& t, int bound) {
  Ltg g = build_ltg(t, StrategyKind::EagerRegPlus, bound);
  return to_canonical(extract_letrec(minimize(g)));
}

NTerm canonicalize(const NTerm& t, int bound) { return to_named(canonicalize(to_canonical(t), bound)); }

}  // namespace llx
