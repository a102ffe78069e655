#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "llx/syntax.hpp"
#include "llx/unfold.hpp"

namespace llx {

enum class EdgeKind { InPart, AppLeft, AppRight, AbsBody, Vac, RecJump };
const char* edge_kind_name(EdgeKind k);

// Access graph of the derivation of an empty-prefixed term in which Vac⁺
// steps are placed lazily, directly below variables and recursion constants.
struct AccessGraph {
  struct Node {
    int prefix = 0;
    Term body;  // free Rec references are the constants c_f
    int ctx = 0;  // index into frame_names
  };
  struct Edge {
    int from, to;
    bool guarded;
    EdgeKind kind;
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<std::vector<std::string>>> frame_names;
  int root = 0;

  std::string label(int node) const;
  std::vector<int> reachable() const;  // node ids reachable from root
};

AccessGraph build_access_graph(const Term& t);
AccessGraph build_access_graph(const NTerm& t);

struct ProductivityResult {
  bool productive = true;
  std::vector<int> cycle;  // node ids, first == last
  std::vector<std::string> cycle_labels;
  // Position in the unfolding whose subterm is root-active, with the root
  // step cycle found there.
  std::optional<Position> bottom_at;
  std::optional<RootCycle> root_cycle;
};

ProductivityResult is_productive(const Term& t);
ProductivityResult is_productive(const NTerm& t);
bool expresses_some_term(const Term& t);
bool expresses_some_term(const NTerm& t);

}  // namespace llx
