#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "idebench/core/types.hpp"

namespace idebench {

// ---------------------------------------------------------------------------
// Interactions

struct CreateViz {
  VizSpec spec;
};
struct SetFilter {
  std::string viz;
  FilterPredicate predicate;
};
struct Select {
  std::string viz;
  FilterPredicate predicate;
};
struct Link {
  std::string source;
  std::string target;
};
struct Discard {
  std::string viz;
};

using Interaction = std::variant<CreateViz, SetFilter, Select, Link, Discard>;

const char* interaction_kind(const Interaction& interaction);

enum class WorkflowType { Independent, Sequential, OneToN, NToOne, Mixed };

const char* to_string(WorkflowType type);
WorkflowType workflow_type_from_string(const std::string& s);

/// One simulated exploration session: an ordered interaction sequence.
struct Workflow {
  std::string name;
  WorkflowType type = WorkflowType::Mixed;
  std::vector<Interaction> interactions;
};

// ---------------------------------------------------------------------------
// Graph

/// The live set of visualizations and the directed links between them.
/// Mutated only by applying interactions in sequence; always acyclic.
class VizGraph {
 public:
  /// Applies one interaction, enforcing all graph invariants.
  /// Throws GraphError on dangling names, duplicate creations, cycles.
  void apply(const Interaction& interaction);

  bool is_live(const std::string& name) const;
  const VizSpec& spec(const std::string& name) const;
  /// Monotone sequence number assigned when the viz was created.
  int64_t creation_index(const std::string& name) const;

  /// All link edges (source, target), in insertion order.
  const std::vector<std::pair<std::string, std::string>>& edges() const {
    return edges_;
  }
  std::vector<std::string> live_names() const;  // sorted

  /// Transitive ancestors following link edges backwards.
  std::set<std::string> ancestors(const std::string& name) const;
  /// Transitive descendants following link edges forwards.
  std::set<std::string> descendants(const std::string& name) const;

 private:
  struct Node {
    VizSpec spec;
    int64_t created_seq = 0;
  };
  const Node& node(const std::string& name) const;
  bool would_cycle(const std::string& source, const std::string& target) const;

  std::map<std::string, Node> nodes_;
  std::vector<std::pair<std::string, std::string>> edges_;
  int64_t next_seq_ = 0;
};

// ---------------------------------------------------------------------------
// Operations

/// The complete predicate a query for `viz` must satisfy: the viz's own
/// filter conjoined with every upstream ancestor's selection and filter.
/// Atom order is deterministic: contributing viz creation order, then
/// column name, then atom position.
FilterPredicate effective_filter(const VizGraph& graph,
                                 const std::string& viz);

struct DirtySetOptions {
  /// Whether a Select re-renders the selected viz itself (it highlights
  /// the brushed bins) in addition to its link descendants.
  bool select_rerenders_source = true;
};

/// Names of every viz whose delivered result changes after
/// `interaction`. Expects `graph` in its post-interaction state, i.e.
/// call apply() first.
std::set<std::string> dirty_set(const VizGraph& graph,
                                const Interaction& interaction,
                                const DirtySetOptions& options = {});

}  // namespace idebench
