#include "idebench/core/graph.hpp"

#include <algorithm>

namespace idebench {

const char* interaction_kind(const Interaction& interaction) {
  struct Visitor {
    const char* operator()(const CreateViz&) const { return "create"; }
    const char* operator()(const SetFilter&) const { return "filter"; }
    const char* operator()(const Select&) const { return "select"; }
    const char* operator()(const Link&) const { return "link"; }
    const char* operator()(const Discard&) const { return "discard"; }
  };
  return std::visit(Visitor{}, interaction);
}

const char* to_string(WorkflowType type) {
  switch (type) {
    case WorkflowType::Independent: return "independent";
    case WorkflowType::Sequential: return "sequential";
    case WorkflowType::OneToN: return "one-to-n";
    case WorkflowType::NToOne: return "n-to-one";
    case WorkflowType::Mixed: return "mixed";
  }
  return "mixed";
}

WorkflowType workflow_type_from_string(const std::string& s) {
  if (s == "independent") return WorkflowType::Independent;
  if (s == "sequential") return WorkflowType::Sequential;
  if (s == "one-to-n") return WorkflowType::OneToN;
  if (s == "n-to-one") return WorkflowType::NToOne;
  if (s == "mixed") return WorkflowType::Mixed;
  throw ValidationError("unknown workflow type '" + s + "'");
}

const VizGraph::Node& VizGraph::node(const std::string& name) const {
  auto it = nodes_.find(name);
  if (it == nodes_.end())
    throw GraphError("unknown visualization '" + name + "'");
  return it->second;
}

bool VizGraph::is_live(const std::string& name) const {
  return nodes_.count(name) > 0;
}

const VizSpec& VizGraph::spec(const std::string& name) const {
  return node(name).spec;
}

int64_t VizGraph::creation_index(const std::string& name) const {
  return node(name).created_seq;
}

std::vector<std::string> VizGraph::live_names() const {
  std::vector<std::string> names;
  names.reserve(nodes_.size());
  for (const auto& [name, _] : nodes_) names.push_back(name);
  return names;
}

bool VizGraph::would_cycle(const std::string& source,
                           const std::string& target) const {
  // Adding source->target cycles iff source is reachable from target.
  auto reach = descendants(target);
  return source == target || reach.count(source) > 0;
}

void VizGraph::apply(const Interaction& interaction) {
  if (const auto* create = std::get_if<CreateViz>(&interaction)) {
    const VizSpec& spec = create->spec;
    if (spec.name.empty()) throw GraphError("viz with empty name");
    if (nodes_.count(spec.name))
      throw GraphError("viz '" + spec.name + "' already exists");
    if (spec.binning.empty() || spec.binning.size() > 2)
      throw GraphError("viz '" + spec.name +
                       "' must have 1 or 2 binning dimensions");
    nodes_[spec.name] = Node{spec, next_seq_++};
  } else if (const auto* filter = std::get_if<SetFilter>(&interaction)) {
    auto it = nodes_.find(filter->viz);
    if (it == nodes_.end())
      throw GraphError("filter on unknown viz '" + filter->viz + "'");
    it->second.spec.own_filter = filter->predicate;
  } else if (const auto* select = std::get_if<Select>(&interaction)) {
    auto it = nodes_.find(select->viz);
    if (it == nodes_.end())
      throw GraphError("select on unknown viz '" + select->viz + "'");
    it->second.spec.selection = select->predicate;
  } else if (const auto* link = std::get_if<Link>(&interaction)) {
    if (!is_live(link->source))
      throw GraphError("link source '" + link->source + "' is not live");
    if (!is_live(link->target))
      throw GraphError("link target '" + link->target + "' is not live");
    for (const auto& e : edges_)
      if (e.first == link->source && e.second == link->target)
        throw GraphError("duplicate link " + link->source + " -> " +
                         link->target);
    if (would_cycle(link->source, link->target))
      throw GraphError("link " + link->source + " -> " + link->target +
                       " would create a cycle");
    edges_.emplace_back(link->source, link->target);
  } else if (const auto* discard = std::get_if<Discard>(&interaction)) {
    if (!nodes_.erase(discard->viz))
      throw GraphError("discard of unknown viz '" + discard->viz + "'");
    std::erase_if(edges_, [&](const auto& e) {
      return e.first == discard->viz || e.second == discard->viz;
    });
  }
}

std::set<std::string> VizGraph::ancestors(const std::string& name) const {
  std::set<std::string> out;
  std::vector<std::string> frontier{name};
  while (!frontier.empty()) {
    std::string current = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& [src, dst] : edges_) {
      if (dst == current && out.insert(src).second) frontier.push_back(src);
    }
  }
  out.erase(name);
  return out;
}

std::set<std::string> VizGraph::descendants(const std::string& name) const {
  std::set<std::string> out;
  std::vector<std::string> frontier{name};
  while (!frontier.empty()) {
    std::string current = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& [src, dst] : edges_) {
      if (src == current && out.insert(dst).second) frontier.push_back(dst);
    }
  }
  out.erase(name);
  return out;
}

FilterPredicate effective_filter(const VizGraph& graph,
                                 const std::string& viz) {
  if (!graph.is_live(viz))
    throw GraphError("effective_filter on unknown viz '" + viz + "'");

  // Contribution per viz: ancestors add selection + own filter, the viz
  // itself adds only its own filter.
  struct Contribution {
    int64_t created_seq;
    size_t atom_pos;
    FilterAtom atom;
  };
  std::vector<Contribution> contributions;
  auto add = [&](int64_t seq, const std::optional<FilterPredicate>& pred) {
    if (!pred) return;
    for (size_t i = 0; i < pred->atoms.size(); ++i)
      contributions.push_back({seq, i, pred->atoms[i]});
  };

  add(graph.creation_index(viz), graph.spec(viz).own_filter);
  for (const auto& ancestor : graph.ancestors(viz)) {
    const VizSpec& spec = graph.spec(ancestor);
    const int64_t seq = graph.creation_index(ancestor);
    add(seq, spec.selection);
    add(seq, spec.own_filter);
  }

  std::stable_sort(contributions.begin(), contributions.end(),
                   [](const Contribution& a, const Contribution& b) {
                     if (a.created_seq != b.created_seq)
                       return a.created_seq < b.created_seq;
                     return a.atom.column < b.atom.column;
                   });

  FilterPredicate result;
  result.atoms.reserve(contributions.size());
  for (auto& c : contributions) result.atoms.push_back(std::move(c.atom));
  return result;
}

std::set<std::string> dirty_set(const VizGraph& graph,
                                const Interaction& interaction,
                                const DirtySetOptions& options) {
  std::set<std::string> out;
  if (const auto* create = std::get_if<CreateViz>(&interaction)) {
    out.insert(create->spec.name);
  } else if (const auto* filter = std::get_if<SetFilter>(&interaction)) {
    out = graph.descendants(filter->viz);
    out.insert(filter->viz);
  } else if (const auto* select = std::get_if<Select>(&interaction)) {
    out = graph.descendants(select->viz);
    if (options.select_rerenders_source) out.insert(select->viz);
  } else if (const auto* link = std::get_if<Link>(&interaction)) {
    out = graph.descendants(link->target);
    out.insert(link->target);
  }
  // Discard: nothing re-renders, the viz is simply gone.
  return out;
}

}  // namespace idebench
