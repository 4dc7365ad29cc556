#include "idebench/workload/generate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace idebench {

namespace {

constexpr uint64_t kGenerateStream = 0x77666c67ULL;

// Frequency-weighted category draw; falls back to uniform when the
// schema carries no counts.
std::string weighted_category(const SchemaInfo& schema,
                              const ColumnSchema& column, Rng& rng) {
  auto it = schema.frequencies.find(column.name);
  uint64_t total = 0;
  if (it != schema.frequencies.end())
    for (const auto& [cat, count] : it->second) total += count;
  if (total == 0)
    return column.categories[static_cast<size_t>(
        rng.uniform_index(column.categories.size()))];
  uint64_t u = rng.uniform_index(total);
  for (const auto& [cat, count] : it->second) {
    if (u < count) return cat;
    u -= count;
  }
  return it->second.back().first;
}

}  // namespace

FilterPredicate sample_filter(const SchemaInfo& schema,
                              const std::string& column, Rng& rng) {
  const ColumnSchema& col = schema.column(column);
  FilterPredicate predicate;
  FilterAtom atom;
  atom.column = column;
  if (col.kind == ColumnKind::Nominal) {
    atom.op = CompareOp::Eq;
    atom.category = weighted_category(schema, col, rng);
  } else {
    atom.op = CompareOp::InRange;
    const double span = col.max - col.min;
    if (span <= 0.0) {
      atom.low = col.min;
      atom.high = col.min + 1.0;
    } else {
      const double width = rng.uniform(0.05, 0.50);
      const double start = rng.uniform(0.0, 1.0 - width);
      atom.low = col.min + start * span;
      atom.high = atom.low + width * span;
    }
  }
  predicate.atoms.push_back(std::move(atom));
  return predicate;
}

FilterPredicate sample_selection(const VizSpec& viz, const SchemaInfo& schema,
                                 Rng& rng) {
  FilterPredicate predicate;
  for (const auto& dim : viz.binning) {
    const ColumnSchema& col = schema.column(dim.column);
    FilterAtom atom;
    atom.column = dim.column;
    if (dim.method == BinningSpec::Method::Distinct) {
      atom.op = CompareOp::Eq;
      atom.category = weighted_category(schema, col, rng);
      predicate.atoms.push_back(std::move(atom));
      continue;
    }
    atom.op = CompareOp::InRange;
    const double span = col.max - col.min;
    if (span <= 0.0) {
      atom.low = col.min;
      atom.high = col.min + 1.0;
      predicate.atoms.push_back(std::move(atom));
      continue;
    }
    if (dim.method == BinningSpec::Method::FixedCount) {
      const int64_t k = dim.bin_count;
      const auto i = static_cast<int64_t>(rng.uniform_index(k));
      const int64_t max_extent = std::min<int64_t>(k - 1 - i, std::max<int64_t>(1, k / 4));
      const auto j = i + static_cast<int64_t>(rng.uniform_index(max_extent + 1));
      atom.low = col.min + static_cast<double>(i) * span / static_cast<double>(k);
      atom.high = j == k - 1
                      ? std::nextafter(col.max, col.max + 1.0)
                      : col.min + static_cast<double>(j + 1) * span /
                                      static_cast<double>(k);
    } else {  // fixed width
      const auto lo_id = static_cast<int64_t>(
          std::floor((col.min - dim.reference) / dim.bin_width));
      const auto hi_id = static_cast<int64_t>(
          std::floor((col.max - dim.reference) / dim.bin_width));
      const int64_t bins = hi_id - lo_id + 1;
      const int64_t i = lo_id + static_cast<int64_t>(rng.uniform_index(bins));
      const int64_t max_extent =
          std::min<int64_t>(hi_id - i, std::max<int64_t>(1, bins / 4));
      const auto j = i + static_cast<int64_t>(rng.uniform_index(max_extent + 1));
      atom.low = dim.reference + static_cast<double>(i) * dim.bin_width;
      atom.high = dim.reference + static_cast<double>(j + 1) * dim.bin_width;
    }
    predicate.atoms.push_back(std::move(atom));
  }
  return predicate;
}

namespace {

// Incremental workflow construction: every emitted interaction is
// applied to a live VizGraph immediately, so an invalid sequence can
// never be produced in the first place.
class Builder {
 public:
  explicit Builder(const GenerationConfig& config)
      : config_(config), rng_(Rng::derive(config.rng_seed, kGenerateStream)) {
    if (config.schema.columns.size() < 2)
      throw ValidationError("workflow generation needs at least 2 columns");
    if (config.interaction_count == 0 && config.min_interactions == 0)
      throw ValidationError("either interaction_count or min_interactions "
                            "must be positive");
    if (config.max_vizs < 2)
      throw ValidationError("max_vizs must be at least 2");
    for (size_t c = 0; c < config.schema.columns.size(); ++c) {
      if (config.schema.columns[c].kind == ColumnKind::Quantitative)
        quantitative_.push_back(c);
      else
        nominal_.push_back(c);
    }
    aggregates_ = config.aggregates;
    if (quantitative_.empty()) {
      // Nothing to average or sum over.
      aggregates_ = {AggregateFn::Count};
    }
    if (aggregates_.empty()) aggregates_ = {AggregateFn::Count};
  }

  Workflow build() {
    const size_t target = config_.interaction_count;  // 0 = stop-driven
    if (config_.type == WorkflowType::Mixed) {
      while (!done(target) && !stopped_) {
        cleanup_for_budget(target);
        if (done(target)) break;
        const WorkflowType type = pick_episode_type(target);
        run_episode(type, episode_length(target, type), target);
      }
    } else {
      run_episode(config_.type, target == 0 ? SIZE_MAX : target, target);
    }
    Workflow workflow;
    workflow.name = config_.name.empty()
                        ? std::string(to_string(config_.type)) + "_0"
                        : config_.name;
    workflow.type = config_.type;
    workflow.interactions = std::move(out_);
    return workflow;
  }

 private:
  struct Episode {
    WorkflowType type = WorkflowType::Independent;
    std::vector<std::string> owned;     // live vizs created this episode
    std::vector<std::string> unlinked;  // owned but not yet wired up
    std::vector<std::string> path;      // sequential chain, in order
    std::vector<std::string> spokes;    // linked sources/targets of the hub
    std::string hub;                    // 1:N source / N:1 target
    size_t fan_out = 0;
    size_t links_made = 0;
    bool hub_touched = false;  // hub filtered/brushed with the full star wired
  };

  bool done(size_t target) const {
    return target > 0 && out_.size() >= target;
  }

  // ---- episode orchestration (mixed workflows) ----

  WorkflowType pick_episode_type(size_t target) {
    const size_t remaining = target == 0 ? SIZE_MAX : target - out_.size();
    std::vector<WorkflowType> candidates{WorkflowType::Independent};
    if (remaining >= 3) candidates.push_back(WorkflowType::Sequential);
    if (remaining >= 5) candidates.push_back(WorkflowType::NToOne);
    if (remaining >= 6) candidates.push_back(WorkflowType::OneToN);
    return candidates[static_cast<size_t>(
        rng_.uniform_index(candidates.size()))];
  }

  size_t episode_length(size_t target, WorkflowType type) {
    size_t len = 4 + static_cast<size_t>(rng_.uniform_index(5));  // 4..8
    // A fan-out star needs hub + 2 spokes + 2 links + a hub touch, a
    // fan-in star skips the touch, a chain needs 2 vizs + 1 link.
    if (type == WorkflowType::OneToN)
      len = std::max<size_t>(len, 6);
    else if (type == WorkflowType::NToOne)
      len = std::max<size_t>(len, 5);
    else if (type == WorkflowType::Sequential)
      len = std::max<size_t>(len, 3);
    if (target > 0) len = std::min(len, target - out_.size());
    return len;
  }

  // Mixed sessions close old charts before opening a new line of
  // exploration; keeps the graph under the viz budget.
  void cleanup_for_budget(size_t target) {
    while (!done(target) && live_order_.size() + 4 > config_.max_vizs) {
      emit(Discard{live_order_.front()});
      prev_ = ChainState::Discard;
    }
  }

  // ---- the chain loop ----

  void run_episode(WorkflowType type, size_t length, size_t target) {
    ep_ = Episode{};
    ep_.type = type;
    if (type == WorkflowType::OneToN || type == WorkflowType::NToOne)
      ep_.fan_out = pick_fan_out(length, target);
    const TransitionTable table =
        config_.transitions ? *config_.transitions
                            : TransitionTable::for_type(type);

    size_t emitted = 0;
    bool first = out_.empty();
    while (emitted < length && !done(target)) {
      const size_t budget_left =
          target == 0 ? length - emitted
                      : std::min(length - emitted, target - out_.size());
      ChainState kind;
      if (!quota_move(budget_left, kind)) {
        const uint32_t mask = feasible_mask(target);
        kind = first ? table.sample_initial(mask, rng_)
                     : table.sample(prev_, mask, rng_);
      }
      first = false;
      if (kind == ChainState::Stop) {
        stopped_ = true;
        return;
      }
      instantiate(kind);
      prev_ = kind;
      ++emitted;
    }
  }

  // Once the remaining budget barely covers what the topology still
  // owes (creates, links, and for a fan-out star one interaction on
  // the fully wired hub), the chain gives way to the quota.
  bool quota_move(size_t budget_left, ChainState& kind) {
    size_t creates = 0, links = 0, touches = 0;
    if (ep_.type == WorkflowType::OneToN || ep_.type == WorkflowType::NToOne) {
      const size_t vizs = ep_.fan_out + 1;
      creates = ep_.owned.size() < vizs ? vizs - ep_.owned.size() : 0;
      links = ep_.fan_out - ep_.links_made;
      if (ep_.type == WorkflowType::OneToN && !ep_.hub_touched) touches = 1;
    } else if (ep_.type == WorkflowType::Sequential &&
               ep_.links_made == 0) {
      creates = ep_.owned.size() < 2 ? 2 - ep_.owned.size() : 0;
      links = 1;
    }
    const size_t needed = creates + links + touches;
    if (needed == 0 || budget_left > needed) return false;
    if (creates > 0) {
      kind = ChainState::Create;
    } else if (links > 0) {
      kind = ChainState::Link;
    } else {
      kind = ChainState::Select;
      force_hub_ = true;
    }
    return true;
  }

  size_t pick_fan_out(size_t length, size_t target) {
    const auto lo = static_cast<size_t>(std::max(2, config_.fan_out.first));
    auto hi = static_cast<size_t>(
        std::max(config_.fan_out.first, config_.fan_out.second));
    // Budget: hub + N creates + N links (+ the hub touch for fan-out
    // stars) must fit the episode.
    const size_t reserve = ep_.type == WorkflowType::OneToN ? 2 : 1;
    const size_t budget =
        target == 0 ? length : std::min(length, target - out_.size());
    if (budget != SIZE_MAX) hi = std::min(hi, (budget - reserve) / 2);
    hi = std::min(hi, config_.max_vizs - 1);
    if (hi < lo)
      throw ValidationError(
          "fan-out " + std::to_string(lo) + " does not fit: needs at least " +
          std::to_string(2 * lo + reserve) + " interactions and " +
          std::to_string(lo + 1) + " viz slots");
    return lo + static_cast<size_t>(rng_.uniform_index(hi - lo + 1));
  }

  uint32_t feasible_mask(size_t target) const {
    uint32_t mask = 0;
    const bool linky =
        ep_.type == WorkflowType::OneToN || ep_.type == WorkflowType::NToOne;

    bool can_create = live_order_.size() < config_.max_vizs;
    if (linky && ep_.owned.size() >= ep_.fan_out + 1) can_create = false;
    if (can_create) mask |= chain_bit(ChainState::Create);

    if (!live_order_.empty()) {
      mask |= chain_bit(ChainState::Filter);
      mask |= chain_bit(ChainState::Select);
    }

    bool can_link = false;
    if (ep_.type == WorkflowType::Sequential)
      can_link = !ep_.path.empty() && !ep_.unlinked.empty();
    else if (linky)
      can_link = !ep_.hub.empty() && !ep_.unlinked.empty() &&
                 ep_.links_made < ep_.fan_out;
    if (can_link) mask |= chain_bit(ChainState::Link);

    if (ep_.type == WorkflowType::Independent && !ep_.owned.empty())
      mask |= chain_bit(ChainState::Discard);

    // Stop is only on the table in stop-driven mode, once the workflow
    // is long enough and the episode topology quota is met.
    if (target == 0 && out_.size() >= config_.min_interactions) {
      bool quota = true;
      if (linky) quota = ep_.links_made >= ep_.fan_out;
      if (ep_.type == WorkflowType::OneToN) quota = quota && ep_.hub_touched;
      if (ep_.type == WorkflowType::Sequential) quota = ep_.links_made >= 1;
      if (quota) mask |= chain_bit(ChainState::Stop);
    }
    return mask;
  }

  void instantiate(ChainState kind) {
    switch (kind) {
      case ChainState::Create: return do_create();
      case ChainState::Filter: return do_filter();
      case ChainState::Select: return do_select();
      case ChainState::Link: return do_link();
      case ChainState::Discard: return do_discard();
      case ChainState::Stop: return;
    }
  }

  // ---- instantiation ----

  void do_create() {
    VizSpec spec = make_viz_spec();
    const std::string name = spec.name;
    emit(CreateViz{std::move(spec)});
    live_order_.push_back(name);
    ep_.owned.push_back(name);
    switch (ep_.type) {
      case WorkflowType::Sequential:
        if (ep_.path.empty())
          ep_.path.push_back(name);
        else
          ep_.unlinked.push_back(name);
        break;
      case WorkflowType::OneToN:
      case WorkflowType::NToOne:
        if (ep_.hub.empty())
          ep_.hub = name;
        else
          ep_.unlinked.push_back(name);
        break;
      default:
        break;
    }
  }

  void do_filter() {
    const std::string viz = pick_live();
    const ColumnSchema& col = config_.schema.columns[static_cast<size_t>(
        rng_.uniform_index(config_.schema.columns.size()))];
    emit(SetFilter{viz, sample_filter(config_.schema, col.name, rng_)});
    note_hub_touch(viz);
  }

  void do_select() {
    std::string viz;
    switch (ep_.type) {
      case WorkflowType::Sequential:
        viz = ep_.path.empty() ? pick_live() : pick_from(ep_.path);
        break;
      case WorkflowType::OneToN:
        // Brushing the hub is the point of the topology.
        viz = (force_hub_ || (!ep_.hub.empty() && rng_.uniform() < 0.7))
                  ? ep_.hub
                  : pick_owned_or_live();
        break;
      case WorkflowType::NToOne:
        viz = (!ep_.spokes.empty() && rng_.uniform() < 0.7)
                  ? pick_from(ep_.spokes)
                  : pick_owned_or_live();
        break;
      default:
        viz = pick_live();
    }
    force_hub_ = false;
    emit(Select{viz, sample_selection(graph_.spec(viz), config_.schema, rng_)});
    note_hub_touch(viz);
  }

  void do_link() {
    const size_t pick =
        static_cast<size_t>(rng_.uniform_index(ep_.unlinked.size()));
    const std::string target = ep_.unlinked[pick];
    ep_.unlinked.erase(ep_.unlinked.begin() + static_cast<ptrdiff_t>(pick));
    if (ep_.type == WorkflowType::Sequential) {
      emit(Link{ep_.path.back(), target});
      ep_.path.push_back(target);
    } else if (ep_.type == WorkflowType::OneToN) {
      emit(Link{ep_.hub, target});
      ep_.spokes.push_back(target);
    } else {  // N:1, the new viz feeds the hub
      emit(Link{target, ep_.hub});
      ep_.spokes.push_back(target);
    }
    ++ep_.links_made;
  }

  void do_discard() {
    const size_t pick =
        static_cast<size_t>(rng_.uniform_index(ep_.owned.size()));
    const std::string name = ep_.owned[pick];
    emit(Discard{name});
  }

  // ---- helpers ----

  // The promised fan-out only materializes when some interaction hits
  // the hub after the whole star is wired up.
  void note_hub_touch(const std::string& viz) {
    if (ep_.type == WorkflowType::OneToN && viz == ep_.hub &&
        ep_.links_made >= ep_.fan_out)
      ep_.hub_touched = true;
  }

  void emit(Interaction interaction) {
    graph_.apply(interaction);
    if (const auto* discard = std::get_if<Discard>(&interaction)) {
      forget(live_order_, discard->viz);
      forget(ep_.owned, discard->viz);
      forget(ep_.unlinked, discard->viz);
    }
    out_.push_back(std::move(interaction));
  }

  static void forget(std::vector<std::string>& names, const std::string& name) {
    names.erase(std::remove(names.begin(), names.end(), name), names.end());
  }

  const std::string& pick_live() {
    return live_order_[static_cast<size_t>(
        rng_.uniform_index(live_order_.size()))];
  }

  const std::string& pick_from(const std::vector<std::string>& pool) {
    return pool[static_cast<size_t>(rng_.uniform_index(pool.size()))];
  }

  const std::string& pick_owned_or_live() {
    return ep_.owned.empty() ? pick_live() : pick_from(ep_.owned);
  }

  VizSpec make_viz_spec() {
    VizSpec spec;
    spec.name = "viz_" + std::to_string(viz_counter_++);
    const size_t dims =
        config_.schema.columns.size() >= 2 && rng_.uniform() < 0.35 ? 2 : 1;
    std::vector<size_t> used;
    for (size_t d = 0; d < dims; ++d) {
      size_t col;
      do {
        col = static_cast<size_t>(
            rng_.uniform_index(config_.schema.columns.size()));
      } while (std::find(used.begin(), used.end(), col) != used.end());
      used.push_back(col);
      spec.binning.push_back(make_binning(config_.schema.columns[col]));
    }
    const AggregateFn fn =
        aggregates_[static_cast<size_t>(rng_.uniform_index(aggregates_.size()))];
    spec.aggregate.fn = fn;
    if (fn != AggregateFn::Count)
      spec.aggregate.column =
          config_.schema
              .columns[quantitative_[static_cast<size_t>(
                  rng_.uniform_index(quantitative_.size()))]]
              .name;
    if (rng_.uniform() < 0.30) {
      const ColumnSchema& col = config_.schema.columns[static_cast<size_t>(
          rng_.uniform_index(config_.schema.columns.size()))];
      spec.own_filter = sample_filter(config_.schema, col.name, rng_);
    }
    return spec;
  }

  BinningSpec make_binning(const ColumnSchema& col) {
    BinningSpec b;
    b.column = col.name;
    if (col.kind == ColumnKind::Nominal) {
      b.method = BinningSpec::Method::Distinct;
      return b;
    }
    static constexpr int64_t kCounts[] = {10, 15, 20, 25};
    const double span = col.max - col.min;
    if (span > 0.0 && rng_.uniform() < 0.20) {
      b.method = BinningSpec::Method::FixedWidth;
      const int64_t k = rng_.uniform() < 0.5 ? 10 : 20;
      b.bin_width = span / static_cast<double>(k);
      b.reference = col.min;
    } else {
      b.method = BinningSpec::Method::FixedCount;
      b.bin_count = kCounts[static_cast<size_t>(rng_.uniform_index(4))];
    }
    return b;
  }

  const GenerationConfig& config_;
  Rng rng_;
  VizGraph graph_;
  std::vector<Interaction> out_;
  std::vector<std::string> live_order_;  // creation order, oldest first
  std::vector<size_t> nominal_, quantitative_;
  std::vector<AggregateFn> aggregates_;
  size_t viz_counter_ = 0;
  Episode ep_;
  ChainState prev_ = ChainState::Create;
  bool stopped_ = false;
  bool force_hub_ = false;
};

}  // namespace

Workflow generate(const GenerationConfig& config) {
  return Builder(config).build();
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_predicate(const FilterPredicate& predicate, const SchemaInfo& schema,
                     size_t index, std::vector<Violation>& out) {
  for (const auto& atom : predicate.atoms) {
    if (!schema.has_column(atom.column)) {
      out.push_back({index, "unknown column '" + atom.column + "'"});
      continue;
    }
    const ColumnSchema& col = schema.column(atom.column);
    const bool nominal = col.kind == ColumnKind::Nominal;
    const bool equality =
        atom.op == CompareOp::Eq || atom.op == CompareOp::Neq;
    if (equality && !nominal)
      out.push_back({index, "equality filter on quantitative column '" +
                                atom.column + "'"});
    if (!equality && nominal)
      out.push_back(
          {index, "range filter on nominal column '" + atom.column + "'"});
    if (atom.op == CompareOp::InRange && !(atom.low <= atom.high))
      out.push_back({index, "inverted range on '" + atom.column + "'"});
  }
}

void check_viz_spec(const VizSpec& spec, const SchemaInfo& schema, size_t index,
                    std::vector<Violation>& out) {
  if (spec.binning.empty() || spec.binning.size() > 2)
    out.push_back({index, "viz '" + spec.name + "' has " +
                              std::to_string(spec.binning.size()) +
                              " binning dimensions, need 1 or 2"});
  for (const auto& dim : spec.binning) {
    if (!schema.has_column(dim.column)) {
      out.push_back({index, "unknown column '" + dim.column + "'"});
      continue;
    }
    try {
      dim.check();
    } catch (const Error& e) {
      out.push_back({index, e.what()});
    }
    const bool nominal = schema.column(dim.column).kind == ColumnKind::Nominal;
    if (nominal && dim.method != BinningSpec::Method::Distinct)
      out.push_back(
          {index, "numeric binning on nominal column '" + dim.column + "'"});
    if (!nominal && dim.method == BinningSpec::Method::Distinct)
      out.push_back({index, "distinct binning on quantitative column '" +
                                dim.column + "'"});
  }
  if (spec.aggregate.fn != AggregateFn::Count) {
    if (!schema.has_column(spec.aggregate.column))
      out.push_back({index, "unknown aggregate column '" +
                                spec.aggregate.column + "'"});
    else if (schema.column(spec.aggregate.column).kind != ColumnKind::Quantitative)
      out.push_back({index, "aggregate over nominal column '" +
                                spec.aggregate.column + "'"});
  }
  if (spec.own_filter) check_predicate(*spec.own_filter, schema, index, out);
}

void check_topology(const Workflow& workflow,
                    const std::vector<std::pair<std::string, std::string>>& links,
                    std::vector<Violation>& out) {
  constexpr size_t kGlobal = static_cast<size_t>(-1);
  switch (workflow.type) {
    case WorkflowType::Independent:
      if (!links.empty())
        out.push_back({kGlobal, "independent workflow contains links"});
      break;
    case WorkflowType::Sequential: {
      std::map<std::string, int> out_deg, in_deg;
      std::set<std::string> nodes;
      for (const auto& [s, t] : links) {
        ++out_deg[s];
        ++in_deg[t];
        nodes.insert(s);
        nodes.insert(t);
      }
      for (const auto& [node, deg] : out_deg)
        if (deg > 1)
          out.push_back({kGlobal, "sequential path branches at '" + node + "'"});
      for (const auto& [node, deg] : in_deg)
        if (deg > 1)
          out.push_back({kGlobal, "sequential path merges at '" + node + "'"});
      if (!links.empty() && nodes.size() != links.size() + 1)
        out.push_back({kGlobal, "sequential links do not form a single path"});
      break;
    }
    case WorkflowType::OneToN: {
      std::set<std::string> sources;
      for (const auto& [s, t] : links) sources.insert(s);
      if (links.size() < 2)
        out.push_back({kGlobal, "one-to-n workflow needs at least 2 links"});
      if (sources.size() > 1)
        out.push_back({kGlobal, "one-to-n workflow has multiple sources"});
      break;
    }
    case WorkflowType::NToOne: {
      std::set<std::string> targets;
      for (const auto& [s, t] : links) targets.insert(t);
      if (links.size() < 2)
        out.push_back({kGlobal, "n-to-one workflow needs at least 2 links"});
      if (targets.size() > 1)
        out.push_back({kGlobal, "n-to-one workflow has multiple targets"});
      break;
    }
    case WorkflowType::Mixed:
      break;  // anything goes
  }
}

}  // namespace

std::vector<Violation> validate(const Workflow& workflow,
                                const SchemaInfo& schema) {
  std::vector<Violation> out;
  VizGraph graph;
  std::vector<std::pair<std::string, std::string>> links;
  for (size_t i = 0; i < workflow.interactions.size(); ++i) {
    const Interaction& interaction = workflow.interactions[i];
    if (const auto* create = std::get_if<CreateViz>(&interaction))
      check_viz_spec(create->spec, schema, i, out);
    else if (const auto* filter = std::get_if<SetFilter>(&interaction))
      check_predicate(filter->predicate, schema, i, out);
    else if (const auto* select = std::get_if<Select>(&interaction))
      check_predicate(select->predicate, schema, i, out);
    else if (const auto* link = std::get_if<Link>(&interaction))
      links.emplace_back(link->source, link->target);
    try {
      graph.apply(interaction);
    } catch (const Error& e) {
      out.push_back({i, e.what()});
    }
  }
  check_topology(workflow, links, out);
  return out;
}

}  // namespace idebench
