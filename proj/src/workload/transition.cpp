#include "idebench/workload/transition.hpp"

#include <cmath>

namespace idebench {

using nlohmann::json;

const char* to_string(ChainState state) {
  switch (state) {
    case ChainState::Create: return "create";
    case ChainState::Filter: return "filter";
    case ChainState::Select: return "select";
    case ChainState::Link: return "link";
    case ChainState::Discard: return "discard";
    case ChainState::Stop: return "stop";
  }
  return "stop";
}

ChainState chain_state_from_string(const std::string& s) {
  for (size_t i = 0; i < kChainStates; ++i) {
    const auto state = static_cast<ChainState>(i);
    if (s == to_string(state)) return state;
  }
  throw ValidationError("unknown chain state '" + s + "'");
}

TransitionTable::TransitionTable() {
  for (auto& row : rows_) row = {0, 0, 0, 0, 0, 1};
  initial_ = {1, 0, 0, 0, 0, 0};  // sessions start by creating a chart
}

void TransitionTable::set_row(ChainState from, const Row& probabilities) {
  rows_[static_cast<size_t>(from)] = probabilities;
}

void TransitionTable::set_initial(const Row& probabilities) {
  initial_ = probabilities;
}

double TransitionTable::probability(ChainState from, ChainState to) const {
  return rows_[static_cast<size_t>(from)][static_cast<size_t>(to)];
}

const TransitionTable::Row& TransitionTable::row(ChainState from) const {
  return rows_[static_cast<size_t>(from)];
}

void TransitionTable::check() const {
  auto check_row = [](const Row& row, const std::string& label) {
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0)
        throw ValidationError("negative probability in " + label + " row");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw ValidationError(label + " row sums to " + format_double(sum) +
                            ", expected 1");
  };
  for (size_t i = 0; i < kChainStates; ++i)
    check_row(rows_[i], to_string(static_cast<ChainState>(i)));
  check_row(initial_, "initial");
  const Row& stop = rows_[static_cast<size_t>(ChainState::Stop)];
  if (stop[static_cast<size_t>(ChainState::Stop)] != 1.0)
    throw ValidationError("stop state must be absorbing");
}

std::array<double, kChainStates - 1> TransitionTable::stationary_without_stop()
    const {
  constexpr size_t n = kChainStates - 1;
  // Renormalize each row over the non-stop states.
  std::array<std::array<double, n>, n> m{};
  for (size_t i = 0; i < n; ++i) {
    double mass = 0.0;
    for (size_t j = 0; j < n; ++j) mass += rows_[i][j];
    for (size_t j = 0; j < n; ++j)
      m[i][j] = mass > 0.0 ? rows_[i][j] / mass : (i == j ? 1.0 : 0.0);
  }
  std::array<double, n> pi{};
  pi.fill(1.0 / n);
  for (int iter = 0; iter < 100000; ++iter) {
    std::array<double, n> next{};
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) next[j] += pi[i] * m[i][j];
    double total = 0.0, delta = 0.0;
    for (size_t j = 0; j < n; ++j) total += next[j];
    for (size_t j = 0; j < n; ++j) {
      next[j] /= total;
      delta += std::fabs(next[j] - pi[j]);
    }
    pi = next;
    if (delta < 1e-13) break;
  }
  return pi;
}

namespace {

ChainState sample_row(const TransitionTable::Row& row, uint32_t feasible,
                      Rng& rng) {
  double mass = 0.0;
  size_t feasible_count = 0;
  for (size_t j = 0; j < kChainStates; ++j) {
    if (!(feasible & (1u << j))) continue;
    mass += row[j];
    ++feasible_count;
  }
  if (feasible_count == 0)
    throw ValidationError("no feasible chain state to sample");
  if (mass <= 0.0) {
    // The row puts no weight on anything currently possible; an even
    // split keeps generation moving.
    uint64_t pick = rng.uniform_index(feasible_count);
    for (size_t j = 0; j < kChainStates; ++j) {
      if (!(feasible & (1u << j))) continue;
      if (pick-- == 0) return static_cast<ChainState>(j);
    }
  }
  const double u = rng.uniform() * mass;
  double running = 0.0;
  size_t last = 0;
  for (size_t j = 0; j < kChainStates; ++j) {
    if (!(feasible & (1u << j))) continue;
    running += row[j];
    last = j;
    if (u < running) return static_cast<ChainState>(j);
  }
  return static_cast<ChainState>(last);  // u landed on rounding dust
}

}  // namespace

ChainState TransitionTable::sample(ChainState from, uint32_t feasible,
                                   Rng& rng) const {
  return sample_row(rows_[static_cast<size_t>(from)], feasible, rng);
}

ChainState TransitionTable::sample_initial(uint32_t feasible, Rng& rng) const {
  return sample_row(initial_, feasible, rng);
}

TransitionTable TransitionTable::for_type(WorkflowType type) {
  TransitionTable t;
  using S = ChainState;
  switch (type) {
    case WorkflowType::Independent:
      // No links, no selections: isolated charts, filter-heavy.
      t.set_row(S::Create, {.20, .60, 0, 0, .15, .05});
      t.set_row(S::Filter, {.25, .55, 0, 0, .15, .05});
      t.set_row(S::Select, {.25, .55, 0, 0, .15, .05});
      t.set_row(S::Link, {.25, .55, 0, 0, .15, .05});
      t.set_row(S::Discard, {.50, .40, 0, 0, .05, .05});
      break;
    case WorkflowType::Sequential:
      // Chart chains; no discards so the path stays intact.
      t.set_row(S::Create, {.15, .30, .20, .30, 0, .05});
      t.set_row(S::Filter, {.20, .35, .25, .15, 0, .05});
      t.set_row(S::Select, {.20, .30, .30, .15, 0, .05});
      t.set_row(S::Link, {.25, .30, .25, .15, 0, .05});
      t.set_row(S::Discard, {.20, .35, .25, .15, 0, .05});
      break;
    case WorkflowType::OneToN:
    case WorkflowType::NToOne:
      // Star topologies: build the hub early, then explore it.
      t.set_row(S::Create, {.30, .20, .15, .30, 0, .05});
      t.set_row(S::Filter, {.15, .30, .25, .25, 0, .05});
      t.set_row(S::Select, {.15, .25, .30, .25, 0, .05});
      t.set_row(S::Link, {.25, .20, .20, .30, 0, .05});
      t.set_row(S::Discard, {.15, .30, .25, .25, 0, .05});
      break;
    case WorkflowType::Mixed:
      // Episodes reuse the four tables above; this one only matters if
      // someone samples the mixed table directly.
      t.set_row(S::Create, {.20, .35, .15, .15, .10, .05});
      t.set_row(S::Filter, {.20, .40, .15, .10, .10, .05});
      t.set_row(S::Select, {.20, .35, .20, .10, .10, .05});
      t.set_row(S::Link, {.25, .30, .15, .15, .10, .05});
      t.set_row(S::Discard, {.35, .35, .10, .10, .05, .05});
      break;
  }
  t.set_initial({1, 0, 0, 0, 0, 0});
  t.check();
  return t;
}

json TransitionTable::to_json() const {
  json rows = json::object();
  for (size_t i = 0; i < kChainStates; ++i)
    rows[to_string(static_cast<ChainState>(i))] = rows_[i];
  return json{{"rows", rows}, {"initial", initial_}};
}

TransitionTable TransitionTable::from_json(const json& j) {
  TransitionTable t;
  for (size_t i = 0; i < kChainStates; ++i) {
    const auto state = static_cast<ChainState>(i);
    const auto& row = j.at("rows").at(to_string(state));
    Row r{};
    for (size_t k = 0; k < kChainStates; ++k) r[k] = row.at(k).get<double>();
    t.set_row(state, r);
  }
  if (j.contains("initial")) {
    Row r{};
    for (size_t k = 0; k < kChainStates; ++k)
      r[k] = j["initial"].at(k).get<double>();
    t.set_initial(r);
  }
  t.check();
  return t;
}

}  // namespace idebench
