#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "json.hpp"

#include "idebench/core/graph.hpp"
#include "idebench/rng.hpp"

namespace idebench {

/// States of the workflow Markov chain, in matrix row order.
enum class ChainState { Create, Filter, Select, Link, Discard, Stop };
inline constexpr size_t kChainStates = 6;

const char* to_string(ChainState state);
ChainState chain_state_from_string(const std::string& s);

/// Row-stochastic transition matrix over interaction kinds plus an
/// initial distribution. Stop is absorbing. The shipped per-type tables
/// are tuned defaults, not measured from real users; callers can load
/// their own from JSON.
class TransitionTable {
 public:
  using Row = std::array<double, kChainStates>;

  TransitionTable();  // identity-ish: everything stops immediately

  /// Built-in defaults for each workflow type.
  static TransitionTable for_type(WorkflowType type);

  void set_row(ChainState from, const Row& probabilities);
  void set_initial(const Row& probabilities);
  double probability(ChainState from, ChainState to) const;
  const Row& row(ChainState from) const;
  const Row& initial() const { return initial_; }

  /// Rows sum to 1 within 1e-9, no negatives, stop absorbing.
  void check() const;

  /// Long-run fraction of time spent in each non-stop state when stop
  /// is suppressed (each row renormalized over the first five states).
  /// Power iteration; the generated interaction mix converges to this.
  std::array<double, kChainStates - 1> stationary_without_stop() const;

  /// Next state given the current one, restricted to the states whose
  /// bit is set in `feasible`. Infeasible mass is renormalized away; a
  /// row with no feasible mass falls back to uniform over feasible.
  ChainState sample(ChainState from, uint32_t feasible, Rng& rng) const;
  ChainState sample_initial(uint32_t feasible, Rng& rng) const;

  nlohmann::json to_json() const;
  static TransitionTable from_json(const nlohmann::json& j);

 private:
  std::array<Row, kChainStates> rows_{};
  Row initial_{};
};

inline constexpr uint32_t chain_bit(ChainState s) {
  return 1u << static_cast<unsigned>(s);
}

}  // namespace idebench
