#pragma once

#include <string>
#include <vector>

#include "flowsentry/errors.hpp"

namespace flowsentry {

// Directed edge of the penetration-testing state model: taking `id` from
// state `from` reaches `to` with success probability `prob`.
struct AttackAction {
  int from = -1;
  int to = -1;
  std::string id;
  double prob = 0.0;
};

// State machine over S = [initial, s1..sn, goal] with an action set and a
// probability per action. States are indexed into `states`; there is exactly
// one initial and one goal state.
struct AttackGraph {
  std::vector<std::string> states;
  int initial = -1;
  int goal = -1;
  std::vector<AttackAction> actions;

  // Throws Error when a structural invariant is violated: indices out of
  // range, a probability outside (0, 1], or a duplicate (from, to, id) triple.
  void validate() const;

  int state_index(const std::string& name) const;  // -1 when absent
};

// A chained action sequence from the initial state into the goal state.
// success_prob is the product of the member action probabilities.
struct AttackPath {
  std::vector<std::string> action_ids;
  double success_prob = 1.0;
};

// Maximum-success-probability path from initial to goal: Dijkstra ordered by
// path probability product, which is the shortest path under edge weight
// -log p. Ties break on fewer actions, then on the lexicographically
// smallest action-id sequence. Throws Unreachable when no path exists.
AttackPath best_attack_path(const AttackGraph& g);

// Applies one action from `current`; returns the action's target state.
// Throws InvalidAction when the id is unknown or does not depart `current`.
int apply_transition(const AttackGraph& g, int current, const std::string& action_id);

}  // namespace flowsentry
