#include "flowsentry/attack_graph.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <tuple>

namespace flowsentry {

void AttackGraph::validate() const {
  auto in_range = [&](int s) { return s >= 0 && s < static_cast<int>(states.size()); };
  if (!in_range(initial)) throw Error("attack graph: initial state out of range");
  if (!in_range(goal)) throw Error("attack graph: goal state out of range");
  if (initial == goal) throw Error("attack graph: initial and goal must differ");

  std::set<std::tuple<int, int, std::string>> seen;
  for (const auto& a : actions) {
    if (!in_range(a.from) || !in_range(a.to))
      throw Error("attack graph: action '" + a.id + "' references an unknown state");
    if (!(a.prob > 0.0 && a.prob <= 1.0))
      throw Error("attack graph: action '" + a.id + "' probability outside (0,1]");
    if (!seen.insert({a.from, a.to, a.id}).second)
      throw Error("attack graph: duplicate action triple '" + a.id + "'");
  }
}

int AttackGraph::state_index(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

namespace {

struct Label {
  double prob = 0.0;
  std::vector<std::string> seq;

  // Higher probability wins; then fewer actions; then lex-smaller id sequence.
  bool better_than(const Label& other) const {
    if (prob != other.prob) return prob > other.prob;
    if (seq.size() != other.seq.size()) return seq.size() < other.seq.size();
    return seq < other.seq;
  }
};

}  // namespace

AttackPath best_attack_path(const AttackGraph& g) {
  g.validate();

  // Adjacency, edges sorted by id so equal-probability relaxations resolve
  // toward the lexicographically smallest sequence deterministically.
  std::vector<std::vector<const AttackAction*>> out_edges(g.states.size());
  for (const auto& a : g.actions) out_edges[a.from].push_back(&a);
  for (auto& edges : out_edges)
    std::sort(edges.begin(), edges.end(),
              [](const AttackAction* a, const AttackAction* b) { return a->id < b->id; });

  std::vector<std::optional<Label>> best(g.states.size());
  std::vector<bool> settled(g.states.size(), false);
  best[g.initial] = Label{1.0, {}};

  // Dijkstra: probabilities are in (0,1], so a path's product never increases
  // as it extends, which is exactly the monotonicity Dijkstra needs.
  for (;;) {
    int u = -1;
    for (std::size_t v = 0; v < best.size(); ++v) {
      if (settled[v] || !best[v]) continue;
      if (u < 0 || best[v]->better_than(*best[u])) u = static_cast<int>(v);
    }
    if (u < 0) break;
    settled[u] = true;
    if (u == g.goal) break;

    for (const AttackAction* a : out_edges[u]) {
      if (settled[a->to]) continue;
      Label cand;
      cand.prob = best[u]->prob * a->prob;
      cand.seq = best[u]->seq;
      cand.seq.push_back(a->id);
      if (!best[a->to] || cand.better_than(*best[a->to]))
        best[a->to] = std::move(cand);
    }
  }

  if (!best[g.goal])
    throw Unreachable("no path from the initial state to the goal state");

  AttackPath path;
  path.action_ids = best[g.goal]->seq;
  path.success_prob = best[g.goal]->prob;
  return path;
}

int apply_transition(const AttackGraph& g, int current, const std::string& action_id) {
  for (const auto& a : g.actions) {
    if (a.id != action_id) continue;
    if (a.from != current)
      throw InvalidAction("action '" + action_id + "' does not depart the current state");
    return a.to;
  }
  throw InvalidAction("unknown action '" + action_id + "'");
}

}  // namespace flowsentry
