#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "disg/rng.hpp"
#include "disg/solver.hpp"

namespace disg {

namespace {

struct Node {
  Belief belief;
  double gain = 0.0;      // MI at the belief, cached
  bool in_region = false; // belief in the opponent's cooperation region
  std::array<int, 2> count = {0, 0};
  std::array<double, 2> sum = {0.0, 0.0};
  // Children keyed by (own obs, opponent obs); only both-cooperate transitions
  // grow the tree, everything else has an exact zero continuation.
  std::map<int, std::unique_ptr<Node>> children;
};

class Search {
 public:
  Search(const MarkovModel& model, const Region& opp_region, const GameParams& params, int agent,
         int horizon, const PomcpOptions& options, std::uint64_t seed)
      : model_(model),
        opp_region_(opp_region),
        params_(params),
        agent_(agent),
        horizon_(horizon),
        options_(options),
        rng_(splitmix64(seed)) {}

  std::unique_ptr<Node> make_node(Belief belief) {
    auto node = std::make_unique<Node>();
    node->in_region = opp_region_.contains(belief);
    node->gain = conditional_mutual_information(model_, belief, agent_);
    node->belief = std::move(belief);
    return node;
  }

  void run_simulation(Node& root, int root_flag) {
    int x = rng_.categorical(root.belief.probs());
    const double ret = simulate(root, x, root_flag, 0);
    if (!have_range_) {
      ret_min_ = ret_max_ = ret;
      have_range_ = true;
    } else {
      ret_min_ = std::min(ret_min_, ret);
      ret_max_ = std::max(ret_max_, ret);
    }
  }

 private:
  double exploration() const {
    if (options_.exploration_weight > 0.0) return options_.exploration_weight;
    const double range = have_range_ ? ret_max_ - ret_min_ : 0.0;
    return range > 0.0 ? range : 1.0;
  }

  int select_action(const Node& node) const {
    for (int a : {0, 1}) {
      if (node.count[a] == 0) return a;
    }
    const double total = node.count[0] + node.count[1];
    const double cexp = exploration();
    double best = -1e300;
    int best_a = 0;
    for (int a : {0, 1}) {
      const double mean = node.sum[a] / node.count[a];
      const double ucb = mean + cexp * std::sqrt(std::log(total) / node.count[a]);
      if (ucb > best) {
        best = ucb;
        best_a = a;
      }
    }
    return best_a;
  }

  int sample_obs(const Matrix& channel, int x) {
    std::span<const double> row(&channel(static_cast<std::size_t>(x), 0), channel.cols());
    return rng_.categorical(row);
  }

  // Discounted return from `node` onward for one sampled state.
  double simulate(Node& node, int x, int s, int depth) {
    if (depth >= horizon_) return 0.0;
    const int a = select_action(node);
    double ret;
    if (s == 0) {
      // Punishment phase: reward is -a c and the flag stays 0, so the optimal
      // continuation is exactly 0.
      ret = -a * params_.cost_for(agent_);
    } else {
      const int opp_a = node.in_region ? 1 : 0;
      const double reward = (node.in_region ? node.gain : 0.0) - a * params_.cost_for(agent_);
      const int s_next = flag_update(s, a, opp_a);
      if (s_next == 0) {
        ret = reward;  // V(0, .) = 0
      } else {
        const int y_own = sample_obs(model_.channel(agent_), x);
        const int y_opp = sample_obs(model_.channel(opponent_of(agent_)), x);
        std::span<const double> row(&model_.transition(static_cast<std::size_t>(x), 0),
                                    model_.num_states);
        const int x_next = rng_.categorical(row);
        const int key = y_own * static_cast<int>(model_.obs_count(opponent_of(agent_))) + y_opp;
        auto it = node.children.find(key);
        if (it != node.children.end()) {
          ret = reward + params_.delta * simulate(*it->second, x_next, 1, depth + 1);
        } else {
          Belief next = belief_update(model_, node.belief, y_own, Signal::obs(y_opp), 1, agent_);
          auto child = make_node(std::move(next));
          const double tail = rollout(*child, x_next, depth + 1);
          node.children.emplace(key, std::move(child));
          ret = reward + params_.delta * tail;
        }
      }
    }
    node.count[a] += 1;
    node.sum[a] += ret;
    return ret;
  }

  double rollout(const Node& leaf, int x, int depth) {
    if (options_.rollout == PomcpOptions::Rollout::AlwaysDefect) {
      // Defecting now collects today's gain and ends the cooperative phase:
      // the value is exactly r~(1, pi).
      return leaf.in_region ? leaf.gain : 0.0;
    }
    // Uniform-random own actions against the CGT opponent.
    Belief pi = leaf.belief;
    double ret = 0.0;
    double discount = 1.0;
    int s = 1;
    for (int t = depth; t < horizon_ && s == 1; ++t) {
      const bool in_region = opp_region_.contains(pi);
      const int a = rng_.uniform01() < 0.5 ? 1 : 0;
      const int opp_a = in_region ? 1 : 0;
      ret += discount * ((in_region ? conditional_mutual_information(model_, pi, agent_) : 0.0) -
                         a * params_.cost_for(agent_));
      discount *= params_.delta;
      s = flag_update(s, a, opp_a);
      if (s == 0) break;
      const int y_own = sample_obs(model_.channel(agent_), x);
      const int y_opp = sample_obs(model_.channel(opponent_of(agent_)), x);
      pi = belief_update(model_, pi, y_own, Signal::obs(y_opp), 1, agent_);
      std::span<const double> row(&model_.transition(static_cast<std::size_t>(x), 0),
                                  model_.num_states);
      x = rng_.categorical(row);
    }
    return ret;
  }

  const MarkovModel& model_;
  const Region& opp_region_;
  const GameParams& params_;
  int agent_;
  int horizon_;
  PomcpOptions options_;
  Rng rng_;
  bool have_range_ = false;
  double ret_min_ = 0.0;
  double ret_max_ = 0.0;
};

}  // namespace

PomcpResult pomcp_plan(const MarkovModel& model, const Region& opp_region,
                       const GameParams& params, const Belief& belief, int s, int sim_budget,
                       int horizon, std::uint64_t seed, int agent, const PomcpOptions& options) {
  if (sim_budget < 1) throw DisgError(ErrorCode::InvalidArgument, "sim_budget must be >= 1");
  if (horizon < 1) throw DisgError(ErrorCode::InvalidArgument, "horizon must be >= 1");
  params.validate();

  Search search(model, opp_region, params, agent, horizon, options, seed);
  auto root = search.make_node(belief);
  for (int i = 0; i < sim_budget; ++i) {
    search.run_simulation(*root, s);
  }

  PomcpResult result;
  result.simulations = sim_budget;
  result.q_defect = root->count[0] > 0 ? root->sum[0] / root->count[0] : 0.0;
  result.q_share = root->count[1] > 0 ? root->sum[1] / root->count[1] : 0.0;
  if (root->count[1] == 0) {
    result.action = 0;
  } else if (s == 1) {
    result.action = result.q_share >= result.q_defect ? 1 : 0;  // cooperate on ties
  } else {
    result.action = result.q_share > result.q_defect ? 1 : 0;  // s=0 prescribes defection
  }
  return result;
}

}  // namespace disg
