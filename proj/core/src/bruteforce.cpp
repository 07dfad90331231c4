#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "disg/sim.hpp"

namespace disg {

namespace {

// Common histories are canonical key vectors: one (a1, a2, z1, z2) quadruple
// appended per elapsed step, with z = -1 encoding epsilon.
using HistoryKey = std::vector<int>;
using Strategy = std::map<HistoryKey, int>;

HistoryKey extend(const HistoryKey& h, int a1, int a2, int z1, int z2) {
  HistoryKey out = h;
  out.insert(out.end(), {a1, a2, z1, z2});
  return out;
}

// Strategies per subtree rooted at time t, identical across histories of the
// same depth: S(T-1) = 2, S(t) = sum_a S(t+1)^children(a).
double count_strategies(int t, int T, std::size_t own_obs, std::size_t opp_obs) {
  if (t == T - 1) return 2.0;
  const double tail = count_strategies(t + 1, T, own_obs, opp_obs);
  double total = 0.0;
  for (int a : {0, 1}) {
    const double zo = a == 1 ? static_cast<double>(own_obs) : 1.0;
    const double children = zo * (1.0 + static_cast<double>(opp_obs));
    total += std::pow(tail, children);
    if (total > 1e18) return 1e18;
  }
  return total;
}

// All reduced pure strategies of one agent: actions specified at every common
// history consistent with the strategy's own earlier actions.
void enumerate_strategies(const MarkovModel& model, int agent, int t, int T, const HistoryKey& h,
                          std::vector<Strategy>& out) {
  const std::size_t own_obs = model.obs_count(agent);
  const std::size_t opp_obs = model.obs_count(opponent_of(agent));

  for (int a : {0, 1}) {
    std::vector<Strategy> partials = {{{h, a}}};
    if (t + 1 < T) {
      // Child histories: opponent action x own shared symbol x opponent
      // shared symbol.
      std::vector<HistoryKey> children;
      for (int b : {0, 1}) {
        const int zo_count = a == 1 ? static_cast<int>(own_obs) : 1;
        const int zb_count = b == 1 ? static_cast<int>(opp_obs) : 1;
        for (int zo = 0; zo < zo_count; ++zo) {
          for (int zb = 0; zb < zb_count; ++zb) {
            const int z_own = a == 1 ? zo : -1;
            const int z_opp = b == 1 ? zb : -1;
            children.push_back(agent == 1 ? extend(h, a, b, z_own, z_opp)
                                          : extend(h, b, a, z_opp, z_own));
          }
        }
      }
      for (const HistoryKey& child : children) {
        std::vector<Strategy> child_strategies;
        enumerate_strategies(model, agent, t + 1, T, child, child_strategies);
        std::vector<Strategy> combined;
        combined.reserve(partials.size() * child_strategies.size());
        for (const Strategy& p : partials) {
          for (const Strategy& c : child_strategies) {
            Strategy merged = p;
            merged.insert(c.begin(), c.end());
            combined.push_back(std::move(merged));
          }
        }
        partials = std::move(combined);
      }
    }
    for (Strategy& p : partials) out.push_back(std::move(p));
  }
}

struct PathAccumulator {
  double payoff1 = 0.0;
  double payoff2 = 0.0;
  bool shares = false;
};

// Exact expected payoffs for one profile: depth-first walk over joint
// observation sequences, carrying the state weight vector alpha(x) =
// P(x_t, observations so far), the agents' filtered beliefs and the common
// history. Per-step rewards use Lemma-1 form: the opponent's sharing
// indicator times the MI at the agent's belief, minus own cost.
void walk(const MarkovModel& model, const GameParams& params, const Strategy& s1,
          const Strategy& s2, int t, int T, std::vector<double> alpha, Belief b1, Belief b2,
          const HistoryKey& h, double reward1, double reward2, bool shares,
          PathAccumulator& acc) {
  const int a1 = s1.at(h);
  const int a2 = s2.at(h);
  const double gain1 = a2 == 1 ? conditional_mutual_information(model, b1, 1) : 0.0;
  const double gain2 = a1 == 1 ? conditional_mutual_information(model, b2, 2) : 0.0;
  reward1 += gain1 - a1 * params.cost_for(1);
  reward2 += gain2 - a2 * params.cost_for(2);
  shares = shares || a1 == 1 || a2 == 1;

  const Matrix& c1 = model.channel(1);
  const Matrix& c2 = model.channel(2);
  const std::size_t n = model.num_states;

  for (std::size_t y1 = 0; y1 < c1.cols(); ++y1) {
    for (std::size_t y2 = 0; y2 < c2.cols(); ++y2) {
      double branch = 0.0;
      for (std::size_t x = 0; x < n; ++x) branch += alpha[x] * c1(x, y1) * c2(x, y2);
      if (branch <= 0.0) continue;  // unreachable observation pair

      if (t + 1 == T) {
        acc.payoff1 += branch * reward1;
        acc.payoff2 += branch * reward2;
        acc.shares = acc.shares || shares;
        continue;
      }

      std::vector<double> alpha_next(n, 0.0);
      for (std::size_t x = 0; x < n; ++x) {
        const double w = alpha[x] * c1(x, y1) * c2(x, y2);
        if (w == 0.0) continue;
        for (std::size_t xp = 0; xp < n; ++xp) alpha_next[xp] += model.transition(x, xp) * w;
      }
      const Signal z1 = a1 == 1 ? Signal::obs(static_cast<int>(y1)) : Signal::epsilon();
      const Signal z2 = a2 == 1 ? Signal::obs(static_cast<int>(y2)) : Signal::epsilon();
      Belief b1_next = belief_update(model, b1, static_cast<int>(y1), z2, a2, 1);
      Belief b2_next = belief_update(model, b2, static_cast<int>(y2), z1, a1, 2);
      const HistoryKey h_next = extend(h, a1, a2, a1 == 1 ? static_cast<int>(y1) : -1,
                                       a2 == 1 ? static_cast<int>(y2) : -1);
      walk(model, params, s1, s2, t + 1, T, std::move(alpha_next), std::move(b1_next),
           std::move(b2_next), h_next, reward1, reward2, shares, acc);
    }
  }
}

}  // namespace

RestrictedGame enumerate_restricted_game(const MarkovModel& model, const GameParams& params,
                                         const Belief& prior, int T, std::size_t max_profiles) {
  if (T < 1) throw DisgError(ErrorCode::InvalidArgument, "T must be >= 1");
  params.validate();

  const double n1 = count_strategies(0, T, model.obs_count(1), model.obs_count(2));
  const double n2 = count_strategies(0, T, model.obs_count(2), model.obs_count(1));
  if (n1 * n2 > static_cast<double>(max_profiles)) {
    throw DisgError(ErrorCode::EnumerationTooLarge,
                    "profile count " + std::to_string(n1 * n2) + " exceeds the guard");
  }

  std::array<std::vector<Strategy>, 2> strategies;
  enumerate_strategies(model, 1, 0, T, {}, strategies[0]);
  enumerate_strategies(model, 2, 0, T, {}, strategies[1]);

  RestrictedGame game;
  game.horizon = T;
  game.num_strategies = {strategies[0].size(), strategies[1].size()};
  const std::size_t total = game.num_strategies[0] * game.num_strategies[1];
  game.payoff[0].assign(total, 0.0);
  game.payoff[1].assign(total, 0.0);
  game.profile_shares.assign(total, 0);

  auto all_defect = [](const Strategy& s) {
    return std::all_of(s.begin(), s.end(), [](const auto& kv) { return kv.second == 0; });
  };
  for (int n : {0, 1}) {
    for (std::size_t i = 0; i < strategies[n].size(); ++i) {
      if (all_defect(strategies[n][i])) {
        game.all_defect_index[n] = i;
        break;
      }
    }
  }

  for (std::size_t i = 0; i < game.num_strategies[0]; ++i) {
    for (std::size_t j = 0; j < game.num_strategies[1]; ++j) {
      PathAccumulator acc;
      walk(model, params, strategies[0][i], strategies[1][j], 0, T, prior.probs(), prior, prior,
           {}, 0.0, 0.0, false, acc);
      const std::size_t idx = i * game.num_strategies[1] + j;
      game.payoff[0][idx] = acc.payoff1;
      game.payoff[1][idx] = acc.payoff2;
      game.profile_shares[idx] = acc.shares ? 1 : 0;
    }
  }
  return game;
}

BruteforceVerdict finite_horizon_bruteforce(const MarkovModel& model, const GameParams& params,
                                            const Belief& prior, int T,
                                            std::size_t max_profiles) {
  const RestrictedGame game = enumerate_restricted_game(model, params, prior, T, max_profiles);
  const std::size_t n1 = game.num_strategies[0];
  const std::size_t n2 = game.num_strategies[1];
  constexpr double kTie = 1e-12;

  std::vector<double> best_response1(n2, -1e300);  // max over i of payoff1(i, j)
  std::vector<double> best_response2(n1, -1e300);  // max over j of payoff2(i, j)
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      best_response1[j] = std::max(best_response1[j], game.payoff_for(1, i, j));
      best_response2[i] = std::max(best_response2[i], game.payoff_for(2, i, j));
    }
  }
  auto is_nash = [&](std::size_t i, std::size_t j) {
    return game.payoff_for(1, i, j) >= best_response1[j] - kTie &&
           game.payoff_for(2, i, j) >= best_response2[i] - kTie;
  };

  BruteforceVerdict verdict;
  verdict.horizon = T;
  verdict.num_profiles = n1 * n2;
  verdict.restriction = "pure strategies measurable w.r.t. the common history";
  verdict.all_defect_is_nash = is_nash(game.all_defect_index[0], game.all_defect_index[1]);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (!game.profile_shares[i * n2 + j]) continue;
      verdict.num_sharing_profiles += 1;
      if (is_nash(i, j)) verdict.num_sharing_nash_profiles += 1;
    }
  }
  verdict.no_sharing_profile_is_nash = verdict.num_sharing_nash_profiles == 0;
  return verdict;
}

}  // namespace disg
