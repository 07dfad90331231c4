#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "disg/reward.hpp"
#include "disg/strategy.hpp"

namespace disg {

struct TrajectoryStep {
  int state;
  std::array<int, 2> obs;
  std::array<int, 2> actions;
  std::array<Signal, 2> signals;
  int flag;                            // S_t, before the step's actions take effect on S_{t+1}
  std::array<Belief, 2> beliefs;       // pi^n_t
  std::array<double, 2> stage_rewards;
};

struct TrajectoryRecord {
  std::vector<TrajectoryStep> steps;
  int horizon = 0;
  std::uint64_t seed = 0;
  std::string profile;
};

// Forward simulation of the DISG under the CGT profile (region1, region2) from
// the common prior. x0 is sampled from the prior; per step the observations
// are sampled, actions come from the CGT policies, signals, flag and beliefs
// follow the game dynamics. Deterministic given the seed.
TrajectoryRecord simulate(const MarkovModel& model, const Region& region1, const Region& region2,
                          const GameParams& params, const Belief& initial_belief, int horizon,
                          std::uint64_t seed);

struct ValueEstimate {
  double mean;
  double std_error;
  double truncation_bound;  // delta^horizon * R_max / (1 - delta)
  int rollouts;
};

// Monte-Carlo estimate of the discounted value of the profile for one agent.
ValueEstimate estimate_value(const MarkovModel& model, const Region& region1,
                             const Region& region2, const GameParams& params,
                             const Belief& initial_belief, int agent, int n_rollouts, int horizon,
                             std::uint64_t seed);

struct DeviationReport {
  int prescribed_action;
  double prescribed_mean;
  double deviation_mean;
  double gap_mean;       // deviation - prescribed
  double gap_std_error;  // paired (common random numbers), so sure gaps have zero variance
  double truncation_bound;
  double threshold;      // 3 stderr + truncation + 2 vi_tolerance
  bool violation;        // gap exceeds the threshold
};

// One-shot deviation check at (s, belief) against the profile (C, C): the
// prescribed CGT action versus its deviation, both followed by the profile.
DeviationReport deviation_test(const MarkovModel& model, const Region& region,
                               const GameParams& params, const Belief& belief, int agent,
                               int n_rollouts, int horizon, std::uint64_t seed,
                               int initial_flag = 1);

// One reduced pure strategy per agent over common histories: action at every
// history consistent with the strategy's own earlier actions. Payoffs are
// exact expectations (full enumeration over observation sequences, beliefs by
// exact filtering).
struct RestrictedGame {
  int horizon = 0;
  std::array<std::size_t, 2> num_strategies = {0, 0};
  // payoff[n-1][i * num_strategies[1] + j] = agent n's expected total reward
  // under (strategy i of agent 1, strategy j of agent 2).
  std::array<std::vector<double>, 2> payoff;
  // Profile shares with positive probability at some reachable history.
  std::vector<std::uint8_t> profile_shares;
  std::array<std::size_t, 2> all_defect_index = {0, 0};

  double payoff_for(int agent, std::size_t i, std::size_t j) const {
    return payoff[static_cast<std::size_t>(agent - 1)][i * num_strategies[1] + j];
  }
};

RestrictedGame enumerate_restricted_game(const MarkovModel& model, const GameParams& params,
                                         const Belief& prior, int T,
                                         std::size_t max_profiles = 1'000'000);

struct BruteforceVerdict {
  bool all_defect_is_nash = false;        // (i)
  bool no_sharing_profile_is_nash = false;  // (ii)
  std::size_t num_profiles = 0;
  std::size_t num_sharing_profiles = 0;
  std::size_t num_sharing_nash_profiles = 0;
  int horizon = 0;
  std::string restriction;
};

// Finite-horizon no-cooperation check: enumerates all pure strategy profiles
// measurable w.r.t. the common history, computes exact expected rewards and
// reports whether (i) all-defect is a Nash equilibrium of the restricted game
// and (ii) every profile that shares on some reachable history fails to be
// one. Throws EnumerationTooLarge past max_profiles.
BruteforceVerdict finite_horizon_bruteforce(const MarkovModel& model, const GameParams& params,
                                            const Belief& prior, int T,
                                            std::size_t max_profiles = 1'000'000);

}  // namespace disg
