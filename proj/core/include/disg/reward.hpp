#pragma once

#include <array>

#include "disg/model.hpp"
#include "disg/strategy.hpp"

namespace disg {

// Discount factor, per-agent transmission costs and solver stopping controls.
struct GameParams {
  double delta = 0.9;
  std::array<double, 2> cost = {0.0, 0.0};  // (c^1, c^2)
  double vi_tolerance = 1e-9;
  int max_iterations = 100000;

  double cost_for(int agent) const { return cost[static_cast<std::size_t>(agent - 1)]; }
  void validate() const;  // throws InvalidArgument
};

// CGT-form stage gain r~(s, pi): the conditional mutual information when s=1
// and the belief lies in the opponent's cooperation region, else 0.
double cgt_reward(const MarkovModel& model, int s, const Belief& belief, const Region& opp_region,
                  int agent);

// r~(s, pi) - a * c^n.
double stage_reward(const MarkovModel& model, int s, const Belief& belief,
                    const Region& opp_region, int agent, int own_action, const GameParams& params);

// Strategy-weighted expected reception gain: share_prob * I(X; Y^{-n} | Y^n).
// Valid when the opponent's strategy is private-information-invariant.
double expected_reception_gain(const MarkovModel& model, const Belief& belief,
                               double opp_share_prob, int agent);

// Replaceable reward-evaluation contract. A gain function assigns a pathwise
// reward to (state, own observation, received signal, belief); admissible
// instances must have (A) nonnegative expectation under the shared-signal
// joint and (B) zero expectation at Z = epsilon. Only the mutual-information
// instance ships; the solver accepts any admissible instance.
class GainFunction {
 public:
  virtual ~GainFunction() = default;
  virtual double pathwise(const MarkovModel& model, int agent, std::size_t state, int own_obs,
                          const Signal& signal, const Belief& belief) const = 0;
};

// The built-in instance: log2 of the posterior odds ratio
// P(x | z, y, pi) / P(x | y, pi). Its expectation under a shared signal is the
// conditional mutual information; at z = epsilon it is pathwise zero.
class LogPosteriorRatioGain final : public GainFunction {
 public:
  double pathwise(const MarkovModel& model, int agent, std::size_t state, int own_obs,
                  const Signal& signal, const Belief& belief) const override;
};

// E[ gain | opponent shares ] by enumeration of (x, y^n, y^{-n}).
double expected_gain(const MarkovModel& model, const GainFunction& gain, const Belief& belief,
                     int agent);

struct GainConditionReport {
  double expectation_shared;   // condition (A): must be >= 0
  double expectation_epsilon;  // condition (B): must be 0
  bool admissible;
};

GainConditionReport check_gain_conditions(const MarkovModel& model, const GainFunction& gain,
                                          const Belief& belief, int agent);

}  // namespace disg
