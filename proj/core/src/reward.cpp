#include "disg/reward.hpp"

#include <cmath>

namespace disg {

namespace {
constexpr double kProbZero = 1e-15;
}

void GameParams::validate() const {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw DisgError(ErrorCode::InvalidArgument, "delta must lie in [0, 1)");
  }
  if (cost[0] < 0.0 || cost[1] < 0.0) {
    throw DisgError(ErrorCode::InvalidArgument, "costs must be nonnegative");
  }
  if (!(vi_tolerance > 0.0)) {
    throw DisgError(ErrorCode::InvalidArgument, "vi_tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw DisgError(ErrorCode::InvalidArgument, "max_iterations must be positive");
  }
}

double cgt_reward(const MarkovModel& model, int s, const Belief& belief, const Region& opp_region,
                  int agent) {
  if (opp_region.grid()->num_states() != belief.size()) {
    throw DisgError(ErrorCode::GridMismatch, "region grid incompatible with belief dimension");
  }
  if (s != 1 || !opp_region.contains(belief)) return 0.0;
  return conditional_mutual_information(model, belief, agent);
}

double stage_reward(const MarkovModel& model, int s, const Belief& belief,
                    const Region& opp_region, int agent, int own_action,
                    const GameParams& params) {
  return cgt_reward(model, s, belief, opp_region, agent) -
         static_cast<double>(own_action) * params.cost_for(agent);
}

double expected_reception_gain(const MarkovModel& model, const Belief& belief,
                               double opp_share_prob, int agent) {
  if (opp_share_prob < 0.0 || opp_share_prob > 1.0) {
    throw DisgError(ErrorCode::InvalidArgument, "share probability outside [0, 1]");
  }
  if (opp_share_prob == 0.0) return 0.0;
  return opp_share_prob * conditional_mutual_information(model, belief, agent);
}

double LogPosteriorRatioGain::pathwise(const MarkovModel& model, int agent, std::size_t state,
                                       int own_obs, const Signal& signal,
                                       const Belief& belief) const {
  // log2 P(x | z, y, pi) / P(x | y, pi). Conditioning on epsilon adds nothing,
  // so the ratio is exactly 1 there.
  if (signal.is_epsilon()) return 0.0;
  const Matrix& own = model.channel(agent);
  const Matrix& opp = model.channel(opponent_of(agent));
  const std::size_t y = static_cast<std::size_t>(own_obs);
  const std::size_t ym = static_cast<std::size_t>(signal.obs_index());

  double p_y = 0.0;
  for (std::size_t x = 0; x < model.num_states; ++x) p_y += belief[x] * own(x, y);
  if (p_y < kProbZero) {
    throw DisgError(ErrorCode::ZeroLikelihood, "own observation impossible under the belief");
  }
  double p_ym_given_y = 0.0;
  for (std::size_t x = 0; x < model.num_states; ++x) {
    p_ym_given_y += belief[x] * own(x, y) / p_y * opp(x, ym);
  }
  const double num = opp(state, ym);
  if (num < kProbZero || p_ym_given_y < kProbZero) {
    throw DisgError(ErrorCode::ZeroLikelihood, "signal impossible under the belief");
  }
  return std::log2(num / p_ym_given_y);
}

double expected_gain(const MarkovModel& model, const GainFunction& gain, const Belief& belief,
                     int agent) {
  const Matrix& own = model.channel(agent);
  const Matrix& opp = model.channel(opponent_of(agent));
  double total = 0.0;
  for (std::size_t x = 0; x < model.num_states; ++x) {
    if (belief[x] < kProbZero) continue;
    for (std::size_t y = 0; y < own.cols(); ++y) {
      for (std::size_t ym = 0; ym < opp.cols(); ++ym) {
        const double p = belief[x] * own(x, y) * opp(x, ym);
        if (p < kProbZero) continue;
        total += p * gain.pathwise(model, agent, x, static_cast<int>(y), Signal::obs(static_cast<int>(ym)),
                                   belief);
      }
    }
  }
  return total;
}

GainConditionReport check_gain_conditions(const MarkovModel& model, const GainFunction& gain,
                                          const Belief& belief, int agent) {
  GainConditionReport report{};
  report.expectation_shared = expected_gain(model, gain, belief, agent);

  const Matrix& own = model.channel(agent);
  double eps_expectation = 0.0;
  for (std::size_t x = 0; x < model.num_states; ++x) {
    if (belief[x] < kProbZero) continue;
    for (std::size_t y = 0; y < own.cols(); ++y) {
      const double p = belief[x] * own(x, y);
      if (p < kProbZero) continue;
      eps_expectation +=
          p * gain.pathwise(model, agent, x, static_cast<int>(y), Signal::epsilon(), belief);
    }
  }
  report.expectation_epsilon = eps_expectation;
  report.admissible =
      report.expectation_shared >= -1e-12 && std::abs(report.expectation_epsilon) <= 1e-12;
  return report;
}

}  // namespace disg
