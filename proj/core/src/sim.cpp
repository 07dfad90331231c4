#include "disg/sim.hpp"

#include <cmath>
#include <span>

#include "disg/rng.hpp"
#include "disg/solver.hpp"

namespace disg {

namespace {

int sample_row(Rng& rng, const Matrix& m, int row) {
  std::span<const double> r(&m(static_cast<std::size_t>(row), 0), m.cols());
  return rng.categorical(r);
}

double truncation(const MarkovModel& model, const SimplexGrid& grid, const GameParams& params,
                  int horizon) {
  const double r_max = max_abs_stage_reward(model, grid, params);
  return std::pow(params.delta, horizon) * r_max / (1.0 - params.delta);
}

struct MeanStderr {
  double mean;
  double std_error;
};

MeanStderr summarize(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var = samples.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

TrajectoryRecord simulate(const MarkovModel& model, const Region& region1, const Region& region2,
                          const GameParams& params, const Belief& initial_belief, int horizon,
                          std::uint64_t seed) {
  if (horizon < 1) throw DisgError(ErrorCode::InvalidArgument, "horizon must be >= 1");
  params.validate();
  Rng rng(splitmix64(seed));

  TrajectoryRecord record;
  record.horizon = horizon;
  record.seed = seed;
  record.profile = "cgt:" + std::to_string(region1.count()) + "," + std::to_string(region2.count());
  record.steps.reserve(static_cast<std::size_t>(horizon));

  int x = rng.categorical(initial_belief.probs());
  std::array<Belief, 2> beliefs = {initial_belief, initial_belief};
  int s = 1;

  for (int t = 0; t < horizon; ++t) {
    TrajectoryStep step;
    step.state = x;
    step.obs = {sample_row(rng, model.channel(1), x), sample_row(rng, model.channel(2), x)};
    step.actions = {cgt_action(s, beliefs[0], region1), cgt_action(s, beliefs[1], region2)};
    step.signals = {step.actions[0] == 1 ? Signal::obs(step.obs[0]) : Signal::epsilon(),
                    step.actions[1] == 1 ? Signal::obs(step.obs[1]) : Signal::epsilon()};
    step.flag = s;
    step.beliefs = beliefs;
    step.stage_rewards = {
        stage_reward(model, s, beliefs[0], region2, 1, step.actions[0], params),
        stage_reward(model, s, beliefs[1], region1, 2, step.actions[1], params)};
    record.steps.push_back(step);

    beliefs[0] = belief_update(model, beliefs[0], step.obs[0], step.signals[1], step.actions[1], 1);
    beliefs[1] = belief_update(model, beliefs[1], step.obs[1], step.signals[0], step.actions[0], 2);
    s = flag_update(s, step.actions[0], step.actions[1]);
    x = sample_row(rng, model.transition, x);
  }
  return record;
}

ValueEstimate estimate_value(const MarkovModel& model, const Region& region1,
                             const Region& region2, const GameParams& params,
                             const Belief& initial_belief, int agent, int n_rollouts, int horizon,
                             std::uint64_t seed) {
  if (n_rollouts < 2) throw DisgError(ErrorCode::InvalidArgument, "need at least 2 rollouts");
  if (horizon < 1) throw DisgError(ErrorCode::InvalidArgument, "horizon must be >= 1");
  params.validate();

  const Region& opp_region = agent == 1 ? region2 : region1;

  std::vector<double> returns(static_cast<std::size_t>(n_rollouts));
  for (int k = 0; k < n_rollouts; ++k) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(k));
    int x = rng.categorical(initial_belief.probs());
    std::array<Belief, 2> beliefs = {initial_belief, initial_belief};
    int s = 1;
    double ret = 0.0;
    double discount = 1.0;
    for (int t = 0; t < horizon; ++t) {
      const int y1 = sample_row(rng, model.channel(1), x);
      const int y2 = sample_row(rng, model.channel(2), x);
      const int a1 = cgt_action(s, beliefs[0], region1);
      const int a2 = cgt_action(s, beliefs[1], region2);
      const int a_own = agent == 1 ? a1 : a2;
      const Belief& b_own = agent == 1 ? beliefs[0] : beliefs[1];
      ret += discount * stage_reward(model, s, b_own, opp_region, agent, a_own, params);
      discount *= params.delta;
      const Signal z1 = a1 == 1 ? Signal::obs(y1) : Signal::epsilon();
      const Signal z2 = a2 == 1 ? Signal::obs(y2) : Signal::epsilon();
      beliefs[0] = belief_update(model, beliefs[0], y1, z2, a2, 1);
      beliefs[1] = belief_update(model, beliefs[1], y2, z1, a1, 2);
      s = flag_update(s, a1, a2);
      x = sample_row(rng, model.transition, x);
    }
    returns[static_cast<std::size_t>(k)] = ret;
  }

  const MeanStderr stats = summarize(returns);
  ValueEstimate estimate;
  estimate.mean = stats.mean;
  estimate.std_error = stats.std_error;
  estimate.truncation_bound = truncation(model, *region1.grid(), params, horizon);
  estimate.rollouts = n_rollouts;
  return estimate;
}

DeviationReport deviation_test(const MarkovModel& model, const Region& region,
                               const GameParams& params, const Belief& belief, int agent,
                               int n_rollouts, int horizon, std::uint64_t seed, int initial_flag) {
  if (n_rollouts < 2) throw DisgError(ErrorCode::InvalidArgument, "need at least 2 rollouts");
  if (horizon < 1) throw DisgError(ErrorCode::InvalidArgument, "horizon must be >= 1");
  params.validate();

  const int prescribed = cgt_action(initial_flag, belief, region);
  const int deviated = 1 - prescribed;

  // Common random numbers: both arms replay the same exogenous
  // state/observation path, so sure gaps have zero variance.
  std::vector<double> prescribed_returns(static_cast<std::size_t>(n_rollouts));
  std::vector<double> gaps(static_cast<std::size_t>(n_rollouts));
  std::vector<int> y1s(static_cast<std::size_t>(horizon));
  std::vector<int> y2s(static_cast<std::size_t>(horizon));

  auto evaluate = [&](int first_action) {
    std::array<Belief, 2> beliefs = {belief, belief};
    int s = initial_flag;
    double ret = 0.0;
    double discount = 1.0;
    for (int t = 0; t < horizon; ++t) {
      const int y_own = agent == 1 ? y1s[static_cast<std::size_t>(t)] : y2s[static_cast<std::size_t>(t)];
      const int y_opp = agent == 1 ? y2s[static_cast<std::size_t>(t)] : y1s[static_cast<std::size_t>(t)];
      const Belief& b_own = beliefs[0];
      const Belief& b_opp = beliefs[1];
      const int a_own = t == 0 ? first_action : cgt_action(s, b_own, region);
      const int a_opp = cgt_action(s, b_opp, region);
      ret += discount * (cgt_reward(model, s, b_own, region, agent) -
                         a_own * params.cost_for(agent));
      discount *= params.delta;
      const Signal z_own = a_own == 1 ? Signal::obs(y_own) : Signal::epsilon();
      const Signal z_opp = a_opp == 1 ? Signal::obs(y_opp) : Signal::epsilon();
      beliefs[0] = belief_update(model, b_own, y_own, z_opp, a_opp, agent);
      beliefs[1] = belief_update(model, b_opp, y_opp, z_own, a_own, opponent_of(agent));
      const int a1 = agent == 1 ? a_own : a_opp;
      const int a2 = agent == 1 ? a_opp : a_own;
      s = flag_update(s, a1, a2);
    }
    return ret;
  };

  for (int k = 0; k < n_rollouts; ++k) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(k));
    int x = rng.categorical(belief.probs());
    for (int t = 0; t < horizon; ++t) {
      y1s[static_cast<std::size_t>(t)] = sample_row(rng, model.channel(1), x);
      y2s[static_cast<std::size_t>(t)] = sample_row(rng, model.channel(2), x);
      x = sample_row(rng, model.transition, x);
    }
    const double ret_prescribed = evaluate(prescribed);
    const double ret_deviated = evaluate(deviated);
    prescribed_returns[static_cast<std::size_t>(k)] = ret_prescribed;
    gaps[static_cast<std::size_t>(k)] = ret_deviated - ret_prescribed;
  }

  const MeanStderr prescribed_stats = summarize(prescribed_returns);
  const MeanStderr gap_stats = summarize(gaps);

  DeviationReport report;
  report.prescribed_action = prescribed;
  report.prescribed_mean = prescribed_stats.mean;
  report.deviation_mean = prescribed_stats.mean + gap_stats.mean;
  report.gap_mean = gap_stats.mean;
  report.gap_std_error = gap_stats.std_error;
  report.truncation_bound = truncation(model, *region.grid(), params, horizon);
  report.threshold = 3.0 * gap_stats.std_error + report.truncation_bound + 2.0 * params.vi_tolerance;
  report.violation = gap_stats.mean > report.threshold;
  return report;
}

}  // namespace disg
