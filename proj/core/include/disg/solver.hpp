#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "disg/model.hpp"
#include "disg/reward.hpp"
#include "disg/strategy.hpp"

namespace disg {

// Solved best-response POMDP on the discretized augmented state (s, pi).
// Only the s=1 slice is stored: V(s=0, .) = 0 in closed form, and values are
// identically 0 at grid points outside opp_region (the opponent defects there,
// so the flag drops and the continuation is 0).
struct ValueTable {
  GridPtr grid;
  std::vector<double> values;  // V(s=1, grid point)
  Region opp_region;           // the region C it was solved against
  int agent = 1;
  double residual = 0.0;       // final sup-norm change
  int iterations = 0;
  bool converged = false;      // false = NotConverged, flagged rather than thrown
  std::vector<double> residual_history;

  // Interpolated value at an arbitrary belief: linear between the bracketing
  // grid points for two states, nearest grid point otherwise.
  double value_at(const Belief& belief) const;
};

struct SolveOptions {
  // Replaces the built-in mutual-information gain in the r~ term when set.
  const GainFunction* gain = nullptr;
};

// Value iteration for agent n against a CGT opponent cooperating exactly on
// opp_region. Jacobi sweeps from V = 0; iterates until the sup-norm change
// drops below vi_tolerance * (1 - delta), which keeps the value-function error
// itself below vi_tolerance.
ValueTable solve_best_response(const MarkovModel& model, const Region& opp_region,
                               const GameParams& params, int agent,
                               const SolveOptions& options = {});

struct QPair {
  double defect;  // Q(s=1, pi, a=0) = r~(1, pi)
  double share;   // Q(s=1, pi, a=1) = r~(1, pi) - c + delta E[V(s', pi')]
};

QPair q_values(const MarkovModel& model, const ValueTable& table, const Belief& belief,
               const GameParams& params, int agent);

// Q(s=0, pi, a) = -a c^n, independent of the belief.
inline double q_value_defection_phase(const GameParams& params, int agent, int action) {
  return -static_cast<double>(action) * params.cost_for(agent);
}

// {grid pi : q_share >= q_defect}. The cooperate tie-break applies on the
// opponent region; outside it the gap is exactly -c and a tie (c = 0) resolves
// to the prescribed defect action, so the result is contained in opp_region.
// Throws OracleViolation if containment fails (a solver bug).
Region greedy_region(const MarkovModel& model, const ValueTable& table, const GameParams& params,
                     int agent);

// Max over grid points, agents and actions of |r~ - a c| with the full grid as
// opponent region; the R_max used in truncation bounds.
double max_abs_stage_reward(const MarkovModel& model, const SimplexGrid& grid,
                            const GameParams& params);

struct PomcpOptions {
  // UCB1 exploration weight; <= 0 means the empirical return range observed at
  // the root so far (1.0 until the range is positive).
  double exploration_weight = -1.0;
  enum class Rollout { AlwaysDefect, UniformRandom } rollout = Rollout::AlwaysDefect;
};

struct PomcpResult {
  int action;
  double q_defect;
  double q_share;
  int simulations;
};

// Monte-Carlo tree search from (s, belief) for agent n with exact belief
// updates in place of a particle filter. States are sampled from the belief
// for the dynamics; rewards and the opponent's CGT policy are evaluated on
// the exact beliefs. Deterministic given the seed.
PomcpResult pomcp_plan(const MarkovModel& model, const Region& opp_region,
                       const GameParams& params, const Belief& belief, int s, int sim_budget,
                       int horizon, std::uint64_t seed, int agent = 1,
                       const PomcpOptions& options = {});

}  // namespace disg
