#include "disg/solver.hpp"

#include <algorithm>
#include <cmath>

namespace disg {

namespace {

constexpr double kProbZero = 1e-15;

// Interpolation coordinates for an arbitrary belief: bracketing pair plus
// weight for two states, nearest point otherwise.
void interp_coords(const SimplexGrid& grid, const Belief& belief, std::size_t& lo, std::size_t& hi,
                   double& w) {
  if (grid.num_states() == 2) {
    const int R = grid.resolution();
    double t = belief[0] * R;
    t = std::clamp(t, 0.0, static_cast<double>(R));
    lo = static_cast<std::size_t>(t);
    if (lo >= static_cast<std::size_t>(R)) {
      lo = hi = static_cast<std::size_t>(R);
      w = 0.0;
      return;
    }
    hi = lo + 1;
    w = t - static_cast<double>(lo);
    return;
  }
  lo = hi = grid.nearest_index(belief);
  w = 0.0;
}

struct Successor {
  double prob;
  std::size_t lo, hi;
  double w;
};

struct MemberPlan {
  std::size_t index;
  double gain;  // r~(1, pi) at the grid point
  std::vector<Successor> successors;
};

// Per member grid point: the stage gain and, for every joint observation
// pair, the probability and interpolation coordinates of the cooperative
// successor belief. Constant across value-iteration sweeps.
std::vector<MemberPlan> build_plans(const MarkovModel& model, const Region& opp_region, int agent,
                                    const GainFunction* gain_fn) {
  const SimplexGrid& grid = *opp_region.grid();
  const Matrix& own = model.channel(agent);
  const Matrix& opp = model.channel(opponent_of(agent));
  std::vector<MemberPlan> plans;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!opp_region.contains_index(i)) continue;
    const Belief& pi = grid.point(i);
    MemberPlan plan;
    plan.index = i;
    plan.gain = gain_fn != nullptr ? expected_gain(model, *gain_fn, pi, agent)
                                   : conditional_mutual_information(model, pi, agent);
    for (std::size_t y = 0; y < own.cols(); ++y) {
      for (std::size_t ym = 0; ym < opp.cols(); ++ym) {
        double p = 0.0;
        for (std::size_t x = 0; x < model.num_states; ++x) {
          p += pi[x] * own(x, y) * opp(x, ym);
        }
        if (p < kProbZero) continue;
        Belief next = belief_update(model, pi, static_cast<int>(y),
                                    Signal::obs(static_cast<int>(ym)), 1, agent);
        Successor s;
        s.prob = p;
        interp_coords(grid, next, s.lo, s.hi, s.w);
        plan.successors.push_back(s);
      }
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

double expected_continuation(const std::vector<double>& values,
                             const std::vector<Successor>& successors) {
  double e = 0.0;
  for (const Successor& s : successors) {
    e += s.prob * ((1.0 - s.w) * values[s.lo] + s.w * values[s.hi]);
  }
  return e;
}

}  // namespace

double ValueTable::value_at(const Belief& belief) const {
  std::size_t lo, hi;
  double w;
  interp_coords(*grid, belief, lo, hi, w);
  return (1.0 - w) * values[lo] + w * values[hi];
}

ValueTable solve_best_response(const MarkovModel& model, const Region& opp_region,
                               const GameParams& params, int agent, const SolveOptions& options) {
  params.validate();
  ValueTable table;
  table.grid = opp_region.grid();
  table.opp_region = opp_region;
  table.agent = agent;
  table.values.assign(table.grid->size(), 0.0);

  const std::vector<MemberPlan> plans = build_plans(model, opp_region, agent, options.gain);
  if (plans.empty()) {
    table.converged = true;
    return table;
  }

  // Stopping at residual < vi_tolerance * (1 - delta) bounds the value error
  // itself by delta * vi_tolerance.
  const double target = params.vi_tolerance * (1.0 - params.delta);
  const double c = params.cost_for(agent);
  std::vector<double> next(table.values.size(), 0.0);

  for (int sweep = 0; sweep < params.max_iterations; ++sweep) {
    double residual = 0.0;
    // Jacobi update: every point reads the previous sweep's table, so the
    // result does not depend on evaluation order.
    for (const MemberPlan& plan : plans) {
      const double cont = expected_continuation(table.values, plan.successors);
      const double v = plan.gain + std::max(0.0, -c + params.delta * cont);
      residual = std::max(residual, std::abs(v - table.values[plan.index]));
      next[plan.index] = v;
    }
    for (const MemberPlan& plan : plans) {
      table.values[plan.index] = next[plan.index];
    }
    table.iterations = sweep + 1;
    table.residual = residual;
    table.residual_history.push_back(residual);
    if (residual < target) {
      table.converged = true;
      return table;
    }
  }
  table.converged = false;  // NotConverged, flagged
  return table;
}

QPair q_values(const MarkovModel& model, const ValueTable& table, const Belief& belief,
               const GameParams& params, int agent) {
  if (agent != table.agent) {
    throw DisgError(ErrorCode::InvalidArgument, "table was solved for the other agent");
  }
  if (belief.size() != table.grid->num_states()) {
    throw DisgError(ErrorCode::GridMismatch, "belief dimension != grid num_states");
  }
  const double c = params.cost_for(agent);
  const double gain = cgt_reward(model, 1, belief, table.opp_region, agent);

  QPair q;
  q.defect = gain;
  if (!table.opp_region.contains(belief)) {
    // The opponent defects here: the flag drops and the continuation is 0.
    q.share = gain - c;
    return q;
  }
  const Matrix& own = model.channel(agent);
  const Matrix& opp = model.channel(opponent_of(agent));
  double cont = 0.0;
  for (std::size_t y = 0; y < own.cols(); ++y) {
    for (std::size_t ym = 0; ym < opp.cols(); ++ym) {
      double p = 0.0;
      for (std::size_t x = 0; x < model.num_states; ++x) {
        p += belief[x] * own(x, y) * opp(x, ym);
      }
      if (p < kProbZero) continue;
      Belief next =
          belief_update(model, belief, static_cast<int>(y), Signal::obs(static_cast<int>(ym)), 1, agent);
      cont += p * table.value_at(next);
    }
  }
  q.share = gain - c + params.delta * cont;
  return q;
}

Region greedy_region(const MarkovModel& model, const ValueTable& table, const GameParams& params,
                     int agent) {
  const GridPtr& grid = table.grid;
  Region out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const QPair q = q_values(model, table, grid->point(i), params, agent);
    if (table.opp_region.contains_index(i)) {
      out.set(i, q.share >= q.defect);
    } else {
      // Off the opponent region the gap is exactly -c; a tie (c = 0) resolves
      // to the prescribed defect action.
      out.set(i, q.share > q.defect);
    }
  }
  if (!out.subset_of(table.opp_region)) {
    throw DisgError(ErrorCode::OracleViolation, "greedy region escaped the opponent region");
  }
  return out;
}

double max_abs_stage_reward(const MarkovModel& model, const SimplexGrid& grid,
                            const GameParams& params) {
  double r_max = std::max(params.cost[0], params.cost[1]);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int agent : {1, 2}) {
      const double mi = conditional_mutual_information(model, grid.point(i), agent);
      r_max = std::max(r_max, mi);
      r_max = std::max(r_max, std::abs(mi - params.cost_for(agent)));
    }
  }
  return r_max;
}

}  // namespace disg
