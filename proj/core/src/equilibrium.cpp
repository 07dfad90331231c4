#include "disg/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace disg {

OracleResult oracle_O(const MarkovModel& model, const Region& opp_region, const GameParams& params,
                      int agent) {
  ValueTable table = solve_best_response(model, opp_region, params, agent);
  Region region = greedy_region(model, table, params, agent);
  const bool converged = table.converged;
  return OracleResult{std::move(region), std::move(table), converged};
}

ItraReport itra(const MarkovModel& model, const GameParams& params, GridPtr grid, int k) {
  if (k < 1) throw DisgError(ErrorCode::InvalidArgument, "k must be >= 1");
  ItraReport report{Region::full(grid)};
  Region current = report.region;
  for (int i = 1; i <= k; ++i) {
    // F(C) = O^1(O^2(C)).
    OracleResult inner = oracle_O(model, current, params, 2);
    if (!inner.converged) {
      report.tainted = true;
      report.region = current;  // last clean iterate, never a silently wrong one
      report.iterations_used = i - 1;
      return report;
    }
    OracleResult outer = oracle_O(model, inner.region, params, 1);
    if (!outer.converged) {
      report.tainted = true;
      report.region = current;
      report.iterations_used = i - 1;
      return report;
    }
    report.chain.push_back(outer.region.count());
    report.iterations_used = i;
    if (outer.region == current) {
      report.halted_fixed_point = true;
      report.region = std::move(outer.region);
      return report;
    }
    current = std::move(outer.region);
  }
  report.region = std::move(current);
  return report;
}

EquilibriumWitness is_equilibrium_region(const MarkovModel& model, const Region& region,
                                         const GameParams& params) {
  EquilibriumWitness witness;
  witness.is_equilibrium = true;
  for (int agent : {1, 2}) {
    OracleResult result = oracle_O(model, region, params, agent);
    auto& violations = witness.violations[static_cast<std::size_t>(agent - 1)];
    for (std::size_t i = 0; i < region.grid()->size(); ++i) {
      if (result.region.contains_index(i) != region.contains_index(i)) {
        violations.push_back(i);
      }
    }
    if (!violations.empty()) witness.is_equilibrium = false;
  }
  return witness;
}

AbsorbingReport absorbing_box(const MarkovModel& model, const GameParams& params, GridPtr grid,
                              double epsilon_tilde) {
  if (!(epsilon_tilde > 0.0 && epsilon_tilde <= params.delta)) {
    throw DisgError(ErrorCode::InvalidArgument, "epsilon_tilde must lie in (0, delta]");
  }
  if (grid->num_states() != model.num_states) {
    throw DisgError(ErrorCode::GridMismatch, "grid num_states != model num_states");
  }
  constexpr double kSlack = 1e-12;

  AbsorbingReport report{.region = Region(grid)};
  const std::size_t n = model.num_states;
  report.box.resize(n);
  for (std::size_t xp = 0; xp < n; ++xp) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x) {
      lo = std::min(lo, model.transition(x, xp));
      hi = std::max(hi, model.transition(x, xp));
    }
    report.box[xp] = {lo, hi};
  }

  auto in_box = [&](const Belief& b) {
    for (std::size_t xp = 0; xp < n; ++xp) {
      if (b[xp] < report.box[xp][0] - kSlack || b[xp] > report.box[xp][1] + kSlack) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (in_box(grid->point(i))) report.region.set(i, true);
  }

  // Constructive check on grid points: every cooperative one-step update from
  // the region stays in the box. The continuum statement is Theorem-level;
  // this is the sanity check.
  report.is_absorbing = true;
  report.r_inf = std::numeric_limits<double>::infinity();
  const Matrix& c1 = model.channel(1);
  const Matrix& c2 = model.channel(2);
  for (std::size_t i = 0; i < grid->size() && report.is_absorbing; ++i) {
    if (!report.region.contains_index(i)) continue;
    const Belief& pi = grid->point(i);
    for (std::size_t y1 = 0; y1 < c1.cols() && report.is_absorbing; ++y1) {
      for (std::size_t y2 = 0; y2 < c2.cols(); ++y2) {
        double p = 0.0;
        for (std::size_t x = 0; x < n; ++x) p += pi[x] * c1(x, y1) * c2(x, y2);
        if (p < 1e-15) continue;
        Belief next = belief_update(model, pi, static_cast<int>(y1),
                                    Signal::obs(static_cast<int>(y2)), 1, 1);
        if (!in_box(next)) {
          report.is_absorbing = false;
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (!report.region.contains_index(i)) continue;
    for (int agent : {1, 2}) {
      report.r_inf = std::min(report.r_inf,
                              conditional_mutual_information(model, grid->point(i), agent));
    }
  }
  if (report.region.is_empty()) report.r_inf = 0.0;

  constexpr double kPositivityThreshold = 1e-9;
  report.is_positive = report.r_inf > kPositivityThreshold;
  if (report.is_positive) {
    report.suggested_cost = epsilon_tilde * report.r_inf;
  }
  return report;
}

bool corollary_dependence_check(const MarkovModel& model, const Belief& belief, int agent) {
  return conditional_mutual_information(model, belief, agent) > 1e-9;
}

}  // namespace disg
