#pragma once

#include <array>
#include <optional>
#include <vector>

#include "disg/solver.hpp"

namespace disg {

struct OracleResult {
  Region region;     // O^n(C)
  ValueTable table;  // the solve it came from
  bool converged;    // false propagates the solver's NotConverged flag
};

// The oracle operator O^n(C): solve agent n's best response against C, then
// extract the greedy region. Guaranteed contained in C.
OracleResult oracle_O(const MarkovModel& model, const Region& opp_region, const GameParams& params,
                      int agent);

struct ItraReport {
  Region region;
  bool halted_fixed_point = false;  // true iff the halting test fired
  int iterations_used = 0;
  std::vector<std::size_t> chain;   // region size after each F application
  bool tainted = false;             // a solve failed to converge; region is the last clean iterate
};

// Iterative Refinement Algorithm: starting from the full grid, apply
// F(C) = O^1(O^2(C)) up to k times, halting early on a fixed point. The final
// region contains the maximal equilibrium region; iterate sizes are
// non-increasing.
ItraReport itra(const MarkovModel& model, const GameParams& params, GridPtr grid, int k);

struct EquilibriumWitness {
  bool is_equilibrium = false;
  // Grid indices violating O^n(C) = C, per agent (symmetric difference).
  std::array<std::vector<std::size_t>, 2> violations;
};

// True iff O^1(C) = C and O^2(C) = C exactly on the grid.
EquilibriumWitness is_equilibrium_region(const MarkovModel& model, const Region& region,
                                         const GameParams& params);

struct AbsorbingReport {
  // Per-coordinate interval [lambda_min(x'), lambda_max(x')] (column min/max
  // of the transition kernel).
  std::vector<std::array<double, 2>> box;
  Region region;          // box intersected with the grid
  bool is_absorbing;      // one-step cooperative updates stay in the box, checked on grid points
  double r_inf;           // min over agents and region points of the pure MI gain
  bool is_positive;       // r_inf above the positivity threshold
  std::optional<double> suggested_cost;  // epsilon_tilde * r_inf when positive
};

// Theorem-7 machinery: the kernel's column min/max box is absorbing; if the
// infimum gain on it is positive, cost = epsilon_tilde * r_inf makes it an
// equilibrium region. Requires 0 < epsilon_tilde <= delta.
AbsorbingReport absorbing_box(const MarkovModel& model, const GameParams& params, GridPtr grid,
                              double epsilon_tilde);

// True iff X and Y^{-n} are conditionally dependent given Y^n at this belief
// (mutual information above the 1e-9 positivity threshold).
bool corollary_dependence_check(const MarkovModel& model, const Belief& belief, int agent);

}  // namespace disg
