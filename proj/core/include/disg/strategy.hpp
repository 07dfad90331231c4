#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "disg/model.hpp"

namespace disg {

// Uniform lattice {k/R : sum k = R} on the belief simplex, enumerated in
// lexicographic order of the integer coordinates. For two states this is
// R+1 points with point i at pi(X=0) = i/R.
class SimplexGrid {
 public:
  SimplexGrid(std::size_t num_states, int resolution, std::size_t max_points = kDefaultMaxPoints);

  std::size_t size() const { return points_.size(); }
  std::size_t num_states() const { return num_states_; }
  int resolution() const { return resolution_; }

  const Belief& point(std::size_t index) const { return points_[index]; }

  // Euclidean-nearest lattice point; ties broken toward the lexicographically
  // smallest index.
  std::size_t nearest_index(const Belief& belief) const;

  bool same_layout(const SimplexGrid& other) const {
    return num_states_ == other.num_states_ && resolution_ == other.resolution_;
  }

  static constexpr std::size_t kDefaultMaxPoints = 5'000'000;

 private:
  std::size_t num_states_;
  int resolution_;
  std::vector<Belief> points_;
};

using GridPtr = std::shared_ptr<const SimplexGrid>;

// Throws ResolutionTooLarge if the lattice would exceed max_points.
GridPtr build_grid(std::size_t num_states, int resolution,
                   std::size_t max_points = SimplexGrid::kDefaultMaxPoints);

// Subset of a simplex grid, stored extensionally as a membership mask so that
// iterates can be compared exactly. Membership of an off-grid belief is
// decided by rounding to the nearest grid point.
class Region {
 public:
  explicit Region(GridPtr grid);

  static Region empty(GridPtr grid) { return Region(std::move(grid)); }
  static Region full(GridPtr grid);
  static Region from_indices(GridPtr grid, std::span<const std::size_t> indices);

  const GridPtr& grid() const { return grid_; }

  bool contains_index(std::size_t index) const { return mask_[index] != 0; }
  bool contains(const Belief& belief) const;
  void set(std::size_t index, bool member) { mask_[index] = member ? 1 : 0; }

  std::size_t count() const;
  bool is_empty() const { return count() == 0; }
  std::vector<std::size_t> member_indices() const;

  Region set_union(const Region& other) const;
  Region set_intersection(const Region& other) const;
  Region set_difference(const Region& other) const;
  bool subset_of(const Region& other) const;
  bool operator==(const Region& other) const;

 private:
  void require_same_grid(const Region& other) const;

  GridPtr grid_;
  std::vector<std::uint8_t> mask_;
};

// Deterministic sharing-status dynamics: next flag is 1 iff s = a1 = a2 = 1.
// Once 0, always 0.
inline int flag_update(int s, int a1, int a2) {
  return (s == 1 && a1 == 1 && a2 == 1) ? 1 : 0;
}

// Constrained Grim Trigger action: share iff no deviation has occurred and the
// belief lies in the agent's own cooperation region.
int cgt_action(int s, const Belief& belief, const Region& own_region);

// Maximal runs of consecutive member cells, as [lo, hi] intervals of pi(X=0).
// Two-state grids only.
std::vector<std::pair<double, double>> contiguous_runs(const Region& region);

}  // namespace disg
