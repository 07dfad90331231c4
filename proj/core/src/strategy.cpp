#include "disg/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace disg {

namespace {

// Number of lattice points: C(resolution + d - 1, d - 1), computed in floating
// point for the cap check only.
double composition_count(std::size_t d, int resolution) {
  double count = 1.0;
  for (std::size_t i = 1; i < d; ++i) {
    count *= static_cast<double>(resolution + static_cast<int>(i)) / static_cast<double>(i);
  }
  return count;
}

void enumerate_points(std::size_t d, int resolution, std::vector<Belief>& out) {
  std::vector<int> coords(d, 0);
  // Lexicographic enumeration of nonnegative integer vectors summing to R.
  auto emit = [&]() {
    std::vector<double> p(d);
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = static_cast<double>(coords[i]) / static_cast<double>(resolution);
    }
    out.emplace_back(std::move(p));
  };
  auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == d) {
      coords[pos] = remaining;
      emit();
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      coords[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  recurse(recurse, 0, resolution);
}

}  // namespace

SimplexGrid::SimplexGrid(std::size_t num_states, int resolution, std::size_t max_points)
    : num_states_(num_states), resolution_(resolution) {
  if (num_states < 2) throw DisgError(ErrorCode::InvalidArgument, "num_states must be >= 2");
  if (resolution < 1) throw DisgError(ErrorCode::InvalidArgument, "resolution must be >= 1");
  if (composition_count(num_states, resolution) > static_cast<double>(max_points)) {
    throw DisgError(ErrorCode::ResolutionTooLarge,
                    "lattice would exceed " + std::to_string(max_points) + " points");
  }
  enumerate_points(num_states, resolution, points_);
}

std::size_t SimplexGrid::nearest_index(const Belief& belief) const {
  if (belief.size() != num_states_) {
    throw DisgError(ErrorCode::GridMismatch, "belief dimension != grid num_states");
  }
  const int R = resolution_;
  if (num_states_ == 2) {
    // Round pi(X=0); half-way ties go down, i.e. toward the smaller index.
    double t = belief[0] * R;
    long k = static_cast<long>(std::ceil(t - 0.5));
    k = std::clamp(k, 0L, static_cast<long>(R));
    return static_cast<std::size_t>(k);
  }

  // Floor the scaled coordinates, then hand out the remaining deficit to the
  // largest fractional parts. On fractional ties the later coordinate wins,
  // which keeps the earlier coordinates small and the index lexicographically
  // smallest.
  const std::size_t d = num_states_;
  std::vector<int> k(d);
  std::vector<double> frac(d);
  long sum = 0;
  for (std::size_t i = 0; i < d; ++i) {
    double t = belief[i] * R;
    k[i] = static_cast<int>(std::floor(t));
    if (k[i] > R) k[i] = R;
    frac[i] = t - k[i];
    sum += k[i];
  }
  long deficit = R - sum;
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (frac[a] != frac[b]) return frac[a] > frac[b];
    return a > b;
  });
  for (long j = 0; j < deficit; ++j) k[order[static_cast<std::size_t>(j) % d]] += 1;

  // Rank the integer coordinate vector in the lexicographic enumeration.
  std::size_t index = 0;
  int remaining = R;
  for (std::size_t pos = 0; pos + 1 < d; ++pos) {
    for (int v = 0; v < k[pos]; ++v) {
      index += static_cast<std::size_t>(composition_count(d - pos - 1, remaining - v) + 0.5);
    }
    remaining -= k[pos];
  }
  return index;
}

GridPtr build_grid(std::size_t num_states, int resolution, std::size_t max_points) {
  return std::make_shared<const SimplexGrid>(num_states, resolution, max_points);
}

Region::Region(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw DisgError(ErrorCode::InvalidArgument, "null grid");
  mask_.assign(grid_->size(), 0);
}

Region Region::full(GridPtr grid) {
  Region r(std::move(grid));
  std::fill(r.mask_.begin(), r.mask_.end(), 1);
  return r;
}

Region Region::from_indices(GridPtr grid, std::span<const std::size_t> indices) {
  Region r(std::move(grid));
  for (std::size_t i : indices) {
    if (i >= r.mask_.size()) throw DisgError(ErrorCode::GridMismatch, "member index out of range");
    r.mask_[i] = 1;
  }
  return r;
}

bool Region::contains(const Belief& belief) const {
  return contains_index(grid_->nearest_index(belief));
}

std::size_t Region::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Region::member_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) out.push_back(i);
  }
  return out;
}

void Region::require_same_grid(const Region& other) const {
  if (!grid_->same_layout(*other.grid_)) {
    throw DisgError(ErrorCode::GridMismatch, "regions built on different grids");
  }
}

Region Region::set_union(const Region& other) const {
  require_same_grid(other);
  Region out(grid_);
  for (std::size_t i = 0; i < mask_.size(); ++i) out.mask_[i] = mask_[i] | other.mask_[i];
  return out;
}

Region Region::set_intersection(const Region& other) const {
  require_same_grid(other);
  Region out(grid_);
  for (std::size_t i = 0; i < mask_.size(); ++i) out.mask_[i] = mask_[i] & other.mask_[i];
  return out;
}

Region Region::set_difference(const Region& other) const {
  require_same_grid(other);
  Region out(grid_);
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    out.mask_[i] = static_cast<std::uint8_t>(mask_[i] & ~other.mask_[i] & 1);
  }
  return out;
}

bool Region::subset_of(const Region& other) const {
  require_same_grid(other);
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i] && !other.mask_[i]) return false;
  }
  return true;
}

bool Region::operator==(const Region& other) const {
  require_same_grid(other);
  return mask_ == other.mask_;
}

int cgt_action(int s, const Belief& belief, const Region& own_region) {
  return (s == 1 && own_region.contains(belief)) ? 1 : 0;
}

std::vector<std::pair<double, double>> contiguous_runs(const Region& region) {
  const SimplexGrid& grid = *region.grid();
  if (grid.num_states() != 2) {
    throw DisgError(ErrorCode::UnsupportedDimension, "contiguous runs need a two-state grid");
  }
  std::vector<std::pair<double, double>> runs;
  const std::size_t n = grid.size();
  std::size_t i = 0;
  while (i < n) {
    if (!region.contains_index(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && region.contains_index(j + 1)) ++j;
    runs.emplace_back(grid.point(i)[0], grid.point(j)[0]);
    i = j + 1;
  }
  return runs;
}

}  // namespace disg
