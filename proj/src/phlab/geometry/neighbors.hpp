#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "phlab/geometry/types.hpp"

namespace phlab {

/// Uniform bucket grid over the bounding box of a point set.
///
/// Points are bucketed with a counting sort, so each cell's members are a
/// contiguous slice of one index array.
class SpatialGrid {
 public:
  SpatialGrid(std::span<const Vec3> points, double cell_size, std::size_t max_cells);

  double cell_size() const { return h_; }
  const std::array<int, 3>& dims() const { return dims_; }
  const Vec3& origin() const { return origin_; }

  /// Integer cell coordinates of x; may lie outside [0, dims) for outside points.
  std::array<int, 3> cell_of(const Vec3& x) const;

  /// Calls f(point index) for every point in cells at Chebyshev distance
  /// exactly r from cell c (clipped to the grid).
  template <typename F>
  void for_each_in_ring(const std::array<int, 3>& c, int r, F&& f) const;

  /// Calls f(point index) for every point in cells overlapping [lo, hi].
  template <typename F>
  void for_each_in_box(const Vec3& lo, const Vec3& hi, F&& f) const;

  /// True if the cube of cells within Chebyshev distance r of c covers the
  /// whole grid, i.e. rings beyond r are empty.
  bool covers_grid(const std::array<int, 3>& c, int r) const;

 private:
  std::size_t linear(int x, int y, int z) const {
    return static_cast<std::size_t>(x) + static_cast<std::size_t>(dims_[0]) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_[1]) * z);
  }
  template <typename F>
  void visit_cell(int x, int y, int z, F& f) const {
    const std::size_t k = linear(x, y, z);
    for (std::size_t p = start_[k]; p < start_[k + 1]; ++p) f(order_[p]);
  }

  Vec3 origin_;
  double h_;
  std::array<int, 3> dims_{};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> order_;
};

/// Cell size used for nearest-neighbour queries on n points in a box of the
/// given extent: max(mean NN distance of a Poisson cloud, diameter / 256).
double nn_cell_size(const Vec3& extent, std::size_t n);

/// d_i = min_{j != i} |x_i - x_j| (squared distances compared, then sqrt).
/// Brute force below 64 points, spatial hash above; both give identical bits.
std::vector<double> nearest_neighbor_distances(std::span<const Vec3> points);

/// Indices of the k nearest points of `points` to each query point, sorted by
/// distance (ties by index). If `exclude_self` is set, queries are assumed to be
/// `points` themselves and index i is skipped for query i.
std::vector<std::vector<std::pair<double, std::size_t>>> k_nearest(std::span<const Vec3> points,
                                                                   std::span<const Vec3> queries,
                                                                   std::size_t k, bool exclude_self);

// ---------------------------------------------------------------------------

template <typename F>
void SpatialGrid::for_each_in_ring(const std::array<int, 3>& c, int r, F&& f) const {
  const int z0 = std::max(c[2] - r, 0), z1 = std::min(c[2] + r, dims_[2] - 1);
  const int y0 = std::max(c[1] - r, 0), y1 = std::min(c[1] + r, dims_[1] - 1);
  const int x0 = std::max(c[0] - r, 0), x1 = std::min(c[0] + r, dims_[0] - 1);
  for (int z = z0; z <= z1; ++z) {
    const bool zface = (z == c[2] - r || z == c[2] + r);
    for (int y = y0; y <= y1; ++y) {
      const bool yface = zface || (y == c[1] - r || y == c[1] + r);
      if (yface) {
        for (int x = x0; x <= x1; ++x) visit_cell(x, y, z, f);
      } else {
        if (c[0] - r >= 0 && c[0] - r < dims_[0]) visit_cell(c[0] - r, y, z, f);
        if (r > 0 && c[0] + r >= 0 && c[0] + r < dims_[0]) visit_cell(c[0] + r, y, z, f);
      }
    }
  }
}

template <typename F>
void SpatialGrid::for_each_in_box(const Vec3& lo, const Vec3& hi, F&& f) const {
  const auto a = cell_of(lo);
  const auto b = cell_of(hi);
  std::array<int, 3> l{}, u{};
  for (int d = 0; d < 3; ++d) {
    l[d] = std::max(a[d], 0);
    u[d] = std::min(b[d], dims_[d] - 1);
    if (l[d] > u[d]) return;
  }
  for (int z = l[2]; z <= u[2]; ++z)
    for (int y = l[1]; y <= u[1]; ++y)
      for (int x = l[0]; x <= u[0]; ++x) visit_cell(x, y, z, f);
}

}  // namespace phlab
