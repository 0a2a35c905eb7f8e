#include "phlab/geometry/neighbors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "phlab/common/error.hpp"

namespace phlab {

SpatialGrid::SpatialGrid(std::span<const Vec3> points, double cell_size, std::size_t max_cells) : h_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw InvalidArgument("spatial grid: cell size must be positive");
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
  if (!points.empty()) {
    lo = hi = points[0];
    for (const Vec3& p : points) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  origin_ = lo;
  const Vec3 ext = hi - lo;
  max_cells = std::max<std::size_t>(max_cells, 1);
  for (;;) {
    double total = 1.0;
    for (int d = 0; d < 3; ++d) total *= std::floor(ext[d] / h_) + 1.0;
    if (total <= static_cast<double>(max_cells)) break;
    h_ *= std::cbrt(total / static_cast<double>(max_cells)) * 1.001;
  }
  for (int d = 0; d < 3; ++d) dims_[d] = static_cast<int>(std::floor(ext[d] / h_)) + 1;

  const std::size_t ncells = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  start_.assign(ncells + 1, 0);
  std::vector<std::size_t> cell(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto c = cell_of(points[i]);
    for (int d = 0; d < 3; ++d) c[d] = std::clamp(c[d], 0, dims_[d] - 1);
    cell[i] = linear(c[0], c[1], c[2]);
    ++start_[cell[i] + 1];
  }
  for (std::size_t k = 0; k < ncells; ++k) start_[k + 1] += start_[k];
  order_.resize(points.size());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) order_[fill[cell[i]]++] = i;
}

std::array<int, 3> SpatialGrid::cell_of(const Vec3& x) const {
  std::array<int, 3> c{};
  for (int d = 0; d < 3; ++d) {
    const double v = std::floor((x[d] - origin_[d]) / h_);
    c[d] = static_cast<int>(std::clamp(v, -1e9, 1e9));
  }
  return c;
}

bool SpatialGrid::covers_grid(const std::array<int, 3>& c, int r) const {
  for (int d = 0; d < 3; ++d)
    if (c[d] - r > 0 || c[d] + r < dims_[d] - 1) return false;
  return true;
}

double nn_cell_size(const Vec3& extent, std::size_t n) {
  // Mean NN distance of a Poisson cloud of intensity n/V is Gamma(4/3) (3V/(4 pi n))^{1/3}.
  const double floor_len = std::max(extent.norm() / 256.0, 1e-300);
  const double volume = extent.cwiseMax(Vec3::Constant(floor_len)).prod();
  const double expected = 0.5539960278 * std::cbrt(volume / static_cast<double>(std::max<std::size_t>(n, 1)));
  return std::max(expected, floor_len);
}

namespace {

inline double dist2(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x(), dy = a.y() - b.y(), dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

Vec3 bounding_extent(std::span<const Vec3> pts) {
  if (pts.empty()) return Vec3::Zero();
  Vec3 lo = pts[0], hi = pts[0];
  for (const Vec3& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return hi - lo;
}

// Chebyshev rings of radius r hold only points farther than r*h (up to round-off
// in the cell assignment, covered by the small safety factor).
constexpr double kRingSafety = 1.0 - 1e-9;

}  // namespace

std::vector<double> nearest_neighbor_distances(std::span<const Vec3> points) {
  const std::size_t n = points.size();
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  if (n < 2) return out;
  if (n < 64) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) best = std::min(best, dist2(points[i], points[j]));
      out[i] = std::sqrt(best);
    }
    return out;
  }
  const Vec3 ext = bounding_extent(points);
  const SpatialGrid grid(points, nn_cell_size(ext, n), 8 * n + 1024);
  const double hh = grid.cell_size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = grid.cell_of(points[i]);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0;; ++r) {
      grid.for_each_in_ring(c, r, [&](std::size_t j) {
        if (j != i) best = std::min(best, dist2(points[i], points[j]));
      });
      const double reach = r * hh * kRingSafety;
      if (best <= reach * reach || grid.covers_grid(c, r)) break;
    }
    out[i] = std::sqrt(best);
  }
  return out;
}

std::vector<std::vector<std::pair<double, std::size_t>>> k_nearest(std::span<const Vec3> points,
                                                                   std::span<const Vec3> queries,
                                                                   std::size_t k, bool exclude_self) {
  std::vector<std::vector<std::pair<double, std::size_t>>> out(queries.size());
  if (points.empty() || k == 0) return out;
  const std::size_t avail = points.size() - (exclude_self ? 1 : 0);
  k = std::min(k, avail);
  if (k == 0) return out;
  const Vec3 ext = bounding_extent(points);
  const double h = nn_cell_size(ext, points.size()) * std::cbrt(static_cast<double>(k));
  const SpatialGrid grid(points, h, 8 * points.size() + 1024);
  const double hh = grid.cell_size();
  using Item = std::pair<double, std::size_t>;  // (squared distance, index)
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::priority_queue<Item> heap;  // max-heap on (d2, index)
    const auto c = grid.cell_of(queries[q]);
    for (int r = 0;; ++r) {
      grid.for_each_in_ring(c, r, [&](std::size_t j) {
        if (exclude_self && j == q) return;
        const Item it{dist2(queries[q], points[j]), j};
        if (heap.size() < k) {
          heap.push(it);
        } else if (it < heap.top()) {
          heap.pop();
          heap.push(it);
        }
      });
      if (grid.covers_grid(c, r)) break;
      const double reach = r * hh * kRingSafety;
      if (heap.size() == k && heap.top().first <= reach * reach) break;
    }
    auto& res = out[q];
    res.resize(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
      res[i] = {std::sqrt(heap.top().first), heap.top().second};
      heap.pop();
    }
  }
  return out;
}

}  // namespace phlab
