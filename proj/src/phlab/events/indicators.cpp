#include "phlab/events/indicators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "phlab/common/error.hpp"

namespace phlab {

bool indicator_A(const ParticleConfiguration& config, double L, double alpha_thresh) {
  if (!(L > 0.0)) throw DomainError("indicator_A: L must be > 0");
  if (config.size() < 2) return true;
  const double threshold = 2.0 * L * std::pow(config.eps(), alpha_thresh);
  const auto& d = config.nn_distances();
  return *std::min_element(d.begin(), d.end()) >= threshold;
}

double smeared_cube_side(double eps, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("smeared density: lambda must lie in (0, 1)");
  return std::pow(eps, 1.0 - lambda);
}

namespace {

inline bool in_window(double v, double a, double s) { return v >= a && v - a < s; }

struct YZ {
  double y, z;
};

// Max number of points in a square [b, b+s) x [c, c+s) with b, c taken from
// the point coordinates, or `floor` if no square beats it.
std::size_t max_square(std::vector<YZ>& pts, double s, std::size_t floor, std::vector<double>& zs) {
  const std::size_t m = pts.size();
  std::sort(pts.begin(), pts.end(), [](const YZ& a, const YZ& b) { return a.y < b.y; });
  std::size_t best = floor;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0 && pts[i].y == pts[i - 1].y) continue;
    if (m - i <= best) break;
    hi = std::max(hi, i);
    while (hi < m && in_window(pts[hi].y, pts[i].y, s)) ++hi;
    if (hi - i <= best) continue;
    zs.clear();
    for (std::size_t j = i; j < hi; ++j) zs.push_back(pts[j].z);
    std::sort(zs.begin(), zs.end());
    std::size_t top = 0;
    for (std::size_t a = 0; a < zs.size(); ++a) {
      if (a > 0 && zs[a] == zs[a - 1]) continue;
      while (top < zs.size() && in_window(zs[top], zs[a], s)) ++top;
      best = std::max(best, top - a);
    }
  }
  return best;
}

}  // namespace

std::size_t max_cube_multiplicity(std::span<const Vec3> points, double side) {
  if (!(side > 0.0) || !std::isfinite(side)) throw DomainError("max_cube_multiplicity: side must be > 0");
  const std::size_t n = points.size();
  if (n <= 1) return n;

  // Bucket grid with cells slightly larger than side/k. A window [a, a+s)
  // starting in cell i then ends strictly inside cell i+k with a margin far
  // above round-off, so every candidate set lies in a block of (k+1)^3 cells
  // whose lower corner is the cell of (min x, min y, min z).
  Vec3 lo = points[0], hi = points[0];
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 ext = hi - lo;
  const std::size_t cell_cap = 8 * n + 4096;
  int k = 4;
  double h = 0.0;
  std::array<int, 3> dims{};
  for (;; --k) {
    h = side / k * (1.0 + 1e-9);
    double total = 1.0;
    for (int d = 0; d < 3; ++d) total *= std::floor(ext[d] / h) + 1.0;
    if (total <= static_cast<double>(cell_cap) || k == 1) {
      for (int d = 0; d < 3; ++d) dims[d] = static_cast<int>(std::floor(ext[d] / h)) + 1;
      if (total <= static_cast<double>(cell_cap)) break;
      // Even cells of size ~side are too many: the cloud is very sparse, so
      // fall back to cells of ~side but cap by widening them.
      const double grow = std::cbrt(total / static_cast<double>(cell_cap)) * 1.001;
      h *= grow;
      for (int d = 0; d < 3; ++d) dims[d] = static_cast<int>(std::floor(ext[d] / h)) + 1;
      break;
    }
  }
  // Window length in cells: cells needed to cover [a, a+s) starting anywhere in a cell.
  const int span = static_cast<int>(std::ceil(side / h - 1e-12)) + 1;

  const int nx = dims[0], ny = dims[1], nz = dims[2];
  auto lin = [&](int x, int y, int z) {
    return static_cast<std::size_t>(x) + static_cast<std::size_t>(nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * z);
  };
  const std::size_t ncells = static_cast<std::size_t>(nx) * ny * nz;
  std::vector<std::array<int, 3>> cell_of(n);
  std::vector<std::size_t> start(ncells + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < 3; ++d)
      cell_of[i][d] = std::clamp(static_cast<int>(std::floor((points[i][d] - lo[d]) / h)), 0, dims[d] - 1);
    ++start[lin(cell_of[i][0], cell_of[i][1], cell_of[i][2]) + 1];
  }
  // 3D prefix sums of the cell counts, (nx+1)(ny+1)(nz+1) entries.
  const std::size_t px = nx + 1, py = ny + 1;
  std::vector<int> pre(px * py * (nz + 1), 0);
  auto P = [&](int x, int y, int z) -> int& { return pre[x + px * (y + py * static_cast<std::size_t>(z))]; };
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x)
        P(x + 1, y + 1, z + 1) = static_cast<int>(start[lin(x, y, z) + 1]) + P(x, y + 1, z + 1) + P(x + 1, y, z + 1) +
                                 P(x + 1, y + 1, z) - P(x, y, z + 1) - P(x, y + 1, z) - P(x + 1, y, z) + P(x, y, z);
  for (std::size_t c = 0; c < ncells; ++c) start[c + 1] += start[c];
  std::vector<std::size_t> order(n);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) order[fill[lin(cell_of[i][0], cell_of[i][1], cell_of[i][2])]++] = i;
  }

  struct Block {
    int count, x, y, z;
  };
  std::vector<Block> blocks;
  int max_count = 0;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        const int x1 = std::min(x + span, nx), y1 = std::min(y + span, ny), z1 = std::min(z + span, nz);
        const int c = P(x1, y1, z1) - P(x, y1, z1) - P(x1, y, z1) - P(x1, y1, z) + P(x, y, z1) + P(x, y1, z) +
                      P(x1, y, z) - P(x, y, z);
        if (c >= 2) {
          blocks.push_back({c, x, y, z});
          max_count = std::max(max_count, c);
        }
      }
  // Counting sort by decreasing block count; ties keep scan order.
  {
    std::vector<std::size_t> offset(max_count + 2, 0);
    for (const Block& b : blocks) ++offset[max_count - b.count + 1];
    for (int c = 0; c <= max_count; ++c) offset[c + 1] += offset[c];
    std::vector<Block> sorted(blocks.size());
    for (const Block& b : blocks) sorted[offset[max_count - b.count]++] = b;
    blocks.swap(sorted);
  }

  std::size_t best = 1;
  std::vector<std::size_t> members, anchors;
  std::vector<YZ> cand;
  std::vector<double> zs;
  for (const Block& b : blocks) {
    if (static_cast<std::size_t>(b.count) <= best) break;
    members.clear();
    anchors.clear();
    const int x1 = std::min(b.x + span, nx), y1 = std::min(b.y + span, ny), z1 = std::min(b.z + span, nz);
    for (int z = b.z; z < z1; ++z)
      for (int y = b.y; y < y1; ++y)
        for (int x = b.x; x < x1; ++x) {
          const std::size_t c = lin(x, y, z);
          for (std::size_t q = start[c]; q < start[c + 1]; ++q) {
            members.push_back(order[q]);
            if (x == b.x) anchors.push_back(order[q]);
          }
        }
    for (std::size_t a : anchors) {
      const Vec3& p = points[a];
      cand.clear();
      for (std::size_t j : members)
        if (in_window(points[j].x(), p.x(), side)) cand.push_back({points[j].y(), points[j].z()});
      if (cand.size() <= best) continue;
      best = max_square(cand, side, best, zs);
    }
  }
  return best;
}

double smeared_density_sup(const ParticleConfiguration& config, double lambda) {
  const double s = smeared_cube_side(config.eps(), lambda);
  const std::size_t mult = max_cube_multiplicity(config.centers(), s);
  return static_cast<double>(mult) / (static_cast<double>(config.size()) * s * s * s);
}

bool indicator_B(const ParticleConfiguration& config, double lambda, double rho_sup) {
  return smeared_density_sup(config, lambda) <= 16.0 * rho_sup;
}

}  // namespace phlab
