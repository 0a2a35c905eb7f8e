#include "phlab/oracles/brute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "phlab/stokes/sphere_solution.hpp"

namespace phlab::oracle {

double w2_squared_permutations(std::span<const Vec3> x, std::span<const Vec3> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n == 0 || n > 8) throw std::invalid_argument("permutation oracle: need 1 <= n = m <= 8");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] - y[perm[i]]).squaredNorm();
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

double hungarian(const std::vector<double>& cost, std::size_t n, std::vector<std::size_t>* match) {
  if (cost.size() != n * n) throw std::invalid_argument("hungarian: cost must be n x n");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays, column 0 is a sentinel.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  if (match) match->assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    total += cost[(p[j] - 1) * n + (j - 1)];
    if (match) (*match)[p[j] - 1] = j - 1;
  }
  return total;
}

double w2_squared_hungarian(std::span<const Vec3> x, std::span<const Vec3> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n == 0) throw std::invalid_argument("hungarian oracle: sizes must match");
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = (x[i] - y[j]).squaredNorm();
  return hungarian(c, n) / static_cast<double>(n);
}

double w2_squared_replicated(std::span<const Vec3> x, std::span<const Vec3> y) {
  if (x.empty() || y.size() % x.size() != 0) throw std::invalid_argument("replicated oracle: |y| must be k |x|");
  const std::size_t k = y.size() / x.size();
  std::vector<Vec3> xr;
  xr.reserve(y.size());
  for (const Vec3& p : x)
    for (std::size_t r = 0; r < k; ++r) xr.push_back(p);
  return w2_squared_hungarian(xr, y);
}

std::vector<double> nn_distances(std::span<const Vec3> points) {
  const std::size_t n = points.size();
  std::vector<double> d(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) d[i] = std::min(d[i], (points[i] - points[j]).squaredNorm());
  for (double& v : d) v = std::sqrt(v);
  return d;
}

std::size_t cube_multiplicity(std::span<const Vec3> points, double side) {
  std::size_t best = points.empty() ? 0 : 1;
  for (const Vec3& px : points)
    for (const Vec3& py : points)
      for (const Vec3& pz : points) {
        const Vec3 a(px.x(), py.y(), pz.z());
        std::size_t count = 0;
        for (const Vec3& q : points) {
          bool in = true;
          for (int d = 0; d < 3 && in; ++d) in = q[d] >= a[d] && q[d] - a[d] < side;
          count += in ? 1 : 0;
        }
        best = std::max(best, count);
      }
  return best;
}

double single_mode_hneg1(double amplitude, const Vec3& k, double side) {
  const double w2 = (2.0 * std::numbers::pi / side) * (2.0 * std::numbers::pi / side) * k.squaredNorm();
  return std::abs(amplitude) * std::sqrt(side * side * side / 2.0 / (1.0 + w2));
}

Vec3 sphere_traction(double a, int k, double R, int m) {
  Vec3 total = Vec3::Zero();
  const double du = 2.0 / m, dphi = std::numbers::pi / m;
  for (int i = 0; i < m; ++i) {
    const double u = -1.0 + (i + 0.5) * du;
    const double s = std::sqrt(1.0 - u * u);
    for (int j = 0; j < 2 * m; ++j) {
      const double phi = (j + 0.5) * dphi;
      const Vec3 n(s * std::cos(phi), s * std::sin(phi), u);
      const SphereStokesValue v = sphere_stokes_eval(a, k, R * n);
      total += v.stress * n;
    }
  }
  return total * (R * R * du * dphi);
}

}  // namespace phlab::oracle
