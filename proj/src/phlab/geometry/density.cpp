#include "phlab/geometry/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phlab/common/error.hpp"
#include "phlab/common/quadrature.hpp"

namespace phlab {

namespace {

// Area of {y^2 + z^2 <= rho^2, y <= Y, z <= Z}.
double disk_quadrant_area(double rho, double Y, double Z) {
  if (Z <= -rho || Y <= -rho) return 0.0;
  Y = std::min(Y, rho);
  auto S = [rho](double y) {  // antiderivative of sqrt(rho^2 - y^2)
    y = std::clamp(y, -rho, rho);
    return 0.5 * (y * std::sqrt(std::max(rho * rho - y * y, 0.0)) + rho * rho * std::asin(y / rho));
  };
  auto Is = [&](double a, double b) { return b > a ? S(b) - S(a) : 0.0; };
  if (Z >= rho) return 2.0 * Is(-rho, Y);
  const double c = std::sqrt(rho * rho - Z * Z);
  if (Z >= 0.0) {
    // lower half-chord s plus min(s, Z)
    return Is(-rho, Y) + Is(-rho, std::min(Y, -c)) + Z * std::max(0.0, std::min(Y, c) + c) + Is(c, std::max(Y, c));
  }
  if (Y <= -c) return 0.0;
  return Z * (std::min(Y, c) + c) + Is(-c, std::min(Y, c));
}

double disk_rectangle_area(double rho, double y0, double y1, double z0, double z1) {
  return disk_quadrant_area(rho, y1, z1) - disk_quadrant_area(rho, y0, z1) - disk_quadrant_area(rho, y1, z0) +
         disk_quadrant_area(rho, y0, z0);
}

double overlap_1d(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

double overlap_volume(const Box& a, const Box& b) {
  double v = 1.0;
  for (int d = 0; d < 3; ++d) v *= overlap_1d(a.lo[d], a.hi[d], b.lo[d], b.hi[d]);
  return v;
}

void check_box(const Vec3& lo, const Vec3& hi) {
  if (!lo.allFinite() || !hi.allFinite() || !((hi - lo).array() > 0.0).all())
    throw InvalidArgument("density: support box must have positive finite extent");
}

}  // namespace

DensityModel DensityModel::uniform_box(const Vec3& lo, const Vec3& hi) {
  check_box(lo, hi);
  DensityModel d;
  d.kind_ = Kind::kUniformBox;
  d.support_ = {lo, hi};
  d.sup_norm_ = 1.0 / d.support_.volume();
  return d;
}

DensityModel DensityModel::uniform_ball(const Vec3& center, double radius) {
  if (!center.allFinite() || !(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("density: ball radius must be positive and finite");
  DensityModel d;
  d.kind_ = Kind::kUniformBall;
  d.ball_center_ = center;
  d.ball_radius_ = radius;
  d.support_ = {(center.array() - radius).matrix(), (center.array() + radius).matrix()};
  d.sup_norm_ = 3.0 / (4.0 * std::numbers::pi * radius * radius * radius);
  return d;
}

DensityModel DensityModel::piecewise_grid(const Box& box, std::array<int, 3> dims,
                                          std::vector<double> weights) {
  check_box(box.lo, box.hi);
  for (int n : dims)
    if (n < 1) throw InvalidArgument("density: grid dimensions must be >= 1");
  const std::size_t cells = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  if (weights.size() != cells) throw InvalidArgument("density: weight count does not match grid");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("density: cell weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("density: cell weights sum to zero");

  DensityModel d;
  d.kind_ = Kind::kPiecewiseGrid;
  d.support_ = box;
  d.dims_ = dims;
  d.masses_ = std::move(weights);
  for (double& m : d.masses_) m /= total;
  d.cumulative_.resize(cells);
  double acc = 0.0;
  double max_mass = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    acc += d.masses_[i];
    d.cumulative_[i] = acc;
    max_mass = std::max(max_mass, d.masses_[i]);
  }
  d.cumulative_.back() = 1.0;  // guard against round-off in the inversion
  const Vec3 h = d.cell_size();
  d.sup_norm_ = max_mass / h.prod();
  return d;
}

Vec3 DensityModel::cell_size() const {
  return support_.extent().cwiseQuotient(Vec3(dims_[0], dims_[1], dims_[2]));
}

Box DensityModel::cell_box(int ix, int iy, int iz) const {
  const Vec3 h = cell_size();
  Box b;
  b.lo = support_.lo + Vec3(ix * h.x(), iy * h.y(), iz * h.z());
  b.hi = support_.lo + Vec3((ix + 1) * h.x(), (iy + 1) * h.y(), (iz + 1) * h.z());
  return b;
}

double DensityModel::operator()(const Vec3& x) const {
  switch (kind_) {
    case Kind::kUniformBox:
      return support_.contains(x) ? sup_norm_ : 0.0;
    case Kind::kUniformBall:
      return (x - ball_center_).squaredNorm() <= ball_radius_ * ball_radius_ ? sup_norm_ : 0.0;
    case Kind::kPiecewiseGrid: {
      if (!support_.contains(x)) return 0.0;
      const Vec3 h = cell_size();
      std::array<int, 3> c{};
      for (int d = 0; d < 3; ++d)
        c[d] = std::clamp(static_cast<int>((x[d] - support_.lo[d]) / h[d]), 0, dims_[d] - 1);
      const std::size_t idx = c[0] + static_cast<std::size_t>(dims_[0]) * (c[1] + static_cast<std::size_t>(dims_[1]) * c[2]);
      return masses_[idx] / h.prod();
    }
  }
  return 0.0;
}

double DensityModel::mass_in_box(const Box& b) const {
  switch (kind_) {
    case Kind::kUniformBox:
      return overlap_volume(b, support_) * sup_norm_;
    case Kind::kPiecewiseGrid: {
      const Vec3 h = cell_size();
      std::array<int, 3> lo{}, hi{};
      for (int d = 0; d < 3; ++d) {
        lo[d] = std::clamp(static_cast<int>(std::floor((b.lo[d] - support_.lo[d]) / h[d])), 0, dims_[d] - 1);
        hi[d] = std::clamp(static_cast<int>(std::floor((b.hi[d] - support_.lo[d]) / h[d])), 0, dims_[d] - 1);
      }
      double m = 0.0;
      for (int iz = lo[2]; iz <= hi[2]; ++iz)
        for (int iy = lo[1]; iy <= hi[1]; ++iy)
          for (int ix = lo[0]; ix <= hi[0]; ++ix) {
            const std::size_t idx = ix + static_cast<std::size_t>(dims_[0]) * (iy + static_cast<std::size_t>(dims_[1]) * iz);
            if (masses_[idx] == 0.0) continue;
            const Box cb = cell_box(ix, iy, iz);
            m += masses_[idx] * overlap_volume(b, cb) / cb.volume();
          }
      return m;
    }
    case Kind::kUniformBall: {
      Box clip{b.lo.cwiseMax(support_.lo), b.hi.cwiseMin(support_.hi)};
      if (!((clip.hi - clip.lo).array() > 0.0).all()) return 0.0;
      const double r2 = ball_radius_ * ball_radius_;
      // Fully inside: all corners in the ball.
      bool inside = true;
      for (int c = 0; c < 8 && inside; ++c) {
        const Vec3 p((c & 1) ? clip.hi.x() : clip.lo.x(), (c & 2) ? clip.hi.y() : clip.lo.y(),
                     (c & 4) ? clip.hi.z() : clip.lo.z());
        inside = (p - ball_center_).squaredNorm() <= r2;
      }
      if (inside) return clip.volume() * sup_norm_;
      // Exact disk-rectangle area per x slice, adaptive Gauss-Kronrod in x
      // (the slice area has kinks where the circle crosses the box edges).
      const double ylo = clip.lo.y() - ball_center_.y(), yhi = clip.hi.y() - ball_center_.y();
      const double zlo = clip.lo.z() - ball_center_.z(), zhi = clip.hi.z() - ball_center_.z();
      auto slice = [&](double x) {
        const double dx = x - ball_center_.x();
        const double rho2 = r2 - dx * dx;
        return rho2 > 0.0 ? disk_rectangle_area(std::sqrt(rho2), ylo, yhi, zlo, zhi) : 0.0;
      };
      // split at the slices where the circle passes an edge or a corner
      std::vector<double> cuts{clip.lo.x(), clip.hi.x()};
      for (double e2 : {ylo * ylo, yhi * yhi, zlo * zlo, zhi * zhi, ylo * ylo + zlo * zlo, ylo * ylo + zhi * zhi,
                        yhi * yhi + zlo * zlo, yhi * yhi + zhi * zhi, 0.0}) {
        if (e2 >= r2) continue;
        const double dx = std::sqrt(r2 - e2);
        for (double x : {ball_center_.x() - dx, ball_center_.x() + dx})
          if (x > clip.lo.x() && x < clip.hi.x()) cuts.push_back(x);
      }
      std::sort(cuts.begin(), cuts.end());
      // Gauss-Legendre after x = a + (b - a)(3t^2 - 2t^3), which flattens the
      // half-integer power behaviour at the cuts
      static const QuadratureRule gl = gauss_legendre(24, 0.0, 1.0);
      double vol = 0.0;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], w = cuts[k + 1] - cuts[k];
        if (!(w > 0.0)) continue;
        for (std::size_t q = 0; q < gl.size(); ++q) {
          const double t = gl.nodes[q];
          vol += gl.weights[q] * 6.0 * t * (1.0 - t) * w * slice(a + w * t * t * (3.0 - 2.0 * t));
        }
      }
      return vol * sup_norm_;
    }
  }
  return 0.0;
}

Vec3 DensityModel::sample(RandomStream& rng) const {
  switch (kind_) {
    case Kind::kUniformBox: {
      const Vec3 e = support_.extent();
      const double u0 = rng.uniform(), u1 = rng.uniform(), u2 = rng.uniform();
      // clamp guards against lo + e rounding past hi
      return (support_.lo + Vec3(u0 * e.x(), u1 * e.y(), u2 * e.z())).cwiseMin(support_.hi);
    }
    case Kind::kUniformBall: {
      const double r2 = ball_radius_ * ball_radius_;
      for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        const double u0 = rng.uniform(-1.0, 1.0), u1 = rng.uniform(-1.0, 1.0), u2 = rng.uniform(-1.0, 1.0);
        const Vec3 d = ball_radius_ * Vec3(u0, u1, u2);
        if (d.squaredNorm() <= r2) return ball_center_ + d;
      }
      throw SamplingError("density: ball rejection sampler exceeded 100 attempts");
    }
    case Kind::kPiecewiseGrid: {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
      if (idx >= cumulative_.size()) idx = cumulative_.size() - 1;
      const int ix = static_cast<int>(idx % dims_[0]);
      const int iy = static_cast<int>((idx / dims_[0]) % dims_[1]);
      const int iz = static_cast<int>(idx / (static_cast<std::size_t>(dims_[0]) * dims_[1]));
      const Box cb = cell_box(ix, iy, iz);
      const Vec3 e = cb.extent();
      const double u0 = rng.uniform(), u1 = rng.uniform(), u2 = rng.uniform();
      return (cb.lo + Vec3(u0 * e.x(), u1 * e.y(), u2 * e.z())).cwiseMin(support_.hi);
    }
  }
  throw SamplingError("density: unknown kind");
}

}  // namespace phlab
