#pragma once

#include <array>
#include <vector>

#include "phlab/common/rng.hpp"
#include "phlab/geometry/types.hpp"

namespace phlab {

/// Bounded, compactly supported probability density on R^3.
///
/// Three families are supported: uniform on a box, uniform on a ball, and
/// piecewise constant on a regular grid of cells. The object is immutable and
/// can be shared across threads.
class DensityModel {
 public:
  enum class Kind { kUniformBox, kUniformBall, kPiecewiseGrid };

  /// Attempts per point before the ball rejection sampler gives up.
  static constexpr int kRejectionCap = 100;

  static DensityModel uniform_box(const Vec3& lo, const Vec3& hi);
  static DensityModel uniform_ball(const Vec3& center, double radius);
  /// `weights` are nonnegative cell weights in x-fastest order; they are
  /// normalized so that the cell masses sum to one.
  static DensityModel piecewise_grid(const Box& box, std::array<int, 3> dims,
                                     std::vector<double> weights);

  Kind kind() const { return kind_; }
  const Box& support_box() const { return support_; }
  double sup_norm() const { return sup_norm_; }

  /// Density value; zero outside the support.
  double operator()(const Vec3& x) const;

  /// Mass of the axis-aligned box `b`. Exact for box and grid densities; for
  /// the ball it is computed by tensor quadrature of the indicator.
  double mass_in_box(const Box& b) const;

  Vec3 sample(RandomStream& rng) const;

  // Ball parameters.
  const Vec3& ball_center() const { return ball_center_; }
  double ball_radius() const { return ball_radius_; }

  // Grid parameters.
  const std::array<int, 3>& grid_dims() const { return dims_; }
  const std::vector<double>& cell_masses() const { return masses_; }
  Box cell_box(int ix, int iy, int iz) const;
  Vec3 cell_size() const;

 private:
  DensityModel() = default;

  Kind kind_ = Kind::kUniformBox;
  Box support_;
  double sup_norm_ = 0.0;
  Vec3 ball_center_ = Vec3::Zero();
  double ball_radius_ = 0.0;
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

}  // namespace phlab
