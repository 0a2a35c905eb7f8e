#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <vector>

#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/density.hpp"
#include "phlab/geometry/types.hpp"
#include "phlab/transport/transport.hpp"

namespace phlab {

/// Periodic cube [center - L/2, center + L/2)^3 with n cells per axis.
struct BoxSpec {
  Vec3 center = Vec3::Zero();
  double side = 1.0;
  int n = 64;

  /// Throws InvalidArgument unless n is a power of two >= 32 and L > 0.
  void validate() const;
  double h() const { return side / n; }
  Vec3 lo() const { return (center.array() - side / 2.0).matrix(); }
  Vec3 cell_center(int ix, int iy, int iz) const;
  /// Throws DomainError unless `support` keeps a margin of L/4 to every face.
  void check_support(const Box& support) const;

  /// Box centred on `support` with L = 2 * diameter(support).
  static BoxSpec enclosing(const Box& support, int n);

  bool operator==(const BoxSpec&) const = default;
};

/// Cell-centred samples in row-major order (x slowest, z fastest).
class GridField {
 public:
  explicit GridField(const BoxSpec& box);
  GridField(const BoxSpec& box, std::vector<double> values);

  const BoxSpec& box() const { return box_; }
  int n() const { return box_.n; }
  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * box_.n + iy) * box_.n + iz;
  }
  double& at(int ix, int iy, int iz) { return values_[index(ix, iy, iz)]; }
  double at(int ix, int iy, int iz) const { return values_[index(ix, iy, iz)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// sum(values) * h^3.
  double integral() const;
  /// sum f(cell centre) * value * h^3.
  double pair(const std::function<double(const Vec3&)>& f) const;

  GridField& operator-=(const GridField& other);
  GridField& operator*=(double c);

 private:
  BoxSpec box_;
  std::vector<double> values_;
};

GridField operator-(GridField a, const GridField& b);

/// Uniform measure on the cubes of side s centred at the particle centres.
struct SmearedDensity {
  std::vector<Vec3> centers;
  double side;
  static SmearedDensity from(const ParticleConfiguration& config, double lambda);
};

/// Normalized surface measure of a sphere.
struct SphereSurfaceMeasure {
  Vec3 center;
  double radius;
};

/// Mass-conservative deposition onto cell averages: trilinear (cloud in
/// cell) for atoms, exact overlap fractions for cubes, a product sphere rule
/// deposited by cloud in cell for shells, and exact or quadrature cell masses
/// for densities. Throws DomainError if the support escapes the inner half
/// of the box.
GridField rasterize(const DiscreteMeasure& mu, const BoxSpec& box);
GridField rasterize(const SmearedDensity& rho, const BoxSpec& box);
GridField rasterize(const SphereSurfaceMeasure& shell, const BoxSpec& box);
GridField rasterize(const DensityModel& density, const BoxSpec& box);

/// Tolerance on |integral f| for h_neg1_norm.
inline constexpr double kZeroModeTol = 1e-8;

/// (sum_{k != 0} |f^(k)|^2 / (1 + |2 pi k / L|^2))^{1/2}, with f^ the
/// continuum-normalized Fourier coefficients (Parseval:
/// integral |f|^2 = L^{-3} sum |f^(k)|^2). Throws DomainError when
/// |integral f| > 1e-8 unless `drop_zero_mode` is set.
double h_neg1_norm(const GridField& f, bool drop_zero_mode = false);

/// Flat binary layout: "PHLABGRD", uint32 version (1), uint32 n, double L,
/// double center[3], then n^3 doubles in row-major order; little endian.
void export_grid(const GridField& f, const std::filesystem::path& path);
GridField import_grid(const std::filesystem::path& path);

}  // namespace phlab
