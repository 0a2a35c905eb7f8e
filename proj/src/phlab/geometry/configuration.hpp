#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "phlab/geometry/density.hpp"
#include "phlab/geometry/types.hpp"

namespace phlab {

/// N particle centers together with eps = N^{-1/3} and the hole exponent alpha.
///
/// Immutable after construction. Nearest-neighbour distances are computed on
/// first use and cached; copies share the cache.
class ParticleConfiguration {
 public:
  ParticleConfiguration(std::vector<Vec3> centers, double alpha,
                        std::optional<std::uint64_t> seed = std::nullopt);

  std::size_t size() const { return centers_.size(); }
  double eps() const { return eps_; }
  double alpha() const { return alpha_; }
  const std::optional<std::uint64_t>& seed() const { return seed_; }
  const std::vector<Vec3>& centers() const { return centers_; }
  const Vec3& center(std::size_t i) const { return centers_[i]; }

  /// d_i = min_{j != i} |x_i - x_j|; +inf when N = 1.
  const std::vector<double>& nn_distances() const;

  /// Throws DomainError unless every center lies in the density's support box.
  void check_support(const DensityModel& density) const;

  /// Columnar text format: header comments followed by one "x y z" line per center.
  void save(const std::filesystem::path& path) const;
  static ParticleConfiguration load(const std::filesystem::path& path);

  static double eps_for(std::size_t n);

 private:
  struct NnCache {
    std::once_flag once;
    std::vector<double> d;
  };

  std::vector<Vec3> centers_;
  double eps_;
  double alpha_;
  std::optional<std::uint64_t> seed_;
  std::shared_ptr<NnCache> nn_;
};

/// N i.i.d. draws from `density`, using the stream derived from `seed`.
ParticleConfiguration sample_configuration(const DensityModel& density, std::size_t n,
                                           std::uint64_t seed, double alpha = 2.5);

/// Same as above, drawing from a caller-supplied stream.
ParticleConfiguration sample_configuration(const DensityModel& density, std::size_t n,
                                           RandomStream& rng, double alpha = 2.5);

}  // namespace phlab
