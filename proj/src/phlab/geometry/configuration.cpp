#include "phlab/geometry/configuration.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "phlab/common/error.hpp"
#include "phlab/geometry/neighbors.hpp"

namespace phlab {

double ParticleConfiguration::eps_for(std::size_t n) {
  if (n == 0) throw InvalidArgument("configuration: N must be >= 1");
  return 1.0 / std::cbrt(static_cast<double>(n));
}

ParticleConfiguration::ParticleConfiguration(std::vector<Vec3> centers, double alpha,
                                             std::optional<std::uint64_t> seed)
    : centers_(std::move(centers)), eps_(0.0), alpha_(alpha), seed_(seed), nn_(std::make_shared<NnCache>()) {
  if (centers_.empty()) throw InvalidArgument("configuration: N must be >= 1");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("configuration: alpha must be > 1");
  for (const Vec3& c : centers_)
    if (!c.allFinite()) throw InvalidArgument("configuration: non-finite center");
  eps_ = eps_for(centers_.size());
}

const std::vector<double>& ParticleConfiguration::nn_distances() const {
  std::call_once(nn_->once, [this] { nn_->d = nearest_neighbor_distances(centers_); });
  return nn_->d;
}

void ParticleConfiguration::check_support(const DensityModel& density) const {
  const Box& b = density.support_box();
  for (std::size_t i = 0; i < centers_.size(); ++i)
    if (!b.contains(centers_[i]))
      throw DomainError("configuration: center " + std::to_string(i) + " outside the density support box");
}

void ParticleConfiguration::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  out << "# phlab configuration\n";
  out << "# N=" << centers_.size() << " eps=" << eps_ << " alpha=" << alpha_ << " seed=";
  if (seed_) out << *seed_;
  else out << "none";
  out << "\n";
  for (const Vec3& c : centers_) out << c.x() << ' ' << c.y() << ' ' << c.z() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

ParticleConfiguration ParticleConfiguration::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Vec3> centers;
  double alpha = 2.5;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> declared_n;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
          if (key == "N") declared_n = std::stoull(val);
          else if (key == "alpha") alpha = std::stod(val);
          else if (key == "seed" && val != "none") seed = std::stoull(val);
        } catch (const std::exception&) {
          throw IoError(path.string() + ": bad header field " + tok);
        }
      }
      continue;
    }
    std::istringstream ls(line);
    Vec3 c;
    if (!(ls >> c.x() >> c.y() >> c.z())) throw IoError(path.string() + ": malformed line: " + line);
    centers.push_back(c);
  }
  if (declared_n && *declared_n != centers.size())
    throw IoError(path.string() + ": header N does not match number of centers");
  return ParticleConfiguration(std::move(centers), alpha, seed);
}

ParticleConfiguration sample_configuration(const DensityModel& density, std::size_t n,
                                           RandomStream& rng, double alpha) {
  if (n == 0) throw InvalidArgument("sample_configuration: N must be >= 1");
  std::vector<Vec3> centers(n);
  for (auto& c : centers) c = density.sample(rng);
  return ParticleConfiguration(std::move(centers), alpha, rng.seed());
}

ParticleConfiguration sample_configuration(const DensityModel& density, std::size_t n,
                                           std::uint64_t seed, double alpha) {
  RandomStream rng = RandomStream::derive(seed, {0});
  return sample_configuration(density, n, rng, alpha);
}

}  // namespace phlab
