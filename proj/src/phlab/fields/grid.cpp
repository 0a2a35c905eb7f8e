#include "phlab/fields/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "phlab/common/error.hpp"
#include "phlab/common/quadrature.hpp"

namespace phlab {

namespace {

constexpr char kMagic[8] = {'P', 'H', 'L', 'A', 'B', 'G', 'R', 'D'};

// The FFTW planner is not thread safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Cloud-in-cell deposition of mass m at x; the caller has checked the margin.
void deposit_cic(GridField& f, const Vec3& x, double m) {
  const BoxSpec& b = f.box();
  const double h = b.h();
  const Vec3 lo = b.lo();
  int i0[3];
  double t[3];
  for (int d = 0; d < 3; ++d) {
    const double u = (x[d] - lo[d]) / h - 0.5;
    const double fl = std::floor(u);
    i0[d] = static_cast<int>(fl);
    t[d] = u - fl;
  }
  const double density = m / (h * h * h);
  for (int c = 0; c < 8; ++c) {
    const int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
    const double w = (dx ? t[0] : 1.0 - t[0]) * (dy ? t[1] : 1.0 - t[1]) * (dz ? t[2] : 1.0 - t[2]);
    f.at(i0[0] + dx, i0[1] + dy, i0[2] + dz) += w * density;
  }
}

Box point_box(const std::vector<Vec3>& pts, double pad) {
  Vec3 lo = pts.front(), hi = pts.front();
  for (const Vec3& p : pts) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  return {(lo.array() - pad).matrix(), (hi.array() + pad).matrix()};
}

}  // namespace

void BoxSpec::validate() const {
  if (n < 32 || !std::has_single_bit(static_cast<unsigned>(n)))
    throw InvalidArgument("box: resolution must be a power of two >= 32");
  if (!(side > 0.0) || !std::isfinite(side)) throw InvalidArgument("box: side must be positive");
  if (!center.allFinite()) throw InvalidArgument("box: non-finite center");
}

Vec3 BoxSpec::cell_center(int ix, int iy, int iz) const {
  const double hh = h();
  return lo() + Vec3((ix + 0.5) * hh, (iy + 0.5) * hh, (iz + 0.5) * hh);
}

void BoxSpec::check_support(const Box& support) const {
  const Vec3 l = lo();
  const double margin = side / 4.0;
  for (int d = 0; d < 3; ++d)
    if (support.lo[d] < l[d] + margin || support.hi[d] > l[d] + side - margin)
      throw DomainError("rasterize: support escapes the box (margin L/4 required)");
}

BoxSpec BoxSpec::enclosing(const Box& support, int n) {
  BoxSpec b;
  b.center = support.center();
  b.side = 2.0 * support.diameter();
  if (!(b.side > 0.0)) b.side = 1.0;
  b.n = n;
  b.validate();
  return b;
}

GridField::GridField(const BoxSpec& box) : box_(box) {
  box_.validate();
  values_.assign(static_cast<std::size_t>(box_.n) * box_.n * box_.n, 0.0);
}

GridField::GridField(const BoxSpec& box, std::vector<double> values) : box_(box), values_(std::move(values)) {
  box_.validate();
  if (values_.size() != static_cast<std::size_t>(box_.n) * box_.n * box_.n)
    throw InvalidArgument("grid: value count does not match n^3");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("grid: non-finite value");
}

double GridField::integral() const {
  const double h = box_.h();
  double s = 0.0;
  for (double v : values_) s += v;
  return s * h * h * h;
}

double GridField::pair(const std::function<double(const Vec3&)>& f) const {
  const double h = box_.h();
  double s = 0.0;
  for (int ix = 0; ix < box_.n; ++ix)
    for (int iy = 0; iy < box_.n; ++iy)
      for (int iz = 0; iz < box_.n; ++iz) {
        const double v = at(ix, iy, iz);
        if (v != 0.0) s += v * f(box_.cell_center(ix, iy, iz));
      }
  return s * h * h * h;
}

GridField& GridField::operator-=(const GridField& other) {
  if (other.box_.n != box_.n || other.box_.side != box_.side || other.box_.center != box_.center)
    throw InvalidArgument("grid: fields live on different boxes");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridField& GridField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

GridField operator-(GridField a, const GridField& b) {
  a -= b;
  return a;
}

SmearedDensity SmearedDensity::from(const ParticleConfiguration& config, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("smeared density: lambda must lie in (0, 1)");
  return {config.centers(), std::pow(config.eps(), 1.0 - lambda)};
}

GridField rasterize(const DiscreteMeasure& mu, const BoxSpec& box) {
  GridField f(box);
  box.check_support(point_box(mu.points(), 0.0));
  for (std::size_t i = 0; i < mu.size(); ++i) deposit_cic(f, mu.points()[i], mu.weights()[i]);
  return f;
}

GridField rasterize(const SmearedDensity& rho, const BoxSpec& box) {
  if (rho.centers.empty() || !(rho.side > 0.0)) throw InvalidArgument("rasterize: empty smeared density");
  GridField f(box);
  box.check_support(point_box(rho.centers, rho.side / 2.0));
  const double h = box.h();
  const Vec3 lo = box.lo();
  const double s = rho.side;
  const double mass = 1.0 / static_cast<double>(rho.centers.size());
  const double density = mass / (s * s * s) / (h * h * h);
  std::vector<std::pair<int, double>> ov[3];
  for (const Vec3& c : rho.centers) {
    for (int d = 0; d < 3; ++d) {
      ov[d].clear();
      const double a = c[d] - s / 2.0, b = c[d] + s / 2.0;
      const int i0 = static_cast<int>(std::floor((a - lo[d]) / h));
      const int i1 = static_cast<int>(std::floor((b - lo[d]) / h));
      for (int i = i0; i <= i1; ++i) {
        const double cl = lo[d] + i * h;
        const double len = std::min(b, cl + h) - std::max(a, cl);
        if (len > 0.0) ov[d].emplace_back(i, len);
      }
    }
    for (const auto& [ix, lx] : ov[0])
      for (const auto& [iy, ly] : ov[1])
        for (const auto& [iz, lz] : ov[2]) f.at(ix, iy, iz) += density * lx * ly * lz;
  }
  return f;
}

GridField rasterize(const SphereSurfaceMeasure& shell, const BoxSpec& box) {
  if (!(shell.radius > 0.0)) throw InvalidArgument("rasterize: shell radius must be positive");
  GridField f(box);
  const double pad = shell.radius;
  box.check_support({(shell.center.array() - pad).matrix(), (shell.center.array() + pad).matrix()});
  // Node spacing about h/2 along great circles.
  const int nt = std::clamp(static_cast<int>(std::ceil(2.0 * std::numbers::pi * shell.radius / box.h())), 8, 256);
  for (const SphereNode& node : sphere_rule(nt, 2 * nt))
    deposit_cic(f, shell.center + shell.radius * node.direction, node.weight);
  return f;
}

GridField rasterize(const DensityModel& density, const BoxSpec& box) {
  GridField f(box);
  const Box& sup = density.support_box();
  box.check_support(sup);
  const double h = box.h();
  const Vec3 lo = box.lo();
  int i0[3], i1[3];
  for (int d = 0; d < 3; ++d) {
    i0[d] = std::max(0, static_cast<int>(std::floor((sup.lo[d] - lo[d]) / h)));
    i1[d] = std::min(box.n - 1, static_cast<int>(std::floor((sup.hi[d] - lo[d]) / h)));
  }
  double total = 0.0;
  for (int ix = i0[0]; ix <= i1[0]; ++ix)
    for (int iy = i0[1]; iy <= i1[1]; ++iy)
      for (int iz = i0[2]; iz <= i1[2]; ++iz) {
        const Vec3 c = lo + Vec3(ix * h, iy * h, iz * h);
        const double m = density.mass_in_box({c, (c.array() + h).matrix()});
        f.at(ix, iy, iz) = m / (h * h * h);
        total += m;
      }
  // Ball cell masses come from quadrature; rescale so the total is exactly 1.
  if (!(total > 0.0)) throw NumericalError("rasterize: density has no mass on the grid");
  f *= 1.0 / total;
  return f;
}

double h_neg1_norm(const GridField& f, bool drop_zero_mode) {
  const int n = f.n();
  const double L = f.box().side;
  const double h = f.box().h();
  const double h3 = h * h * h;
  const int nz = n / 2 + 1;
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  double* in = fftw_alloc_real(total);
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n) * n * nz);
  if (!in || !out) {
    fftw_free(in);
    fftw_free(out);
    throw NumericalError("h_neg1_norm: FFT allocation failed");
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_3d(n, n, n, in, out, FFTW_ESTIMATE);
  }
  std::memcpy(in, f.values().data(), total * sizeof(double));
  fftw_execute(plan);

  const double zero = std::hypot(out[0][0], out[0][1]) * h3;
  double sum = 0.0;
  const double w = 2.0 * std::numbers::pi / L;
  for (int ix = 0; ix < n; ++ix) {
    const int kx = ix <= n / 2 ? ix : ix - n;
    for (int iy = 0; iy < n; ++iy) {
      const int ky = iy <= n / 2 ? iy : iy - n;
      for (int iz = 0; iz < nz; ++iz) {
        if (ix == 0 && iy == 0 && iz == 0) continue;
        const std::size_t idx = (static_cast<std::size_t>(ix) * n + iy) * nz + iz;
        const double re = out[idx][0], im = out[idx][1];
        const double k2 = w * w * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky + static_cast<double>(iz) * iz);
        // Half-spectrum: interior z-frequencies stand for a conjugate pair.
        const double mult = (iz == 0 || (n % 2 == 0 && iz == n / 2)) ? 1.0 : 2.0;
        sum += mult * (re * re + im * im) / (1.0 + k2);
      }
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  if (!drop_zero_mode && zero > kZeroModeTol)
    throw DomainError("h_neg1_norm: field has nonzero mean (|integral| = " + std::to_string(zero) + ")");
  return std::sqrt(sum * h3 * h3 / (L * L * L));
}

void export_grid(const GridField& f, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "binary grid export assumes little endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::uint32_t version = 1, n = static_cast<std::uint32_t>(f.n());
  const double L = f.box().side;
  const double c[3] = {f.box().center.x(), f.box().center.y(), f.box().center.z()};
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&L), sizeof L);
  out.write(reinterpret_cast<const char*>(c), sizeof c);
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

GridField import_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  std::uint32_t version = 0, n = 0;
  double L = 0.0, c[3];
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  in.read(reinterpret_cast<char*>(c), sizeof c);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0 || version != 1)
    throw IoError(path.string() + ": not a phlab grid file");
  if (n > 2048) throw IoError(path.string() + ": implausible grid size");
  BoxSpec box{Vec3(c[0], c[1], c[2]), L, static_cast<int>(n)};
  std::vector<double> values(static_cast<std::size_t>(n) * n * n);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw IoError(path.string() + ": truncated payload");
  return GridField(box, std::move(values));
}

}  // namespace phlab
