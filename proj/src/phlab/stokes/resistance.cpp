#include "phlab/stokes/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "phlab/common/error.hpp"
#include "phlab/common/parallel.hpp"

namespace phlab {

namespace {

std::vector<double> vertex_areas(const SurfaceMesh& mesh) {
  std::vector<double> area(mesh.vertices.size(), 0.0);
  for (const auto& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    const double t = 0.5 * (b - a).cross(c - a).norm();
    if (!(t > 0.0)) throw NumericalError("resistance_bem: degenerate mesh (zero-area triangle)");
    for (int k = 0; k < 3; ++k) area[f[k]] += t / 3.0;
  }
  return area;
}

ResistanceResult run_levels(const std::function<SurfaceMesh(int)>& surface, int level,
                            std::optional<double> reg_eps, unsigned threads) {
  if (level < 0 || level > 6) throw InvalidArgument("resistance_bem: mesh level must lie in [0, 6]");
  // The blob is kept at a fixed multiple of h on every level.
  double factor = kDefaultRegFactor;
  if (reg_eps) {
    const double h = mean_edge_length(surface(level));
    factor = *reg_eps / h;
  }
  ResistanceResult out;
  for (int l = std::max(level - 2, 0); l <= level; ++l) {
    const SurfaceMesh mesh = surface(l);
    const double h = mean_edge_length(mesh);
    ResistanceResult r = resistance_bem_mesh(mesh, factor * h, threads);
    out.history.push_back({l, r.vertices, r.mesh_spacing, r.reg_eps, r.R});
    out.R = r.R;
    out.vertices = r.vertices;
    out.faces = r.faces;
    out.mesh_spacing = r.mesh_spacing;
    out.reg_eps = r.reg_eps;
  }
  const auto& hist = out.history;
  if (hist.size() >= 3) {
    const std::size_t m = hist.size();
    const double d1 = (hist[m - 2].R - hist[m - 3].R).norm();
    const double d2 = (hist[m - 1].R - hist[m - 2].R).norm();
    if (d2 > d1 && d2 > 0.05 * hist[m - 1].R.norm())
      throw NumericalError("resistance_bem: refinement is not converging");
  }
  return out;
}

}  // namespace

ResistanceResult resistance_bem_mesh(const SurfaceMesh& mesh, std::optional<double> reg_eps, unsigned threads) {
  if (!is_closed_consistently_oriented(mesh)) throw DomainError("resistance_bem: mesh is not closed and consistently oriented");
  const std::size_t m = mesh.vertices.size();
  const double h = mean_edge_length(mesh);
  const double eps = reg_eps.value_or(kDefaultRegFactor * h);
  if (!(eps > 0.1 * h && eps < 10.0 * h))
    throw DomainError("resistance_bem: reg_eps must lie in (0.1 h, 10 h), h = " + std::to_string(h));
  vertex_areas(mesh);  // rejects degenerate triangles

  const std::size_t n = 3 * m;
  Eigen::MatrixXd A(n, n);
  const double e2 = eps * eps;
  const double scale = 1.0 / (8.0 * std::numbers::pi);
  // Lower triangle only; the Cholesky factorization reads nothing else.
  parallel_for(m, threads, [&](std::size_t i) {
    const Vec3& xi = mesh.vertices[i];
    for (std::size_t j = 0; j <= i; ++j) {
      const Vec3 d = xi - mesh.vertices[j];
      const double r2 = d.squaredNorm();
      const double den = std::pow(r2 + e2, 1.5);
      const Mat3 S = scale * (((r2 + 2.0 * e2) / den) * Mat3::Identity() + (d * d.transpose()) / den);
      A.block<3, 3>(3 * i, 3 * j) = S;
    }
  });
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("resistance_bem: singular system (degenerate mesh)");

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 3);
  for (std::size_t i = 0; i < m; ++i)
    for (int k = 0; k < 3; ++k) rhs(3 * i + k, k) = 1.0;
  const Eigen::MatrixXd f = llt.solve(rhs);

  ResistanceResult out;
  out.R.setZero();
  for (std::size_t i = 0; i < m; ++i)
    for (int k = 0; k < 3; ++k) out.R.col(k) += f.block<3, 1>(3 * i, k);
  if (!out.R.allFinite()) throw NumericalError("resistance_bem: non-finite solution");
  out.vertices = m;
  out.faces = mesh.faces.size();
  out.mesh_spacing = h;
  out.reg_eps = eps;
  out.history.push_back({-1, m, h, eps, out.R});
  return out;
}

ResistanceResult resistance_bem(const ReferenceParticle& particle, int level, std::optional<double> reg_eps,
                                unsigned threads) {
  return run_levels([&](int l) { return particle.surface(l); }, level, reg_eps, threads);
}

ResistanceResult resistance_bem_sphere(double radius, int level, std::optional<double> reg_eps, unsigned threads) {
  if (!(radius > 0.0)) throw InvalidArgument("resistance_bem: radius must be positive");
  return run_levels([&](int l) { return icosphere(l, radius); }, level, reg_eps, threads);
}

}  // namespace phlab
