#include "phlab/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>

#include "phlab/common/error.hpp"

namespace phlab {

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

void check_indices(const SurfaceMesh& m) {
  const int nv = static_cast<int>(m.vertices.size());
  for (const auto& f : m.faces)
    for (int v : f)
      if (v < 0 || v >= nv) throw IoError("mesh: face index out of range");
}

SurfaceMesh read_off(std::istream& in, const std::string& name) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw IoError(name + ": truncated OFF file");
    return tokens[pos++];
  };
  auto next_num = [&]() {
    const std::string& t = next();
    try {
      return std::stod(t);
    } catch (const std::exception&) {
      throw IoError(name + ": bad number '" + t + "'");
    }
  };
  if (next() != "OFF") throw IoError(name + ": missing OFF header");
  const auto nv = static_cast<long>(next_num()), nf = static_cast<long>(next_num());
  next_num();  // edge count, unused
  if (nv < 0 || nf < 0) throw IoError(name + ": negative counts");
  SurfaceMesh m;
  m.vertices.resize(nv);
  for (auto& v : m.vertices) {
    v.x() = next_num();
    v.y() = next_num();
    v.z() = next_num();
  }
  for (long f = 0; f < nf; ++f) {
    const int k = static_cast<int>(next_num());
    if (k < 3) throw IoError(name + ": face with fewer than 3 vertices");
    std::vector<int> idx(k);
    for (int& i : idx) i = static_cast<int>(next_num());
    for (int j = 1; j + 1 < k; ++j) m.faces.push_back({idx[0], idx[j], idx[j + 1]});
  }
  check_indices(m);
  return m;
}

SurfaceMesh read_obj(std::istream& in, const std::string& name) {
  SurfaceMesh m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z())) throw IoError(name + ": bad vertex line");
      m.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string t;
      while (ls >> t) {
        // "i", "i/t", "i//n", "i/t/n"; negative indices count from the end.
        int i = 0;
        try {
          i = std::stoi(t.substr(0, t.find('/')));
        } catch (const std::exception&) {
          throw IoError(name + ": bad face index '" + t + "'");
        }
        idx.push_back(i > 0 ? i - 1 : static_cast<int>(m.vertices.size()) + i);
      }
      if (idx.size() < 3) throw IoError(name + ": face with fewer than 3 vertices");
      for (std::size_t j = 1; j + 1 < idx.size(); ++j) m.faces.push_back({idx[0], idx[j], idx[j + 1]});
    }
  }
  check_indices(m);
  return m;
}

}  // namespace

SurfaceMesh icosphere(int level, double radius, const Vec3& center) {
  if (level < 0 || level > 7) throw InvalidArgument("icosphere: level must be in [0, 7]");
  if (!(radius > 0.0)) throw InvalidArgument("icosphere: radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SurfaceMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : m.vertices) v.normalize();
  for (int l = 0; l < level; ++l) {
    m = subdivide(m);
    for (auto& v : m.vertices) v.normalize();
  }
  for (auto& v : m.vertices) v = center + radius * v;
  return m;
}

SurfaceMesh subdivide(const SurfaceMesh& mesh) {
  SurfaceMesh out;
  out.vertices = mesh.vertices;
  out.faces.reserve(mesh.faces.size() * 4);
  std::unordered_map<std::uint64_t, int> mid;
  auto midpoint = [&](int a, int b) {
    const std::uint64_t key = edge_key(std::min(a, b), std::max(a, b));
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    mid.emplace(key, idx);
    return idx;
  };
  for (const auto& f : mesh.faces) {
    const int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
    out.faces.push_back({f[0], a, c});
    out.faces.push_back({f[1], b, a});
    out.faces.push_back({f[2], c, b});
    out.faces.push_back({a, b, c});
  }
  return out;
}

SurfaceMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh " + path.string());
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".obj") return read_obj(in, path.string());
  if (ext == ".off") return read_off(in, path.string());
  std::string first;
  in >> first;
  in.seekg(0);
  if (first == "OFF") return read_off(in, path.string());
  return read_obj(in, path.string());
}

void write_off(const SurfaceMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

bool is_closed_consistently_oriented(const SurfaceMesh& mesh) {
  if (mesh.faces.empty()) return false;
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(mesh.faces.size() * 3);
  for (const auto& f : mesh.faces) {
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return false;
    for (int e = 0; e < 3; ++e)
      if (++directed[edge_key(f[e], f[(e + 1) % 3])] > 1) return false;
  }
  for (const auto& [key, count] : directed) {
    const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
    if (!directed.count(edge_key(b, a))) return false;
  }
  return true;
}

double winding_number(const SurfaceMesh& mesh, const Vec3& p) {
  double total = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec3 a = mesh.vertices[f[0]] - p, b = mesh.vertices[f[1]] - p, c = mesh.vertices[f[2]] - p;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * std::numbers::pi);
}

double signed_volume(const SurfaceMesh& mesh) {
  double v = 0.0;
  for (const auto& f : mesh.faces)
    v += mesh.vertices[f[0]].dot(mesh.vertices[f[1]].cross(mesh.vertices[f[2]]));
  return v / 6.0;
}

double max_vertex_norm(const SurfaceMesh& mesh) {
  double r = 0.0;
  for (const auto& v : mesh.vertices) r = std::max(r, v.norm());
  return r;
}

double mean_edge_length(const SurfaceMesh& mesh) {
  if (mesh.faces.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) s += (mesh.vertices[f[e]] - mesh.vertices[f[(e + 1) % 3]]).norm();
  return s / (3.0 * static_cast<double>(mesh.faces.size()));
}

double distance_to_surface(const SurfaceMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.faces) {
    const Vec3 q = closest_on_triangle(p, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    best = std::min(best, (q - p).squaredNorm());
  }
  return std::sqrt(best);
}

SurfaceMesh rotated(const SurfaceMesh& mesh, const Mat3& rotation) {
  SurfaceMesh out = mesh;
  for (auto& v : out.vertices) v = rotation * v;
  return out;
}

}  // namespace phlab
