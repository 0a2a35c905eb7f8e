#include "phlab/experiment/config.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "phlab/common/error.hpp"
#include "phlab/fields/grid.hpp"
#include "phlab/events/indicators.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/geometry/truncation.hpp"
#include "phlab/transport/transport.hpp"

namespace phlab {

using nlohmann::ordered_json;

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};
constexpr KindName kKinds[] = {
    {ExperimentKind::kEvents, "events"},         {ExperimentKind::kEtaMoments, "eta-moments"},
    {ExperimentKind::kW2Rates, "w2-rates"},      {ExperimentKind::kHneg1, "hneg1"},
    {ExperimentKind::kCorrector, "corrector"},   {ExperimentKind::kResistance, "resistance"},
    {ExperimentKind::kBrinkmanGap, "brinkman-gap"},
};

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

template <typename T>
T get_as(const ordered_json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(field, "wrong type");
  }
}

Vec3 vec_from(const ordered_json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ValidationError(field, "must be an array of 3 numbers");
  return Vec3(get_as<double>(j[0], field), get_as<double>(j[1], field), get_as<double>(j[2], field));
}

void require(bool ok, const std::string& field, const std::string& constraint) {
  if (!ok) throw ValidationError(field, constraint);
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k.kind;
  throw ValidationError("experiment",
                        "one of events, eta-moments, w2-rates, hneg1, corrector, resistance, brinkman-gap");
}

DensityModel DensitySpec::build() const {
  if (kind == "uniform_box") return DensityModel::uniform_box(lo, hi);
  if (kind == "uniform_ball") return DensityModel::uniform_ball(center, radius);
  if (kind == "piecewise_grid") return DensityModel::piecewise_grid({lo, hi}, dims, weights);
  throw ValidationError("density.kind", "one of uniform_box, uniform_ball, piecewise_grid");
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json d;
  d["kind"] = c.density.kind;
  if (c.density.kind == "uniform_ball") {
    d["center"] = vec_json(c.density.center);
    d["radius"] = c.density.radius;
  } else {
    d["lo"] = vec_json(c.density.lo);
    d["hi"] = vec_json(c.density.hi);
    if (c.density.kind == "piecewise_grid") {
      d["dims"] = c.density.dims;
      d["weights"] = c.density.weights;
    }
  }
  ordered_json j;
  j["experiment"] = to_string(c.kind);
  j["density"] = d;
  j["n_list"] = c.n_list;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["lambda"] = c.lambda;
  j["m_eta"] = c.m_eta;
  j["kappa"] = c.kappa;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["box"] = {{"center", vec_json(c.box.center)}, {"side", c.box.side}, {"n", c.box.n}};
  j["output"] = c.output;
  j["ref_factor"] = c.ref_factor;
  j["eta"] = c.eta;
  j["particle_radius"] = c.particle_radius;
  j["mesh_level"] = c.mesh_level;
  j["mesh"] = c.mesh;
  j["reg_factor"] = c.reg_factor;
  j["psi"] = {{"center", vec_json(c.psi_center)}, {"sigma", c.psi_sigma}, {"amplitude", vec_json(c.psi_amplitude)}};
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config", "must be a JSON object");
  ExperimentConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const ordered_json& v = it.value();
    if (key == "experiment") {
      c.kind = experiment_kind_from_string(get_as<std::string>(v, key));
    } else if (key == "density") {
      if (!v.is_object()) throw ValidationError("density", "must be an object");
      for (auto dt = v.begin(); dt != v.end(); ++dt) {
        const std::string f = "density." + dt.key();
        if (dt.key() == "kind") c.density.kind = get_as<std::string>(*dt, f);
        else if (dt.key() == "lo") c.density.lo = vec_from(*dt, f);
        else if (dt.key() == "hi") c.density.hi = vec_from(*dt, f);
        else if (dt.key() == "center") c.density.center = vec_from(*dt, f);
        else if (dt.key() == "radius") c.density.radius = get_as<double>(*dt, f);
        else if (dt.key() == "dims") c.density.dims = get_as<std::array<int, 3>>(*dt, f);
        else if (dt.key() == "weights") c.density.weights = get_as<std::vector<double>>(*dt, f);
        else throw ValidationError(f, "unknown field");
      }
    } else if (key == "n_list") {
      c.n_list = get_as<std::vector<std::size_t>>(v, key);
    } else if (key == "alpha") {
      c.alpha = get_as<double>(v, key);
    } else if (key == "beta") {
      c.beta = get_as<double>(v, key);
    } else if (key == "lambda") {
      c.lambda = get_as<double>(v, key);
    } else if (key == "m_eta") {
      c.m_eta = get_as<double>(v, key);
    } else if (key == "kappa") {
      c.kappa = v.is_array() ? get_as<std::vector<double>>(v, key) : std::vector<double>{get_as<double>(v, key)};
    } else if (key == "trials") {
      if (v.is_number_integer() && v.get<long long>() < 0) throw ValidationError("trials", "trials ≥ 0");
      c.trials = get_as<std::size_t>(v, key);
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t>(v, key);
    } else if (key == "box") {
      if (!v.is_object()) throw ValidationError("box", "must be an object");
      for (auto bt = v.begin(); bt != v.end(); ++bt) {
        const std::string f = "box." + bt.key();
        if (bt.key() == "center") c.box.center = vec_from(*bt, f);
        else if (bt.key() == "side") c.box.side = get_as<double>(*bt, f);
        else if (bt.key() == "n") c.box.n = get_as<int>(*bt, f);
        else throw ValidationError(f, "unknown field");
      }
    } else if (key == "output") {
      c.output = get_as<std::string>(v, key);
    } else if (key == "ref_factor") {
      c.ref_factor = get_as<std::size_t>(v, key);
    } else if (key == "eta") {
      c.eta = get_as<double>(v, key);
    } else if (key == "particle_radius") {
      c.particle_radius = get_as<double>(v, key);
    } else if (key == "mesh_level") {
      c.mesh_level = get_as<int>(v, key);
    } else if (key == "mesh") {
      c.mesh = get_as<std::string>(v, key);
    } else if (key == "reg_factor") {
      c.reg_factor = get_as<double>(v, key);
    } else if (key == "psi") {
      if (!v.is_object()) throw ValidationError("psi", "must be an object");
      for (auto pt = v.begin(); pt != v.end(); ++pt) {
        const std::string f = "psi." + pt.key();
        if (pt.key() == "center") c.psi_center = vec_from(*pt, f);
        else if (pt.key() == "sigma") c.psi_sigma = get_as<double>(*pt, f);
        else if (pt.key() == "amplitude") c.psi_amplitude = vec_from(*pt, f);
        else throw ValidationError(f, "unknown field");
      }
    } else {
      throw ValidationError(key, "unknown field");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << config_to_json(config);
  if (!out) throw IoError("write failed: " + path.string());
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& config) { return fnv1a64(config_to_json(config)); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void validate(const ExperimentConfig& c) {
  const ExperimentKind k = c.kind;

  DensityModel density = [&] {
    try {
      return c.density.build();
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError("density", e.what());
    }
  }();

  const bool needs_n = k != ExperimentKind::kResistance;
  if (needs_n) require(!c.n_list.empty(), "n_list", "at least one N");
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    require(c.n_list[i] >= 1, "n_list", "N ≥ 1");
    if (i > 0) require(c.n_list[i] > c.n_list[i - 1], "n_list", "strictly increasing");
  }
  require(std::isfinite(c.alpha) && c.alpha > 1.0, "alpha", "alpha > 1");
  require(std::isfinite(c.lambda) && c.lambda > 0.0 && c.lambda < 1.0, "lambda", "0 < lambda < 1");
  require(c.beta >= 1.0 && c.beta <= c.alpha, "beta", "1 ≤ beta ≤ alpha");
  require(c.m_eta > 0.0 && c.m_eta <= 1.0, "m_eta", "0 < m_eta ≤ 1");
  if (c.beta == c.alpha) require(c.m_eta == 1.0, "m_eta", "m_eta = 1 when beta = alpha");
  require(!c.output.empty(), "output", "non-empty path");

  // pad: how far the rasterized fields reach beyond the density support.
  auto check_box = [&](double pad) {
    try {
      c.box.validate();
    } catch (const Error& e) {
      throw ValidationError("box", e.what());
    }
    try {
      Box b = density.support_box();
      b.lo.array() -= pad;
      b.hi.array() += pad;
      c.box.check_support(b);
    } catch (const Error&) {
      throw ValidationError("box", pad > 0.0 ? "smeared cubes around the density support must keep a margin of side/4 to the box faces"
                                       : "density support must keep a margin of side/4 to the box faces");
    }
  };

  switch (k) {
    case ExperimentKind::kEvents:
      require(c.trials >= 30, "trials", "trials ≥ 30");
      break;
    case ExperimentKind::kEtaMoments:
      require(c.trials >= 30, "trials", "trials ≥ 30");
      require(!c.kappa.empty(), "kappa", "at least one exponent");
      for (double kap : c.kappa) require(kap > -3.0, "kappa", "kappa > -3");
      break;
    case ExperimentKind::kW2Rates:
      require(c.trials >= 2, "trials", "trials ≥ 2");
      require(c.n_list.back() <= kEmpiricalMaxN, "n_list", "N ≤ " + std::to_string(kEmpiricalMaxN));
      require(c.ref_factor >= 4, "ref_factor", "ref_factor ≥ 4");
      require(c.ref_factor * c.n_list.back() <= kEmpiricalMaxRef, "ref_factor",
              "ref_factor * N ≤ " + std::to_string(kEmpiricalMaxRef));
      break;
    case ExperimentKind::kHneg1:
      require(c.trials >= 1, "trials", "trials ≥ 1");
      require(c.n_list.back() <= kEmpiricalMaxN, "n_list", "N ≤ " + std::to_string(kEmpiricalMaxN));
      require(c.ref_factor >= 1, "ref_factor", "ref_factor ≥ 1");
      require(c.ref_factor * c.n_list.back() <= kEmpiricalMaxRef, "ref_factor",
              "ref_factor * N ≤ " + std::to_string(kEmpiricalMaxRef));
      check_box(smeared_cube_side(ParticleConfiguration::eps_for(c.n_list.front()), c.lambda) / 2.0);
      break;
    case ExperimentKind::kCorrector:
      require(c.particle_radius > 0.0 && c.particle_radius < ReferenceParticle::kContainmentRadius, "particle_radius",
              "0 < particle_radius < 1/4");
      require(c.eta > 0.0, "eta", "eta > 0");
      for (std::size_t n : c.n_list) {
        const double eps = ParticleConfiguration::eps_for(n);
        require(c.eta / 4.0 > c.particle_radius * std::pow(eps, c.alpha), "eta",
                "eta/4 > particle_radius * eps^alpha for every N");
      }
      break;
    case ExperimentKind::kResistance:
      require(c.mesh_level >= 0 && c.mesh_level <= 6, "mesh_level", "0 ≤ mesh_level ≤ 6");
      require(c.reg_factor > 0.1 && c.reg_factor < 10.0, "reg_factor", "0.1 < reg_factor < 10");
      if (c.mesh.empty())
        require(c.particle_radius > 0.0 && std::isfinite(c.particle_radius), "particle_radius",
                "particle_radius > 0");
      else
        require(std::filesystem::exists(c.mesh), "mesh", "file must exist");
      break;
    case ExperimentKind::kBrinkmanGap:
      require(c.trials >= 1, "trials", "trials ≥ 1");
      require(c.particle_radius > 0.0 && c.particle_radius < ReferenceParticle::kContainmentRadius, "particle_radius",
              "0 < particle_radius < 1/4");
      require(c.psi_sigma > 0.0, "psi.sigma", "sigma > 0");
      check_box(0.0);
      break;
  }
}

}  // namespace phlab
