#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phlab/fields/grid.hpp"
#include "phlab/geometry/density.hpp"

namespace phlab {

enum class ExperimentKind { kEvents, kEtaMoments, kW2Rates, kHneg1, kCorrector, kResistance, kBrinkmanGap };

const char* to_string(ExperimentKind kind);
/// Throws ValidationError("experiment", ...) for unknown names.
ExperimentKind experiment_kind_from_string(const std::string& name);

struct DensitySpec {
  std::string kind = "uniform_box";  // uniform_box | uniform_ball | piecewise_grid
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
  Vec3 center = Vec3::Constant(0.5);
  double radius = 0.5;
  std::array<int, 3> dims{1, 1, 1};
  std::vector<double> weights;

  DensityModel build() const;
  bool operator==(const DensitySpec&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kEvents;
  DensitySpec density;
  std::vector<std::size_t> n_list;
  double alpha = 2.5;
  double beta = 1.0;
  double lambda = 0.3;
  double m_eta = 1.0;
  std::vector<double> kappa{-2.0, -1.0, 0.0, 1.0, 2.0};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  BoxSpec box{Vec3::Constant(0.5), 2.0, 64};
  std::string output = "report.tsv";

  // w2-rates and hneg1: reference sample size per centre.
  std::size_t ref_factor = 16;
  // corrector: fixed truncation radius.
  double eta = 0.0625;
  // corrector, resistance, brinkman-gap: sphere radius of the reference particle.
  double particle_radius = 0.125;
  // resistance
  int mesh_level = 4;
  std::string mesh;  // optional OFF/OBJ file instead of the sphere
  double reg_factor = 0.5;
  // brinkman-gap: Gaussian test field
  Vec3 psi_center = Vec3::Constant(0.5);
  double psi_sigma = 0.15;
  Vec3 psi_amplitude{1.0, 0.5, -0.25};

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the JSON form; unknown keys and type errors raise ValidationError
/// naming the field. Does not run validate().
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON (fixed key order, shortest round-trip doubles).
std::string config_to_json(const ExperimentConfig& config);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

/// FNV-1a 64 of the canonical JSON.
std::uint64_t config_hash(const ExperimentConfig& config);
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// Throws ValidationError(field, constraint) for the first violated
/// precondition, e.g. ("trials", "trials ≥ 30").
void validate(const ExperimentConfig& config);

}  // namespace phlab
