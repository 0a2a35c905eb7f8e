#pragma once

// Cheap configurations of every experiment kind, shared by the unit tests
// and the determinism criterion.

#include <vector>

#include "phlab/experiment/config.hpp"

namespace phlab::testing {

inline ExperimentConfig small_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.seed = 99;
  switch (kind) {
    case ExperimentKind::kEvents:
      c.n_list = {100, 200, 400};
      c.trials = 30;
      break;
    case ExperimentKind::kEtaMoments:
      c.n_list = {100, 1000};
      c.trials = 40;
      c.m_eta = 0.5;
      break;
    case ExperimentKind::kW2Rates:
      c.n_list = {16, 32, 64};
      c.trials = 3;
      c.ref_factor = 4;
      break;
    case ExperimentKind::kHneg1:
      c.n_list = {27, 64};
      c.trials = 2;
      c.ref_factor = 1;
      c.box = {Vec3::Constant(0.5), 3.0, 32};
      break;
    case ExperimentKind::kCorrector:
      c.n_list = {4096, 32768, 262144};
      c.trials = 1;
      break;
    case ExperimentKind::kResistance:
      c.particle_radius = 1.0;
      c.mesh_level = 2;
      break;
    case ExperimentKind::kBrinkmanGap:
      c.n_list = {100, 200};
      c.trials = 2;
      c.m_eta = 0.5;
      c.box = {Vec3::Constant(0.5), 2.0, 32};
      break;
  }
  return c;
}

inline std::vector<ExperimentKind> all_kinds() {
  return {ExperimentKind::kEvents, ExperimentKind::kEtaMoments, ExperimentKind::kW2Rates, ExperimentKind::kHneg1,
          ExperimentKind::kCorrector, ExperimentKind::kResistance, ExperimentKind::kBrinkmanGap};
}

}  // namespace phlab::testing
