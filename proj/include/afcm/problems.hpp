#pragma once

#include <string>

#include "afcm/drivers.hpp"

namespace afcm {

struct StationaryExperiment {
  ProblemDefinition problem;
  std::function<double(const Vec2&)> exact;
};

struct PicardExperiment {
  ProblemDefinition base;  // linear part; the advection coefficient is injected per iterate
  AdvectionCoefficient advection;
  std::function<double(const Vec2&)> exact;
};

struct HeatExperiment {
  HeatProblem heat;
  std::function<double(const Vec2&, double)> exact;
};

/// A named experiment with its manufactured exact solution. Sources and
/// boundary data are derived analytically from the exact solution.
struct RegisteredProblem {
  enum class Kind { kStationary, kPicard, kTimeMarch };

  std::string name;
  std::string description;
  Kind kind = Kind::kStationary;
  Vec2 domain_lo{-1, -1}, domain_hi{1, 1};
  int default_nx = 3, default_ny = 3;
  long default_monitor_samples = 0;

  std::function<StationaryExperiment()> make_stationary;
  std::function<PicardExperiment()> make_picard;
  std::function<HeatExperiment(double alpha)> make_heat;
};

const std::vector<RegisteredProblem>& problem_registry();
const RegisteredProblem* find_problem(const std::string& name);

}  // namespace afcm
