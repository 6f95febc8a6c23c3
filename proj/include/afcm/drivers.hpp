#pragma once

#include <optional>

#include "afcm/adaptivity.hpp"

namespace afcm {

/// Stationary linear problem: one adaptive run with the plain linear solve.
SolutionHistory solve_stationary(const ProblemDefinition& problem, const Partition& partition,
                                 const AfcmOptions& options, const RngPool& rng);

struct PicardConfig {
  int iterations = 40;
  double relaxation = 1.0;           // in (0, 1]; 1 = plain Picard
  std::optional<double> tolerance;   // optional early exit on iterate change
};

/// Advection coefficient of d/dx frozen at the previous iterate; nullptr on
/// the first iterate (the seed iterate is identically zero).
using AdvectionCoefficient = std::function<double(const Solution*, const Vec2&)>;

class PicardDivergence : public std::runtime_error {
 public:
  PicardDivergence(int iteration, double change)
      : std::runtime_error("Picard iteration diverging at step " + std::to_string(iteration) +
                           " (change " + std::to_string(change) + ")"),
        iteration(iteration) {}
  int iteration;
};

/// One Picard loop: repeatedly freeze the advection coefficient at the
/// previous iterate and solve the linearized least-squares problem. Usable
/// directly or as the solve unit inside the adaptive loop.
SolveOutcome picard_unit(const ProblemDefinition& base, const Partition& partition,
                         const FeatureSet& features, const CollocationSet& colloc,
                         const SolveConfig& solve, const AdvectionCoefficient& advection,
                         const PicardConfig& picard);

/// Adaptive loop wrapping the full Picard solve: adapt, run all Picard
/// iterations, adapt again.
SolutionHistory picard_solve(const ProblemDefinition& base, const Partition& partition,
                             const AdvectionCoefficient& advection, const PicardConfig& picard,
                             const AfcmOptions& options, const RngPool& rng);

struct TimeMarchConfig {
  double dt = 0.2;
  int steps = 10;       // N; dt * N = T
  double alpha = 1.0;   // diffusivity
};

/// Heat-equation data: phi_t - alpha * lap(phi) = f with Dirichlet trace g
/// and initial state h (with its analytic Laplacian for the first step's
/// right-hand side).
struct HeatProblem {
  std::function<double(const Vec2&, double)> source;
  std::function<double(const Vec2&, double)> dirichlet;
  std::function<double(const Vec2&)> initial;
  std::function<double(const Vec2&)> initial_laplacian;
};

struct TimeStepRecord {
  SolutionHistory history;
  double time = 0;            // t at the end of the step
  Vec2 monitor_center{0, 0};  // of the last monitor built within the step
  bool has_monitor_center = false;
};

/// Crank-Nicolson marching: each step solves the stationary spatial problem
///   (I - (alpha dt/2) lap) phi_new = phi_old + (alpha dt/2) lap(phi_old)
///                                    + (dt/2)(f_new + f_old)
/// with K adaptive iterations; the adapted features and collocation points of
/// one step seed the next (no re-initialization, no re-calibration). The
/// previous state and its Laplacian are evaluated analytically from the
/// previous step's solution.
std::vector<TimeStepRecord> crank_nicolson_march(const HeatProblem& heat,
                                                 const Partition& partition,
                                                 const TimeMarchConfig& march,
                                                 const AfcmOptions& options, const RngPool& rng);

}  // namespace afcm
