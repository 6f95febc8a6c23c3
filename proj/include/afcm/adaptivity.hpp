#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "afcm/assembly.hpp"
#include "afcm/rng.hpp"

namespace afcm {

/// Probability masses over a fixed uniform sample set, proportional to the
/// gradient norm of the current approximate solution plus a smoothing floor.
struct MonitorSet {
  std::vector<Vec2> points;  // S, drawn once before the adaptive loop
  VectorXd grad_norm;        // |grad phi| at S
  VectorXd mass;             // strictly positive, sums to 1

  Vec2 mass_center() const;
};

struct AdaptConfig {
  double c1 = 0.01;          // monitor smoothing; keeps masses positive
  double c2 = 50.0;          // shape-amplification smoothing
  int iterations = 4;        // K
  long monitor_samples = 0;  // m
  bool early_stop = false;   // optional residual-stagnation stop, off by default
};

std::vector<Vec2> sample_uniform(const Domain& domain, long count, std::mt19937_64& gen);

MonitorSet build_monitor(const Solution& sol, std::vector<Vec2> sample_points, double c1);

/// Weighted random sampling without replacement via exponential-key order
/// statistics: per point draw u^(1/w) and keep the k largest keys. Returns
/// distinct indices into the monitor's point set.
std::vector<long> weighted_sample(const MonitorSet& monitor, long k, std::mt19937_64& gen);

std::vector<std::vector<long>> group_by_subdomain(const Partition& partition,
                                                  const MonitorSet& monitor,
                                                  const std::vector<long>& indices);

/// Rebuilds the feature set from monitor samples: each feature's hyperplane
/// passes through its sample (offset = -normal . x_local), with a fresh
/// Gaussian normal, and its shape parameter is the per-subdomain base gamma
/// amplified by (|grad|+c2) relative to the subdomain's minimum. Subdomains
/// that received no samples keep their previous features.
FeatureSet regenerate_features(const Partition& partition, const MonitorSet& monitor,
                               const std::vector<std::vector<long>>& samples_by_subdomain,
                               const std::vector<double>& gamma_base, double c2,
                               const FeatureSet& previous, std::mt19937_64& gen);

/// Keeps subdomain-boundary and interface points untouched and replaces the
/// interior points with the sampled ones. Subdomains assigned fewer than
/// min_interior samples keep their previous interior points.
CollocationSet regenerate_collocation(const CollocationSet& previous, const Partition& partition,
                                      const MonitorSet& monitor,
                                      const std::vector<std::vector<long>>& samples_by_subdomain,
                                      int min_interior = 4);

struct SolveDiagnostics {
  double residual_norm = 0;
  long rank = 0;
  long rows = 0, cols = 0, dropped_rows = 0;
  double assemble_seconds = 0, solve_seconds = 0;
  std::vector<double> picard_change;  // iterate-to-iterate change, when applicable
};

struct SolveOutcome {
  Solution solution;
  SolveDiagnostics diag;
};

/// One "assemble and solve" unit. The default solves the linear problem once;
/// nonlinear drivers substitute an iteration that ends in the same contract.
using SolveUnit =
    std::function<SolveOutcome(const ProblemDefinition&, const Partition&, const FeatureSet&,
                               const CollocationSet&, const SolveConfig&)>;

SolveOutcome linear_solve_unit(const ProblemDefinition& problem, const Partition& partition,
                               const FeatureSet& features, const CollocationSet& colloc,
                               const SolveConfig& solve);

struct IterationRecord {
  Solution solution;
  CollocationSet collocation;
  SolveDiagnostics diag;
  Vec2 monitor_center{0, 0};  // mass center of the monitor that produced this iterate
  bool has_monitor_center = false;
};

struct SolutionHistory {
  std::vector<IterationRecord> iterations;  // index 0 = initial solve
  std::vector<double> gamma_base;           // calibrated per-subdomain shape parameters
  std::map<std::string, double> timings;    // coarse per-phase wall clock, seconds

  const Solution& final_solution() const { return iterations.back().solution; }
};

struct AfcmOptions {
  int features_per_subdomain = 0;     // J_n
  int qx = 0, qy = 0;                 // initial tensor-grid resolution
  long interior_budget_total = -1;    // total interior points; -1 = (qx-2)(qy-2) * subdomains
  int interface_points_per_edge = 0;  // 0 = match the grid
  GrfConfig grf;
  std::vector<double> gamma_grid;     // empty = default_gamma_grid()
  bool shared_gamma = true;           // calibrate once, reuse on every subdomain
  AdaptConfig adapt;
  SolveConfig solve;
  std::string rng_scope;              // label prefix for the RNG substreams
};

/// Features, collocation and base shape parameters entering iteration 0.
struct InitState {
  FeatureSet features;
  CollocationSet collocation;
  std::vector<double> gamma_base;
};

/// Uniform feature initialization, shape calibration against Gaussian random
/// fields, and the initial tensor-grid collocation.
InitState make_initial_state(const Partition& partition, const AfcmOptions& options,
                             const RngPool& rng);

/// The adaptive feature capture loop. Iteration 0 solves with the initial
/// (or carried-over) state; iterations 1..K rebuild the monitor on the fixed
/// sample set, redistribute features and interior collocation points by
/// weighted sampling, and re-solve. When `carry` is given, iteration 0 reuses
/// that state and skips initialization and calibration.
SolutionHistory afcm_iterate(const ProblemDefinition& problem, const Partition& partition,
                             const AfcmOptions& options, const RngPool& rng,
                             const SolveUnit& unit = {}, const InitState* carry = nullptr);

}  // namespace afcm
