#include "afcm/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace afcm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Vec2 MonitorSet::mass_center() const {
  Vec2 c = Vec2::Zero();
  for (size_t i = 0; i < points.size(); ++i) {
    c += mass[static_cast<long>(i)] * points[i];
  }
  return c;
}

std::vector<Vec2> sample_uniform(const Domain& domain, long count, std::mt19937_64& gen) {
  std::vector<Vec2> pts;
  pts.reserve(static_cast<size_t>(count));
  for (long i = 0; i < count; ++i) {
    pts.emplace_back(domain.lo[0] + domain.width(0) * uniform01(gen),
                     domain.lo[1] + domain.width(1) * uniform01(gen));
  }
  return pts;
}

MonitorSet build_monitor(const Solution& sol, std::vector<Vec2> sample_points, double c1) {
  if (sample_points.empty()) {
    throw std::invalid_argument("build_monitor: empty sample set");
  }
  if (!(c1 > 0)) {
    throw std::invalid_argument("build_monitor: c1 must be positive");
  }
  MonitorSet m;
  m.points = std::move(sample_points);
  const long count = static_cast<long>(m.points.size());
  m.grad_norm.resize(count);
  for (long i = 0; i < count; ++i) {
    const double g = sol.gradient_norm(m.points[static_cast<size_t>(i)]);
    if (!std::isfinite(g)) {
      throw std::runtime_error("build_monitor: non-finite gradient at sample " +
                               std::to_string(i) + " (" +
                               std::to_string(m.points[static_cast<size_t>(i)][0]) + ", " +
                               std::to_string(m.points[static_cast<size_t>(i)][1]) + ")");
    }
    m.grad_norm[i] = g;
  }
  m.mass = (m.grad_norm.array() + c1).matrix();
  m.mass /= m.mass.sum();
  return m;
}

std::vector<long> weighted_sample(const MonitorSet& monitor, long k, std::mt19937_64& gen) {
  const long m = static_cast<long>(monitor.points.size());
  if (k > m) {
    throw std::invalid_argument("weighted_sample: requested " + std::to_string(k) +
                                " of only " + std::to_string(m) + " points");
  }
  if (k <= 0) return {};
  // key = log(u)/w is monotone in u^(1/w); ties broken by index for a fully
  // deterministic order.
  std::vector<std::pair<double, long>> keys;
  keys.reserve(static_cast<size_t>(m));
  for (long i = 0; i < m; ++i) {
    const double u = uniform_open01(gen);
    keys.emplace_back(std::log(u) / monitor.mass[i], i);
  }
  auto better = [](const std::pair<double, long>& a, const std::pair<double, long>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::partial_sort(keys.begin(), keys.begin() + k, keys.end(), better);
  std::vector<long> out;
  out.reserve(static_cast<size_t>(k));
  for (long i = 0; i < k; ++i) out.push_back(keys[static_cast<size_t>(i)].second);
  return out;
}

std::vector<std::vector<long>> group_by_subdomain(const Partition& partition,
                                                  const MonitorSet& monitor,
                                                  const std::vector<long>& indices) {
  std::vector<std::vector<long>> groups(static_cast<size_t>(partition.size()));
  for (long idx : indices) {
    groups[static_cast<size_t>(partition.locate(monitor.points[static_cast<size_t>(idx)]))]
        .push_back(idx);
  }
  return groups;
}

FeatureSet regenerate_features(const Partition& partition, const MonitorSet& monitor,
                               const std::vector<std::vector<long>>& samples_by_subdomain,
                               const std::vector<double>& gamma_base, double c2,
                               const FeatureSet& previous, std::mt19937_64& gen) {
  if (!(c2 > 0)) {
    throw std::invalid_argument("regenerate_features: c2 must be positive");
  }
  FeatureSet out = previous;  // empty subdomains fall back to their previous features
  for (int n = 0; n < partition.size(); ++n) {
    const auto& samples = samples_by_subdomain[static_cast<size_t>(n)];
    if (samples.empty()) continue;

    double min_aug = std::numeric_limits<double>::infinity();
    for (long idx : samples) {
      min_aug = std::min(min_aug, monitor.grad_norm[idx] + c2);
    }

    const Subdomain& sub = partition.sub(n);
    std::vector<FeatureFunction> feats;
    feats.reserve(samples.size());
    for (long idx : samples) {
      const Vec2& x = monitor.points[static_cast<size_t>(idx)];
      const Vec2 xl = to_local(sub, x);
      Vec2 dir;
      do {
        dir = Vec2(standard_normal(gen), standard_normal(gen));
      } while (!(dir.norm() > 0));
      FeatureFunction f;
      f.normal = dir / dir.norm();
      f.offset = -f.normal.dot(xl);  // hyperplane through the sample point
      f.gamma = gamma_base[static_cast<size_t>(n)] * (monitor.grad_norm[idx] + c2) / min_aug;
      f.subdomain = n;
      f.anchor = x;
      feats.push_back(f);
    }
    out.per_subdomain[static_cast<size_t>(n)] = std::move(feats);
  }
  return out;
}

CollocationSet regenerate_collocation(const CollocationSet& previous, const Partition& partition,
                                      const MonitorSet& monitor,
                                      const std::vector<std::vector<long>>& samples_by_subdomain,
                                      int min_interior) {
  CollocationSet out = previous;  // boundary and interface points carry over unchanged
  for (int n = 0; n < partition.size(); ++n) {
    const auto& samples = samples_by_subdomain[static_cast<size_t>(n)];
    if (static_cast<int>(samples.size()) < min_interior) continue;
    std::vector<Vec2> pts;
    pts.reserve(samples.size());
    for (long idx : samples) pts.push_back(monitor.points[static_cast<size_t>(idx)]);
    out.interior[static_cast<size_t>(n)] = std::move(pts);
  }
  return out;
}

SolveOutcome linear_solve_unit(const ProblemDefinition& problem, const Partition& partition,
                               const FeatureSet& features, const CollocationSet& colloc,
                               const SolveConfig& solve) {
  const auto t0 = std::chrono::steady_clock::now();
  const LinearSystem sys = assemble_system(problem, partition, features, colloc, solve.rescale_c);
  const auto t1 = std::chrono::steady_clock::now();
  LstsqResult res = solve_lstsq(sys, solve.rank_tol);

  SolveOutcome out{Solution(partition, features, std::move(res.coeffs), PouKind::kIndicator), {}};
  out.diag.residual_norm = res.residual_norm;
  out.diag.rank = res.rank;
  out.diag.rows = sys.rows();
  out.diag.cols = sys.cols();
  out.diag.dropped_rows = sys.dropped_rows;
  out.diag.assemble_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.diag.solve_seconds = seconds_since(t1);
  return out;
}

InitState make_initial_state(const Partition& partition, const AfcmOptions& options,
                             const RngPool& rng) {
  if (options.features_per_subdomain < 1) {
    throw std::invalid_argument("afcm: features_per_subdomain must be at least 1");
  }
  InitState state;
  state.collocation = sample_collocation(partition, options.qx, options.qy,
                                         options.interface_points_per_edge);

  auto fg = rng.stream(options.rng_scope + "feature-init");
  state.features.per_subdomain.resize(static_cast<size_t>(partition.size()));
  for (int n = 0; n < partition.size(); ++n) {
    state.features.per_subdomain[static_cast<size_t>(n)] =
        init_uniform_features(partition.sub(n), n, options.features_per_subdomain, fg);
  }

  const std::vector<double> grid =
      options.gamma_grid.empty() ? default_gamma_grid() : options.gamma_grid;
  auto gg = rng.stream(options.rng_scope + "grf");
  state.gamma_base.resize(static_cast<size_t>(partition.size()));
  if (options.shared_gamma) {
    const CalibrationResult cal =
        calibrate_gamma(partition.sub(0), state.features.per_subdomain[0],
                        state.collocation.interior[0], options.grf, grid, gg);
    std::fill(state.gamma_base.begin(), state.gamma_base.end(), cal.gamma);
  } else {
    for (int n = 0; n < partition.size(); ++n) {
      const CalibrationResult cal = calibrate_gamma(
          partition.sub(n), state.features.per_subdomain[static_cast<size_t>(n)],
          state.collocation.interior[static_cast<size_t>(n)], options.grf, grid, gg);
      state.gamma_base[static_cast<size_t>(n)] = cal.gamma;
    }
  }
  for (int n = 0; n < partition.size(); ++n) {
    for (auto& f : state.features.per_subdomain[static_cast<size_t>(n)]) {
      f.gamma = state.gamma_base[static_cast<size_t>(n)];
    }
  }
  return state;
}

SolutionHistory afcm_iterate(const ProblemDefinition& problem, const Partition& partition,
                             const AfcmOptions& options, const RngPool& rng,
                             const SolveUnit& unit, const InitState* carry) {
  const SolveUnit solve_unit = unit ? unit : linear_solve_unit;
  SolutionHistory history;

  auto t0 = std::chrono::steady_clock::now();
  InitState state = carry ? *carry : make_initial_state(partition, options, rng);
  history.gamma_base = state.gamma_base;
  history.timings["initialize"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  SolveOutcome outcome =
      solve_unit(problem, partition, state.features, state.collocation, options.solve);
  history.timings["solve"] = seconds_since(t0);
  history.iterations.push_back({outcome.solution, state.collocation, outcome.diag});

  const int k_max = options.adapt.iterations;
  if (k_max == 0) return history;

  const long j_total = state.features.total();
  long interior_budget = options.interior_budget_total;
  if (interior_budget < 0) {
    interior_budget =
        static_cast<long>(options.qx - 2) * (options.qy - 2) * partition.size();
  }
  const long m = options.adapt.monitor_samples;
  if (m < j_total + interior_budget) {
    throw std::invalid_argument("afcm: monitor_samples must be at least " +
                                std::to_string(j_total + interior_budget) +
                                " (features + interior budget), got " + std::to_string(m));
  }

  t0 = std::chrono::steady_clock::now();
  auto sg = rng.stream(options.rng_scope + "monitor-set");
  const std::vector<Vec2> sample_set = sample_uniform(partition.domain(), m, sg);
  history.timings["monitor-set"] = seconds_since(t0);

  FeatureSet features = state.features;
  CollocationSet colloc = state.collocation;

  for (int k = 1; k <= k_max; ++k) {
    t0 = std::chrono::steady_clock::now();
    const MonitorSet monitor =
        build_monitor(history.iterations.back().solution, sample_set, options.adapt.c1);
    history.timings["monitor"] += seconds_since(t0);

    auto gen = rng.stream(options.rng_scope + "adapt/k" + std::to_string(k));
    t0 = std::chrono::steady_clock::now();
    const auto feature_groups =
        group_by_subdomain(partition, monitor, weighted_sample(monitor, j_total, gen));
    features = regenerate_features(partition, monitor, feature_groups, history.gamma_base,
                                   options.adapt.c2, features, gen);
    const auto interior_groups =
        group_by_subdomain(partition, monitor, weighted_sample(monitor, interior_budget, gen));
    colloc = regenerate_collocation(colloc, partition, monitor, interior_groups);
    history.timings["regenerate"] += seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    outcome = solve_unit(problem, partition, features, colloc, options.solve);
    history.timings["solve"] += seconds_since(t0);

    IterationRecord rec{outcome.solution, colloc, outcome.diag};
    rec.monitor_center = monitor.mass_center();
    rec.has_monitor_center = true;
    history.iterations.push_back(std::move(rec));

    if (options.adapt.early_stop && history.iterations.size() >= 3) {
      const auto& it = history.iterations;
      const double r2 = it[it.size() - 1].diag.residual_norm;
      const double r1 = it[it.size() - 2].diag.residual_norm;
      const double r0 = it[it.size() - 3].diag.residual_norm;
      const bool stagnant = std::abs(r1 - r0) < 1e-3 * std::abs(r0) &&
                            std::abs(r2 - r1) < 1e-3 * std::abs(r1);
      if (stagnant) break;
    }
  }
  return history;
}

}  // namespace afcm
