#include "afcm/drivers.hpp"

#include <cmath>
#include <memory>

namespace afcm {

SolutionHistory solve_stationary(const ProblemDefinition& problem, const Partition& partition,
                                 const AfcmOptions& options, const RngPool& rng) {
  return afcm_iterate(problem, partition, options, rng);
}

namespace {

/// RMS difference between two iterates on a fixed coarse grid.
double field_change(const Solution& a, const Solution& b, const std::vector<Vec2>& grid) {
  double s = 0;
  for (const Vec2& x : grid) {
    const double d = a.value(x) - b.value(x);
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(grid.size()));
}

std::vector<Vec2> coarse_grid(const Domain& domain, int res) {
  std::vector<Vec2> grid;
  grid.reserve(static_cast<size_t>(res) * res);
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      grid.emplace_back(domain.lo[0] + domain.width(0) * i / (res - 1),
                        domain.lo[1] + domain.width(1) * j / (res - 1));
    }
  }
  return grid;
}

}  // namespace

SolveOutcome picard_unit(const ProblemDefinition& base, const Partition& partition,
                         const FeatureSet& features, const CollocationSet& colloc,
                         const SolveConfig& solve, const AdvectionCoefficient& advection,
                         const PicardConfig& picard) {
  if (base.d_phi != 1) {
    throw std::invalid_argument("picard_unit: only scalar problems are supported");
  }
  if (picard.iterations < 1) {
    throw std::invalid_argument("picard_unit: iteration count must be at least 1");
  }

  const std::vector<Vec2> grid = coarse_grid(partition.domain(), 65);
  std::shared_ptr<const Solution> prev;
  SolveOutcome outcome{Solution(partition, features,
                                VectorXd::Zero(features.total()), PouKind::kIndicator),
                       {}};
  std::vector<double> changes;
  int growth_streak = 0;

  for (int s = 1; s <= picard.iterations; ++s) {
    ProblemDefinition linearized = base;
    const ScalarField base_bx = base.op[0].bx;
    std::shared_ptr<const Solution> frozen = prev;
    linearized.op[0].bx = [frozen, base_bx, &advection](const Vec2& x) {
      double w = advection(frozen.get(), x);
      if (base_bx) w += base_bx(x);
      return w;
    };

    SolveOutcome it = linear_solve_unit(linearized, partition, features, colloc, solve);
    if (prev && picard.relaxation < 1.0) {
      VectorXd blended = picard.relaxation * it.solution.coeffs() +
                         (1.0 - picard.relaxation) * prev->coeffs();
      it.solution = Solution(partition, features, std::move(blended), PouKind::kIndicator);
    }

    if (prev) {
      const double change = field_change(it.solution, *prev, grid);
      if (!changes.empty() && change > changes.back()) {
        if (++growth_streak >= 3) {
          throw PicardDivergence(s, change);
        }
      } else {
        growth_streak = 0;
      }
      changes.push_back(change);
      prev = std::make_shared<Solution>(it.solution);
      outcome = std::move(it);
      if (picard.tolerance && change < *picard.tolerance) break;
    } else {
      prev = std::make_shared<Solution>(it.solution);
      outcome = std::move(it);
    }
  }
  outcome.diag.picard_change = std::move(changes);
  return outcome;
}

SolutionHistory picard_solve(const ProblemDefinition& base, const Partition& partition,
                             const AdvectionCoefficient& advection, const PicardConfig& picard,
                             const AfcmOptions& options, const RngPool& rng) {
  SolveUnit unit = [&advection, &picard](const ProblemDefinition& p, const Partition& part,
                                         const FeatureSet& f, const CollocationSet& c,
                                         const SolveConfig& s) {
    return picard_unit(p, part, f, c, s, advection, picard);
  };
  return afcm_iterate(base, partition, options, rng, unit);
}

std::vector<TimeStepRecord> crank_nicolson_march(const HeatProblem& heat,
                                                 const Partition& partition,
                                                 const TimeMarchConfig& march,
                                                 const AfcmOptions& options, const RngPool& rng) {
  if (!(march.dt > 0) || march.steps < 1) {
    throw std::invalid_argument("crank_nicolson_march: need dt > 0 and at least one step");
  }
  const double half = march.alpha * march.dt / 2.0;

  // State entering the current step: value and Laplacian of the previous
  // time level. Step 0 uses the analytic initial data.
  std::function<double(const Vec2&)> prev_value = heat.initial;
  std::function<double(const Vec2&)> prev_lap = heat.initial_laplacian;

  std::vector<TimeStepRecord> steps;
  std::optional<InitState> carry;

  for (int m = 0; m < march.steps; ++m) {
    const double t0 = march.dt * m;
    const double t1 = march.dt * (m + 1);

    ProblemDefinition step;
    step.d_phi = 1;
    Operator2D op;
    op.axx = [half](const Vec2&) { return -half; };
    op.ayy = [half](const Vec2&) { return -half; };
    op.c0 = [](const Vec2&) { return 1.0; };
    step.op = {op};
    const auto f = heat.source;
    const auto pv = prev_value;
    const auto pl = prev_lap;
    const double dt = march.dt;
    step.source = [f, pv, pl, half, dt, t0, t1](const Vec2& x, int) {
      return pv(x) + half * pl(x) + 0.5 * dt * (f(x, t1) + f(x, t0));
    };
    const auto g = heat.dirichlet;
    step.dirichlet = [g, t1](const Vec2& x, int) { return g(x, t1); };

    AfcmOptions step_options = options;
    step_options.rng_scope = options.rng_scope + "step" + std::to_string(m) + "/";

    try {
      SolutionHistory hist = afcm_iterate(step, partition, step_options, rng, {},
                                          carry ? &*carry : nullptr);

      TimeStepRecord rec;
      rec.time = t1;
      const IterationRecord& last = hist.iterations.back();
      rec.has_monitor_center = last.has_monitor_center;
      rec.monitor_center = last.monitor_center;

      carry = InitState{last.solution.features(), last.collocation, hist.gamma_base};

      auto sol = std::make_shared<Solution>(last.solution);
      prev_value = [sol](const Vec2& x) { return sol->value(x); };
      prev_lap = [sol](const Vec2& x) {
        const PointEval e = sol->evaluate(x, true);
        return e.hess[0].trace();
      };

      rec.history = std::move(hist);
      steps.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw std::runtime_error("crank_nicolson_march: step " + std::to_string(m) + " failed: " +
                               e.what());
    }
  }
  return steps;
}

}  // namespace afcm
